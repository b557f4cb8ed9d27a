#pragma once

#include "lll/model.hpp"

#include <optional>
#include <vector>

namespace lll {

struct DimensionMismatch : Error {
    using Error::Error;
};
struct CapExceeded : Error {
    using Error::Error;
};

// Per-event weights chi_i, each strictly inside (0,1).
struct ChiVector {
    std::vector<Rational> chi;

    explicit ChiVector(std::vector<Rational> values);
    std::size_t size() const { return chi.size(); }
};

struct LllConditionRow {
    int event_id;
    Rational lhs;    // Pr(E_i)
    Rational rhs;    // chi_i * prod over closed neighborhood of (1 - chi_j)
    Rational slack;  // rhs - lhs
    bool holds;
};

struct LllConditionReport {
    std::vector<LllConditionRow> rows;
    bool all_hold = false;
};

// Exact check of Pr(E_i) <= chi_i * prod_{j in N_i} (1 - chi_j) per event.
LllConditionReport check_lll_condition(const EventSystem& system, const ChiVector& chi,
                                       const std::vector<Rational>& probs);

// Heuristic chi: 1/|N_i| over the closed neighborhood, and 1/2 for isolated
// events (|N_i| = 1, where 1/|N_i| would leave (0,1)). No optimality claim;
// verify with check_lll_condition.
ChiVector default_chi(const EventSystem& system);

// Exact table of the recurrence
//   Q(n,i) = Pr(E_i) * sum over n_1+...+n_l = n-1 of Q(n_1,i_1)...Q(n_l,i_l)
// over the closed neighborhood N_i = {i_1..i_l}, with boundary Q(0,j) = 1.
// The boundary is what realizes the +1 in the series product form.
class QTable {
public:
    QTable(int max_length, std::vector<std::vector<Rational>> rows);

    int max_length() const { return max_length_; }
    int num_events() const { return rows_.empty() ? 0 : static_cast<int>(rows_[0].size()); }
    // n in 0..max_length; value(0, i) = 1 for every i
    const Rational& value(int n, int i) const { return rows_.at(n).at(i); }
    Rational row_sum(int n) const;

private:
    int max_length_;
    std::vector<std::vector<Rational>> rows_;
};

QTable q_table(const EventSystem& system, const std::vector<Rational>& probs, int max_length);

// Coefficients of one series, degrees 0..N; degree 0 is always 0.
struct TruncatedSeries {
    std::vector<Rational> coefficients;
};

// Solves Q_i(z) = z * Pr(E_i) * prod_{j in N_i} (Q_j(z) + 1) on series
// truncated at degree N, by fixed-point iteration on full polynomial
// products. The leading factor z makes degree-d coefficients depend only on
// degrees below d, so the iteration settles after at most N rounds. Agrees
// coefficient-for-coefficient with q_table.
std::vector<TruncatedSeries> q_series(const EventSystem& system, const std::vector<Rational>& probs,
                                      int truncation_degree);

// A rooted tree labeled with event ids: every child label neighbors its
// parent label and successive child labels strictly increase.
struct ValidTree {
    int label;
    std::vector<ValidTree> children;
};

std::vector<int> preorder_labels(const ValidTree& tree);

struct TreeEnumeration {
    std::vector<ValidTree> trees;
    Rational weight_sum;  // sum over trees of prod over nodes of Pr(E_label)
};

struct EnumerationCaps {
    int max_nodes = 8;
    int max_events = 6;
};

// Exhaustively lists every valid tree with exactly `size` nodes rooted at
// `root`. Exponential by design; guarded by caps.
TreeEnumeration enumerate_valid_trees(const EventSystem& system, const std::vector<Rational>& probs,
                                      int root, int size, const EnumerationCaps& caps = {});

struct OracleCheckEntry {
    int n;
    int event_id;
    Rational recurrence_value;
    Rational enumeration_value;
    bool match;
};

struct OracleCheckReport {
    std::vector<OracleCheckEntry> entries;
    bool all_match = false;
};

// Independent verification of the recurrence: for every event and every
// n <= max_length, the q_table value must equal the enumerated tree weight
// sum exactly.
OracleCheckReport oracle_check_q(const EventSystem& system, const std::vector<Rational>& probs,
                                 int max_length, const EnumerationCaps& caps = {});

struct BoundTermInput {
    std::vector<int> counts;  // n_i >= 0 per event, sum >= 1
    ChiVector chi;
    std::vector<std::vector<int>> neighborhoods;  // closed, as in DependencyGraph::adjacency
};

// One term of the coefficient-extraction bound. With S_i = sum of counts over
// the closed neighborhood of i, taken over coordinates with n_i >= 1:
//   term       = prod chi_i^{n_i} (1-chi_i)^{S_i} C(S_i, n_i)
//   term (pre) = prod chi_i^{n_i} (1-chi_i)^{S_i} C(S_i - 1, n_i - 1)
//   bound      = prod (1-chi_i)^{n_i}
// Coordinates with n_i = 0 contribute factor 1 throughout. `holds` reports
// term < bound, which binomial expansion of 1 = (chi_i + (1-chi_i))^{S_i}
// guarantees for chi in (0,1).
struct BoundTermResult {
    Rational term;
    Rational term_pre_identity;
    Rational bound;
    bool holds;
};

BoundTermResult bound_term(const BoundTermInput& input);

// max_i (1 - chi_i); strictly below 1.
Rational m_bound(const ChiVector& chi);

struct DecayRow {
    int n;
    Rational sum_q;    // sum over events of Q(n,i)
    Rational m_pow;    // M^n
    Rational ratio;    // sum_q / m_pow
    double log_slope;  // log sum_q(n) - log sum_q(n-1); NaN for n = 1 or zero rows
};

struct DecayReport {
    std::vector<DecayRow> rows;
    Rational m;
    // set unless the caller attests a passing condition check
    bool condition_warning = true;
};

// Tabulates the aggregate sum_i Q(n,i) against M^n. The aggregate is a
// union-bound style convenience for eyeballing the decay; the log-slope
// column shows the empirical decay rate per step.
DecayReport decay_report(const QTable& table, const ChiVector& chi,
                         std::optional<bool> condition_holds = std::nullopt);

}  // namespace lll
