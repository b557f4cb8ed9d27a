#include "lll/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <utility>

namespace lll {

ChiVector::ChiVector(std::vector<Rational> values) : chi(std::move(values)) {
    if (chi.empty()) throw ValidationError("chi vector is empty");
    for (std::size_t i = 0; i < chi.size(); ++i) {
        if (chi[i] <= 0 || chi[i] >= 1) {
            throw ValidationError("chi_" + std::to_string(i + 1) + " = " + format_rational(chi[i]) +
                                  " is outside (0,1)");
        }
    }
}

LllConditionReport check_lll_condition(const EventSystem& system, const ChiVector& chi,
                                       const std::vector<Rational>& probs) {
    const std::size_t m = static_cast<std::size_t>(system.num_events());
    if (chi.size() != m || probs.size() != m) {
        throw DimensionMismatch("chi and probs must both have one entry per event");
    }
    LllConditionReport report;
    report.all_hold = true;
    for (std::size_t i = 0; i < m; ++i) {
        Rational rhs = chi.chi[i];
        for (int j : system.dependency().neighbors(static_cast<int>(i))) {
            rhs *= 1 - chi.chi[j];
        }
        LllConditionRow row;
        row.event_id = static_cast<int>(i);
        row.lhs = probs[i];
        row.rhs = rhs;
        row.slack = rhs - probs[i];
        row.holds = probs[i] <= rhs;
        report.all_hold = report.all_hold && row.holds;
        report.rows.push_back(std::move(row));
    }
    return report;
}

ChiVector default_chi(const EventSystem& system) {
    std::vector<Rational> chi;
    chi.reserve(system.num_events());
    for (int i = 0; i < system.num_events(); ++i) {
        const auto degree = system.dependency().neighbors(i).size();
        chi.push_back(degree == 1 ? Rational(1, 2) : Rational(1, degree));
    }
    return ChiVector(std::move(chi));
}

QTable::QTable(int max_length, std::vector<std::vector<Rational>> rows)
    : max_length_(max_length), rows_(std::move(rows)) {}

Rational QTable::row_sum(int n) const {
    Rational sum = 0;
    for (const Rational& v : rows_.at(n)) sum += v;
    return sum;
}

namespace {

// product of two truncated series, result truncated at max_degree
std::vector<Rational> poly_mul(const std::vector<Rational>& a, const std::vector<Rational>& b,
                               std::size_t max_degree) {
    std::vector<Rational> out(std::min(max_degree + 1, a.size() + b.size() - 1), Rational(0));
    for (std::size_t x = 0; x < a.size(); ++x) {
        if (a[x] == 0) continue;
        for (std::size_t y = 0; y < b.size() && x + y <= max_degree; ++y) {
            if (b[y] == 0) continue;
            out[x + y] += a[x] * b[y];
        }
    }
    return out;
}

}  // namespace

QTable q_table(const EventSystem& system, const std::vector<Rational>& probs, int max_length) {
    const int m = system.num_events();
    if (static_cast<int>(probs.size()) != m) {
        throw DimensionMismatch("probs must have one entry per event");
    }
    if (max_length < 1) throw ValidationError("max_length must be >= 1");

    std::vector<std::vector<Rational>> rows(max_length + 1, std::vector<Rational>(m, Rational(1)));
    for (int n = 1; n <= max_length; ++n) {
        for (int i = 0; i < m; ++i) {
            // coefficient n-1 of the product over the neighborhood of the
            // prefix series (Q_{0,j}, ..., Q_{n-1,j}); Q_{0,j} = 1 boundary
            std::vector<Rational> conv{Rational(1)};
            for (int j : system.dependency().neighbors(i)) {
                std::vector<Rational> prefix;
                prefix.reserve(n);
                for (int k = 0; k < n; ++k) prefix.push_back(rows[k][j]);
                conv = poly_mul(conv, prefix, static_cast<std::size_t>(n - 1));
            }
            rows[n][i] = static_cast<std::size_t>(n - 1) < conv.size()
                             ? probs[i] * conv[n - 1]
                             : Rational(0);
        }
    }
    return QTable(max_length, std::move(rows));
}

std::vector<TruncatedSeries> q_series(const EventSystem& system, const std::vector<Rational>& probs,
                                      int truncation_degree) {
    const int m = system.num_events();
    if (static_cast<int>(probs.size()) != m) {
        throw DimensionMismatch("probs must have one entry per event");
    }
    if (truncation_degree < 1) throw ValidationError("truncation degree must be >= 1");
    const std::size_t degree = static_cast<std::size_t>(truncation_degree);

    std::vector<std::vector<Rational>> current(m, std::vector<Rational>(degree + 1, Rational(0)));
    // Jacobi iteration of the full right-hand side; the round-k iterate is
    // exact up to degree k, so at most `degree` rounds are needed. The final
    // extra round double-checks stationarity.
    for (int round = 0; round <= truncation_degree; ++round) {
        std::vector<std::vector<Rational>> next(m);
        for (int i = 0; i < m; ++i) {
            std::vector<Rational> product{Rational(1)};
            for (int j : system.dependency().neighbors(i)) {
                std::vector<Rational> factor = current[j];
                factor[0] += 1;  // Q_j(z) + 1
                product = poly_mul(product, factor, degree - 1);
            }
            std::vector<Rational> rhs(degree + 1, Rational(0));
            for (std::size_t d = 0; d < product.size(); ++d) {
                rhs[d + 1] = probs[i] * product[d];  // leading factor z
            }
            next[i] = std::move(rhs);
        }
        if (next == current) break;
        current = std::move(next);
    }

    std::vector<TruncatedSeries> result;
    result.reserve(m);
    for (auto& coefficients : current) {
        result.push_back(TruncatedSeries{std::move(coefficients)});
    }
    return result;
}

std::vector<int> preorder_labels(const ValidTree& tree) {
    std::vector<int> labels;
    std::vector<const ValidTree*> stack{&tree};
    while (!stack.empty()) {
        const ValidTree* node = stack.back();
        stack.pop_back();
        labels.push_back(node->label);
        for (auto child = node->children.rbegin(); child != node->children.rend(); ++child) {
            stack.push_back(&*child);
        }
    }
    return labels;
}

namespace {

class TreeEnumerator {
public:
    TreeEnumerator(const DependencyGraph& graph, const std::vector<Rational>& probs)
        : graph_(graph), probs_(probs) {}

    // all valid trees with `size` nodes rooted at label `root`
    const std::vector<ValidTree>& trees(int root, int size) {
        const auto key = std::make_pair(root, size);
        auto found = memo_.find(key);
        if (found != memo_.end()) return found->second;

        std::vector<ValidTree> result;
        if (size == 1) {
            result.push_back(ValidTree{root, {}});
        } else {
            const auto& neighbors = graph_.neighbors(root);
            std::vector<ValidTree> partial;
            expand(root, neighbors, 0, size - 1, partial, result);
        }
        return memo_.emplace(key, std::move(result)).first->second;
    }

    Rational tree_weight(const ValidTree& tree) const {
        Rational w = 1;
        for (int label : preorder_labels(tree)) w *= probs_[label];
        return w;
    }

private:
    // Chooses, for each neighbor from position `from` on, whether it heads a
    // child subtree and how many of the `remaining` nodes it takes. Neighbor
    // order is ascending, which yields strictly increasing sibling labels.
    void expand(int root, const std::vector<int>& neighbors, std::size_t from, int remaining,
                std::vector<ValidTree>& partial, std::vector<ValidTree>& out) {
        if (remaining == 0) {
            ValidTree tree{root, partial};
            out.push_back(std::move(tree));
            return;
        }
        if (from == neighbors.size()) return;
        // neighbor takes no subtree
        expand(root, neighbors, from + 1, remaining, partial, out);
        // neighbor heads a subtree of each feasible size
        for (int take = 1; take <= remaining; ++take) {
            for (const ValidTree& subtree : trees(neighbors[from], take)) {
                partial.push_back(subtree);
                expand(root, neighbors, from + 1, remaining - take, partial, out);
                partial.pop_back();
            }
        }
    }

    const DependencyGraph& graph_;
    const std::vector<Rational>& probs_;
    std::map<std::pair<int, int>, std::vector<ValidTree>> memo_;
};

}  // namespace

TreeEnumeration enumerate_valid_trees(const EventSystem& system, const std::vector<Rational>& probs,
                                      int root, int size, const EnumerationCaps& caps) {
    if (system.num_events() > caps.max_events) {
        throw CapExceeded("tree enumeration supports at most " + std::to_string(caps.max_events) +
                          " events");
    }
    if (size < 1 || size > caps.max_nodes) {
        throw CapExceeded("tree size " + std::to_string(size) + " outside 1.." +
                          std::to_string(caps.max_nodes));
    }
    if (static_cast<int>(probs.size()) != system.num_events()) {
        throw DimensionMismatch("probs must have one entry per event");
    }
    if (root < 0 || root >= system.num_events()) {
        throw ValidationError("root event id out of range");
    }

    TreeEnumerator enumerator(system.dependency(), probs);
    TreeEnumeration result;
    result.trees = enumerator.trees(root, size);
    result.weight_sum = 0;
    for (const ValidTree& tree : result.trees) {
        result.weight_sum += enumerator.tree_weight(tree);
    }
    return result;
}

OracleCheckReport oracle_check_q(const EventSystem& system, const std::vector<Rational>& probs,
                                 int max_length, const EnumerationCaps& caps) {
    const QTable table = q_table(system, probs, max_length);
    OracleCheckReport report;
    report.all_match = true;
    for (int n = 1; n <= max_length; ++n) {
        for (int i = 0; i < system.num_events(); ++i) {
            const TreeEnumeration enumeration = enumerate_valid_trees(system, probs, i, n, caps);
            OracleCheckEntry entry;
            entry.n = n;
            entry.event_id = i;
            entry.recurrence_value = table.value(n, i);
            entry.enumeration_value = enumeration.weight_sum;
            entry.match = entry.recurrence_value == entry.enumeration_value;
            report.all_match = report.all_match && entry.match;
            report.entries.push_back(std::move(entry));
        }
    }
    return report;
}

BoundTermResult bound_term(const BoundTermInput& input) {
    const std::size_t m = input.counts.size();
    if (input.chi.size() != m || input.neighborhoods.size() != m) {
        throw DimensionMismatch("counts, chi and neighborhoods must agree in length");
    }
    long long total = 0;
    for (int n_i : input.counts) {
        if (n_i < 0) throw ValidationError("counts must be nonnegative");
        total += n_i;
    }
    if (total < 1) throw ValidationError("counts must sum to at least 1");

    BoundTermResult result{Rational(1), Rational(1), Rational(1), false};
    for (std::size_t i = 0; i < m; ++i) {
        const int n_i = input.counts[i];
        if (n_i == 0) continue;  // empty product convention
        unsigned neighbor_sum = 0;
        for (int j : input.neighborhoods[i]) {
            neighbor_sum += static_cast<unsigned>(input.counts[j]);
        }
        const Rational& chi_i = input.chi.chi[i];
        const Rational one_minus = 1 - chi_i;
        const Rational common =
            pow_rational(chi_i, static_cast<unsigned>(n_i)) * pow_rational(one_minus, neighbor_sum);
        result.term *= common * binomial(neighbor_sum, static_cast<unsigned>(n_i));
        result.term_pre_identity *=
            common * binomial(neighbor_sum - 1, static_cast<unsigned>(n_i) - 1);
        result.bound *= pow_rational(one_minus, static_cast<unsigned>(n_i));
    }
    result.holds = result.term < result.bound;
    return result;
}

Rational m_bound(const ChiVector& chi) {
    if (chi.chi.empty()) throw ValidationError("chi vector is empty");
    Rational m = 0;
    for (const Rational& c : chi.chi) {
        m = std::max(m, Rational(1 - c));
    }
    return m;
}

DecayReport decay_report(const QTable& table, const ChiVector& chi,
                         std::optional<bool> condition_holds) {
    if (static_cast<int>(chi.size()) != table.num_events()) {
        throw DimensionMismatch("chi must have one entry per event");
    }
    DecayReport report;
    report.m = m_bound(chi);
    report.condition_warning = !(condition_holds.has_value() && *condition_holds);

    Rational previous_sum = 0;
    for (int n = 1; n <= table.max_length(); ++n) {
        DecayRow row;
        row.n = n;
        row.sum_q = table.row_sum(n);
        row.m_pow = pow_rational(report.m, static_cast<unsigned>(n));
        row.ratio = row.sum_q / row.m_pow;
        row.log_slope = (n > 1 && previous_sum > 0 && row.sum_q > 0)
                            ? log_rational(row.sum_q) - log_rational(previous_sum)
                            : std::numeric_limits<double>::quiet_NaN();
        previous_sum = row.sum_q;
        report.rows.push_back(std::move(row));
    }
    return report;
}

}  // namespace lll
