#pragma once

#include "lll/rational.hpp"

#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <vector>

namespace lll {

// Raised when an exact probability would require enumerating a scope product
// domain larger than the configured cap.
struct EnumerationCapExceeded : Error {
    using Error::Error;
};

constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

// A discrete random variable: values are 0..domain_size-1, one exact weight
// per value, weights nonnegative and summing to exactly 1.
struct VariableSpec {
    int id = -1;
    int domain_size = 0;
    std::vector<Rational> weights;
};

VariableSpec uniform_variable(int domain_size);
VariableSpec weighted_variable(std::vector<Rational> weights);

// One value per variable, in variable id order.
struct Assignment {
    std::vector<int> values;

    bool operator==(const Assignment&) const = default;
};

// An event over a scope of variable ids (strictly increasing, nonempty).
// Extensional events list the forbidden scope tuples explicitly; intensional
// events carry a black-box predicate over the scope restriction. Tuples and
// predicate arguments are ordered by scope position.
struct EventSpec {
    int id = -1;
    std::vector<int> scope;
    std::set<std::vector<int>> forbidden;
    std::function<bool(std::span<const int>)> predicate;

    bool intensional() const { return static_cast<bool>(predicate); }
};

EventSpec extensional_event(std::vector<int> scope, std::set<std::vector<int>> forbidden);
EventSpec intensional_event(std::vector<int> scope, std::function<bool(std::span<const int>)> predicate);

// Closed neighborhoods of the scope-intersection graph: j is in adjacency[i]
// iff scope(i) and scope(j) share a variable. Scopes are nonempty, so the
// relation is reflexive (i is always in adjacency[i]) and symmetric.
struct DependencyGraph {
    std::vector<std::vector<int>> adjacency;

    const std::vector<int>& neighbors(int event_id) const { return adjacency.at(event_id); }
    std::size_t size() const { return adjacency.size(); }
};

DependencyGraph build_dependency_graph(const std::vector<EventSpec>& events);

// Immutable after construction; the constructor validates every variable and
// event invariant, assigns storage-order ids, and caches the dependency graph.
// Safe for concurrent reads.
class EventSystem {
public:
    EventSystem(std::vector<VariableSpec> variables, std::vector<EventSpec> events);

    int num_variables() const { return static_cast<int>(variables_.size()); }
    int num_events() const { return static_cast<int>(events_.size()); }

    const std::vector<VariableSpec>& variables() const { return variables_; }
    const std::vector<EventSpec>& events() const { return events_; }
    const VariableSpec& variable(int id) const { return variables_.at(id); }
    const EventSpec& event(int id) const { return events_.at(id); }
    const DependencyGraph& dependency() const { return dependency_; }

private:
    std::vector<VariableSpec> variables_;
    std::vector<EventSpec> events_;
    DependencyGraph dependency_;
};

// Exact probability of the event under the product distribution restricted to
// its scope. Extensional events sum the weights of their forbidden tuples;
// intensional events enumerate the scope product domain, subject to the cap.
Rational event_probability(const EventSpec& event, const std::vector<VariableSpec>& variables,
                           std::uint64_t enumeration_cap = kDefaultEnumerationCap);

std::vector<Rational> event_probabilities(const EventSystem& system,
                                          std::uint64_t enumeration_cap = kDefaultEnumerationCap);

// True iff the event occurs under the assignment (depends only on the scope
// restriction).
bool evaluate_event(const EventSpec& event, const Assignment& assignment);

// Flags declared scope variables on which an extensional predicate provably
// does not depend. Scopes are stored as declared, never re-minimized; this is
// the advisory counterpart. Returns flagged variable ids; intensional events
// yield nothing.
std::vector<int> lint_scope(const EventSpec& event, const std::vector<VariableSpec>& variables);

}  // namespace lll
