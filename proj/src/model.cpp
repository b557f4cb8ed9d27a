#include "lll/model.hpp"

#include <algorithm>
#include <string>

namespace lll {

namespace {

void validate_variable(const VariableSpec& var) {
    if (var.domain_size < 1) {
        throw ValidationError("variable " + std::to_string(var.id) + ": domain_size must be >= 1");
    }
    if (static_cast<int>(var.weights.size()) != var.domain_size) {
        throw ValidationError("variable " + std::to_string(var.id) +
                              ": weight count does not match domain_size");
    }
    Rational sum = 0;
    for (const Rational& w : var.weights) {
        if (w < 0) {
            throw ValidationError("variable " + std::to_string(var.id) + ": negative weight");
        }
        sum += w;
    }
    if (sum != 1) {
        throw ValidationError("variable " + std::to_string(var.id) +
                              ": weights sum to " + format_rational(sum) + ", expected 1");
    }
}

void validate_event(const EventSpec& event, int num_variables) {
    const std::string tag = "event " + std::to_string(event.id);
    if (event.scope.empty()) {
        throw ValidationError(tag + ": scope must be nonempty");
    }
    for (std::size_t k = 0; k < event.scope.size(); ++k) {
        if (event.scope[k] < 0 || event.scope[k] >= num_variables) {
            throw ValidationError(tag + ": scope variable " + std::to_string(event.scope[k]) +
                                  " out of range");
        }
        if (k > 0 && event.scope[k] <= event.scope[k - 1]) {
            throw ValidationError(tag + ": scope must be strictly increasing");
        }
    }
    if (event.intensional()) {
        if (!event.forbidden.empty()) {
            throw ValidationError(tag + ": intensional event cannot also list forbidden tuples");
        }
        return;
    }
    for (const auto& tuple : event.forbidden) {
        if (tuple.size() != event.scope.size()) {
            throw ValidationError(tag + ": forbidden tuple arity does not match scope");
        }
    }
}

void validate_tuple_values(const EventSpec& event, const std::vector<VariableSpec>& variables) {
    for (const auto& tuple : event.forbidden) {
        for (std::size_t k = 0; k < tuple.size(); ++k) {
            const VariableSpec& var = variables[event.scope[k]];
            if (tuple[k] < 0 || tuple[k] >= var.domain_size) {
                throw ValidationError("event " + std::to_string(event.id) +
                                      ": forbidden tuple value " + std::to_string(tuple[k]) +
                                      " outside domain of variable " + std::to_string(var.id));
            }
        }
    }
}

}  // namespace

VariableSpec uniform_variable(int domain_size) {
    VariableSpec var;
    var.domain_size = domain_size;
    if (domain_size >= 1) {
        var.weights.assign(domain_size, Rational(1, domain_size));
    }
    validate_variable(var);
    return var;
}

VariableSpec weighted_variable(std::vector<Rational> weights) {
    VariableSpec var;
    var.domain_size = static_cast<int>(weights.size());
    var.weights = std::move(weights);
    validate_variable(var);
    return var;
}

EventSpec extensional_event(std::vector<int> scope, std::set<std::vector<int>> forbidden) {
    EventSpec event;
    event.scope = std::move(scope);
    event.forbidden = std::move(forbidden);
    return event;
}

EventSpec intensional_event(std::vector<int> scope, std::function<bool(std::span<const int>)> predicate) {
    EventSpec event;
    event.scope = std::move(scope);
    event.predicate = std::move(predicate);
    return event;
}

DependencyGraph build_dependency_graph(const std::vector<EventSpec>& events) {
    const int m = static_cast<int>(events.size());
    DependencyGraph graph;
    graph.adjacency.resize(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            // scopes are sorted, so a linear merge detects intersection
            const auto& a = events[i].scope;
            const auto& b = events[j].scope;
            std::size_t x = 0, y = 0;
            bool intersects = false;
            while (x < a.size() && y < b.size()) {
                if (a[x] == b[y]) {
                    intersects = true;
                    break;
                }
                (a[x] < b[y]) ? ++x : ++y;
            }
            if (intersects) graph.adjacency[i].push_back(j);
        }
    }
    return graph;
}

EventSystem::EventSystem(std::vector<VariableSpec> variables, std::vector<EventSpec> events)
    : variables_(std::move(variables)), events_(std::move(events)) {
    for (std::size_t i = 0; i < variables_.size(); ++i) {
        variables_[i].id = static_cast<int>(i);
        validate_variable(variables_[i]);
    }
    for (std::size_t i = 0; i < events_.size(); ++i) {
        events_[i].id = static_cast<int>(i);
        validate_event(events_[i], num_variables());
        validate_tuple_values(events_[i], variables_);
    }
    dependency_ = build_dependency_graph(events_);
}

namespace {

Rational tuple_weight(const EventSpec& event, const std::vector<VariableSpec>& variables,
                      const std::vector<int>& tuple) {
    Rational w = 1;
    for (std::size_t k = 0; k < tuple.size(); ++k) {
        w *= variables[event.scope[k]].weights[tuple[k]];
    }
    return w;
}

}  // namespace

Rational event_probability(const EventSpec& event, const std::vector<VariableSpec>& variables,
                           std::uint64_t enumeration_cap) {
    if (!event.intensional()) {
        Rational p = 0;
        for (const auto& tuple : event.forbidden) {
            p += tuple_weight(event, variables, tuple);
        }
        return p;
    }

    std::uint64_t product = 1;
    for (int var_id : event.scope) {
        const std::uint64_t size = static_cast<std::uint64_t>(variables[var_id].domain_size);
        if (product > enumeration_cap / size) {
            throw EnumerationCapExceeded("scope product domain of event " +
                                         std::to_string(event.id) + " exceeds cap of " +
                                         std::to_string(enumeration_cap));
        }
        product *= size;
    }

    Rational p = 0;
    std::vector<int> tuple(event.scope.size(), 0);
    while (true) {
        if (event.predicate(std::span<const int>(tuple))) {
            p += tuple_weight(event, variables, tuple);
        }
        std::size_t k = 0;
        for (; k < tuple.size(); ++k) {
            if (++tuple[k] < variables[event.scope[k]].domain_size) break;
            tuple[k] = 0;
        }
        if (k == tuple.size()) break;
    }
    return p;
}

std::vector<Rational> event_probabilities(const EventSystem& system, std::uint64_t enumeration_cap) {
    std::vector<Rational> probs;
    probs.reserve(system.num_events());
    for (const EventSpec& event : system.events()) {
        probs.push_back(event_probability(event, system.variables(), enumeration_cap));
    }
    return probs;
}

bool evaluate_event(const EventSpec& event, const Assignment& assignment) {
    thread_local std::vector<int> tuple;
    tuple.clear();
    for (int var_id : event.scope) {
        tuple.push_back(assignment.values.at(var_id));
    }
    if (event.intensional()) {
        return event.predicate(std::span<const int>(tuple));
    }
    return event.forbidden.count(tuple) > 0;
}

std::vector<int> lint_scope(const EventSpec& event, const std::vector<VariableSpec>& variables) {
    std::vector<int> flagged;
    if (event.intensional()) return flagged;

    // Position k is irrelevant iff membership in the forbidden set never
    // depends on the value at k: every variant of a forbidden tuple across
    // D_k must again be forbidden. An empty forbidden set depends on nothing.
    for (std::size_t k = 0; k < event.scope.size(); ++k) {
        const int domain = variables[event.scope[k]].domain_size;
        bool relevant = false;
        for (const auto& tuple : event.forbidden) {
            std::vector<int> variant = tuple;
            for (int v = 0; v < domain && !relevant; ++v) {
                variant[k] = v;
                if (event.forbidden.count(variant) == 0) relevant = true;
            }
            if (relevant) break;
        }
        if (!relevant) {
            flagged.push_back(event.scope[k]);
        }
    }
    return flagged;
}

}  // namespace lll
