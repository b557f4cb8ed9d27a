#include "lll/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lll {

namespace {

unsigned __int128 to_uint128(const Integer& x) {
    const std::uint64_t low = static_cast<std::uint64_t>(x & Integer(0xFFFFFFFFFFFFFFFFull));
    const std::uint64_t high = static_cast<std::uint64_t>((x >> 64) & Integer(0xFFFFFFFFFFFFFFFFull));
    return (static_cast<unsigned __int128>(high) << 64) | low;
}

}  // namespace

SamplingPlan::SamplingPlan(const std::vector<VariableSpec>& variables) {
    thresholds_.reserve(variables.size());
    for (const VariableSpec& var : variables) {
        std::vector<unsigned __int128> row;
        row.reserve(var.domain_size);
        Rational cumulative = 0;
        for (const Rational& w : var.weights) {
            cumulative += w;
            // T_v = floor(c_v * 2^64); c_{k-1} = 1 makes the last threshold 2^64
            const Integer scaled = (numerator(cumulative) << 64) / denominator(cumulative);
            row.push_back(to_uint128(scaled));
        }
        thresholds_.push_back(std::move(row));
    }
}

int SamplingPlan::value_for(int variable, std::uint64_t draw) const {
    const auto& row = thresholds_[variable];
    const unsigned __int128 u = draw;
    for (std::size_t v = 0; v + 1 < row.size(); ++v) {
        if (u < row[v]) return static_cast<int>(v);
    }
    return static_cast<int>(row.size()) - 1;
}

Assignment SamplingPlan::sample_all(std::mt19937_64& rng) const {
    Assignment assignment;
    assignment.values.reserve(thresholds_.size());
    for (std::size_t i = 0; i < thresholds_.size(); ++i) {
        assignment.values.push_back(sample(static_cast<int>(i), rng));
    }
    return assignment;
}

void SamplingPlan::resample_scope(Assignment& assignment, const std::vector<int>& scope,
                                  std::mt19937_64& rng) const {
    for (int var_id : scope) {  // scopes are stored ascending
        assignment.values[var_id] = sample(var_id, rng);
    }
}

namespace {

// Least indexed occurring event among `candidates` (assumed ascending), or -1.
int first_occurring(const EventSystem& system, const std::vector<int>& candidates,
                    const Assignment& assignment) {
    for (int id : candidates) {
        if (evaluate_event(system.event(id), assignment)) return id;
    }
    return -1;
}

int first_occurring_any(const EventSystem& system, const Assignment& assignment) {
    for (int id = 0; id < system.num_events(); ++id) {
        if (evaluate_event(system.event(id), assignment)) return id;
    }
    return -1;
}

void check_trace_invariants(const ExecutionTrace& trace, const EventSystem& system) {
    int last_root = -1;
    int root_count = 0;
    for (const ResampleRecord& record : trace.records) {
        if (record.kind != CallKind::Root) continue;
        ++root_count;
        if (record.event_id <= last_root) {
            throw std::logic_error("root event ids are not strictly increasing");
        }
        last_root = record.event_id;
    }
    if (root_count > system.num_events()) {
        throw std::logic_error("more root calls than events");
    }
    if (trace.outcome == RunOutcome::Success &&
        first_occurring_any(system, trace.final_assignment) != -1) {
        throw std::logic_error("success outcome with an occurring event");
    }
}

}  // namespace

ExecutionTrace run(const EventSystem& system, const RunOptions& options) {
    if (options.max_calls < 1) {
        throw ValidationError("max_calls must be >= 1");
    }
    const SamplingPlan plan(system.variables());
    std::mt19937_64 rng(options.seed);

    ExecutionTrace trace;
    trace.seed = options.seed;
    trace.has_snapshots = options.snapshots;

    Assignment assignment = plan.sample_all(rng);

    // The recursion of the resample procedure as an explicit stack of record
    // indices; depth is bounded by max_calls, not by the native stack.
    std::vector<int> stack;
    std::uint64_t calls = 0;
    bool cutoff = false;

    while (true) {
        int next_event;
        if (stack.empty()) {
            next_event = first_occurring_any(system, assignment);
            if (next_event == -1) break;  // no event occurs: done
        } else {
            const int top_event = trace.records[stack.back()].event_id;
            next_event = first_occurring(system, system.dependency().neighbors(top_event), assignment);
            if (next_event == -1) {  // call completes
                if (options.snapshots) trace.records[stack.back()].post = assignment;
                stack.pop_back();
                continue;
            }
        }

        if (calls == options.max_calls) {
            cutoff = true;
            break;
        }

        // the record is appended before the redraw happens
        ResampleRecord record;
        record.event_id = next_event;
        record.kind = stack.empty() ? CallKind::Root : CallKind::Recursive;
        if (!stack.empty()) record.parent = stack.back();
        record.seq = static_cast<int>(calls);
        if (options.snapshots) record.pre = assignment;
        if (record.kind == CallKind::Root) trace.phase_boundaries.push_back(record.seq);
        trace.records.push_back(std::move(record));
        stack.push_back(static_cast<int>(trace.records.size()) - 1);
        ++calls;

        plan.resample_scope(assignment, system.event(next_event).scope, rng);
        if (options.snapshots) trace.records.back().resampled = assignment;
    }

    trace.outcome = cutoff ? RunOutcome::Cutoff : RunOutcome::Success;
    trace.final_assignment = std::move(assignment);
    check_trace_invariants(trace, system);
    return trace;
}

ProgressReport verify_progress(const ExecutionTrace& trace, const EventSystem& system) {
    if (!trace.has_snapshots) {
        throw SnapshotsMissing("verify_progress requires a trace recorded with snapshots");
    }
    ProgressReport report;
    for (std::size_t k = 0; k < trace.records.size(); ++k) {
        const ResampleRecord& record = trace.records[k];
        if (!record.post.has_value()) continue;  // incomplete call at cutoff
        ++report.completed_calls;
        for (int id = 0; id < system.num_events(); ++id) {
            if (!evaluate_event(system.event(id), *record.pre) &&
                evaluate_event(system.event(id), *record.post)) {
                report.violations.push_back({static_cast<int>(k), id});
            }
        }
    }
    return report;
}

std::vector<int> check_resample_locality(const ExecutionTrace& trace, const EventSystem& system) {
    if (!trace.has_snapshots) {
        throw SnapshotsMissing("check_resample_locality requires a trace recorded with snapshots");
    }
    std::vector<int> offenders;
    for (std::size_t k = 0; k < trace.records.size(); ++k) {
        const ResampleRecord& record = trace.records[k];
        if (!record.pre || !record.resampled) continue;
        const auto& scope = system.event(record.event_id).scope;
        for (int var = 0; var < system.num_variables(); ++var) {
            if (record.pre->values[var] != record.resampled->values[var] &&
                !std::binary_search(scope.begin(), scope.end(), var)) {
                offenders.push_back(static_cast<int>(k));
                break;
            }
        }
    }
    return offenders;
}

std::pair<WitnessForest, ForestCheck> reconstruct_witness_forest(const ExecutionTrace& trace,
                                                                 const EventSystem& system) {
    WitnessForest forest;
    forest.nodes.reserve(trace.records.size());
    for (std::size_t k = 0; k < trace.records.size(); ++k) {
        forest.nodes.push_back({static_cast<int>(k), trace.records[k].event_id, {}});
    }
    for (std::size_t k = 0; k < trace.records.size(); ++k) {
        const ResampleRecord& record = trace.records[k];
        if (record.parent.has_value()) {
            forest.nodes[*record.parent].children.push_back(static_cast<int>(k));
        } else {
            forest.roots.push_back(static_cast<int>(k));
        }
    }

    ForestCheck check;

    // preorder of the forest must reproduce the call sequence
    std::vector<int> preorder;
    preorder.reserve(forest.nodes.size());
    std::vector<int> visit_stack;
    for (auto root = forest.roots.rbegin(); root != forest.roots.rend(); ++root) {
        visit_stack.push_back(*root);
    }
    while (!visit_stack.empty()) {
        const int node = visit_stack.back();
        visit_stack.pop_back();
        preorder.push_back(node);
        const auto& children = forest.nodes[node].children;
        for (auto child = children.rbegin(); child != children.rend(); ++child) {
            visit_stack.push_back(*child);
        }
    }
    check.preorder_matches = preorder.size() == forest.nodes.size();
    for (std::size_t k = 0; check.preorder_matches && k < preorder.size(); ++k) {
        if (preorder[k] != static_cast<int>(k)) check.preorder_matches = false;
    }

    check.parents_are_neighbors = true;
    for (const WitnessNode& node : forest.nodes) {
        for (int child : node.children) {
            const auto& neighbors = system.dependency().neighbors(node.label);
            if (!std::binary_search(neighbors.begin(), neighbors.end(), forest.nodes[child].label)) {
                check.parents_are_neighbors = false;
            }
        }
    }

    auto strictly_increasing_labels = [&](const std::vector<int>& nodes) {
        for (std::size_t k = 1; k < nodes.size(); ++k) {
            if (forest.nodes[nodes[k]].label <= forest.nodes[nodes[k - 1]].label) return false;
        }
        return true;
    };
    check.siblings_increasing = strictly_increasing_labels(forest.roots);
    for (const WitnessNode& node : forest.nodes) {
        if (!strictly_increasing_labels(node.children)) check.siblings_increasing = false;
    }

    return {std::move(forest), check};
}

double randomness_test(const EventSystem& system, int event_id, std::uint64_t samples,
                       std::uint64_t seed) {
    std::uint64_t joint = 1;
    for (const VariableSpec& var : system.variables()) {
        joint *= static_cast<std::uint64_t>(var.domain_size);
        if (joint > 4096) {
            throw DomainTooLarge("joint domain exceeds 4096 assignments");
        }
    }

    const EventSpec& event = system.event(event_id);
    const SamplingPlan plan(system.variables());
    std::mt19937_64 rng(seed);

    auto joint_index = [&](const Assignment& assignment) {
        std::uint64_t index = 0;
        for (int i = 0; i < system.num_variables(); ++i) {
            index = index * static_cast<std::uint64_t>(system.variable(i).domain_size) +
                    static_cast<std::uint64_t>(assignment.values[i]);
        }
        return index;
    };

    std::vector<std::uint64_t> tally(joint, 0);
    std::uint64_t occurrences = 0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        Assignment assignment = plan.sample_all(rng);
        if (!evaluate_event(event, assignment)) continue;
        plan.resample_scope(assignment, event.scope, rng);
        ++tally[joint_index(assignment)];
        ++occurrences;
    }
    if (occurrences == 0) {
        throw EventNeverOccurs("event " + std::to_string(event_id) + " never occurred in " +
                               std::to_string(samples) + " samples");
    }

    // exact product probability of each joint assignment, walked in index order
    double tv = 0.0;
    std::vector<int> values(system.num_variables(), 0);
    for (std::uint64_t index = 0; index < joint; ++index) {
        Rational exact = 1;
        for (int i = 0; i < system.num_variables(); ++i) {
            exact *= system.variable(i).weights[values[i]];
        }
        const double empirical =
            static_cast<double>(tally[index]) / static_cast<double>(occurrences);
        tv += std::abs(empirical - to_double(exact));
        for (int i = system.num_variables() - 1; i >= 0; --i) {
            if (++values[i] < system.variable(i).domain_size) break;
            values[i] = 0;
        }
    }
    return tv / 2.0;
}

}  // namespace lll
