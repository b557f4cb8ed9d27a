#pragma once

#include "lll/model.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace lll {

struct SnapshotsMissing : Error {
    using Error::Error;
};
struct DomainTooLarge : Error {
    using Error::Error;
};
struct EventNeverOccurs : Error {
    using Error::Error;
};

// Draw discipline, pinned for cross-run and cross-binary reproducibility:
//   - engine: std::mt19937_64 seeded with the 64-bit run seed
//   - one engine draw u per variable sample
//   - value mapping: with cumulative weights c_0 <= c_1 <= ... <= c_{k-1} = 1,
//     thresholds are T_v = floor(c_v * 2^64) and the sampled value is the
//     smallest v with u < T_v
//   - the initial sample draws variables in ascending id order; each resample
//     draws the scope variables in ascending id order, one draw per variable
// Dyadic weights map exactly; other weights are quantized to 2^-64.
class SamplingPlan {
public:
    explicit SamplingPlan(const std::vector<VariableSpec>& variables);

    int value_for(int variable, std::uint64_t draw) const;
    int sample(int variable, std::mt19937_64& rng) const { return value_for(variable, rng()); }

    Assignment sample_all(std::mt19937_64& rng) const;
    void resample_scope(Assignment& assignment, const std::vector<int>& scope,
                        std::mt19937_64& rng) const;

private:
    std::vector<std::vector<unsigned __int128>> thresholds_;
};

enum class CallKind { Root, Recursive };
enum class RunOutcome { Success, Cutoff };

// One Resample invocation. Snapshots (when enabled): `pre` is the assignment
// at call entry, `resampled` right after the scope redraw, `post` at call
// exit. Calls still on the stack at cutoff have no `post`.
struct ResampleRecord {
    int event_id = -1;
    CallKind kind = CallKind::Root;
    std::optional<int> parent;
    int seq = -1;
    std::optional<Assignment> pre;
    std::optional<Assignment> resampled;
    std::optional<Assignment> post;
};

struct ExecutionTrace {
    std::uint64_t seed = 0;
    RunOutcome outcome = RunOutcome::Success;
    Assignment final_assignment;
    std::vector<ResampleRecord> records;
    std::vector<int> phase_boundaries;  // seq numbers of root calls
    bool has_snapshots = false;
};

struct RunOptions {
    std::uint64_t seed = 0;
    std::uint64_t max_calls = 1'000'000;
    bool snapshots = false;
};

// Runs the recursive resampling loop: sample every variable, then while some
// event occurs take the least indexed one and resample it; a resample call
// redraws its scope and recursively fixes the least indexed occurring
// neighbor until none occurs. Terminates with Success (no event occurs) or
// Cutoff after max_calls resample calls. Mechanically guaranteed and checked
// on every run: root event ids strictly increase and there are at most m
// root calls.
ExecutionTrace run(const EventSystem& system, const RunOptions& options);

struct ProgressViolation {
    int record_index;
    int event_id;  // did not occur at call entry but occurs at call exit
};

struct ProgressReport {
    int completed_calls = 0;
    std::vector<ProgressViolation> violations;

    bool clean() const { return violations.empty(); }
};

// Checks, for every completed call, that events not occurring at its entry
// also do not occur at its exit. Requires snapshots.
ProgressReport verify_progress(const ExecutionTrace& trace, const EventSystem& system);

// Checks that every record's scope redraw changed only variables in the
// resampled event's scope. Requires snapshots. Returns offending record
// indices.
std::vector<int> check_resample_locality(const ExecutionTrace& trace, const EventSystem& system);

struct WitnessNode {
    int record_index;
    int label;
    std::vector<int> children;  // indices into WitnessForest::nodes
};

struct WitnessForest {
    std::vector<WitnessNode> nodes;  // nodes[k] corresponds to records[k]
    std::vector<int> roots;
};

struct ForestCheck {
    bool preorder_matches = false;      // forest preorder equals call order
    bool parents_are_neighbors = false; // non-root labels neighbor their parent label
    bool siblings_increasing = false;   // successive child and root labels strictly increase

    bool all() const { return preorder_matches && parents_are_neighbors && siblings_increasing; }
};

// Rebuilds the call forest from parent links and checks the three structural
// witness-validity properties against the dependency graph.
std::pair<WitnessForest, ForestCheck> reconstruct_witness_forest(const ExecutionTrace& trace,
                                                                 const EventSystem& system);

// Statistical check that resampling restores the product distribution:
// repeatedly samples an assignment, and whenever the event occurs resamples
// its scope and tallies the result. Returns the total-variation distance
// between the tallied distribution and the exact product distribution.
// Requires a joint domain of at most 4096 assignments.
double randomness_test(const EventSystem& system, int event_id, std::uint64_t samples,
                       std::uint64_t seed);

}  // namespace lll
