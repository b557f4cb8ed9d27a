#pragma once

#include "lll/analysis.hpp"
#include "lll/model.hpp"
#include "lll/problems.hpp"
#include "lll/sampler.hpp"

#include <json.hpp>

#include <string>

namespace lll {

// Insertion-ordered so serialization is byte stable across runs.
using Json = nlohmann::ordered_json;

// Instance document:
//   {"n": <int>,
//    "variables": [{"domain_size": <int>, "weights": ["1/4", ...]}, ...],
//    "events": [{"scope": [0, 2], "forbidden": [[0, 0], ...]}, ...]}
// "weights" may be omitted for a uniform variable. All ids are 0-based.
EventSystem instance_from_json(const Json& doc);
Json instance_to_json(const EventSystem& system);

// {"num_vertices": <int>, "edges": [[0, 1, 2], ...]}
Hypergraph hypergraph_from_json(const Json& doc);

// Machine format for a run, 0-based ids throughout:
//   {"seed": ..., "outcome": "success"|"cutoff", "final_assignment": [...],
//    "records": [{"event_id":, "kind": "root"|"recursive",
//                 "parent": <index or null>, "seq":}, ...],
//    "phase_boundaries": [...]}
Json trace_to_json(const ExecutionTrace& trace);

Json q_table_to_json(const QTable& table);
std::string q_table_to_csv(const QTable& table);

Json decay_report_to_json(const DecayReport& report);
std::string decay_report_to_csv(const DecayReport& report);

Json lll_report_to_json(const LllConditionReport& report);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

// Distinguishes the three on-disk formats: a leading '{' means JSON (then
// "num_vertices" vs "n"/"variables" picks the schema), anything else DIMACS.
enum class InstanceKind { InstanceJson, HypergraphJson, Dimacs };
InstanceKind sniff_instance_kind(const std::string& text);

// Reads a file in any supported format and adapts it to an event system.
EventSystem load_instance(const std::string& path);
EventSystem load_instance_text(const std::string& text, InstanceKind kind);

}  // namespace lll
