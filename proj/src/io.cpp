#include "lll/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace lll {

namespace {

Rational rational_from_json(const Json& value) {
    if (value.is_string()) return parse_rational(value.get<std::string>());
    if (value.is_number_integer()) return Rational(value.get<long long>());
    throw ValidationError("expected a rational as \"a/b\", got " +
                          value.dump());
}

std::string csv_number(const Rational& q) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", to_double(q));
    return buf;
}

std::string csv_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", x);
    return buf;
}

}  // namespace

EventSystem instance_from_json(const Json& doc) {
    if (!doc.is_object()) throw ValidationError("instance must be an object");
    if (!doc.contains("variables") || !doc["variables"].is_array()) {
        throw ValidationError("instance needs a \"variables\" array");
    }
    if (!doc.contains("events") || !doc["events"].is_array()) {
        throw ValidationError("instance needs an \"events\" array");
    }
    if (doc.contains("n") &&
        doc["n"].get<std::size_t>() != doc["variables"].size()) {
        throw ValidationError("\"n\" disagrees with the variables array");
    }
    std::vector<VariableSpec> variables;
    for (const auto& v : doc["variables"]) {
        int domain_size = v.at("domain_size").get<int>();
        if (!v.contains("weights")) {
            variables.push_back(uniform_variable(domain_size));
            continue;
        }
        std::vector<Rational> weights;
        for (const auto& w : v["weights"]) {
            weights.push_back(rational_from_json(w));
        }
        if (static_cast<int>(weights.size()) != domain_size) {
            throw ValidationError("variable " +
                                  std::to_string(variables.size()) +
                                  " weights do not match domain_size");
        }
        variables.push_back(weighted_variable(std::move(weights)));
    }
    std::vector<EventSpec> events;
    for (const auto& e : doc["events"]) {
        std::vector<int> scope = e.at("scope").get<std::vector<int>>();
        std::set<std::vector<int>> forbidden;
        if (e.contains("forbidden")) {
            for (const auto& t : e["forbidden"]) {
                forbidden.insert(t.get<std::vector<int>>());
            }
        }
        events.push_back(extensional_event(std::move(scope),
                                           std::move(forbidden)));
    }
    return EventSystem(std::move(variables), std::move(events));
}

Json instance_to_json(const EventSystem& system) {
    Json doc;
    doc["n"] = system.num_variables();
    doc["variables"] = Json::array();
    for (const auto& v : system.variables()) {
        Json entry;
        entry["domain_size"] = v.domain_size;
        Json weights = Json::array();
        for (const auto& w : v.weights) weights.push_back(format_rational(w));
        entry["weights"] = weights;
        doc["variables"].push_back(entry);
    }
    doc["events"] = Json::array();
    for (const auto& e : system.events()) {
        if (e.intensional()) {
            throw ValidationError(
                "event " + std::to_string(e.id) +
                " is predicate-backed and cannot be serialized");
        }
        Json entry;
        entry["scope"] = e.scope;
        Json forbidden = Json::array();
        for (const auto& t : e.forbidden) forbidden.push_back(t);
        entry["forbidden"] = forbidden;
        doc["events"].push_back(entry);
    }
    return doc;
}

Hypergraph hypergraph_from_json(const Json& doc) {
    if (!doc.is_object() || !doc.contains("num_vertices") ||
        !doc.contains("edges")) {
        throw ValidationError(
            "hypergraph needs \"num_vertices\" and \"edges\"");
    }
    Hypergraph h;
    h.num_vertices = doc["num_vertices"].get<int>();
    for (const auto& e : doc["edges"]) {
        h.edges.push_back(e.get<std::vector<int>>());
    }
    return h;
}

Json trace_to_json(const ExecutionTrace& trace) {
    Json doc;
    doc["seed"] = trace.seed;
    doc["outcome"] =
        trace.outcome == RunOutcome::Success ? "success" : "cutoff";
    doc["final_assignment"] = trace.final_assignment.values;
    doc["records"] = Json::array();
    for (const auto& r : trace.records) {
        Json entry;
        entry["event_id"] = r.event_id;
        entry["kind"] = r.kind == CallKind::Root ? "root" : "recursive";
        if (r.parent) {
            entry["parent"] = *r.parent;
        } else {
            entry["parent"] = nullptr;
        }
        entry["seq"] = r.seq;
        doc["records"].push_back(entry);
    }
    doc["phase_boundaries"] = trace.phase_boundaries;
    return doc;
}

Json q_table_to_json(const QTable& table) {
    Json doc;
    doc["max_length"] = table.max_length();
    doc["num_events"] = table.num_events();
    doc["rows"] = Json::array();
    for (int n = 1; n <= table.max_length(); ++n) {
        Json row;
        row["n"] = n;
        Json values = Json::array();
        for (int i = 0; i < table.num_events(); ++i) {
            values.push_back(format_rational(table.value(n, i)));
        }
        row["values"] = values;
        row["sum"] = format_rational(table.row_sum(n));
        doc["rows"].push_back(row);
    }
    return doc;
}

std::string q_table_to_csv(const QTable& table) {
    std::ostringstream out;
    out << "n";
    for (int i = 0; i < table.num_events(); ++i) out << ",q_" << i;
    out << ",sum\n";
    for (int n = 1; n <= table.max_length(); ++n) {
        out << n;
        for (int i = 0; i < table.num_events(); ++i) {
            out << ',' << csv_number(table.value(n, i));
        }
        out << ',' << csv_number(table.row_sum(n)) << '\n';
    }
    return out.str();
}

Json decay_report_to_json(const DecayReport& report) {
    Json doc;
    doc["m"] = format_rational(report.m);
    doc["condition_warning"] = report.condition_warning;
    doc["rows"] = Json::array();
    for (const auto& r : report.rows) {
        Json row;
        row["n"] = r.n;
        row["sum_q"] = format_rational(r.sum_q);
        row["m_pow"] = format_rational(r.m_pow);
        row["ratio"] = format_rational(r.ratio);
        if (std::isnan(r.log_slope)) {
            row["log_slope"] = nullptr;
        } else {
            row["log_slope"] = r.log_slope;
        }
        doc["rows"].push_back(row);
    }
    return doc;
}

std::string decay_report_to_csv(const DecayReport& report) {
    std::ostringstream out;
    out << "n,sum_q,m_pow,ratio,log_slope\n";
    for (const auto& r : report.rows) {
        out << r.n << ',' << csv_number(r.sum_q) << ','
            << csv_number(r.m_pow) << ',' << csv_number(r.ratio) << ',';
        if (std::isnan(r.log_slope)) {
            out << "nan";
        } else {
            out << csv_number(r.log_slope);
        }
        out << '\n';
    }
    return out.str();
}

Json lll_report_to_json(const LllConditionReport& report) {
    Json doc;
    doc["holds"] = report.all_hold;
    doc["rows"] = Json::array();
    for (const auto& r : report.rows) {
        Json row;
        row["event_id"] = r.event_id;
        row["lhs"] = format_rational(r.lhs);
        row["rhs"] = format_rational(r.rhs);
        row["slack"] = format_rational(r.slack);
        row["holds"] = r.holds;
        doc["rows"].push_back(row);
    }
    return doc;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << contents;
    if (!out) throw Error("failed writing " + path);
}

InstanceKind sniff_instance_kind(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c == '{') {
            Json doc = Json::parse(text);
            return doc.contains("num_vertices") ? InstanceKind::HypergraphJson
                                                : InstanceKind::InstanceJson;
        }
        break;
    }
    return InstanceKind::Dimacs;
}

EventSystem load_instance_text(const std::string& text, InstanceKind kind) {
    switch (kind) {
        case InstanceKind::InstanceJson:
            return instance_from_json(Json::parse(text));
        case InstanceKind::HypergraphJson:
            return hypergraph_2coloring_system(
                hypergraph_from_json(Json::parse(text)));
        case InstanceKind::Dimacs:
            return cnf_to_event_system(parse_dimacs(text));
    }
    throw Error("unreachable instance kind");
}

EventSystem load_instance(const std::string& path) {
    std::string text = read_file(path);
    return load_instance_text(text, sniff_instance_kind(text));
}

}  // namespace lll
