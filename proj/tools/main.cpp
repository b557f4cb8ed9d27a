// Command line front end: solve / check / qbound / enumerate / estimate.
//
// Exit codes: 0 success (or condition holds), 1 input error, 2 cutoff or
// condition failure. Event and variable ids are 1-based in human-readable
// output and 0-based in JSON, which is a machine format. Identical command
// lines produce byte-identical output.

#include "lll/analysis.hpp"
#include "lll/io.hpp"
#include "lll/model.hpp"
#include "lll/problems.hpp"
#include "lll/sampler.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

namespace {

using namespace lll;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitCondition = 2;

struct CommonOpts {
    std::string instance;
    std::string kind = "auto";
    std::string format = "human";
    std::uint64_t seed = 0;
    bool entropy_seed = false;
    std::uint64_t max_calls = 1'000'000;
    bool verify = false;
    std::string chi_spec;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--instance", o.instance, "Path to the instance file")
        ->required();
    cmd->add_option("--kind", o.kind,
                    "Instance format: auto, json, dimacs, hypergraph")
        ->check(CLI::IsMember({"auto", "json", "dimacs", "hypergraph"}));
    cmd->add_option("--format", o.format, "Output format: json, csv, human")
        ->check(CLI::IsMember({"json", "csv", "human"}));
    cmd->add_option("--seed", o.seed, "PRNG seed (default 0, reproducible)");
    cmd->add_flag("--entropy-seed", o.entropy_seed,
                  "Seed from system entropy instead of --seed");
    cmd->add_option("--max-calls", o.max_calls,
                    "Resample call budget per run (default 1000000)");
    cmd->add_flag("--verify", o.verify,
                  "Record snapshots and check progress, locality, and "
                  "witness-forest structure");
    cmd->add_option("--chi", o.chi_spec,
                    "Per-event weights in (0,1): 'auto', a comma separated "
                    "list of rationals, or a file of rationals");
    cmd->add_option("--out", o.out, "Write the report here instead of stdout");
}

std::uint64_t enumeration_cap() {
    const char* env = std::getenv("LLL_ENUM_CAP");
    if (env == nullptr || *env == '\0') return kDefaultEnumerationCap;
    char* end = nullptr;
    unsigned long long value = std::strtoull(env, &end, 10);
    if (end == nullptr || *end != '\0' || value == 0) {
        throw ValidationError("LLL_ENUM_CAP must be a positive integer, got '" +
                              std::string(env) + "'");
    }
    return value;
}

EventSystem load(const CommonOpts& o) {
    std::string text = read_file(o.instance);
    InstanceKind kind;
    if (o.kind == "auto") {
        kind = sniff_instance_kind(text);
    } else if (o.kind == "json") {
        kind = InstanceKind::InstanceJson;
    } else if (o.kind == "dimacs") {
        kind = InstanceKind::Dimacs;
    } else {
        kind = InstanceKind::HypergraphJson;
    }
    return load_instance_text(text, kind);
}

std::uint64_t resolve_seed(const CommonOpts& o) {
    if (!o.entropy_seed) return o.seed;
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// --chi accepts "auto", an inline comma separated list, or a path to a file
// of whitespace/comma separated rationals. Anything that fully parses as a
// list is a list; everything else is treated as a path.
std::optional<std::vector<Rational>> try_parse_chi_list(const std::string& text) {
    std::vector<Rational> values;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        // trim
        auto b = token.find_first_not_of(" \t\r\n");
        auto e = token.find_last_not_of(" \t\r\n");
        if (b == std::string::npos) return std::nullopt;
        try {
            values.push_back(parse_rational(token.substr(b, e - b + 1)));
        } catch (const Error&) {
            return std::nullopt;
        }
    }
    if (values.empty()) return std::nullopt;
    return values;
}

ChiVector resolve_chi(const CommonOpts& o, const EventSystem& system) {
    if (o.chi_spec.empty() || o.chi_spec == "auto") {
        return default_chi(system);
    }
    if (auto list = try_parse_chi_list(o.chi_spec)) {
        if (list->size() != static_cast<std::size_t>(system.num_events())) {
            throw ValidationError("--chi lists " + std::to_string(list->size()) +
                                  " values for " +
                                  std::to_string(system.num_events()) +
                                  " events");
        }
        return ChiVector(std::move(*list));
    }
    std::string text = read_file(o.chi_spec);
    for (char& c : text) {
        if (c == '\n' || c == '\t' || c == '\r' || c == ' ') c = ',';
    }
    std::vector<Rational> values;
    std::istringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        values.push_back(parse_rational(token));
    }
    if (values.size() != static_cast<std::size_t>(system.num_events())) {
        throw ValidationError(o.chi_spec + " lists " +
                              std::to_string(values.size()) + " values for " +
                              std::to_string(system.num_events()) + " events");
    }
    return ChiVector(std::move(values));
}

void emit(const CommonOpts& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
    } else {
        write_file(o.out, text);
    }
}

std::string human_rational(const Rational& q) {
    return format_rational(q) + " (" + format_decimal(q) + ")";
}

// Runs the structural checks behind --verify; returns a JSON summary and
// appends any violations to `problems`.
Json verify_trace(const ExecutionTrace& trace, const EventSystem& system,
                  std::vector<std::string>& problems) {
    ProgressReport progress = verify_progress(trace, system);
    std::vector<int> locality = check_resample_locality(trace, system);
    auto [forest, forest_check] = reconstruct_witness_forest(trace, system);
    Json doc;
    doc["progress_checked_calls"] = progress.completed_calls;
    doc["progress_clean"] = progress.clean();
    doc["locality_clean"] = locality.empty();
    doc["forest_preorder"] = forest_check.preorder_matches;
    doc["forest_parents_neighbors"] = forest_check.parents_are_neighbors;
    doc["forest_siblings_increasing"] = forest_check.siblings_increasing;
    if (!progress.clean()) {
        problems.push_back("progress violated at record " +
                           std::to_string(progress.violations[0].record_index));
    }
    if (!locality.empty()) {
        problems.push_back("resample touched variables outside the scope at record " +
                           std::to_string(locality[0]));
    }
    if (!forest_check.all()) {
        problems.push_back("witness forest structure check failed");
    }
    return doc;
}

int cmd_solve(const CommonOpts& o, const std::string& trace_detail) {
    EventSystem system = load(o);
    RunOptions options;
    options.seed = resolve_seed(o);
    options.max_calls = o.max_calls;
    options.snapshots = o.verify || trace_detail == "snapshots";
    ExecutionTrace trace = run(system, options);

    std::vector<std::string> problems;
    Json verify_doc;
    if (o.verify) verify_doc = verify_trace(trace, system, problems);

    int phases = static_cast<int>(trace.phase_boundaries.size());
    int calls = static_cast<int>(trace.records.size());
    bool success = trace.outcome == RunOutcome::Success;

    if (o.format == "json") {
        Json t = trace_to_json(trace);
        Json doc;
        doc["seed"] = t["seed"];
        doc["outcome"] = t["outcome"];
        doc["final_assignment"] = t["final_assignment"];
        doc["resample_calls"] = calls;
        doc["phases"] = phases;
        if (trace_detail != "none") {
            doc["records"] = t["records"];
            doc["phase_boundaries"] = t["phase_boundaries"];
        }
        if (o.verify) doc["verify"] = verify_doc;
        emit(o, doc.dump(2) + "\n");
    } else if (o.format == "csv") {
        std::ostringstream out;
        out << "field,value\n";
        out << "seed," << trace.seed << '\n';
        out << "outcome," << (success ? "success" : "cutoff") << '\n';
        out << "resample_calls," << calls << '\n';
        out << "phases," << phases << '\n';
        for (std::size_t v = 0; v < trace.final_assignment.values.size(); ++v) {
            out << "x_" << (v + 1) << ',' << trace.final_assignment.values[v]
                << '\n';
        }
        emit(o, out.str());
    } else {
        std::ostringstream out;
        out << "outcome: " << (success ? "SUCCESS" : "CUTOFF") << '\n';
        out << "resample calls: " << calls << ", phases: " << phases << '\n';
        out << "assignment:\n";
        for (std::size_t v = 0; v < trace.final_assignment.values.size(); ++v) {
            out << "  X_" << (v + 1) << " = "
                << trace.final_assignment.values[v] << '\n';
        }
        if (o.verify) {
            out << "verification: "
                << (problems.empty() ? "clean" : "FAILED") << '\n';
        }
        emit(o, out.str());
    }
    for (const auto& p : problems) std::cerr << "verification: " << p << '\n';
    if (!problems.empty()) return kExitCondition;
    return success ? kExitOk : kExitCondition;
}

int cmd_check(const CommonOpts& o) {
    EventSystem system = load(o);
    ChiVector chi = resolve_chi(o, system);
    std::vector<Rational> probs = event_probabilities(system, enumeration_cap());
    LllConditionReport report = check_lll_condition(system, chi, probs);
    Rational m = m_bound(chi);

    if (o.format == "json") {
        Json doc = lll_report_to_json(report);
        doc["m"] = format_rational(m);
        emit(o, doc.dump(2) + "\n");
    } else if (o.format == "csv") {
        std::ostringstream out;
        out << "event,lhs,rhs,slack,holds\n";
        for (const auto& r : report.rows) {
            out << (r.event_id + 1) << ',' << format_rational(r.lhs) << ','
                << format_rational(r.rhs) << ',' << format_rational(r.slack)
                << ',' << (r.holds ? 1 : 0) << '\n';
        }
        emit(o, out.str());
    } else {
        std::ostringstream out;
        for (const auto& r : report.rows) {
            out << "E_" << (r.event_id + 1)
                << ": Pr = " << human_rational(r.lhs)
                << ", bound = " << human_rational(r.rhs)
                << ", slack = " << human_rational(r.slack) << " -> "
                << (r.holds ? "ok" : "VIOLATED") << '\n';
        }
        out << "condition " << (report.all_hold ? "holds" : "FAILS")
            << ", M = " << human_rational(m) << '\n';
        emit(o, out.str());
    }
    return report.all_hold ? kExitOk : kExitCondition;
}

int cmd_qbound(const CommonOpts& o, int table_length) {
    EventSystem system = load(o);
    std::vector<Rational> probs = event_probabilities(system, enumeration_cap());
    ChiVector chi = resolve_chi(o, system);
    bool condition = check_lll_condition(system, chi, probs).all_hold;
    QTable table = q_table(system, probs, table_length);
    DecayReport decay = decay_report(table, chi, condition);

    // Independent series route: same coefficients must fall out of the
    // truncated fixed-point computation.
    std::vector<TruncatedSeries> series = q_series(system, probs, table_length);
    bool series_match = true;
    for (int i = 0; i < system.num_events() && series_match; ++i) {
        for (int n = 1; n <= table_length && series_match; ++n) {
            if (series[i].coefficients[n] != table.value(n, i)) {
                series_match = false;
            }
        }
    }

    if (o.format == "json") {
        Json doc;
        doc["q_table"] = q_table_to_json(table);
        doc["series_matches"] = series_match;
        doc["decay"] = decay_report_to_json(decay);
        emit(o, doc.dump(2) + "\n");
    } else if (o.format == "csv") {
        emit(o, q_table_to_csv(table) + "\n" + decay_report_to_csv(decay));
    } else {
        std::ostringstream out;
        for (int n = 1; n <= table.max_length(); ++n) {
            out << "n = " << n << ':';
            for (int i = 0; i < table.num_events(); ++i) {
                out << "  Q_" << (i + 1) << " = "
                    << human_rational(table.value(n, i));
            }
            out << '\n';
        }
        out << "series cross-check: " << (series_match ? "match" : "MISMATCH")
            << '\n';
        out << "M = " << human_rational(decay.m) << '\n';
        const DecayRow& last = decay.rows.back();
        out << "sum Q at n = " << last.n << ": "
            << format_decimal(last.sum_q) << ", M^n = "
            << format_decimal(last.m_pow);
        if (!std::isnan(last.log_slope)) {
            out << ", log-slope = " << last.log_slope;
        }
        out << '\n';
        if (decay.condition_warning) {
            out << "warning: decay guarantee needs a passing condition check\n";
        }
        emit(o, out.str());
    }
    return series_match ? kExitOk : kExitCondition;
}

int cmd_enumerate(const CommonOpts& o, int root_1based, int size) {
    EventSystem system = load(o);
    std::vector<Rational> probs = event_probabilities(system, enumeration_cap());
    if (root_1based < 1 || root_1based > system.num_events()) {
        throw ValidationError("--root must be a 1-based event id in 1.." +
                              std::to_string(system.num_events()));
    }
    EnumerationCaps caps;
    caps.max_nodes = 12;
    caps.max_events = 8;
    TreeEnumeration trees =
        enumerate_valid_trees(system, probs, root_1based - 1, size, caps);
    OracleCheckReport oracle = oracle_check_q(system, probs, size, caps);

    if (o.format == "json") {
        Json doc;
        doc["root"] = root_1based - 1;
        doc["size"] = size;
        doc["count"] = trees.trees.size();
        doc["weight_sum"] = format_rational(trees.weight_sum);
        doc["trees"] = Json::array();
        for (const auto& t : trees.trees) {
            doc["trees"].push_back(preorder_labels(t));
        }
        doc["oracle_matches_recurrence"] = oracle.all_match;
        emit(o, doc.dump(2) + "\n");
    } else if (o.format == "csv") {
        std::ostringstream out;
        out << "tree,preorder\n";
        for (std::size_t k = 0; k < trees.trees.size(); ++k) {
            out << k << ',';
            std::vector<int> labels = preorder_labels(trees.trees[k]);
            for (std::size_t j = 0; j < labels.size(); ++j) {
                if (j) out << ' ';
                out << labels[j] + 1;
            }
            out << '\n';
        }
        emit(o, out.str());
    } else {
        std::ostringstream out;
        out << trees.trees.size() << " valid trees of size " << size
            << " rooted at E_" << root_1based << '\n';
        for (const auto& t : trees.trees) {
            std::vector<int> labels = preorder_labels(t);
            out << " ";
            for (int label : labels) out << " E_" << (label + 1);
            out << '\n';
        }
        out << "weight sum = " << human_rational(trees.weight_sum) << '\n';
        out << "recurrence cross-check (all events, all sizes up to " << size
            << "): " << (oracle.all_match ? "match" : "MISMATCH") << '\n';
        emit(o, out.str());
    }
    return oracle.all_match ? kExitOk : kExitCondition;
}

int cmd_estimate(const CommonOpts& o, std::uint64_t runs, int threshold,
                 bool chi_given) {
    EventSystem system = load(o);
    if (threshold < 0) throw ValidationError("--threshold must be >= 0");
    std::uint64_t base_seed = resolve_seed(o);

    std::uint64_t hits = 0;
    std::uint64_t verified_runs = 0;
    std::uint64_t verify_failures = 0;
    for (std::uint64_t r = 0; r < runs; ++r) {
        RunOptions options;
        options.seed = base_seed + r;
        options.max_calls = o.max_calls;
        options.snapshots = o.verify;
        ExecutionTrace trace = run(system, options);
        if (trace.records.size() >= static_cast<std::size_t>(threshold)) {
            ++hits;
        }
        if (o.verify) {
            std::vector<std::string> problems;
            verify_trace(trace, system, problems);
            ++verified_runs;
            if (!problems.empty()) ++verify_failures;
        }
    }

    double fraction = runs == 0 ? 0.0 : static_cast<double>(hits) / runs;
    double half = runs == 0
                      ? 0.0
                      : 1.96 * std::sqrt(fraction * (1.0 - fraction) /
                                         static_cast<double>(runs));
    double ci_low = std::max(0.0, fraction - half);
    double ci_high = std::min(1.0, fraction + half);

    // Reference lines from the generating-function side, when chi given.
    std::optional<Rational> sum_q;
    std::optional<Rational> m_pow;
    if (chi_given && threshold >= 1) {
        std::vector<Rational> probs =
            event_probabilities(system, enumeration_cap());
        ChiVector chi = resolve_chi(o, system);
        QTable table = q_table(system, probs, threshold);
        sum_q = table.row_sum(threshold);
        m_pow = pow_rational(m_bound(chi), threshold);
    }

    if (o.format == "json") {
        Json doc;
        doc["seed"] = base_seed;
        doc["runs"] = runs;
        doc["threshold"] = threshold;
        doc["max_calls"] = o.max_calls;
        doc["hits"] = hits;
        doc["fraction"] = fraction;
        doc["ci_low"] = ci_low;
        doc["ci_high"] = ci_high;
        if (sum_q) doc["sum_q"] = format_rational(*sum_q);
        if (m_pow) doc["m_pow"] = format_rational(*m_pow);
        if (o.verify) {
            doc["verified_runs"] = verified_runs;
            doc["verify_failures"] = verify_failures;
        }
        emit(o, doc.dump(2) + "\n");
    } else if (o.format == "csv") {
        std::ostringstream out;
        out << "runs,threshold,hits,fraction,ci_low,ci_high\n";
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%llu,%d,%llu,%.9g,%.9g,%.9g\n",
                      static_cast<unsigned long long>(runs), threshold,
                      static_cast<unsigned long long>(hits), fraction, ci_low,
                      ci_high);
        out << buf;
        emit(o, out.str());
    } else {
        std::ostringstream out;
        out << "P(at least " << threshold << " resample calls) ~ " << fraction
            << " over " << runs << " runs (95% CI [" << ci_low << ", "
            << ci_high << "])\n";
        if (sum_q) {
            out << "series bound sum Q_" << threshold << " = "
                << human_rational(*sum_q) << '\n';
        }
        if (m_pow) {
            out << "M^" << threshold << " = " << human_rational(*m_pow)
                << '\n';
        }
        if (o.verify) {
            out << "structural checks: " << verified_runs << " runs, "
                << verify_failures << " failures\n";
        }
        emit(o, out.str());
    }
    return verify_failures == 0 ? kExitOk : kExitCondition;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constraint sampler and series analysis toolkit"};
    app.require_subcommand(1);

    CommonOpts solve_opts, check_opts, qbound_opts, enum_opts, est_opts;
    std::string trace_detail = "records";
    int table_length = 30;
    int enum_root = 1;
    int enum_size = 1;
    std::uint64_t runs = 1000;
    int threshold = 1;

    CLI::App* solve = app.add_subcommand("solve", "Run the resampling loop");
    add_common(solve, solve_opts);
    solve->add_option("--trace", trace_detail,
                      "Trace detail in JSON output: none, records, snapshots")
        ->check(CLI::IsMember({"none", "records", "snapshots"}));

    CLI::App* check =
        app.add_subcommand("check", "Check the per-event probability bound");
    add_common(check, check_opts);

    CLI::App* qbound = app.add_subcommand(
        "qbound", "Tabulate the witness-count series and its decay");
    add_common(qbound, qbound_opts);
    qbound->add_option("--N", table_length, "Table length (default 30)")
        ->check(CLI::PositiveNumber);

    CLI::App* enumerate =
        app.add_subcommand("enumerate", "List valid witness trees");
    add_common(enumerate, enum_opts);
    enumerate->add_option("--root", enum_root, "Root event id (1-based)")
        ->required();
    enumerate->add_option("--n", enum_size, "Tree size in nodes")
        ->required()
        ->check(CLI::PositiveNumber);

    CLI::App* estimate = app.add_subcommand(
        "estimate", "Monte Carlo estimate of long-run probabilities");
    add_common(estimate, est_opts);
    estimate->add_option("--runs", runs, "Number of seeded runs");
    estimate->add_option("--threshold", threshold,
                         "Count runs with at least this many resample calls")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(solve_opts, trace_detail);
        if (check->parsed()) return cmd_check(check_opts);
        if (qbound->parsed()) return cmd_qbound(qbound_opts, table_length);
        if (enumerate->parsed()) {
            return cmd_enumerate(enum_opts, enum_root, enum_size);
        }
        if (estimate->parsed()) {
            return cmd_estimate(est_opts, runs, threshold,
                                !est_opts.chi_spec.empty());
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}
