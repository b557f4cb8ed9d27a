#include "lll/problems.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>

namespace lll {

namespace {

bool parse_int(const std::string& token, long& out) {
    if (token.empty()) return false;
    std::size_t pos = 0;
    try {
        out = std::stol(token, &pos);
    } catch (const std::exception&) {
        return false;
    }
    return pos == token.size();
}

void finish_clause(std::vector<int>& current, CnfFormula& formula,
                   int line_number) {
    if (current.empty()) {
        throw EmptyClause("empty clause ending on line " +
                          std::to_string(line_number));
    }
    std::set<int> seen(current.begin(), current.end());
    for (int lit : current) {
        if (seen.count(-lit)) {
            throw TautologicalClause(
                "clause ending on line " + std::to_string(line_number) +
                " contains both " + std::to_string(std::abs(lit)) + " and -" +
                std::to_string(std::abs(lit)));
        }
    }
    formula.clauses.emplace_back(seen.begin(), seen.end());
    current.clear();
}

}  // namespace

CnfFormula parse_dimacs(const std::string& text) {
    CnfFormula formula;
    bool header_seen = false;
    long declared_clauses = 0;
    std::vector<int> current;
    bool terminated = false;

    std::istringstream lines(text);
    std::string line;
    int line_number = 0;
    while (!terminated && std::getline(lines, line)) {
        ++line_number;
        std::istringstream tokens(line);
        std::string token;
        if (!(tokens >> token)) continue;  // blank line
        if (token == "c") continue;
        if (token.size() > 1 && token[0] == 'c') continue;
        if (token == "p") {
            if (header_seen) {
                throw MalformedHeader("duplicate header on line " +
                                      std::to_string(line_number));
            }
            std::string fmt;
            long vars = 0, clauses = 0;
            std::string v_tok, c_tok, extra;
            if (!(tokens >> fmt >> v_tok >> c_tok) || fmt != "cnf" ||
                !parse_int(v_tok, vars) || !parse_int(c_tok, clauses) ||
                vars < 0 || clauses < 0 || (tokens >> extra)) {
                throw MalformedHeader("bad header on line " +
                                      std::to_string(line_number) + ": " +
                                      line);
            }
            header_seen = true;
            formula.num_vars = static_cast<int>(vars);
            declared_clauses = clauses;
            continue;
        }
        if (!header_seen) {
            throw MalformedHeader("clause data before header on line " +
                                  std::to_string(line_number));
        }
        // Clause payload. Re-scan the line from the first token.
        while (true) {
            if (token == "%") {
                terminated = true;
                break;
            }
            long lit = 0;
            if (!parse_int(token, lit)) {
                throw ParseError("unexpected token '" + token + "' on line " +
                                 std::to_string(line_number));
            }
            if (lit == 0) {
                finish_clause(current, formula, line_number);
            } else {
                if (std::abs(lit) > formula.num_vars) {
                    throw LiteralOutOfRange(
                        "literal " + std::to_string(lit) + " on line " +
                        std::to_string(line_number) + " exceeds declared " +
                        std::to_string(formula.num_vars) + " variables");
                }
                current.push_back(static_cast<int>(lit));
            }
            if (!(tokens >> token)) break;
        }
    }
    if (!header_seen) throw MalformedHeader("missing header");
    // Some writers omit the trailing 0 on the last clause.
    if (!current.empty()) finish_clause(current, formula, line_number);
    if (static_cast<long>(formula.clauses.size()) != declared_clauses) {
        throw ClauseCountMismatch(
            "header declares " + std::to_string(declared_clauses) +
            " clauses but " + std::to_string(formula.clauses.size()) +
            " were read");
    }
    return formula;
}

std::string serialize_dimacs(const CnfFormula& formula) {
    std::ostringstream out;
    out << "p cnf " << formula.num_vars << ' ' << formula.clauses.size()
        << '\n';
    for (const auto& clause : formula.clauses) {
        for (int lit : clause) out << lit << ' ';
        out << "0\n";
    }
    return out.str();
}

bool satisfies(const CnfFormula& formula, const Assignment& assignment) {
    if (static_cast<int>(assignment.values.size()) != formula.num_vars) {
        throw ValidationError("assignment has " +
                              std::to_string(assignment.values.size()) +
                              " values for " +
                              std::to_string(formula.num_vars) + " variables");
    }
    for (const auto& clause : formula.clauses) {
        bool sat = false;
        for (int lit : clause) {
            int value = assignment.values[std::abs(lit) - 1];
            if ((lit > 0 && value == 1) || (lit < 0 && value == 0)) {
                sat = true;
                break;
            }
        }
        if (!sat) return false;
    }
    return true;
}

EventSystem cnf_to_event_system(const CnfFormula& formula) {
    std::vector<VariableSpec> variables;
    variables.reserve(formula.num_vars);
    for (int i = 0; i < formula.num_vars; ++i) {
        variables.push_back(uniform_variable(2));
    }
    std::vector<EventSpec> events;
    events.reserve(formula.clauses.size());
    for (const auto& clause : formula.clauses) {
        std::vector<int> scope;
        scope.reserve(clause.size());
        for (int lit : clause) scope.push_back(std::abs(lit) - 1);
        std::sort(scope.begin(), scope.end());
        scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
        // The clause fails exactly when every literal is false.
        std::vector<int> falsifying(scope.size(), 0);
        for (int lit : clause) {
            int var = std::abs(lit) - 1;
            auto it = std::lower_bound(scope.begin(), scope.end(), var);
            falsifying[it - scope.begin()] = lit > 0 ? 0 : 1;
        }
        events.push_back(extensional_event(scope, {falsifying}));
    }
    return EventSystem(std::move(variables), std::move(events));
}

EventSystem hypergraph_2coloring_system(const Hypergraph& hypergraph) {
    if (hypergraph.num_vertices <= 0) {
        throw ValidationError("hypergraph must have at least one vertex");
    }
    std::vector<VariableSpec> variables;
    variables.reserve(hypergraph.num_vertices);
    for (int i = 0; i < hypergraph.num_vertices; ++i) {
        variables.push_back(uniform_variable(2));
    }
    std::vector<EventSpec> events;
    events.reserve(hypergraph.edges.size());
    for (std::size_t j = 0; j < hypergraph.edges.size(); ++j) {
        std::vector<int> scope = hypergraph.edges[j];
        std::sort(scope.begin(), scope.end());
        if (std::adjacent_find(scope.begin(), scope.end()) != scope.end()) {
            throw ValidationError("edge " + std::to_string(j) +
                                  " repeats a vertex");
        }
        if (scope.size() < 2) {
            throw ValidationError("edge " + std::to_string(j) +
                                  " has fewer than two vertices");
        }
        if (scope.front() < 0 || scope.back() >= hypergraph.num_vertices) {
            throw ValidationError("edge " + std::to_string(j) +
                                  " references a vertex out of range");
        }
        events.push_back(extensional_event(
            scope, {std::vector<int>(scope.size(), 0),
                    std::vector<int>(scope.size(), 1)}));
    }
    return EventSystem(std::move(variables), std::move(events));
}

}  // namespace lll
