#pragma once

#include "lll/model.hpp"

#include <string>
#include <vector>

namespace lll {

// DIMACS diagnostics, each carrying the offending line in the message.
struct ParseError : Error {
    using Error::Error;
};
struct MalformedHeader : ParseError {
    using ParseError::ParseError;
};
struct LiteralOutOfRange : ParseError {
    using ParseError::ParseError;
};
struct ClauseCountMismatch : ParseError {
    using ParseError::ParseError;
};
struct TautologicalClause : ParseError {
    using ParseError::ParseError;
};
struct EmptyClause : ParseError {
    using ParseError::ParseError;
};

// Clauses hold nonzero signed DIMACS literals; no clause is empty or contains
// a variable together with its negation.
struct CnfFormula {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;

    bool operator==(const CnfFormula&) const = default;
};

// DIMACS CNF text: leading "c" comment lines, one "p cnf <vars> <clauses>"
// header, then clauses as whitespace separated literals terminated by 0,
// possibly spanning or sharing lines. A literal "%" token ends the payload
// (legacy corpus terminator); comment lines may also appear between clauses.
CnfFormula parse_dimacs(const std::string& text);

std::string serialize_dimacs(const CnfFormula& formula);

// Independent clause evaluator: value 1 means true. Used to cross-check
// solver output without going through the event machinery.
bool satisfies(const CnfFormula& formula, const Assignment& assignment);

// Variables X_1..X_n become uniform binary variables 0..n-1; clause j becomes
// the event "clause j is violated" with the single forbidden tuple that
// falsifies every literal. A k-literal clause has probability 2^-k.
EventSystem cnf_to_event_system(const CnfFormula& formula);

struct Hypergraph {
    int num_vertices = 0;
    std::vector<std::vector<int>> edges;  // each duplicate-free, size >= 2
};

// Uniform binary color per vertex; one event per edge, forbidding the two
// monochromatic colorings. An edge of size s has probability 2^(1-s).
EventSystem hypergraph_2coloring_system(const Hypergraph& hypergraph);

}  // namespace lll
