#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sddrev/formula.hpp"
#include "sddrev/sdd.hpp"

namespace sddrev {

struct CnfInstance {
    int n = 0;
    std::vector<std::vector<Literal>> clauses;  // empty list means true

    Formula to_formula() const;
};

struct DnfInstance {
    int n = 0;
    std::vector<Term> terms;  // empty list means false

    // Every term mentions all n variables.
    bool complete() const;
    Formula to_formula() const;
};

// DIMACS CNF: 'c' comments, 'p cnf n m', zero-terminated clauses.
CnfInstance parse_dimacs(std::string_view text);
std::string serialize_dimacs(const CnfInstance& cnf);

// Same layout with a 'p dnf n m' header; each zero-terminated line is a term.
DnfInstance parse_dnf(std::string_view text);
std::string serialize_dnf(const DnfInstance& dnf);

// Expands each term over its missing variables. Throws CapacityError when
// the result would exceed `max_terms`.
DnfInstance complete_dnf(const DnfInstance& dnf, std::size_t max_terms = 1U << 20);

// Bottom-up compilation by iterated apply.
NodeId compile_formula(SddManager& m, const Formula& f);
// Clauses are conjoined left to right in the given order.
NodeId compile_cnf(SddManager& m, const CnfInstance& cnf);
NodeId compile_term(SddManager& m, const Term& t);
NodeId compile_dnf(SddManager& m, const DnfInstance& dnf);

}  // namespace sddrev
