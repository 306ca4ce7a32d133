#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "sddrev/formula.hpp"
#include "sddrev/oracle.hpp"

namespace sddrev {

// A revision operator seen through its model set over x1..xn. Operators
// return the empty set when mu is unsatisfiable.
using RevisionOperator = std::function<ModelSet(const Formula& psi, const Formula& mu, int n)>;

// Compiles both inputs under a balanced vtree and runs revise().
ModelSet sdd_revision(const Formula& psi, const Formula& mu, int n);
ModelSet oracle_revision(const Formula& psi, const Formula& mu, int n);

struct PostulateVerdict {
    std::string name;  // "R1" .. "R6"
    bool holds = true;
    std::string detail;  // first counterexample, empty when holds
};

// Checks R1-R6 for `op` on (psi, mu). R5 and R6 range over `probes`; R4 uses
// syntactic variants of psi and mu. Throws CapacityError past kOracleCap.
std::array<PostulateVerdict, 6> check_postulates(const RevisionOperator& op, const Formula& psi, const Formula& mu,
                                                 int n, const std::vector<Formula>& probes);

// Default probes: true, every literal, psi and ~mu.
std::vector<Formula> default_probes(const Formula& psi, const Formula& mu, int n);

}  // namespace sddrev
