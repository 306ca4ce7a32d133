#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "sddrev/bench.hpp"
#include "sddrev/compile.hpp"
#include "sddrev/formula.hpp"
#include "sddrev/oracle.hpp"
#include "sddrev/sdd.hpp"

#ifndef SDDREV_FIXTURES
#define SDDREV_FIXTURES "tests/fixtures"
#endif

namespace sddrev::testing {

// L=x1 K=x2 P=x3 A=x4.
inline constexpr Var L = 1, K = 2, P = 3, A = 4;

inline Formula kb() {
    return parse_expression("(x1 | x3) & (x4 -> x3) & (x2 -> x4 | x1)");
}

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(SDDREV_FIXTURES) + "/" + name);
    if (!in) throw std::runtime_error("missing fixture " + name);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// Random formula over x1..xn with roughly `budget` connectives.
inline Formula random_formula(BenchRng& rng, int n, int budget) {
    if (budget <= 0 || rng.uniform_below(5) == 0) {
        if (rng.uniform_below(12) == 0) return Formula::constant(rng.coin());
        return Formula::literal({static_cast<Var>(1 + rng.uniform_below(static_cast<std::uint64_t>(n))), rng.coin()});
    }
    const int left = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(budget)));
    const int right = budget - 1 - left;
    switch (rng.uniform_below(6)) {
        case 0: return !random_formula(rng, n, budget - 1);
        case 1:
        case 2: return random_formula(rng, n, left) & random_formula(rng, n, right);
        case 3:
        case 4: return random_formula(rng, n, left) | random_formula(rng, n, right);
        default:
            return rng.coin() ? Formula::implies(random_formula(rng, n, left), random_formula(rng, n, right))
                              : Formula::iff(random_formula(rng, n, left), random_formula(rng, n, right));
    }
}

inline ModelSet models_of(const SddManager& m, NodeId a) {
    const int n = m.var_count();
    ModelSet out(n);
    for (std::uint64_t w = 0; w < out.universe(); ++w)
        if (m.evaluate(a, w)) out.insert(static_cast<std::uint32_t>(w));
    return out;
}

// Random shape and random leaf order, built through the text format.
inline Vtree random_vtree(BenchRng& rng, int n) {
    std::vector<Var> vars(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) vars[static_cast<std::size_t>(i)] = static_cast<Var>(i + 1);
    for (std::size_t i = vars.size(); i > 1; --i) std::swap(vars[i - 1], vars[rng.uniform_below(i)]);
    std::ostringstream body;
    int next_id = 0;
    auto build = [&](auto&& self, std::size_t lo, std::size_t hi) -> int {
        const int id = next_id++;
        if (hi - lo == 1) {
            body << "L " << id << ' ' << vars[lo] << '\n';
            return id;
        }
        const std::size_t mid = lo + 1 + rng.uniform_below(hi - lo - 1);
        const int l = self(self, lo, mid);
        const int r = self(self, mid, hi);
        body << "I " << id << ' ' << l << ' ' << r << '\n';
        return id;
    };
    build(build, 0, vars.size());
    return Vtree::parse("vtree " + std::to_string(2 * n - 1) + "\n" + body.str());
}

}  // namespace sddrev::testing
