#include <algorithm>

#include "doctest.h"
#include "sddrev/error.hpp"
#include "sddrev/oracle.hpp"
#include "support.hpp"

using namespace sddrev;
using namespace sddrev::testing;

namespace {

std::vector<Formula> random_formulas(std::uint64_t seed, int count, int n, int budget) {
    BenchRng rng(seed);
    std::vector<Formula> out;
    for (int i = 0; i < count; ++i) out.push_back(random_formula(rng, n, budget));
    return out;
}

ModelSet set_of(int n, std::initializer_list<std::initializer_list<Var>> members) {
    ModelSet s(n);
    for (auto m : members) s.insert(Interpretation::of(n, m));
    return s;
}

}  // namespace

TEST_CASE("eval follows the truth tables") {
    const Formula f = parse_expression("x1 & (~x2 | x3)");
    CHECK(eval(f, Interpretation::of(3, {1, 3})));
    CHECK_FALSE(eval(f, Interpretation::of(3, {1, 2})));
    CHECK_FALSE(eval(Formula::bottom(), Interpretation::of(2, {1})));
    CHECK(eval(Formula::top(), Interpretation::of(2, {})));
    CHECK(eval(kb(), Interpretation::of(4, {L, K, P, A})));
    CHECK_THROWS_AS(eval(Formula::var(5), Interpretation::of(3, {})), InputError);
}

TEST_CASE("model sets") {
    CHECK(models(parse_expression("x1 & ~x2"), 2) == set_of(2, {{1}}));
    CHECK(models(Formula::top(), 3).size() == 8);
    CHECK(models(kb(), 4).size() == 9);
    CHECK_THROWS_AS(models(Formula::top(), kOracleCap + 1), CapacityError);
}

TEST_CASE("Hamming distance") {
    CHECK(distance(Interpretation::of(2, {1}), Interpretation::of(2, {1, 2})) == 1);
    CHECK(distance(Interpretation::of(3, {2}), Interpretation::of(3, {2})) == 0);
    CHECK(distance(Interpretation::of(5, {}), Interpretation::of(5, {1, 2, 3, 4, 5})) == 5);
    CHECK_THROWS_AS(distance(Interpretation::of(2, {}), Interpretation::of(3, {})), InputError);
}

TEST_CASE("balls around model sets") {
    const ModelSet a = set_of(2, {{1}});
    CHECK(ball(a, 1) == set_of(2, {{1}, {1, 2}, {}}));
    CHECK(ball(a, 0) == a);
    CHECK(ball(a, 2) == ModelSet::all(2));
    CHECK(ball(a, 7) == ModelSet::all(2));
    CHECK(ball(ModelSet(3), 2).empty());
}

TEST_CASE("relaxation") {
    const Formula f = parse_expression("x1 & ~x2");
    CHECK(relax_semantic(f, 1, 2) == set_of(2, {{1}, {1, 2}, {}}));
    CHECK(relax_semantic(f, 0, 2) == models(f, 2));
    CHECK(relax_semantic(kb(), 4, 4) == ModelSet::all(4));
}

TEST_CASE("cofactors") {
    const Formula f = parse_expression("x1 & (~x2 | x3)");
    CHECK(models(cofactor(f, 1, Sign::Plus), 3) == models(parse_expression("~x2 | x3"), 3));
    CHECK(models(cofactor(f, 1, Sign::Minus), 3).empty());
    CHECK(models(cofactor(f, 4, Sign::Plus), 4) == models(f, 4));
    CHECK_FALSE(cofactor(f, 2, Sign::Minus).mentions(2));
}

TEST_CASE("semi-resolvent formulas") {
    const Formula f = kb();
    const std::vector<Var> one{A};
    const SignVector plus{Sign::Plus};
    CHECK(models(semi_resolvent_formula(f, one, plus), 4) == models(cofactor(f, A, Sign::Plus), 4));
    const std::vector<Var> dup{1, 1};
    const SignVector two{Sign::Plus, Sign::Minus};
    CHECK_THROWS_AS(semi_resolvent_formula(f, dup, two), InputError);
    CHECK_THROWS_AS(semi_resolvent_formula(f, one, two), InputError);

    for (const Formula& g : random_formulas(11, 40, 5, 8)) {
        for (Var x = 1; x <= 5; ++x) {
            const Formula res = cofactor(g, x, Sign::Minus) | cofactor(g, x, Sign::Plus);
            const Formula res2 = cofactor(res, x, Sign::Minus) | cofactor(res, x, Sign::Plus);
            CHECK(models(res2, 5) == models(res, 5));
        }
    }
}

TEST_CASE("Shannon decomposition") {
    for (const Formula& f : random_formulas(21, 60, 8, 12)) {
        const ModelSet mf = models(f, 8);
        for (Var x = 1; x <= 8; ++x) {
            const Formula shannon = (!Formula::var(x) & cofactor(f, x, Sign::Minus)) |
                                    (Formula::var(x) & cofactor(f, x, Sign::Plus));
            CHECK(models(shannon, 8) == mf);
        }
    }
}

TEST_CASE("generalized decomposition over semi-resolvents") {
    const int n = 6;
    for (const Formula& f : random_formulas(31, 12, n, 10)) {
        for (int order = 1; order <= 3; ++order) {
            std::vector<Var> vars(static_cast<std::size_t>(order));
            std::vector<Formula> parts;
            // Subsets of size `order` via bitmask.
            for (std::uint32_t sub = 0; sub < (1U << n); ++sub) {
                if (__builtin_popcount(sub) != order) continue;
                vars.clear();
                for (int i = 0; i < n; ++i)
                    if (sub >> i & 1U) vars.push_back(static_cast<Var>(i + 1));
                for (std::uint32_t sm = 0; sm < (1U << order); ++sm) {
                    SignVector signs;
                    Formula lits = Formula::top();
                    for (int i = 0; i < order; ++i) {
                        const bool plus = !(sm >> i & 1U);
                        signs.push_back(plus ? Sign::Plus : Sign::Minus);
                        lits = lits & Formula::literal({vars[static_cast<std::size_t>(i)], plus});
                    }
                    parts.push_back(semi_resolvent_formula(f, vars, signs) & lits);
                }
            }
            CHECK(models(Formula::disjunction(parts), n) == models(f, n));
        }
    }
}

TEST_CASE("relaxation is recursive and distributes over disjunction") {
    BenchRng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_below(7));
        ModelSet a(n);
        for (std::uint64_t w = 0; w < a.universe(); ++w)
            if (rng.uniform_below(6) == 0) a.insert(static_cast<std::uint32_t>(w));
        for (int l = 1; l <= n; ++l) CHECK(ball(a, l) == ball(ball(a, l - 1), 1));
    }
    const auto fs = random_formulas(43, 40, 6, 8);
    for (std::size_t i = 0; i + 1 < fs.size(); i += 2) {
        for (int l = 1; l <= 3; ++l) {
            CHECK(relax_semantic(fs[i] | fs[i + 1], l, 6) ==
                  (relax_semantic(fs[i], l, 6) | relax_semantic(fs[i + 1], l, 6)));
        }
    }
}

TEST_CASE("relaxation as a disjunction of semi-resolvents") {
    const int n = 5;
    for (const Formula& f : random_formulas(51, 15, n, 9)) {
        for (int order = 1; order <= 3; ++order) {
            ModelSet acc(n);
            std::uint64_t count = 0;
            for (std::uint32_t sub = 0; sub < (1U << n); ++sub) {
                if (__builtin_popcount(sub) != order) continue;
                std::vector<Var> vars;
                for (int i = 0; i < n; ++i)
                    if (sub >> i & 1U) vars.push_back(static_cast<Var>(i + 1));
                for (std::uint32_t sm = 0; sm < (1U << order); ++sm) {
                    SignVector signs;
                    for (int i = 0; i < order; ++i) signs.push_back((sm >> i & 1U) ? Sign::Minus : Sign::Plus);
                    acc = acc | models(semi_resolvent_formula(f, vars, signs), n);
                    ++count;
                }
            }
            CHECK(acc == relax_semantic(f, order, n));
            const std::uint64_t binom = order == 1 ? 5 : order == 2 ? 10 : 10;
            CHECK(count == binom << order);
        }
    }
}

TEST_CASE("semi-resolvents are invariant under variable permutation") {
    BenchRng rng(61);
    for (const Formula& f : random_formulas(62, 30, 6, 10)) {
        std::vector<Var> vars{1, 2, 3, 4, 5, 6};
        for (std::size_t i = vars.size(); i > 1; --i) std::swap(vars[i - 1], vars[rng.uniform_below(i)]);
        vars.resize(3);
        SignVector signs{Sign::Plus, Sign::Minus, rng.coin() ? Sign::Plus : Sign::Minus};
        const ModelSet base = models(semi_resolvent_formula(f, vars, signs), 6);
        std::swap(vars[0], vars[2]);
        std::swap(signs[0], signs[2]);
        CHECK(models(semi_resolvent_formula(f, vars, signs), 6) == base);
    }
}

TEST_CASE("Dalal oracle") {
    const auto ex1 = dalal_oracle(parse_expression("x1 & ~x2"), parse_expression("x2"), 2);
    CHECK(ex1.order == 1);
    CHECK(ex1.result == models(parse_expression("x1 & x2"), 2));

    const auto consistent = dalal_oracle(parse_expression("x1 | x2"), parse_expression("x2"), 2);
    CHECK(consistent.order == 0);
    CHECK(consistent.result == models(parse_expression("x2"), 2));

    const Formula mu = parse_expression("(~x1 & x2 & ~x3 & ~x4) | (x1 & ~x2 & ~x3 & x4)");
    const auto ex3 = dalal_oracle(kb(), mu, 4);
    CHECK(ex3.result == models(mu, 4));
    CHECK(ex3.order == 1);

    const auto unsat_mu = dalal_oracle(kb(), Formula::bottom(), 4);
    CHECK(unsat_mu.order == -1);
    CHECK(unsat_mu.result.empty());

    const auto unsat_psi = dalal_oracle(Formula::bottom(), parse_expression("x1"), 3);
    CHECK(unsat_psi.order == 3);
    CHECK(unsat_psi.result == models(parse_expression("x1"), 3));
}

TEST_CASE("expression syntax") {
    CHECK(models(parse_expression("x1 | x2 & x3"), 3) == models(parse_expression("x1 | (x2 & x3)"), 3));
    CHECK(models(parse_expression("x1 -> x2 -> x3"), 3) == models(parse_expression("x1 -> (x2 -> x3)"), 3));
    CHECK(models(parse_expression("x1 | x2 -> x3"), 3) == models(parse_expression("(x1 | x2) -> x3"), 3));
    CHECK(models(parse_expression("x1 -> x2 <-> x3"), 3) == models(parse_expression("(x1 -> x2) <-> x3"), 3));
    CHECK(models(parse_expression("~~x1 & T | F"), 1) == models(Formula::var(1), 1));
    for (const Formula& f : random_formulas(71, 50, 6, 12)) {
        CHECK(models(parse_expression(to_string(f)), 6) == models(f, 6));
    }
    CHECK_THROWS_AS(parse_expression("x1 &"), ParseError);
    CHECK_THROWS_AS(parse_expression("(x1"), ParseError);
    CHECK_THROWS_AS(parse_expression("x0"), ParseError);
    CHECK_THROWS_AS(parse_expression("y1"), ParseError);
}
