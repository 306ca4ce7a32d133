#include "doctest.h"
#include "sddrev/error.hpp"
#include "support.hpp"

using namespace sddrev;
using namespace sddrev::testing;

TEST_CASE("DIMACS parsing") {
    const CnfInstance one = parse_dimacs("p cnf 2 1\n1 -2 0\n");
    CHECK(one.n == 2);
    REQUIRE(one.clauses.size() == 1);
    CHECK(one.clauses[0] == std::vector<Literal>{{1, true}, {2, false}});
    CHECK(parse_dimacs("c nothing\np cnf 3 0\n").clauses.empty());
    CHECK(parse_dimacs("p cnf 3 2\n1 2\n 3 0 -1\n0\n").clauses.size() == 2);

    const CnfInstance kbcnf = parse_dimacs(read_fixture("kb.cnf"));
    CHECK(models(kbcnf.to_formula(), 4) == models(kb(), 4));

    auto line_of = [](const char* text) {
        try {
            parse_dimacs(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::size_t{0};
    };
    CHECK(line_of("1 2 0\n") != 0);
    CHECK(line_of("p cnf 3 1\n1 5 0\n") == 2);
    CHECK_THROWS_AS(parse_dimacs("p cnf 3 1\n1 2\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 3 2\n1 2 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 3 1\n1 x 0\n"), ParseError);
}

TEST_CASE("DIMACS round trip") {
    BenchRng rng(3);
    for (int i = 0; i < 30; ++i) {
        const CnfInstance cnf = random_cnf(8, 6, 3, rng);
        const CnfInstance back = parse_dimacs(serialize_dimacs(cnf));
        CHECK(back.n == cnf.n);
        CHECK(back.clauses == cnf.clauses);
    }
}

TEST_CASE("DNF files and completion") {
    const DnfInstance mu = parse_dnf(read_fixture("example3_mu.dnf"));
    CHECK(mu.n == 4);
    CHECK(mu.terms.size() == 2);
    CHECK(mu.complete());
    const DnfInstance back = parse_dnf(serialize_dnf(mu));
    CHECK(back.terms == mu.terms);
    CHECK_THROWS_AS(parse_dnf("p cnf 2 1\n1 0\n"), ParseError);

    const DnfInstance partial{2, {Term{{1, true}}}};
    CHECK_FALSE(partial.complete());
    const DnfInstance full = complete_dnf(partial);
    CHECK(full.complete());
    CHECK(full.terms.size() == 2);
    CHECK(models(full.to_formula(), 2) == models(Formula::var(1), 2));
    CHECK(complete_dnf(mu).terms == mu.terms);
    CHECK_THROWS_AS(complete_dnf(DnfInstance{30, {Term{}}}, 1000), CapacityError);

    BenchRng rng(5);
    for (int i = 0; i < 40; ++i) {
        DnfInstance d{6, {}};
        const int terms = static_cast<int>(rng.uniform_below(5));
        for (int t = 0; t < terms; ++t) {
            Term term;
            for (Var v = 1; v <= 6; ++v)
                if (rng.uniform_below(3) == 0) term.push_back({v, rng.coin()});
            d.terms.push_back(term);
        }
        const DnfInstance c = complete_dnf(d);
        CHECK(c.complete());
        CHECK(models(c.to_formula(), 6) == models(d.to_formula(), 6));
    }
}

TEST_CASE("compilation") {
    SddManager m(Vtree::parse(read_fixture("fig2a.vtree")));
    CHECK(m.model_count(compile_formula(m, kb())) == 9);
    CHECK(compile_formula(m, Formula::bottom()) == kFalse);
    CHECK(compile_cnf(m, CnfInstance{4, {}}) == kTrue);
    CHECK(compile_cnf(m, CnfInstance{4, {{{2, false}}}}) == m.literal({2, false}));
    CHECK(m.model_count(compile_term(m, Term{{L, false}, {K, true}, {P, false}, {A, false}})) == 1);
    CHECK_THROWS_AS(compile_formula(m, Formula::var(5)), InputError);
    CHECK_THROWS_AS(compile_term(m, Term{{1, true}, {1, false}}), InputError);

    SddManager m3(Vtree::balanced(3));
    CHECK(m3.model_count(compile_formula(m3, parse_expression("x1 & (~x2 | x3)"))) == 3);

    BenchRng rng(7);
    for (int i = 0; i < 60; ++i) {
        const int n = 3 + static_cast<int>(rng.uniform_below(8));
        SddManager mm(random_vtree(rng, n));
        const CnfInstance cnf = random_cnf(n, static_cast<int>(rng.uniform_below(3 * n)), 3, rng);
        CHECK(mm.model_count(compile_cnf(mm, cnf)) == models(cnf.to_formula(), n).size());
    }
}
