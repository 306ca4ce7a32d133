#include <set>

#include "doctest.h"
#include "sddrev/editable.hpp"
#include "sddrev/error.hpp"
#include "support.hpp"

using namespace sddrev;
using namespace sddrev::testing;

namespace {

constexpr BoolOp kAllOps[] = {
    BoolOp::False, BoolOp::Nor, BoolOp{0x2}, BoolOp{0x3}, BoolOp::NotImplies, BoolOp::NotA, BoolOp::Xor,
    BoolOp::Nand,  BoolOp::And, BoolOp::Iff, BoolOp::B,   BoolOp::Implies,    BoolOp::A,    BoolOp{0xD},
    BoolOp::Or,    BoolOp::True,
};

// Every decision node is normalized for its vtree node and its primes form
// a partition.
void check_structure(SddManager& m, NodeId root) {
    std::set<NodeId> seen;
    std::vector<NodeId> stack{root};
    const Vtree& vt = m.vtree();
    while (!stack.empty()) {
        const NodeId a = stack.back();
        stack.pop_back();
        if (!seen.insert(a).second || m.kind(a) != SddManager::Kind::Decision) continue;
        const VtreePos v = m.vtree_of(a);
        NodeId cover = kFalse;
        std::set<NodeId> subs;
        for (const Element& e : m.elements(a)) {
            CHECK(e.prime != kFalse);
            if (!m.is_constant(e.prime)) CHECK(vt.in_left(m.vtree_of(e.prime), v));
            if (!m.is_constant(e.sub)) CHECK(vt.in_right(m.vtree_of(e.sub), v));
            CHECK(m.conjoin(cover, e.prime) == kFalse);
            cover = m.disjoin(cover, e.prime);
            CHECK(subs.insert(e.sub).second);
            stack.push_back(e.prime);
            stack.push_back(e.sub);
        }
        CHECK(cover == kTrue);
    }
}

}  // namespace

TEST_CASE("terminals") {
    SddManager m(Vtree::balanced(3));
    const VtreePos leaf1 = m.vtree().leaf_of(1);
    CHECK(m.terminal(std::nullopt, true, leaf1) == m.terminal(std::nullopt, true, leaf1));
    CHECK(m.terminal(std::nullopt, true, leaf1) == kTrue);
    const NodeId x = m.terminal(Literal{1, true}, false, leaf1);
    const NodeId nx = m.terminal(Literal{1, false}, false, leaf1);
    CHECK(x != nx);
    CHECK(m.negate(x) == nx);
    CHECK_THROWS_AS(m.terminal(Literal{2, true}, false, leaf1), InputError);
}

TEST_CASE("decision construction compresses and trims") {
    SddManager m(Vtree::balanced(2));
    const VtreePos root = m.vtree().root();
    const NodeId x1 = m.literal({1, true}), nx1 = m.literal({1, false});
    const NodeId x2 = m.literal({2, true});
    const Element same[] = {{x1, x2}, {nx1, x2}};
    CHECK(m.decision(same, root) == x2);
    const Element dropped[] = {{kFalse, x2}, {kTrue, m.negate(x2)}};
    CHECK(m.decision(dropped, root) == m.negate(x2));
    const Element literal_shaped[] = {{x1, kTrue}, {nx1, kFalse}};
    CHECK(m.decision(literal_shaped, root) == x1);
    const Element overlap[] = {{x1, x2}, {kTrue, kFalse}};
    CHECK_THROWS_AS(m.decision(overlap, root), InvariantError);
    const Element gap[] = {{x1, x2}};
    CHECK_THROWS_AS(m.decision(gap, root), InvariantError);
}

TEST_CASE("knowledge base fixture") {
    SddManager m(Vtree::parse(read_fixture("fig2a.vtree")));
    const NodeId s = m.parse(read_fixture("kb.sdd"));
    CHECK(m.model_count(s) == 9);
    CHECK(s == compile_formula(m, kb()));
    CHECK(models_of(m, s) == models(kb(), 4));
    CHECK(m.vtree_of(s) == 3);
    CHECK(m.elements(s).size() == 3);
    CHECK(m.size(s) == 11);
    CHECK(EditableSdd::expand(m, s).size() == 15);
    check_structure(m, s);
    CHECK(m.parse(m.serialize(s)) == s);
}

TEST_CASE("apply matches all sixteen truth tables") {
    BenchRng rng(101);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_below(6));
        SddManager m(random_vtree(rng, n));
        const Formula f = random_formula(rng, n, 8), g = random_formula(rng, n, 8);
        const NodeId a = compile_formula(m, f), b = compile_formula(m, g);
        const ModelSet ma = models(f, n), mb = models(g, n);
        for (BoolOp op : kAllOps) {
            const NodeId c = m.apply(a, b, op);
            ModelSet expect(n);
            for (std::uint64_t w = 0; w < expect.universe(); ++w) {
                const auto u = static_cast<std::uint32_t>(w);
                if (eval_op(op, ma.contains(u), mb.contains(u))) expect.insert(u);
            }
            CHECK(models_of(m, c) == expect);
            check_structure(m, c);
        }
        CHECK(m.conjoin(a, m.negate(a)) == kFalse);
        CHECK(m.disjoin(a, m.negate(a)) == kTrue);
    }
    SddManager m(Vtree::balanced(2));
    CHECK(m.model_count(m.conjoin(m.literal({1, true}), m.literal({2, true}))) == 1);
}

TEST_CASE("negation") {
    SddManager m(Vtree::balanced(5));
    CHECK(m.negate(kTrue) == kFalse);
    CHECK(m.negate(kFalse) == kTrue);
    BenchRng rng(7);
    for (int i = 0; i < 30; ++i) {
        const NodeId a = compile_formula(m, random_formula(rng, 5, 10));
        CHECK(m.negate(m.negate(a)) == a);
        CHECK(m.model_count(m.negate(a)) == 32 - m.model_count(a));
    }
}

TEST_CASE("conditioning") {
    SddManager m(Vtree::balanced(3));
    const NodeId f = compile_formula(m, parse_expression("x1 & (~x2 | x3)"));
    CHECK(m.condition(f, {1, true}) == compile_formula(m, parse_expression("~x2 | x3")));
    CHECK(m.condition(kTrue, {2, false}) == kTrue);
    const NodeId g = compile_formula(m, parse_expression("x1 | x2"));
    CHECK(m.condition(g, {3, true}) == g);
    BenchRng rng(9);
    for (int i = 0; i < 60; ++i) {
        const int n = 1 + static_cast<int>(rng.uniform_below(8));
        SddManager mm(random_vtree(rng, n));
        const Formula h = random_formula(rng, n, 10);
        const NodeId a = compile_formula(mm, h);
        for (Var x = 1; x <= static_cast<Var>(n); ++x) {
            CHECK(mm.condition(a, {x, true}) == compile_formula(mm, cofactor(h, x, Sign::Plus)));
            CHECK(mm.condition(a, {x, false}) == compile_formula(mm, cofactor(h, x, Sign::Minus)));
        }
    }
}

TEST_CASE("model counting") {
    BenchRng rng(13);
    for (int i = 0; i < 80; ++i) {
        const int n = 1 + static_cast<int>(rng.uniform_below(10));
        SddManager m(random_vtree(rng, n));
        const Formula f = random_formula(rng, n, 14);
        const NodeId a = compile_formula(m, f);
        m.reset_stats();
        CHECK(m.model_count(a) == models(f, n).size());
        CHECK(m.stats().mc_visits <= m.node_count(a));
    }
    SddManager m(Vtree::balanced(6));
    CHECK(m.model_count(kTrue) == 64);
    CHECK(m.model_count(kFalse) == 0);
    SddManager big(Vtree::balanced(100));
    CHECK(to_string(big.model_count(kTrue)) == "1267650600228229401496703205376");
}

TEST_CASE("satisfiability under a literal conjunction") {
    SddManager m(Vtree::parse(read_fixture("fig2a.vtree")));
    const NodeId s = compile_formula(m, kb());
    const Term c{{L, false}, {K, true}, {P, false}, {A, false}};
    CHECK_FALSE(m.satisfies(s, c));
    CHECK(m.satisfies(s, Term{}));
    CHECK_FALSE(m.satisfies(kFalse, Term{}));
    CHECK_THROWS_AS(m.satisfies(s, Term{{L, true}, {L, false}}), InputError);
    CHECK_THROWS_AS(m.satisfies(s, Term{{9, true}}), InputError);

    BenchRng rng(17);
    for (int i = 0; i < 80; ++i) {
        const int n = 2 + static_cast<int>(rng.uniform_below(8));
        SddManager mm(random_vtree(rng, n));
        const NodeId a = compile_formula(mm, random_formula(rng, n, 12));
        Term t;
        for (Var v = 1; v <= static_cast<Var>(n); ++v)
            if (rng.coin()) t.push_back({v, rng.coin()});
        mm.reset_stats();
        const bool sat = mm.satisfies(a, t);
        CHECK(mm.stats().satisfies_visits <= mm.node_count(a));
        CHECK(sat == (mm.model_count(mm.conjoin(a, compile_term(mm, t))) > 0));
    }
}

TEST_CASE("size accounting") {
    SddManager m(Vtree::balanced(4));
    CHECK(m.size(kTrue) == 0);
    CHECK(m.size(m.literal({2, true})) == 0);
    BenchRng rng(19);
    int compared = 0;
    for (int i = 0; i < 200; ++i) {
        const NodeId a = compile_formula(m, random_formula(rng, 4, 8));
        const NodeId b = compile_formula(m, random_formula(rng, 4, 8));
        // The product bound concerns operands normalized for the same node.
        if (m.is_constant(a) || m.is_constant(b) || m.vtree_of(a) != m.vtree_of(b)) continue;
        if (m.kind(a) != SddManager::Kind::Decision) continue;
        ++compared;
        // Terminals count as two-element nodes, as in the expanded form.
        auto weight = [&](NodeId x) { return m.size(x) + 2 * m.node_count(x); };
        const std::size_t bound = weight(a) * weight(b);
        CHECK(m.size(m.conjoin(a, b)) <= bound);
        CHECK(m.size(m.disjoin(a, b)) <= bound);
    }
    CHECK(compared > 20);
}

TEST_CASE("expanded form") {
    SddManager m(Vtree::balanced(2));
    const NodeId x2 = m.literal({2, true});
    const EditableSdd e = EditableSdd::expand(m, x2);
    const auto& root = e.node(e.root());
    REQUIRE(root.kind == SddManager::Kind::Decision);
    REQUIRE(root.elements.size() == 2);
    CHECK(e.node(root.elements[0].sub).lit == Literal{2, true});
    CHECK(e.node(root.elements[1].sub).lit == Literal{2, true});
    CHECK(e.canonicalize() == x2);

    BenchRng rng(23);
    for (int i = 0; i < 60; ++i) {
        const int n = 2 + static_cast<int>(rng.uniform_below(7));
        SddManager mm(random_vtree(rng, n));
        const NodeId a = compile_formula(mm, random_formula(rng, n, 12));
        const EditableSdd ea = EditableSdd::expand(mm, a);
        CHECK(ea.canonicalize() == a);
        CHECK(ea.size() >= mm.size(a));
        for (VtreePos v = 0; v < mm.vtree().size(); ++v) {
            if (mm.vtree().is_leaf(v) || !mm.vtree().is_leaf(mm.vtree().left(v))) continue;
            for (auto d : ea.decisions(v)) CHECK(ea.node(d).elements.size() == 2);
        }
        const EditableSdd again = EditableSdd::expand(mm, ea.canonicalize());
        CHECK(again.size() == ea.size());
    }
}

TEST_CASE("editing the expanded form") {
    SddManager m(Vtree::parse(read_fixture("fig2a.vtree")));
    const NodeId s = compile_formula(m, kb());
    EditableSdd e = EditableSdd::expand(m, s);
    const auto ds = e.decisions(5);
    REQUIRE_FALSE(ds.empty());
    e.replace(ds[0], ds[0]);
    CHECK(e.canonicalize() == s);

    // Replacing a sub with true then compressing mirrors a positive
    // semi-resolvent on the right child.
    EditableSdd f = EditableSdd::expand(m, s);
    for (auto d : f.decisions(5)) {
        const auto elems = f.node(d).elements;
        for (std::size_t i = 0; i < elems.size(); ++i) {
            const auto& sub = f.node(elems[i].sub);
            if (sub.kind == SddManager::Kind::Literal)
                f.set_sub(d, i, sub.lit.positive ? EditableSdd::kTrueRef : EditableSdd::kFalseRef);
        }
        f.compress(d);
    }
    f.prune();
    CHECK(f.canonicalize() == compile_formula(m, cofactor(kb(), A, Sign::Plus)));

    EditableSdd g = EditableSdd::expand(m, s);
    const auto roots = g.decisions(3);
    REQUIRE(roots.size() == 1);
    const auto first = g.node(roots[0]).elements[0];
    CHECK_THROWS_AS(g.replace(first.prime, first.sub), InputError);
    g.replace(first.sub, EditableSdd::kFalseRef);
    g.prune();
    CHECK(g.size() < EditableSdd::expand(m, s).size());
    const NodeId edited = g.canonicalize();
    CHECK(m.model_count(edited) < 9);
    CHECK(m.conjoin(edited, m.negate(s)) == kFalse);
}

TEST_CASE("text format") {
    SddManager m(Vtree::balanced(4));
    CHECK(m.parse(m.serialize(kFalse)) == kFalse);
    CHECK(m.parse(m.serialize(kTrue)) == kTrue);
    BenchRng rng(29);
    for (int i = 0; i < 40; ++i) {
        const NodeId a = compile_formula(m, random_formula(rng, 4, 10));
        CHECK(m.parse(m.serialize(a)) == a);
        SddManager other(Vtree::balanced(4));
        const NodeId b = other.parse(m.serialize(a));
        CHECK(m.parse(other.serialize(b)) == a);
    }
    CHECK_THROWS_AS(m.parse("sdd 2\nT 0\nD 1 1 1 0 5\n"), ParseError);
    CHECK_THROWS_AS(m.parse("sdd 1\nL 0 1 3\n"), ParseError);
    CHECK_THROWS_AS(m.parse("sdd 1\nL 0 77 1\n"), ParseError);
    CHECK_THROWS_AS(m.parse("sdd 3\nL 0 0 1\nL 1 2 2\nD 2 1 2 0 1 0 1\n"), ParseError);
    CHECK_THROWS_AS(m.parse("sdd 2\nT 0\n"), ParseError);
    CHECK_THROWS_AS(m.parse("T 0\n"), ParseError);
    try {
        m.parse("sdd 2\nT 0\nQ 1\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("canonicity of equivalent formulas") {
    BenchRng rng(31);
    for (int i = 0; i < 60; ++i) {
        const int n = 2 + static_cast<int>(rng.uniform_below(7));
        SddManager m(random_vtree(rng, n));
        const Formula f = random_formula(rng, n, 10);
        // De Morgan / double negation rewrite.
        const Formula g = !(!f | Formula::bottom());
        const NodeId a = compile_formula(m, f);
        CHECK(compile_formula(m, g) == a);
        CHECK(compile_formula(m, parse_expression(to_string(f))) == a);
        check_structure(m, a);
    }
}

TEST_CASE("deadline") {
    SddManager m(Vtree::balanced(24));
    m.set_deadline(std::chrono::steady_clock::now() - std::chrono::seconds(1));
    BenchRng rng(3);
    CHECK_THROWS_AS(
        {
            for (int i = 0; i < 2000; ++i) compile_cnf(m, random_cnf(24, 20, 3, rng));
        },
        TimeoutError);
}
