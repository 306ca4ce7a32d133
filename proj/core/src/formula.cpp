#include "sddrev/formula.hpp"

#include <algorithm>
#include <set>

#include "sddrev/error.hpp"

namespace sddrev {

Formula::Formula() : Formula(constant(false)) {}

Formula Formula::constant(bool value) {
    static const Formula kTrue{std::make_shared<const Node>(Node{Kind::Const, true, {}, {}, 0})};
    static const Formula kFalse{std::make_shared<const Node>(Node{Kind::Const, false, {}, {}, 0})};
    return value ? kTrue : kFalse;
}

Formula Formula::literal(Literal l) {
    if (l.var == 0) throw InputError("variable indices are 1-based");
    return Formula{std::make_shared<const Node>(Node{Kind::Lit, false, l, {}, l.var})};
}

Formula Formula::make(Kind kind, std::vector<Formula> children) {
    Var mv = 0;
    for (const auto& c : children) mv = std::max(mv, c.max_var());
    return Formula{std::make_shared<const Node>(Node{kind, false, {}, std::move(children), mv})};
}

Formula Formula::negation(Formula f) { return make(Kind::Not, {std::move(f)}); }

Formula Formula::conjunction(std::vector<Formula> children) {
    if (children.empty()) throw InputError("conjunction needs at least one operand");
    return make(Kind::And, std::move(children));
}

Formula Formula::disjunction(std::vector<Formula> children) {
    if (children.empty()) throw InputError("disjunction needs at least one operand");
    return make(Kind::Or, std::move(children));
}

Formula Formula::implies(Formula lhs, Formula rhs) { return make(Kind::Implies, {std::move(lhs), std::move(rhs)}); }

Formula Formula::iff(Formula lhs, Formula rhs) { return make(Kind::Iff, {std::move(lhs), std::move(rhs)}); }

bool Formula::mentions(Var v) const {
    if (v > max_var()) return false;
    switch (kind()) {
        case Kind::Const: return false;
        case Kind::Lit: return lit().var == v;
        default:
            return std::any_of(children().begin(), children().end(), [v](const Formula& c) { return c.mentions(v); });
    }
}

namespace {

// Binding strength used to decide where parentheses are needed.
int precedence(Formula::Kind k) {
    switch (k) {
        case Formula::Kind::Iff: return 1;
        case Formula::Kind::Implies: return 2;
        case Formula::Kind::Or: return 3;
        case Formula::Kind::And: return 4;
        default: return 5;
    }
}

void print(const Formula& f, std::string& out, int outer) {
    using K = Formula::Kind;
    const int p = precedence(f.kind());
    const bool paren = p < outer;
    if (paren) out += '(';
    switch (f.kind()) {
        case K::Const: out += f.value() ? 'T' : 'F'; break;
        case K::Lit:
            if (!f.lit().positive) out += '~';
            out += 'x' + std::to_string(f.lit().var);
            break;
        case K::Not:
            out += '~';
            print(f.children()[0], out, 5);
            break;
        case K::And:
        case K::Or: {
            const char* op = f.kind() == K::And ? " & " : " | ";
            for (std::size_t i = 0; i < f.children().size(); ++i) {
                if (i) out += op;
                print(f.children()[i], out, p + 1);
            }
            break;
        }
        case K::Implies:
            print(f.children()[0], out, p + 1);
            out += " -> ";
            print(f.children()[1], out, p);
            break;
        case K::Iff:
            print(f.children()[0], out, p);
            out += " <-> ";
            print(f.children()[1], out, p + 1);
            break;
    }
    if (paren) out += ')';
}

Formula fold(const Formula& f, Var v, bool value) {
    using K = Formula::Kind;
    if (!f.mentions(v)) return f;
    switch (f.kind()) {
        case K::Const: return f;
        case K::Lit: return Formula::constant(f.lit().positive == value);
        case K::Not: {
            Formula c = fold(f.children()[0], v, value);
            if (c.kind() == K::Const) return Formula::constant(!c.value());
            return Formula::negation(c);
        }
        case K::And:
        case K::Or: {
            const bool absorbing = f.kind() == K::Or;
            std::vector<Formula> kept;
            for (const auto& child : f.children()) {
                Formula c = fold(child, v, value);
                if (c.kind() == K::Const) {
                    if (c.value() == absorbing) return Formula::constant(absorbing);
                    continue;
                }
                kept.push_back(std::move(c));
            }
            if (kept.empty()) return Formula::constant(!absorbing);
            if (kept.size() == 1) return kept.front();
            return f.kind() == K::And ? Formula::conjunction(std::move(kept)) : Formula::disjunction(std::move(kept));
        }
        case K::Implies: {
            Formula a = fold(f.children()[0], v, value);
            Formula b = fold(f.children()[1], v, value);
            if (a.kind() == K::Const) return a.value() ? b : Formula::top();
            if (b.kind() == K::Const) return b.value() ? Formula::top() : Formula::negation(a);
            return Formula::implies(a, b);
        }
        case K::Iff: {
            Formula a = fold(f.children()[0], v, value);
            Formula b = fold(f.children()[1], v, value);
            if (a.kind() == K::Const) std::swap(a, b);
            if (b.kind() == K::Const) {
                if (a.kind() == K::Const) return Formula::constant(a.value() == b.value());
                return b.value() ? a : Formula::negation(a);
            }
            return Formula::iff(a, b);
        }
    }
    return f;
}

}  // namespace

std::string to_string(const Formula& f) {
    std::string out;
    print(f, out, 0);
    return out;
}

Formula cofactor(const Formula& f, Var v, Sign sign) { return fold(f, v, sign == Sign::Plus); }

Formula semi_resolvent_formula(const Formula& f, std::span<const Var> vars, std::span<const Sign> signs) {
    if (vars.size() != signs.size()) throw InputError("variable and sign sequences differ in length");
    std::set<Var> seen;
    for (Var v : vars) {
        if (!seen.insert(v).second) throw InputError("duplicate variable x" + std::to_string(v) + " in semi-resolvent");
    }
    Formula out = f;
    for (std::size_t i = vars.size(); i-- > 0;) out = cofactor(out, vars[i], signs[i]);
    return out;
}

}  // namespace sddrev
