#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sddrev {

// Variables are dense and 1-based: x1..xn.
using Var = std::uint32_t;

struct Literal {
    Var var = 0;
    bool positive = true;

    Literal negated() const noexcept { return {var, !positive}; }
    // DIMACS-style signed integer.
    int to_int() const noexcept { return positive ? static_cast<int>(var) : -static_cast<int>(var); }
    static Literal from_int(int v) noexcept {
        return {static_cast<Var>(v < 0 ? -v : v), v > 0};
    }

    friend bool operator==(const Literal&, const Literal&) = default;
    friend auto operator<=>(const Literal&, const Literal&) = default;
};

// Direction of a semi-resolvent: Plus substitutes the variable with true,
// Minus with false.
enum class Sign : std::uint8_t { Plus = 0, Minus = 1 };

using SignVector = std::vector<Sign>;

inline char sign_char(Sign s) { return s == Sign::Plus ? '+' : '-'; }

// Immutable propositional formula. Copies share structure.
class Formula {
public:
    enum class Kind : std::uint8_t { Const, Lit, Not, And, Or, Implies, Iff };

    Formula();  // false

    static Formula constant(bool value);
    static Formula top() { return constant(true); }
    static Formula bottom() { return constant(false); }
    static Formula literal(Literal l);
    static Formula var(Var v) { return literal({v, true}); }
    static Formula negation(Formula f);
    static Formula conjunction(std::vector<Formula> children);
    static Formula disjunction(std::vector<Formula> children);
    static Formula implies(Formula lhs, Formula rhs);
    static Formula iff(Formula lhs, Formula rhs);

    Kind kind() const noexcept { return node_->kind; }
    bool value() const noexcept { return node_->value; }
    Literal lit() const noexcept { return node_->lit; }
    std::span<const Formula> children() const noexcept { return node_->children; }

    // Largest variable index mentioned, 0 for constants.
    Var max_var() const noexcept { return node_->max_var; }
    bool mentions(Var v) const;

    friend Formula operator!(const Formula& f) { return negation(f); }
    friend Formula operator&(const Formula& a, const Formula& b) { return conjunction({a, b}); }
    friend Formula operator|(const Formula& a, const Formula& b) { return disjunction({a, b}); }

private:
    struct Node {
        Kind kind = Kind::Const;
        bool value = false;
        Literal lit{};
        std::vector<Formula> children;
        Var max_var = 0;
    };
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    static Formula make(Kind kind, std::vector<Formula> children);

    std::shared_ptr<const Node> node_;
};

// Text form accepted by parse_expression: x1..xn, ~ & | -> <->, T F,
// parentheses. Precedence ~ > & > | > -> > <->, with -> right-associative.
std::string to_string(const Formula& f);
Formula parse_expression(std::string_view text);

// Substitutes `v` with a constant (true for Plus) and folds constants.
Formula cofactor(const Formula& f, Var v, Sign sign);

// Iterated cofactor over duplicate-free `vars`; throws InputError on
// duplicates or a length mismatch.
Formula semi_resolvent_formula(const Formula& f, std::span<const Var> vars, std::span<const Sign> signs);

}  // namespace sddrev
