#include <cctype>

#include "sddrev/error.hpp"
#include "sddrev/formula.hpp"

namespace sddrev {

namespace {

class ExpressionParser {
public:
    explicit ExpressionParser(std::string_view text) : text_(text) {}

    Formula parse() {
        Formula f = parse_iff();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return f;
    }

private:
    Formula parse_iff() {
        Formula lhs = parse_implies();
        while (accept("<->")) lhs = Formula::iff(lhs, parse_implies());
        return lhs;
    }

    Formula parse_implies() {
        Formula lhs = parse_or();
        if (accept("->")) return Formula::implies(lhs, parse_implies());
        return lhs;
    }

    Formula parse_or() {
        std::vector<Formula> items{parse_and()};
        while (accept("|")) items.push_back(parse_and());
        return items.size() == 1 ? items.front() : Formula::disjunction(std::move(items));
    }

    Formula parse_and() {
        std::vector<Formula> items{parse_unary()};
        while (accept("&")) items.push_back(parse_unary());
        return items.size() == 1 ? items.front() : Formula::conjunction(std::move(items));
    }

    Formula parse_unary() {
        if (accept("~")) {
            Formula f = parse_unary();
            if (f.kind() == Formula::Kind::Lit) return Formula::literal(f.lit().negated());
            return Formula::negation(f);
        }
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Formula f = parse_iff();
            if (!accept(")")) fail("expected ')'");
            return f;
        }
        if (c == 'T' || c == 'F') {
            ++pos_;
            return Formula::constant(c == 'T');
        }
        if (c == 'x') {
            ++pos_;
            const std::size_t start = pos_;
            unsigned long value = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                value = value * 10 + static_cast<unsigned long>(text_[pos_] - '0');
                if (value > 1'000'000) fail("variable index too large");
                ++pos_;
            }
            if (pos_ == start || value == 0) fail("expected variable index >= 1 after 'x'");
            return Formula::var(static_cast<Var>(value));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    bool accept(std::string_view token) {
        skip_space();
        if (text_.substr(pos_, token.size()) != token) return false;
        pos_ += token.size();
        return true;
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("column " + std::to_string(pos_ + 1) + ": " + what, 1);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Formula parse_expression(std::string_view text) { return ExpressionParser(text).parse(); }

}  // namespace sddrev
