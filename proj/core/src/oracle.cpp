#include "sddrev/oracle.hpp"

#include <bit>
#include <deque>
#include <limits>

#include "sddrev/error.hpp"

namespace sddrev {

namespace {

void check_width(int n) {
    if (n < 0) throw InputError("negative variable count");
    if (n > kOracleCap) {
        throw CapacityError("enumeration over " + std::to_string(n) + " variables exceeds the oracle cap of " +
                            std::to_string(kOracleCap));
    }
}

bool eval_unchecked(const Formula& f, std::uint32_t bits) {
    using K = Formula::Kind;
    switch (f.kind()) {
        case K::Const: return f.value();
        case K::Lit: return (((bits >> (f.lit().var - 1)) & 1U) != 0) == f.lit().positive;
        case K::Not: return !eval_unchecked(f.children()[0], bits);
        case K::And:
            for (const auto& c : f.children())
                if (!eval_unchecked(c, bits)) return false;
            return true;
        case K::Or:
            for (const auto& c : f.children())
                if (eval_unchecked(c, bits)) return true;
            return false;
        case K::Implies: return !eval_unchecked(f.children()[0], bits) || eval_unchecked(f.children()[1], bits);
        case K::Iff: return eval_unchecked(f.children()[0], bits) == eval_unchecked(f.children()[1], bits);
    }
    return false;
}

}  // namespace

Interpretation Interpretation::of(int width, std::initializer_list<Var> true_vars) {
    check_width(width);
    Interpretation w{0, width};
    for (Var v : true_vars) {
        if (v == 0 || static_cast<int>(v) > width) throw InputError("variable outside interpretation width");
        w.set(v, true);
    }
    return w;
}

ModelSet::ModelSet(int n) : n_(n) {
    check_width(n);
    words_.assign(static_cast<std::size_t>((universe() + 63) / 64), 0);
}

ModelSet ModelSet::all(int n) {
    ModelSet s(n);
    for (auto& w : s.words_) w = ~std::uint64_t{0};
    s.clear_padding();
    return s;
}

void ModelSet::clear_padding() noexcept {
    const std::uint64_t used = universe() & 63;
    if (used != 0) words_.back() &= (std::uint64_t{1} << used) - 1;
}

std::uint64_t ModelSet::size() const noexcept {
    std::uint64_t total = 0;
    for (auto w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
    return total;
}

bool ModelSet::empty() const noexcept {
    for (auto w : words_)
        if (w) return false;
    return true;
}

std::vector<std::uint32_t> ModelSet::members() const {
    std::vector<std::uint32_t> out;
    for_each([&](std::uint32_t w) { out.push_back(w); });
    return out;
}

void ModelSet::for_each(const std::function<void(std::uint32_t)>& fn) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
        std::uint64_t word = words_[i];
        while (word) {
            const int bit = std::countr_zero(word);
            fn(static_cast<std::uint32_t>(i * 64 + static_cast<std::size_t>(bit)));
            word &= word - 1;
        }
    }
}

void ModelSet::check_same(const ModelSet& other) const {
    if (n_ != other.n_) throw InputError("model sets over different widths");
}

bool ModelSet::subset_of(const ModelSet& other) const {
    check_same(other);
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~other.words_[i]) return false;
    return true;
}

ModelSet ModelSet::operator|(const ModelSet& other) const {
    check_same(other);
    ModelSet out = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] |= other.words_[i];
    return out;
}

ModelSet ModelSet::operator&(const ModelSet& other) const {
    check_same(other);
    ModelSet out = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] &= other.words_[i];
    return out;
}

ModelSet ModelSet::operator~() const {
    ModelSet out = *this;
    for (auto& w : out.words_) w = ~w;
    out.clear_padding();
    return out;
}

bool eval(const Formula& f, const Interpretation& w) {
    if (static_cast<int>(f.max_var()) > w.width) {
        throw InputError("formula mentions x" + std::to_string(f.max_var()) + " beyond interpretation width " +
                         std::to_string(w.width));
    }
    return eval_unchecked(f, w.bits);
}

ModelSet models(const Formula& f, int n) {
    ModelSet out(n);
    if (static_cast<int>(f.max_var()) > n) {
        throw InputError("formula mentions x" + std::to_string(f.max_var()) + " beyond n=" + std::to_string(n));
    }
    const std::uint64_t total = out.universe();
    for (std::uint64_t w = 0; w < total; ++w)
        if (eval_unchecked(f, static_cast<std::uint32_t>(w))) out.insert(static_cast<std::uint32_t>(w));
    return out;
}

int distance(const Interpretation& a, const Interpretation& b) {
    if (a.width != b.width) throw InputError("interpretations of different widths");
    return std::popcount(a.bits ^ b.bits);
}

ModelSet ball(const ModelSet& set, int radius) {
    if (radius < 0) throw InputError("negative radius");
    const int n = set.width();
    // Multi-source breadth-first search over the hypercube.
    constexpr std::uint8_t kUnseen = std::numeric_limits<std::uint8_t>::max();
    std::vector<std::uint8_t> dist(set.universe(), kUnseen);
    std::deque<std::uint32_t> queue;
    set.for_each([&](std::uint32_t w) {
        dist[w] = 0;
        queue.push_back(w);
    });
    ModelSet out(n);
    while (!queue.empty()) {
        const std::uint32_t w = queue.front();
        queue.pop_front();
        out.insert(w);
        if (dist[w] >= radius) continue;
        for (int i = 0; i < n; ++i) {
            const std::uint32_t next = w ^ (1U << i);
            if (dist[next] != kUnseen) continue;
            dist[next] = static_cast<std::uint8_t>(dist[w] + 1);
            queue.push_back(next);
        }
    }
    return out;
}

ModelSet relax_semantic(const Formula& f, int order, int n) { return ball(models(f, n), order); }

DalalOutcome dalal_oracle(const Formula& psi, const Formula& mu, int n) {
    const ModelSet psi_models = models(psi, n);
    const ModelSet mu_models = models(mu, n);
    if (mu_models.empty()) return {-1, ModelSet(n)};
    if (psi_models.empty()) return {n, mu_models};
    ModelSet hit = psi_models & mu_models;
    if (!hit.empty()) return {0, hit};
    ModelSet sphere = psi_models;
    for (int order = 1; order <= n; ++order) {
        sphere = ball(psi_models, order);
        hit = sphere & mu_models;
        if (!hit.empty()) return {order, hit};
    }
    // Unreachable: the order-n sphere around a nonempty set is everything.
    throw InvariantError("Dalal order exceeded n");
}

}  // namespace sddrev
