#pragma once

// Exhaustive-enumeration semantics. Everything here is exponential in the
// number of variables and exists to serve as ground truth for the
// diagram-based algorithms.

#include <cstdint>
#include <functional>
#include <vector>

#include "sddrev/formula.hpp"

namespace sddrev {

inline constexpr int kOracleCap = 24;

// Total assignment over x1..xn; bit i-1 holds the value of x_i.
struct Interpretation {
    std::uint32_t bits = 0;
    int width = 0;

    bool value(Var v) const noexcept { return (bits >> (v - 1)) & 1U; }
    void set(Var v, bool b) noexcept {
        if (b)
            bits |= 1U << (v - 1);
        else
            bits &= ~(1U << (v - 1));
    }
    // Interpretation listing the variables set to true.
    static Interpretation of(int width, std::initializer_list<Var> true_vars);

    friend bool operator==(const Interpretation&, const Interpretation&) = default;
};

// Set of interpretations over a fixed width n, stored as a 2^n bitmap.
class ModelSet {
public:
    ModelSet() = default;
    explicit ModelSet(int n);
    static ModelSet all(int n);

    int width() const noexcept { return n_; }
    std::uint64_t universe() const noexcept { return std::uint64_t{1} << n_; }

    bool contains(std::uint32_t w) const noexcept { return (words_[w >> 6] >> (w & 63)) & 1U; }
    bool contains(const Interpretation& w) const noexcept { return contains(w.bits); }
    void insert(std::uint32_t w) noexcept { words_[w >> 6] |= std::uint64_t{1} << (w & 63); }
    void insert(const Interpretation& w) noexcept { insert(w.bits); }

    std::uint64_t size() const noexcept;
    bool empty() const noexcept;
    std::vector<std::uint32_t> members() const;
    void for_each(const std::function<void(std::uint32_t)>& fn) const;

    bool subset_of(const ModelSet& other) const;
    ModelSet operator|(const ModelSet& other) const;
    ModelSet operator&(const ModelSet& other) const;
    ModelSet operator~() const;

    friend bool operator==(const ModelSet&, const ModelSet&) = default;

private:
    void check_same(const ModelSet& other) const;
    void clear_padding() noexcept;

    int n_ = 0;
    std::vector<std::uint64_t> words_;
};

// Throws InputError when f mentions a variable beyond w's width.
bool eval(const Formula& f, const Interpretation& w);

ModelSet models(const Formula& f, int n);

int distance(const Interpretation& a, const Interpretation& b);

// Interpretations within Hamming distance `radius` of some member of `set`.
ModelSet ball(const ModelSet& set, int radius);

ModelSet relax_semantic(const Formula& f, int order, int n);

struct DalalOutcome {
    // 0 when psi and mu are consistent, -1 when mu has no models.
    int order = 0;
    ModelSet result;
};

DalalOutcome dalal_oracle(const Formula& psi, const Formula& mu, int n);

}  // namespace sddrev
