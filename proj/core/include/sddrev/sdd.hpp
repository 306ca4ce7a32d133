#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sddrev/formula.hpp"
#include "sddrev/vtree.hpp"

namespace sddrev {

// Handle into one manager's node store. Equal ids under one manager mean
// logically equivalent diagrams.
using NodeId = std::uint32_t;
inline constexpr NodeId kFalse = 0;
inline constexpr NodeId kTrue = 1;
inline constexpr NodeId kNoNode = UINT32_MAX;

using Count = unsigned __int128;
std::string to_string(Count c);

struct Element {
    NodeId prime = kFalse;
    NodeId sub = kFalse;
    friend bool operator==(const Element&, const Element&) = default;
};

// Binary Boolean operator as a truth table: bit (2*a + b) holds op(a, b).
enum class BoolOp : std::uint8_t {
    False = 0x0,
    Nor = 0x1,
    NotImplies = 0x4,  // a & ~b
    NotA = 0x5,
    Xor = 0x6,
    Nand = 0x7,
    And = 0x8,
    Iff = 0x9,
    B = 0xA,
    Implies = 0xB,
    A = 0xC,
    Or = 0xE,
    True = 0xF,
};

inline bool eval_op(BoolOp op, bool a, bool b) {
    return (static_cast<unsigned>(op) >> ((a ? 2U : 0U) | (b ? 1U : 0U))) & 1U;
}

// Literal conjunction used by satisfies(); variables must be distinct.
using Term = std::vector<Literal>;

struct ManagerStats {
    std::uint64_t apply_calls = 0;
    std::uint64_t apply_cache_hits = 0;
    std::uint64_t mc_visits = 0;
    std::uint64_t satisfies_visits = 0;
};

// Canonical SDD store over one vtree. Nodes are compressed and trimmed, and
// hash-consed through a unique table, so a node id identifies a Boolean
// function. Not thread-safe; use one manager per thread.
class SddManager {
public:
    enum class Kind : std::uint8_t { False, True, Literal, Decision };

    explicit SddManager(Vtree vtree);
    SddManager(const SddManager&) = delete;
    SddManager& operator=(const SddManager&) = delete;

    const Vtree& vtree() const noexcept { return vtree_; }
    int var_count() const noexcept { return vtree_.var_count(); }

    // --- construction -----------------------------------------------------
    NodeId constant(bool value) const noexcept { return value ? kTrue : kFalse; }
    NodeId literal(Literal l);
    // Terminal normalized for a vtree leaf. `lit` must sit on that leaf;
    // constants are accepted for any leaf.
    NodeId terminal(std::optional<Literal> lit, bool constant_value, VtreePos leaf);
    // Decision node for internal vtree node `v`. Validates normalization and
    // that the non-false primes form a partition, then compresses and trims.
    NodeId decision(std::span<const Element> elements, VtreePos v);

    NodeId apply(NodeId a, NodeId b, BoolOp op);
    NodeId conjoin(NodeId a, NodeId b) { return apply(a, b, BoolOp::And); }
    NodeId disjoin(NodeId a, NodeId b) { return apply(a, b, BoolOp::Or); }
    NodeId negate(NodeId a);
    NodeId condition(NodeId a, Literal lit);
    NodeId term(std::span<const Literal> lits);

    // --- queries ----------------------------------------------------------
    Kind kind(NodeId a) const noexcept { return nodes_[a].kind; }
    bool is_constant(NodeId a) const noexcept { return a == kFalse || a == kTrue; }
    // Vtree node the id is normalized for; kNoVtree for constants.
    VtreePos vtree_of(NodeId a) const noexcept { return nodes_[a].vtree; }
    Literal literal_of(NodeId a) const noexcept { return Literal::from_int(nodes_[a].literal); }
    std::span<const Element> elements(NodeId a) const noexcept {
        const auto& n = nodes_[a];
        return {elements_.data() + n.begin, n.count};
    }

    // Models over all vtree variables. Single memoized traversal.
    Count model_count(NodeId a);
    // Whether `a` and the literal conjunction `c` have a common model.
    // Linear traversal; throws InputError when c repeats a variable.
    bool satisfies(NodeId a, std::span<const Literal> c);
    // Sum of element counts of distinct reachable decision nodes.
    std::size_t size(NodeId a) const;
    // Distinct reachable nodes, terminals included.
    std::size_t node_count(NodeId a) const;
    std::size_t store_size() const noexcept { return nodes_.size(); }

    // Truth value under a total assignment given as a bit vector (bit i-1 is
    // x_i). Intended for tests.
    bool evaluate(NodeId a, std::uint64_t assignment) const;

    const ManagerStats& stats() const noexcept { return stats_; }
    void reset_stats() noexcept { stats_ = {}; }

    // Long operations poll the deadline and throw TimeoutError once past it.
    void set_deadline(std::optional<std::chrono::steady_clock::time_point> deadline) { deadline_ = deadline; }

    // --- text format ------------------------------------------------------
    //   sdd <node-count>
    //   F <id> | T <id> | L <id> <vtree-leaf-id> <signed-var>
    //   D <id> <vtree-node-id> <k> <prime-id sub-id>*k
    // Children precede parents; the last line's node is the root.
    std::string serialize(NodeId root) const;
    NodeId parse(std::string_view text);

    // Builds a decision node from elements already known to be a compressed
    // partition normalized for `v`; skips validation. Used by algorithms
    // that rebuild diagrams bottom-up.
    NodeId make_decision(VtreePos v, std::vector<Element> elements);

private:
    struct Node {
        Kind kind = Kind::False;
        VtreePos vtree = kNoVtree;
        int literal = 0;
        std::uint32_t begin = 0;
        std::uint32_t count = 0;
        NodeId negation = kNoNode;
    };

    NodeId apply_rec(NodeId a, NodeId b, BoolOp op);
    NodeId unary(NodeId x, bool f0, bool f1);
    void normalized_elements(NodeId a, VtreePos v, std::vector<Element>& out);
    void poll_deadline();
    Count scale(Count c, VtreePos from, VtreePos to) const;

    Vtree vtree_;
    std::vector<Node> nodes_;
    std::vector<Element> elements_;
    std::vector<NodeId> literal_ids_;  // index 2*var + (negative ? 1 : 0)
    std::unordered_multimap<std::uint64_t, NodeId> unique_;
    std::unordered_map<std::uint64_t, NodeId> apply_cache_;
    ManagerStats stats_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    std::uint32_t poll_counter_ = 0;
};

}  // namespace sddrev
