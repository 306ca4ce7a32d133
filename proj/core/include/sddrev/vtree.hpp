#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sddrev/formula.hpp"

namespace sddrev {

// Position of a vtree node in in-order traversal. Used as the node handle
// everywhere inside the library; `id` is only the external label.
using VtreePos = std::uint32_t;
inline constexpr VtreePos kNoVtree = UINT32_MAX;

struct VtreeNode {
    std::int64_t id = 0;
    Var var = 0;  // nonzero iff leaf
    VtreePos left = kNoVtree;
    VtreePos right = kNoVtree;
    VtreePos parent = kNoVtree;
    // In-order span [first, last] of the subtree rooted here.
    VtreePos first = 0;
    VtreePos last = 0;
    std::uint32_t depth = 0;
    std::uint32_t var_count = 0;

    bool is_leaf() const noexcept { return var != 0; }
};

// Full binary tree whose leaves are the variables x1..xn. Immutable.
class Vtree {
public:
    // Leaves x1..xn in order, subtrees split as evenly as possible with the
    // extra leaf on the left.
    static Vtree balanced(int n);
    // Every left child is a leaf (OBDD-style order x1 < ... < xn).
    static Vtree right_linear(int n);

    // Text format:
    //   vtree <node-count>
    //   L <id> <var>
    //   I <id> <left-id> <right-id>
    // Children precede parents; the last line's node is the root.
    static Vtree parse(std::string_view text);
    std::string serialize() const;

    int var_count() const noexcept { return static_cast<int>(nodes_.size() + 1) / 2; }
    std::size_t size() const noexcept { return nodes_.size(); }
    VtreePos root() const noexcept { return root_; }
    const VtreeNode& node(VtreePos p) const { return nodes_.at(p); }
    const std::vector<VtreeNode>& nodes() const noexcept { return nodes_; }

    VtreePos leaf_of(Var v) const;
    std::optional<VtreePos> find_id(std::int64_t id) const;

    bool is_leaf(VtreePos p) const noexcept { return nodes_[p].var != 0; }
    VtreePos left(VtreePos p) const noexcept { return nodes_[p].left; }
    VtreePos right(VtreePos p) const noexcept { return nodes_[p].right; }
    VtreePos parent(VtreePos p) const noexcept { return nodes_[p].parent; }

    // True when `inner` lies in the subtree rooted at `outer` (inclusive).
    bool within(VtreePos inner, VtreePos outer) const noexcept {
        return nodes_[outer].first <= inner && inner <= nodes_[outer].last;
    }
    bool in_left(VtreePos inner, VtreePos outer) const noexcept {
        return !is_leaf(outer) && within(inner, nodes_[outer].left);
    }
    bool in_right(VtreePos inner, VtreePos outer) const noexcept {
        return !is_leaf(outer) && within(inner, nodes_[outer].right);
    }
    VtreePos lca(VtreePos a, VtreePos b) const noexcept;

    // Id of the internal node whose child is the leaf of `v`. Throws
    // InputError for an unknown variable and for a single-leaf vtree.
    std::int64_t parent_of(Var v) const;

    // Structural equality: same shape, same leaf variables, same ids.
    friend bool operator==(const Vtree& a, const Vtree& b);

private:
    struct Builder;

    std::vector<VtreeNode> nodes_;
    std::vector<VtreePos> leaf_of_var_;  // indexed by var
    VtreePos root_ = 0;
};

}  // namespace sddrev
