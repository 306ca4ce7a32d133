#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "sddrev/sdd.hpp"

namespace sddrev {

// Scratch copy of a diagram in expanded form: every decision node is
// normalized for exactly the vtree node it sits on, with primes on the left
// child and subs on the right child, and any decision node whose left child
// is a leaf X carries explicit X / ~X primes. Local edits happen here; the
// canonical store is never mutated. Constants may appear at any level.
class EditableSdd {
public:
    using Ref = std::uint32_t;
    static constexpr Ref kFalseRef = 0;
    static constexpr Ref kTrueRef = 1;

    struct ElementRef {
        Ref prime;
        Ref sub;
    };

    struct Node {
        SddManager::Kind kind = SddManager::Kind::False;
        VtreePos vtree = kNoVtree;
        Literal lit{};
        std::vector<ElementRef> elements;
        NodeId origin = kNoNode;  // canonical node this was expanded from
        bool edited = false;
    };

    // Builds the expanded form of `root`.
    static EditableSdd expand(SddManager& manager, NodeId root);

    Ref root() const noexcept { return root_; }
    const Node& node(Ref r) const { return nodes_.at(r); }
    std::size_t node_count() const noexcept { return nodes_.size(); }

    // Reachable decision nodes normalized for vtree node `v`, in a
    // deterministic (depth-first) order.
    std::vector<Ref> decisions(VtreePos v) const;

    // Redirects every reference to `old_ref` to `new_ref`. Both must be
    // normalized for the same vtree node unless `new_ref` is a constant.
    void replace(Ref old_ref, Ref new_ref);
    // Changes one element's sub in place.
    void set_sub(Ref decision, std::size_t element, Ref new_sub);
    // Merges elements of `decision` that share a sub by disjoining their
    // primes.
    void compress(Ref decision);
    // Drops elements whose prime is structurally false, i.e. the false
    // constant or a decision node all of whose subs are false.
    void prune();

    // Sum of element counts over reachable decision nodes.
    std::size_t size() const;

    // Rebuilds through the manager's unique table: compressed, trimmed,
    // hash-consed. Untouched subgraphs map back to their origin ids.
    NodeId canonicalize() const { return canonicalize(root_); }
    NodeId canonicalize(Ref from) const;

    SddManager& manager() const noexcept { return *manager_; }

private:
    explicit EditableSdd(SddManager& m);
    Ref lift(NodeId n, VtreePos v);
    Ref add(Node n);
    Ref literal_ref(Literal l, VtreePos leaf);

    SddManager* manager_;
    std::vector<Node> nodes_;
    std::map<std::pair<NodeId, VtreePos>, Ref> lifted_;
    Ref root_ = kFalseRef;
};

}  // namespace sddrev
