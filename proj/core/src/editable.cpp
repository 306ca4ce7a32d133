#include "sddrev/editable.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "sddrev/error.hpp"

namespace sddrev {

using Kind = SddManager::Kind;

EditableSdd::EditableSdd(SddManager& m) : manager_(&m) {
    nodes_.push_back({Kind::False, kNoVtree, {}, {}, kFalse, false});
    nodes_.push_back({Kind::True, kNoVtree, {}, {}, kTrue, false});
}

EditableSdd::Ref EditableSdd::add(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<Ref>(nodes_.size() - 1);
}

EditableSdd::Ref EditableSdd::literal_ref(Literal l, VtreePos leaf) {
    const NodeId id = manager_->literal(l);
    auto [it, fresh] = lifted_.try_emplace({id, leaf}, 0);
    if (fresh) it->second = add({Kind::Literal, leaf, l, {}, id, false});
    return it->second;
}

EditableSdd EditableSdd::expand(SddManager& manager, NodeId root) {
    EditableSdd e(manager);
    if (manager.is_constant(root)) {
        e.root_ = root == kTrue ? kTrueRef : kFalseRef;
    } else {
        e.root_ = e.lift(root, manager.vtree().root());
    }
    return e;
}

EditableSdd::Ref EditableSdd::lift(NodeId n, VtreePos v) {
    if (n == kFalse) return kFalseRef;
    if (n == kTrue) return kTrueRef;
    if (auto it = lifted_.find({n, v}); it != lifted_.end()) return it->second;
    const Vtree& vt = manager_->vtree();
    const VtreePos nv = manager_->vtree_of(n);
    Ref out;
    if (vt.is_leaf(v)) {
        if (nv != v) throw InvariantError("node not normalized for the requested leaf");
        out = literal_ref(manager_->literal_of(n), v);
        return out;
    }
    std::vector<ElementRef> elems;
    if (nv == v) {
        std::vector<Element> src(manager_->elements(n).begin(), manager_->elements(n).end());
        for (const auto& el : src) {
            const Ref p = lift(el.prime, vt.left(v));
            const Ref s = lift(el.sub, vt.right(v));
            elems.push_back({p, s});
        }
    } else if (vt.in_left(nv, v)) {
        const NodeId neg = manager_->negate(n);
        const Ref p = lift(n, vt.left(v));
        const Ref np = lift(neg, vt.left(v));
        elems = {{p, kTrueRef}, {np, kFalseRef}};
    } else if (vt.in_right(nv, v)) {
        const Ref s = lift(n, vt.right(v));
        const VtreePos lv = vt.left(v);
        if (vt.is_leaf(lv)) {
            const Var x = vt.node(lv).var;
            const Ref pos = literal_ref({x, true}, lv);
            const Ref neg = literal_ref({x, false}, lv);
            elems = {{pos, s}, {neg, s}};
        } else {
            elems = {{kTrueRef, s}};
        }
    } else {
        throw InvariantError("node not normalized below the requested vtree node");
    }
    out = add({Kind::Decision, v, {}, std::move(elems), n, false});
    lifted_.emplace(std::make_pair(n, v), out);
    return out;
}

std::vector<EditableSdd::Ref> EditableSdd::decisions(VtreePos v) const {
    std::vector<Ref> out;
    std::vector<bool> seen(nodes_.size(), false);
    std::function<void(Ref)> walk = [&](Ref r) {
        if (seen[r]) return;
        seen[r] = true;
        const Node& n = nodes_[r];
        if (n.kind != Kind::Decision) return;
        if (n.vtree == v) out.push_back(r);
        const Vtree& vt = manager_->vtree();
        // Nodes for v only occur below ancestors of v.
        if (!vt.within(v, n.vtree) || n.vtree == v) return;
        for (const auto& e : n.elements) {
            walk(e.prime);
            walk(e.sub);
        }
    };
    walk(root_);
    return out;
}

void EditableSdd::replace(Ref old_ref, Ref new_ref) {
    if (old_ref >= nodes_.size() || new_ref >= nodes_.size()) throw InputError("unknown editable node");
    if (old_ref == new_ref) return;
    const Node& o = nodes_[old_ref];
    const Node& n = nodes_[new_ref];
    const bool new_const = n.kind == Kind::False || n.kind == Kind::True;
    if (!new_const && o.vtree != n.vtree) throw InputError("replacement normalized for a different vtree node");
    for (auto& node : nodes_) {
        for (auto& e : node.elements) {
            if (e.prime == old_ref) {
                e.prime = new_ref;
                node.edited = true;
            }
            if (e.sub == old_ref) {
                e.sub = new_ref;
                node.edited = true;
            }
        }
    }
    if (root_ == old_ref) root_ = new_ref;
}

void EditableSdd::set_sub(Ref decision, std::size_t element, Ref new_sub) {
    Node& n = nodes_.at(decision);
    if (n.kind != Kind::Decision || element >= n.elements.size()) throw InputError("no such element");
    if (n.elements[element].sub == new_sub) return;
    n.elements[element].sub = new_sub;
    n.edited = true;
}

void EditableSdd::compress(Ref decision) {
    if (nodes_.at(decision).kind != Kind::Decision) return;
    const VtreePos lv = manager_->vtree().left(nodes_[decision].vtree);
    const std::vector<ElementRef> original = nodes_[decision].elements;
    std::vector<ElementRef> merged;
    for (const auto& e : original) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const ElementRef& m) { return m.sub == e.sub; });
        if (it == merged.end()) {
            merged.push_back(e);
            continue;
        }
        const Node& a = nodes_[it->prime];
        const Node& b = nodes_[e.prime];
        // X | ~X at a leaf is the constant true.
        if (a.kind == Kind::Literal && b.kind == Kind::Literal && a.lit == b.lit.negated()) {
            it->prime = kTrueRef;
            continue;
        }
        const NodeId joined = manager_->disjoin(canonicalize(it->prime), canonicalize(e.prime));
        it->prime = lift(joined, lv);
    }
    if (merged.size() != original.size()) {
        nodes_[decision].elements = std::move(merged);
        nodes_[decision].edited = true;
    }
}

void EditableSdd::prune() {
    auto structurally_false = [&](Ref r) {
        const Node& n = nodes_[r];
        if (n.kind == Kind::False) return true;
        if (n.kind != Kind::Decision) return false;
        return std::all_of(n.elements.begin(), n.elements.end(), [](const ElementRef& e) { return e.sub == kFalseRef; });
    };
    for (auto& node : nodes_) {
        const auto before = node.elements.size();
        std::erase_if(node.elements, [&](const ElementRef& e) { return structurally_false(e.prime); });
        if (node.elements.size() != before) node.edited = true;
    }
}

std::size_t EditableSdd::size() const {
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<Ref> stack{root_};
    std::size_t total = 0;
    while (!stack.empty()) {
        const Ref r = stack.back();
        stack.pop_back();
        if (seen[r]) continue;
        seen[r] = true;
        const Node& n = nodes_[r];
        if (n.kind != Kind::Decision) continue;
        total += n.elements.size();
        for (const auto& e : n.elements) {
            stack.push_back(e.prime);
            stack.push_back(e.sub);
        }
    }
    return total;
}

NodeId EditableSdd::canonicalize(Ref from) const {
    // dirty: edited here or somewhere below.
    std::unordered_map<Ref, bool> dirty;
    std::function<bool(Ref)> is_dirty = [&](Ref r) -> bool {
        if (auto it = dirty.find(r); it != dirty.end()) return it->second;
        const Node& n = nodes_[r];
        bool d = n.edited || n.origin == kNoNode;
        if (!d && n.kind == Kind::Decision) {
            for (const auto& e : n.elements) {
                if (is_dirty(e.prime) || is_dirty(e.sub)) {
                    d = true;
                    break;
                }
            }
        }
        dirty.emplace(r, d);
        return d;
    };
    std::unordered_map<Ref, NodeId> memo;
    std::function<NodeId(Ref)> build = [&](Ref r) -> NodeId {
        const Node& n = nodes_[r];
        switch (n.kind) {
            case Kind::False: return kFalse;
            case Kind::True: return kTrue;
            case Kind::Literal: return manager_->literal(n.lit);
            case Kind::Decision: break;
        }
        if (!is_dirty(r)) return n.origin;
        if (auto it = memo.find(r); it != memo.end()) return it->second;
        std::vector<Element> elems;
        elems.reserve(n.elements.size());
        for (const auto& e : n.elements) {
            const NodeId p = build(e.prime);
            if (p == kFalse) continue;
            elems.push_back({p, build(e.sub)});
        }
        const NodeId out = manager_->make_decision(n.vtree, std::move(elems));
        memo.emplace(r, out);
        return out;
    };
    return build(from);
}

}  // namespace sddrev
