#include "sddrev/vtree.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <unordered_map>

#include "sddrev/error.hpp"

namespace sddrev {

namespace {

struct RawNode {
    std::int64_t id = 0;
    Var var = 0;
    std::size_t left = SIZE_MAX;
    std::size_t right = SIZE_MAX;
};

std::size_t build_balanced(std::vector<RawNode>& raw, Var first, Var count) {
    if (count == 1) {
        raw.push_back({0, first, SIZE_MAX, SIZE_MAX});
        return raw.size() - 1;
    }
    const Var left_count = (count + 1) / 2;
    const std::size_t l = build_balanced(raw, first, left_count);
    const std::size_t r = build_balanced(raw, first + left_count, count - left_count);
    raw.push_back({0, 0, l, r});
    return raw.size() - 1;
}

}  // namespace

struct Vtree::Builder {
    static Vtree make(std::size_t root, std::vector<RawNode> raw, bool relabel) {
        Vtree t;
        t.nodes_.resize(raw.size());
        std::vector<VtreePos> pos_of(raw.size(), kNoVtree);
        VtreePos next = 0;
        // In-order numbering; also rejects cycles and shared subtrees.
        std::function<void(std::size_t, std::uint32_t)> visit = [&](std::size_t i, std::uint32_t depth) {
            if (pos_of[i] != kNoVtree || depth > raw.size()) throw ParseError("vtree is not a tree", 0);
            pos_of[i] = kNoVtree - 1;
            const RawNode& r = raw[i];
            if (r.var == 0) visit(r.left, depth + 1);
            const VtreePos mine = next++;
            pos_of[i] = mine;
            if (r.var == 0) visit(r.right, depth + 1);
            VtreeNode& n = t.nodes_[mine];
            n.id = relabel ? static_cast<std::int64_t>(mine) : r.id;
            n.var = r.var;
            n.depth = depth;
            if (r.var == 0) {
                n.left = pos_of[r.left];
                n.right = pos_of[r.right];
            }
        };
        visit(root, 0);
        if (next != raw.size()) throw ParseError("vtree has nodes unreachable from the root", 0);
        t.root_ = pos_of[root];
        for (VtreePos p = 0; p < t.nodes_.size(); ++p) {
            VtreeNode& n = t.nodes_[p];
            if (n.is_leaf()) {
                n.first = n.last = p;
                n.var_count = 1;
            } else {
                t.nodes_[n.left].parent = p;
                t.nodes_[n.right].parent = p;
            }
        }
        // Children before parents in decreasing depth order.
        std::vector<VtreePos> order(t.nodes_.size());
        for (VtreePos p = 0; p < order.size(); ++p) order[p] = p;
        std::sort(order.begin(), order.end(),
                  [&](VtreePos a, VtreePos b) { return t.nodes_[a].depth > t.nodes_[b].depth; });
        for (VtreePos p : order) {
            VtreeNode& n = t.nodes_[p];
            if (n.is_leaf()) continue;
            n.first = t.nodes_[n.left].first;
            n.last = t.nodes_[n.right].last;
            n.var_count = t.nodes_[n.left].var_count + t.nodes_[n.right].var_count;
        }
        const int vars = t.var_count();
        t.leaf_of_var_.assign(static_cast<std::size_t>(vars) + 1, kNoVtree);
        for (VtreePos p = 0; p < t.nodes_.size(); ++p) {
            const Var v = t.nodes_[p].var;
            if (v == 0) continue;
            if (static_cast<int>(v) > vars) {
                throw ParseError("leaf variable x" + std::to_string(v) + " outside 1.." + std::to_string(vars), 0);
            }
            if (t.leaf_of_var_[v] != kNoVtree) throw ParseError("variable x" + std::to_string(v) + " on two leaves", 0);
            t.leaf_of_var_[v] = p;
        }
        return t;
    }
};

Vtree Vtree::balanced(int n) {
    if (n < 1) throw InputError("a vtree needs at least one variable");
    std::vector<RawNode> raw;
    raw.reserve(static_cast<std::size_t>(2 * n - 1));
    const std::size_t root = build_balanced(raw, 1, static_cast<Var>(n));
    return Builder::make(root, std::move(raw), true);
}

Vtree Vtree::right_linear(int n) {
    if (n < 1) throw InputError("a vtree needs at least one variable");
    std::vector<RawNode> raw;
    raw.push_back({0, static_cast<Var>(n), SIZE_MAX, SIZE_MAX});
    std::size_t spine = 0;
    for (int v = n - 1; v >= 1; --v) {
        raw.push_back({0, static_cast<Var>(v), SIZE_MAX, SIZE_MAX});
        raw.push_back({0, 0, raw.size() - 1, spine});
        spine = raw.size() - 1;
    }
    return Builder::make(spine, std::move(raw), true);
}

Vtree Vtree::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    std::size_t declared = 0;
    bool have_header = false;
    std::vector<RawNode> raw;
    std::unordered_map<std::int64_t, std::size_t> index_of;
    std::vector<std::pair<std::int64_t, std::int64_t>> child_ids;
    std::vector<std::size_t> lines_of;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag == "c") continue;
        if (!have_header) {
            long long count = -1;
            if (tag != "vtree" || !(ls >> count) || count < 1) throw ParseError("expected header 'vtree <node-count>'", lineno);
            declared = static_cast<std::size_t>(count);
            have_header = true;
            continue;
        }
        RawNode node;
        std::int64_t l = 0, r = 0;
        if (tag == "L") {
            long long var = 0;
            if (!(ls >> node.id >> var) || var < 1) throw ParseError("malformed leaf line", lineno);
            node.var = static_cast<Var>(var);
        } else if (tag == "I") {
            if (!(ls >> node.id >> l >> r)) throw ParseError("malformed internal line", lineno);
        } else {
            throw ParseError("unknown line tag '" + tag + "'", lineno);
        }
        std::string extra;
        if (ls >> extra) throw ParseError("trailing token '" + extra + "'", lineno);
        if (!index_of.emplace(node.id, raw.size()).second) {
            throw ParseError("duplicate node id " + std::to_string(node.id), lineno);
        }
        raw.push_back(node);
        child_ids.emplace_back(l, r);
        lines_of.push_back(lineno);
    }
    if (!have_header) throw ParseError("missing 'vtree' header", 0);
    if (raw.size() != declared) {
        throw ParseError("header declares " + std::to_string(declared) + " nodes, found " + std::to_string(raw.size()), 0);
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i].var != 0) continue;
        auto l = index_of.find(child_ids[i].first);
        auto r = index_of.find(child_ids[i].second);
        if (l == index_of.end() || r == index_of.end()) throw ParseError("reference to undefined node id", lines_of[i]);
        raw[i].left = l->second;
        raw[i].right = r->second;
    }
    const std::size_t root = raw.size() - 1;
    return Builder::make(root, std::move(raw), false);
}

std::string Vtree::serialize() const {
    std::ostringstream out;
    out << "vtree " << nodes_.size() << '\n';
    std::function<void(VtreePos)> emit = [&](VtreePos p) {
        const VtreeNode& n = nodes_[p];
        if (n.is_leaf()) {
            out << "L " << n.id << ' ' << n.var << '\n';
            return;
        }
        emit(n.left);
        emit(n.right);
        out << "I " << n.id << ' ' << nodes_[n.left].id << ' ' << nodes_[n.right].id << '\n';
    };
    emit(root_);
    return out.str();
}

VtreePos Vtree::leaf_of(Var v) const {
    if (v == 0 || v >= leaf_of_var_.size()) throw InputError("variable x" + std::to_string(v) + " not in vtree");
    return leaf_of_var_[v];
}

std::optional<VtreePos> Vtree::find_id(std::int64_t id) const {
    for (VtreePos p = 0; p < nodes_.size(); ++p)
        if (nodes_[p].id == id) return p;
    return std::nullopt;
}

VtreePos Vtree::lca(VtreePos a, VtreePos b) const noexcept {
    while (nodes_[a].depth > nodes_[b].depth) a = nodes_[a].parent;
    while (nodes_[b].depth > nodes_[a].depth) b = nodes_[b].parent;
    while (a != b) {
        a = nodes_[a].parent;
        b = nodes_[b].parent;
    }
    return a;
}

std::int64_t Vtree::parent_of(Var v) const {
    const VtreePos leaf = leaf_of(v);
    if (nodes_[leaf].parent == kNoVtree) throw InputError("single-leaf vtree has no parent for x" + std::to_string(v));
    return nodes_[nodes_[leaf].parent].id;
}

bool operator==(const Vtree& a, const Vtree& b) {
    if (a.nodes_.size() != b.nodes_.size() || a.root_ != b.root_) return false;
    for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
        const VtreeNode& x = a.nodes_[i];
        const VtreeNode& y = b.nodes_[i];
        if (x.id != y.id || x.var != y.var || x.left != y.left || x.right != y.right) return false;
    }
    return true;
}

}  // namespace sddrev
