#include "sddrev/sdd.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <unordered_set>

#include "sddrev/error.hpp"

namespace sddrev {

namespace {

constexpr NodeId kMaxNodes = NodeId{1} << 30;

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= h >> 31;
    h *= 0xbf58476d1ce4e5b9ULL;
    return h;
}

std::uint64_t hash_decision(VtreePos v, std::span<const Element> elems) {
    std::uint64_t h = mix(0x51afd7ed558ccd7ULL, v);
    for (const auto& e : elems) h = mix(mix(h, e.prime), e.sub);
    return h;
}

bool is_commutative(BoolOp op) {
    const auto bits = static_cast<unsigned>(op);
    return ((bits >> 1) & 1U) == ((bits >> 2) & 1U);
}

}  // namespace

std::string to_string(Count c) {
    if (c == 0) return "0";
    std::string s;
    while (c > 0) {
        s.push_back(static_cast<char>('0' + static_cast<int>(c % 10)));
        c /= 10;
    }
    std::reverse(s.begin(), s.end());
    return s;
}

SddManager::SddManager(Vtree vtree) : vtree_(std::move(vtree)) {
    nodes_.push_back({Kind::False, kNoVtree, 0, 0, 0, kTrue});
    nodes_.push_back({Kind::True, kNoVtree, 0, 0, 0, kFalse});
    literal_ids_.assign(2 * (static_cast<std::size_t>(vtree_.var_count()) + 1), kNoNode);
}

NodeId SddManager::literal(Literal l) {
    const VtreePos leaf = vtree_.leaf_of(l.var);
    const std::size_t slot = 2 * static_cast<std::size_t>(l.var) + (l.positive ? 0 : 1);
    if (literal_ids_[slot] == kNoNode) {
        const auto pos = static_cast<NodeId>(nodes_.size());
        nodes_.push_back({Kind::Literal, leaf, static_cast<int>(l.var), 0, 0, pos + 1});
        nodes_.push_back({Kind::Literal, leaf, -static_cast<int>(l.var), 0, 0, pos});
        literal_ids_[2 * static_cast<std::size_t>(l.var)] = pos;
        literal_ids_[2 * static_cast<std::size_t>(l.var) + 1] = pos + 1;
    }
    return literal_ids_[slot];
}

NodeId SddManager::terminal(std::optional<Literal> lit, bool constant_value, VtreePos leaf) {
    if (leaf >= vtree_.size() || !vtree_.is_leaf(leaf)) throw InputError("terminal requires a vtree leaf");
    if (!lit) return constant(constant_value);
    if (vtree_.node(leaf).var != lit->var) {
        throw InputError("literal x" + std::to_string(lit->var) + " does not belong to vtree leaf " +
                         std::to_string(vtree_.node(leaf).id));
    }
    return literal(*lit);
}

NodeId SddManager::decision(std::span<const Element> elements, VtreePos v) {
    if (v >= vtree_.size() || vtree_.is_leaf(v)) throw InputError("decision node requires an internal vtree node");
    std::vector<Element> elems(elements.begin(), elements.end());
    std::vector<NodeId> primes;
    for (const auto& e : elems) {
        if (e.prime >= nodes_.size() || e.sub >= nodes_.size()) throw InputError("unknown node id");
        if (!is_constant(e.prime) && !vtree_.in_left(vtree_of(e.prime), v)) {
            throw InvariantError("prime not normalized for the left vtree child");
        }
        if (!is_constant(e.sub) && !vtree_.in_right(vtree_of(e.sub), v)) {
            throw InvariantError("sub not normalized for the right vtree child");
        }
        if (e.prime != kFalse) primes.push_back(e.prime);
    }
    if (primes.empty()) throw InvariantError("primes do not form a partition: no consistent prime");
    NodeId cover = kFalse;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        for (std::size_t j = i + 1; j < primes.size(); ++j) {
            if (apply(primes[i], primes[j], BoolOp::And) != kFalse) {
                throw InvariantError("primes do not form a partition: overlapping primes");
            }
        }
        cover = apply(cover, primes[i], BoolOp::Or);
    }
    if (cover != kTrue) throw InvariantError("primes do not form a partition: not exhaustive");
    return make_decision(v, std::move(elems));
}

NodeId SddManager::make_decision(VtreePos v, std::vector<Element> elems) {
    std::erase_if(elems, [](const Element& e) { return e.prime == kFalse; });
    if (elems.empty()) return kFalse;
    // Compression: one element per distinct sub.
    std::sort(elems.begin(), elems.end(), [](const Element& a, const Element& b) {
        return a.sub != b.sub ? a.sub < b.sub : a.prime < b.prime;
    });
    std::vector<Element> merged;
    merged.reserve(elems.size());
    for (const auto& e : elems) {
        if (!merged.empty() && merged.back().sub == e.sub) {
            merged.back().prime = apply_rec(merged.back().prime, e.prime, BoolOp::Or);
        } else {
            merged.push_back(e);
        }
    }
    // Trimming.
    if (merged.size() == 1) {
        if (merged[0].prime != kTrue) throw InvariantError("primes do not form a partition");
        return merged[0].sub;
    }
    if (merged.size() == 2 && merged[0].sub == kFalse && merged[1].sub == kTrue) return merged[1].prime;

    std::sort(merged.begin(), merged.end(), [](const Element& a, const Element& b) { return a.prime < b.prime; });
    const std::uint64_t h = hash_decision(v, merged);
    auto [lo, hi] = unique_.equal_range(h);
    for (auto it = lo; it != hi; ++it) {
        const Node& cand = nodes_[it->second];
        if (cand.vtree == v && cand.count == merged.size() &&
            std::equal(merged.begin(), merged.end(), elements_.begin() + cand.begin)) {
            return it->second;
        }
    }
    if (nodes_.size() >= kMaxNodes) throw CapacityError("SDD node store exhausted");
    const auto id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back({Kind::Decision, v, 0, static_cast<std::uint32_t>(elements_.size()),
                      static_cast<std::uint32_t>(merged.size()), kNoNode});
    elements_.insert(elements_.end(), merged.begin(), merged.end());
    unique_.emplace(h, id);
    return id;
}

void SddManager::poll_deadline() {
    if (!deadline_ || (++poll_counter_ & 1023U) != 0) return;
    if (std::chrono::steady_clock::now() > *deadline_) throw TimeoutError("deadline exceeded");
}

NodeId SddManager::apply(NodeId a, NodeId b, BoolOp op) {
    if (a >= nodes_.size() || b >= nodes_.size()) throw InputError("node id does not belong to this manager");
    return apply_rec(a, b, op);
}

NodeId SddManager::unary(NodeId x, bool f0, bool f1) {
    if (f0 == f1) return constant(f0);
    return f1 ? x : negate(x);
}

void SddManager::normalized_elements(NodeId a, VtreePos v, std::vector<Element>& out) {
    const VtreePos va = vtree_of(a);
    if (va == v) {
        auto e = elements(a);
        out.assign(e.begin(), e.end());
    } else if (vtree_.in_left(va, v)) {
        const NodeId na = negate(a);
        out = {{a, kTrue}, {na, kFalse}};
    } else {
        out = {{kTrue, a}};
    }
}

NodeId SddManager::apply_rec(NodeId a, NodeId b, BoolOp op) {
    ++stats_.apply_calls;
    poll_deadline();
    const bool ca = is_constant(a);
    const bool cb = is_constant(b);
    if (ca && cb) return constant(eval_op(op, a == kTrue, b == kTrue));
    if (ca) return unary(b, eval_op(op, a == kTrue, false), eval_op(op, a == kTrue, true));
    if (cb) return unary(a, eval_op(op, false, b == kTrue), eval_op(op, true, b == kTrue));
    if (a == b) return unary(a, eval_op(op, false, false), eval_op(op, true, true));
    if (nodes_[a].negation == b) return unary(a, eval_op(op, false, true), eval_op(op, true, false));
    if (is_commutative(op) && b < a) std::swap(a, b);

    const std::uint64_t key = (static_cast<std::uint64_t>(op) << 60) | (static_cast<std::uint64_t>(a) << 30) | b;
    if (auto it = apply_cache_.find(key); it != apply_cache_.end()) {
        ++stats_.apply_cache_hits;
        return it->second;
    }

    const VtreePos va = vtree_of(a);
    const VtreePos vb = vtree_of(b);
    NodeId result;
    if (va == vb && vtree_.is_leaf(va)) {
        // Two literals of the same variable (the complementary case is
        // caught above), so a == b; kept for completeness.
        const NodeId x = literal({vtree_.node(va).var, true});
        const bool a0 = evaluate(a, 0), a1 = evaluate(a, ~std::uint64_t{0});
        const bool b0 = evaluate(b, 0), b1 = evaluate(b, ~std::uint64_t{0});
        result = unary(x, eval_op(op, a0, b0), eval_op(op, a1, b1));
    } else {
        const VtreePos v = vtree_.lca(va, vb);
        std::vector<Element> lhs, rhs;
        normalized_elements(a, v, lhs);
        normalized_elements(b, v, rhs);
        std::vector<Element> product;
        product.reserve(lhs.size() * rhs.size());
        for (const auto& [p, s] : lhs) {
            for (const auto& [q, t] : rhs) {
                const NodeId prime = apply_rec(p, q, BoolOp::And);
                if (prime == kFalse) continue;
                product.push_back({prime, apply_rec(s, t, op)});
            }
        }
        result = make_decision(v, std::move(product));
    }
    apply_cache_.emplace(key, result);
    return result;
}

NodeId SddManager::negate(NodeId a) {
    if (a >= nodes_.size()) throw InputError("node id does not belong to this manager");
    if (nodes_[a].negation != kNoNode) return nodes_[a].negation;
    auto span = elements(a);
    std::vector<Element> elems(span.begin(), span.end());
    for (auto& e : elems) e.sub = negate(e.sub);
    const NodeId result = make_decision(nodes_[a].vtree, std::move(elems));
    nodes_[a].negation = result;
    nodes_[result].negation = a;
    return result;
}

NodeId SddManager::condition(NodeId a, Literal lit) {
    if (a >= nodes_.size()) throw InputError("node id does not belong to this manager");
    const VtreePos leaf = vtree_.leaf_of(lit.var);
    std::unordered_map<NodeId, NodeId> memo;
    std::function<NodeId(NodeId)> rec = [&](NodeId n) -> NodeId {
        switch (kind(n)) {
            case Kind::False:
            case Kind::True: return n;
            case Kind::Literal: {
                const Literal l = literal_of(n);
                if (l.var != lit.var) return n;
                return constant(l.positive == lit.positive);
            }
            case Kind::Decision: break;
        }
        if (!vtree_.within(leaf, vtree_of(n))) return n;
        if (auto it = memo.find(n); it != memo.end()) return it->second;
        auto span = elements(n);
        std::vector<Element> elems(span.begin(), span.end());
        for (auto& e : elems) {
            e.prime = rec(e.prime);
            e.sub = rec(e.sub);
        }
        const NodeId out = make_decision(vtree_of(n), std::move(elems));
        memo.emplace(n, out);
        return out;
    };
    return rec(a);
}

NodeId SddManager::term(std::span<const Literal> lits) {
    NodeId out = kTrue;
    for (const auto& l : lits) out = apply(out, literal(l), BoolOp::And);
    return out;
}

Count SddManager::scale(Count c, VtreePos from, VtreePos to) const {
    const std::uint32_t have = from == kNoVtree ? 0 : vtree_.node(from).var_count;
    return c << (vtree_.node(to).var_count - have);
}

Count SddManager::model_count(NodeId a) {
    if (vtree_.var_count() > 126) throw CapacityError("model counts above 126 variables are not supported");
    std::unordered_map<NodeId, Count> memo;
    std::function<Count(NodeId, VtreePos)> count_for = [&](NodeId n, VtreePos u) -> Count {
        // Models of n over the variables of vtree node u.
        if (n == kFalse || n == kTrue) {
            if (memo.emplace(n, 0).second) ++stats_.mc_visits;
            return n == kFalse ? Count{0} : scale(1, kNoVtree, u);
        }
        auto it = memo.find(n);
        Count own;
        if (it != memo.end()) {
            own = it->second;
        } else {
            ++stats_.mc_visits;
            if (kind(n) == Kind::Literal) {
                own = 1;
            } else {
                const VtreePos v = vtree_of(n);
                own = 0;
                for (const auto& e : elements(n)) {
                    own += count_for(e.prime, vtree_.left(v)) * count_for(e.sub, vtree_.right(v));
                }
            }
            memo.emplace(n, own);
        }
        return scale(own, vtree_of(n), u);
    };
    return count_for(a, vtree_.root());
}

bool SddManager::satisfies(NodeId a, std::span<const Literal> c) {
    std::vector<std::int8_t> assigned(static_cast<std::size_t>(vtree_.var_count()) + 1, 0);
    for (const auto& l : c) {
        if (l.var == 0 || static_cast<int>(l.var) > vtree_.var_count()) {
            throw InputError("literal over unknown variable x" + std::to_string(l.var));
        }
        if (assigned[l.var] != 0) throw InputError("variable x" + std::to_string(l.var) + " repeated in term");
        assigned[l.var] = l.positive ? 1 : -1;
    }
    std::unordered_map<NodeId, bool> memo;
    std::function<bool(NodeId)> sat = [&](NodeId n) -> bool {
        if (auto it = memo.find(n); it != memo.end()) return it->second;
        ++stats_.satisfies_visits;
        bool out = false;
        switch (kind(n)) {
            case Kind::False: out = false; break;
            case Kind::True: out = true; break;
            case Kind::Literal: {
                const Literal l = literal_of(n);
                out = assigned[l.var] == 0 || (assigned[l.var] > 0) == l.positive;
                break;
            }
            case Kind::Decision:
                for (const auto& e : elements(n)) {
                    if (sat(e.prime) && sat(e.sub)) {
                        out = true;
                        break;
                    }
                }
                break;
        }
        memo.emplace(n, out);
        return out;
    };
    return sat(a);
}

std::size_t SddManager::size(NodeId a) const {
    std::unordered_set<NodeId> seen;
    std::vector<NodeId> stack{a};
    std::size_t total = 0;
    while (!stack.empty()) {
        const NodeId n = stack.back();
        stack.pop_back();
        if (kind(n) != Kind::Decision || !seen.insert(n).second) continue;
        total += nodes_[n].count;
        for (const auto& e : elements(n)) {
            stack.push_back(e.prime);
            stack.push_back(e.sub);
        }
    }
    return total;
}

std::size_t SddManager::node_count(NodeId a) const {
    std::unordered_set<NodeId> seen;
    std::vector<NodeId> stack{a};
    while (!stack.empty()) {
        const NodeId n = stack.back();
        stack.pop_back();
        if (!seen.insert(n).second || kind(n) != Kind::Decision) continue;
        for (const auto& e : elements(n)) {
            stack.push_back(e.prime);
            stack.push_back(e.sub);
        }
    }
    return seen.size();
}

bool SddManager::evaluate(NodeId a, std::uint64_t assignment) const {
    switch (kind(a)) {
        case Kind::False: return false;
        case Kind::True: return true;
        case Kind::Literal: {
            const Literal l = literal_of(a);
            return (((assignment >> (l.var - 1)) & 1U) != 0) == l.positive;
        }
        case Kind::Decision:
            for (const auto& e : elements(a))
                if (evaluate(e.prime, assignment)) return evaluate(e.sub, assignment);
            return false;
    }
    return false;
}

std::string SddManager::serialize(NodeId root) const {
    std::unordered_map<NodeId, std::size_t> local;
    std::ostringstream body;
    std::function<void(NodeId)> emit = [&](NodeId n) {
        if (local.count(n)) return;
        if (kind(n) == Kind::Decision) {
            for (const auto& e : elements(n)) {
                emit(e.prime);
                emit(e.sub);
            }
        }
        const std::size_t id = local.size();
        local.emplace(n, id);
        switch (kind(n)) {
            case Kind::False: body << "F " << id << '\n'; break;
            case Kind::True: body << "T " << id << '\n'; break;
            case Kind::Literal:
                body << "L " << id << ' ' << vtree_.node(vtree_of(n)).id << ' ' << nodes_[n].literal << '\n';
                break;
            case Kind::Decision: {
                body << "D " << id << ' ' << vtree_.node(vtree_of(n)).id << ' ' << nodes_[n].count;
                for (const auto& e : elements(n)) body << ' ' << local.at(e.prime) << ' ' << local.at(e.sub);
                body << '\n';
                break;
            }
        }
    };
    emit(root);
    return "sdd " + std::to_string(local.size()) + "\n" + body.str();
}

NodeId SddManager::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    std::size_t declared = 0;
    bool have_header = false;
    std::unordered_map<std::int64_t, NodeId> ids;
    NodeId last = kNoNode;
    std::size_t seen = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag == "c") continue;
        if (!have_header) {
            long long count = -1;
            if (tag != "sdd" || !(ls >> count) || count < 1) throw ParseError("expected header 'sdd <node-count>'", lineno);
            declared = static_cast<std::size_t>(count);
            have_header = true;
            continue;
        }
        std::int64_t id = 0;
        if (!(ls >> id)) throw ParseError("missing node id", lineno);
        if (ids.count(id)) throw ParseError("duplicate node id " + std::to_string(id), lineno);
        auto lookup = [&](std::int64_t ref) {
            auto it = ids.find(ref);
            if (it == ids.end()) throw ParseError("dangling node id " + std::to_string(ref), lineno);
            return it->second;
        };
        auto vtree_pos = [&](std::int64_t vid) {
            auto p = vtree_.find_id(vid);
            if (!p) throw ParseError("unknown vtree node " + std::to_string(vid), lineno);
            return *p;
        };
        NodeId node = kNoNode;
        if (tag == "F" || tag == "T") {
            node = constant(tag == "T");
        } else if (tag == "L") {
            std::int64_t vid = 0;
            int lit = 0;
            if (!(ls >> vid >> lit) || lit == 0) throw ParseError("malformed literal line", lineno);
            const VtreePos p = vtree_pos(vid);
            if (!vtree_.is_leaf(p) || vtree_.node(p).var != static_cast<Var>(lit < 0 ? -lit : lit)) {
                throw ParseError("literal " + std::to_string(lit) + " does not match vtree leaf " + std::to_string(vid), lineno);
            }
            node = literal(Literal::from_int(lit));
        } else if (tag == "D") {
            std::int64_t vid = 0;
            long long k = 0;
            if (!(ls >> vid >> k) || k < 1) throw ParseError("malformed decision line", lineno);
            const VtreePos p = vtree_pos(vid);
            std::vector<Element> elems;
            for (long long i = 0; i < k; ++i) {
                std::int64_t pr = 0, su = 0;
                if (!(ls >> pr >> su)) throw ParseError("decision line has fewer than k elements", lineno);
                elems.push_back({lookup(pr), lookup(su)});
            }
            try {
                node = decision(elems, p);
            } catch (const Error& e) {
                throw ParseError(e.what(), lineno);
            }
        } else {
            throw ParseError("unknown line tag '" + tag + "'", lineno);
        }
        std::string extra;
        if (ls >> extra) throw ParseError("trailing token '" + extra + "'", lineno);
        ids.emplace(id, node);
        last = node;
        ++seen;
    }
    if (!have_header) throw ParseError("missing 'sdd' header", 0);
    if (seen != declared) {
        throw ParseError("header declares " + std::to_string(declared) + " nodes, found " + std::to_string(seen), 0);
    }
    return last;
}

}  // namespace sddrev
