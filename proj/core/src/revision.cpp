#include "sddrev/revision.hpp"

#include <algorithm>
#include <numeric>

#include "sddrev/editable.hpp"
#include "sddrev/error.hpp"

namespace sddrev {

namespace {

using Ref = EditableSdd::Ref;
using Kind = SddManager::Kind;
using Clock = std::chrono::steady_clock;

ResolventKey make_key(std::span<const Var> vars, std::span<const Sign> signs) {
    if (vars.size() != signs.size()) throw InputError("variable and sign sequences differ in length");
    std::vector<std::size_t> order(vars.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vars[a] < vars[b]; });
    ResolventKey key;
    for (std::size_t i : order) {
        if (!key.vars.empty() && key.vars.back() == vars[i]) {
            throw InputError("duplicate variable x" + std::to_string(vars[i]) + " in semi-resolvent");
        }
        key.vars.push_back(vars[i]);
        key.signs.push_back(signs[i]);
    }
    return key;
}

NodeId compute_higher(SddManager& m, NodeId s, const ResolventKey& key, ResolventCache* cache) {
    if (key.vars.empty()) return s;
    if (cache) {
        if (auto hit = cache->find(key)) return *hit;
    }
    ResolventKey prefix{{key.vars.begin(), key.vars.end() - 1}, {key.signs.begin(), key.signs.end() - 1}};
    const NodeId inner = compute_higher(m, s, prefix, cache);
    const NodeId out = semi_resolvent_sdd(m, inner, key.vars.back(), key.signs.back());
    if (cache) cache->store(key, out);
    return out;
}

bool consistent(SddManager& m, NodeId a, RevisionStats& stats) {
    ++stats.consistency_checks;
    return m.model_count(a) > 0;
}

class StatsScope {
public:
    StatsScope(SddManager& m, RevisionStats& stats)
        : m_(m), stats_(stats), apply0_(m.stats().apply_calls), start_(Clock::now()) {}
    ~StatsScope() {
        stats_.apply_calls = m_.stats().apply_calls - apply0_;
        stats_.wall_time = Clock::now() - start_;
    }

private:
    SddManager& m_;
    RevisionStats& stats_;
    std::uint64_t apply0_;
    Clock::time_point start_;
};

int order_cap(const SddManager& m, const RevisionOptions& options) {
    const int n = m.var_count();
    return options.max_order < 0 ? n : std::min(options.max_order, n);
}

RevisionResult revise_impl(SddManager& m, NodeId psi, NodeId mu, const RevisionOptions& options, bool collection) {
    if (psi >= m.store_size() || mu >= m.store_size()) throw InputError("node id does not belong to this manager");
    RevisionResult out;
    StatsScope scope(m, out.stats);
    const int n = m.var_count();
    const int cap = order_cap(m, options);

    if (!consistent(m, mu, out.stats)) throw UnsatisfiableError("R3: new information unsatisfiable");

    auto finish = [&](int order, RevisionMode mode, NodeId node) {
        out.order = order;
        out.mode = mode;
        if (collection)
            out.collection = {node};
        else
            out.result = node;
    };

    if (!consistent(m, psi, out.stats)) {
        // Inconsistent knowledge: revision saturates to mu at order n.
        if (n > cap) {
            out.order = cap + 1;
            out.mode = RevisionMode::BoundExceeded;
        } else {
            finish(n, collection ? RevisionMode::CollectionRevised : RevisionMode::Revised, mu);
        }
        return out;
    }
    if (!options.skip_consistency_check) {
        const NodeId both = m.conjoin(psi, mu);
        if (consistent(m, both, out.stats)) {
            finish(0, RevisionMode::Conjoined, both);
            return out;
        }
    }

    ResolventCache cache(psi);
    for (int order = 1; order <= cap; ++order) {
        NodeId acc = kFalse;
        std::vector<NodeId> members;
        bool revised = false;
        for_each_resolvent_key(n, order, [&](const ResolventKey& key) {
            const NodeId sr = compute_higher(m, psi, key, &cache);
            ++out.stats.semi_resolvents;
            const NodeId with_mu = m.conjoin(sr, mu);
            if (consistent(m, with_mu, out.stats)) {
                revised = true;
                if (collection)
                    members.push_back(with_mu);
                else
                    acc = m.disjoin(acc, options.intersect_each ? with_mu : sr);
            }
            return true;
        });
        if (!revised) continue;
        out.order = order;
        if (collection) {
            out.mode = RevisionMode::CollectionRevised;
            out.collection = std::move(members);
        } else {
            out.mode = RevisionMode::Revised;
            out.result = options.intersect_each ? acc : m.conjoin(acc, mu);
        }
        return out;
    }
    out.order = cap + 1;
    out.mode = RevisionMode::BoundExceeded;
    return out;
}

}  // namespace

std::string to_string(const ResolventKey& key) {
    std::string s;
    for (std::size_t i = 0; i < key.vars.size(); ++i) {
        if (i) s += ',';
        s += sign_char(key.signs[i]);
        s += 'x' + std::to_string(key.vars[i]);
    }
    return s.empty() ? "()" : s;
}

std::optional<NodeId> ResolventCache::find(const ResolventKey& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

NodeId semi_resolvent_sdd(SddManager& m, NodeId s, Var x, Sign sign) {
    const Vtree& vt = m.vtree();
    const VtreePos leaf = vt.leaf_of(x);
    if (s >= m.store_size()) throw InputError("node id does not belong to this manager");
    const bool plus = sign == Sign::Plus;
    if (m.is_constant(s)) return s;
    const VtreePos w = vt.parent(leaf);
    if (w == kNoVtree) return m.condition(s, {x, plus});

    EditableSdd e = EditableSdd::expand(m, s);
    const bool x_on_left = vt.left(w) == leaf;
    for (const Ref d : e.decisions(w)) {
        const auto elements = e.node(d).elements;
        if (x_on_left) {
            // Expanded form: {(X, s+), (~X, s-)}. Keep the sub selected by the
            // sign on both elements; compression then leaves {(T, kept)}.
            Ref keep = EditableSdd::kFalseRef;
            bool found = false;
            for (const auto& el : elements) {
                const auto& p = e.node(el.prime);
                if (p.kind == Kind::Literal && p.lit.positive == plus) {
                    keep = el.sub;
                    found = true;
                }
            }
            if (!found) throw InvariantError("expanded node lacks a literal prime for x" + std::to_string(x));
            for (std::size_t i = 0; i < elements.size(); ++i) e.set_sub(d, i, keep);
        } else {
            for (std::size_t i = 0; i < elements.size(); ++i) {
                const auto& sub = e.node(elements[i].sub);
                if (sub.kind != Kind::Literal) continue;
                const bool becomes_true = sub.lit.positive == plus;
                e.set_sub(d, i, becomes_true ? EditableSdd::kTrueRef : EditableSdd::kFalseRef);
            }
        }
        e.compress(d);
    }
    e.prune();
    return e.canonicalize();
}

NodeId higher_semi_resolvent(SddManager& m, NodeId s, std::span<const Var> vars, std::span<const Sign> signs,
                             ResolventCache* cache) {
    const ResolventKey key = make_key(vars, signs);
    if (cache && cache->base() != s) throw InputError("resolvent cache belongs to a different diagram");
    if (cache) return compute_higher(m, s, key, cache);
    // Innermost application uses the last variable.
    NodeId out = s;
    for (std::size_t i = vars.size(); i-- > 0;) out = semi_resolvent_sdd(m, out, vars[i], signs[i]);
    return out;
}

void for_each_resolvent_key(int n, int order, const std::function<bool(const ResolventKey&)>& fn) {
    if (order < 0 || order > n) return;
    std::vector<Var> subset(static_cast<std::size_t>(order));
    std::iota(subset.begin(), subset.end(), Var{1});
    const auto k = static_cast<std::size_t>(order);
    while (true) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
            ResolventKey key{subset, SignVector(k)};
            for (std::size_t i = 0; i < k; ++i) {
                key.signs[i] = ((mask >> (k - 1 - i)) & 1U) ? Sign::Minus : Sign::Plus;
            }
            if (!fn(key)) return;
        }
        // Next combination in lexicographic order.
        std::size_t i = k;
        while (i > 0 && subset[i - 1] == static_cast<Var>(n) - static_cast<Var>(k - i)) --i;
        if (i == 0) return;
        ++subset[i - 1];
        for (std::size_t j = i; j < k; ++j) subset[j] = subset[j - 1] + 1;
    }
}

NodeId relax_sdd(SddManager& m, NodeId s, int order, RevisionStats* stats) {
    const int n = m.var_count();
    if (order < 1 || order > n) {
        throw InputError("relaxation order " + std::to_string(order) + " outside 1.." + std::to_string(n));
    }
    ResolventCache cache(s);
    NodeId acc = kFalse;
    for_each_resolvent_key(n, order, [&](const ResolventKey& key) {
        acc = m.disjoin(acc, compute_higher(m, s, key, &cache));
        if (stats) ++stats->semi_resolvents;
        return true;
    });
    return acc;
}

std::string to_string(RevisionMode mode) {
    switch (mode) {
        case RevisionMode::Conjoined: return "Conjoined";
        case RevisionMode::Revised: return "Revised";
        case RevisionMode::CollectionRevised: return "CollectionRevised";
        case RevisionMode::BoundExceeded: return "BoundExceeded";
    }
    return "?";
}

RevisionResult revise(SddManager& m, NodeId psi, NodeId mu, const RevisionOptions& options) {
    return revise_impl(m, psi, mu, options, false);
}

RevisionResult revise_collection(SddManager& m, NodeId psi, NodeId mu, const RevisionOptions& options) {
    return revise_impl(m, psi, mu, options, true);
}

RevisionResult revise_dnf(SddManager& m, NodeId psi, const DnfInstance& mu, const RevisionOptions& options) {
    if (psi >= m.store_size()) throw InputError("node id does not belong to this manager");
    if (mu.n > m.var_count()) throw InputError("DNF declares more variables than the vtree has");
    DnfInstance dnf{m.var_count(), mu.terms};
    if (!dnf.complete()) {
        if (!options.complete_dnf) throw InputError("DNF is not complete; enable completion to revise by it");
        dnf = complete_dnf(dnf);
    }
    if (dnf.terms.empty()) throw UnsatisfiableError("R3: new information unsatisfiable");

    RevisionResult out;
    StatsScope scope(m, out.stats);
    const int n = m.var_count();
    const int cap = order_cap(m, options);
    std::vector<NodeId> term_sdd(dnf.terms.size(), kNoNode);
    auto term_node = [&](std::size_t i) {
        if (term_sdd[i] == kNoNode) term_sdd[i] = compile_term(m, dnf.terms[i]);
        return term_sdd[i];
    };

    if (!consistent(m, psi, out.stats)) {
        if (n > cap) {
            out.order = cap + 1;
            out.mode = RevisionMode::BoundExceeded;
            return out;
        }
        NodeId all = kFalse;
        for (std::size_t i = 0; i < dnf.terms.size(); ++i) {
            all = m.disjoin(all, term_node(i));
            out.kept_terms.push_back(i);
        }
        out.order = n;
        out.mode = RevisionMode::Revised;
        out.result = all;
        return out;
    }

    std::vector<bool> kept(dnf.terms.size(), false);
    out.witnesses.assign(dnf.terms.size(), {});
    NodeId acc = kFalse;
    bool revised = false;
    auto check_terms = [&](NodeId sr, const ResolventKey& key) {
        for (std::size_t i = 0; i < dnf.terms.size(); ++i) {
            ++out.stats.consistency_checks;
            if (!m.satisfies(sr, dnf.terms[i])) continue;
            revised = true;
            out.witnesses[i].push_back(key);
            if (!kept[i]) {
                kept[i] = true;
                acc = m.disjoin(acc, term_node(i));
            }
        }
    };
    auto finish = [&](int order, RevisionMode mode) {
        out.order = order;
        out.mode = mode;
        out.result = acc;
        for (std::size_t i = 0; i < kept.size(); ++i)
            if (kept[i]) out.kept_terms.push_back(i);
        return out;
    };

    if (!options.skip_consistency_check) {
        check_terms(psi, ResolventKey{});
        if (revised) return finish(0, RevisionMode::Conjoined);
    }
    ResolventCache cache(psi);
    for (int order = 1; order <= cap; ++order) {
        for_each_resolvent_key(n, order, [&](const ResolventKey& key) {
            const NodeId sr = compute_higher(m, psi, key, &cache);
            ++out.stats.semi_resolvents;
            check_terms(sr, key);
            return true;
        });
        if (revised) return finish(order, RevisionMode::Revised);
    }
    out.witnesses.clear();
    out.order = cap + 1;
    out.mode = RevisionMode::BoundExceeded;
    return out;
}

}  // namespace sddrev
