#include "sddrev/postulates.hpp"

#include "sddrev/compile.hpp"
#include "sddrev/error.hpp"
#include "sddrev/revision.hpp"
#include "sddrev/sdd.hpp"

namespace sddrev {

ModelSet sdd_revision(const Formula& psi, const Formula& mu, int n) {
    if (n > kOracleCap) throw CapacityError("model enumeration limited to " + std::to_string(kOracleCap) + " variables");
    SddManager m(Vtree::balanced(n));
    const NodeId p = compile_formula(m, psi);
    const NodeId q = compile_formula(m, mu);
    ModelSet out(n);
    RevisionResult r;
    try {
        r = revise(m, p, q);
    } catch (const UnsatisfiableError&) {
        return out;
    }
    if (!r.result) throw InvariantError("unbounded revision returned no result");
    for (std::uint64_t w = 0; w < out.universe(); ++w)
        if (m.evaluate(*r.result, w)) out.insert(static_cast<std::uint32_t>(w));
    return out;
}

ModelSet oracle_revision(const Formula& psi, const Formula& mu, int n) {
    return dalal_oracle(psi, mu, n).result;
}

std::vector<Formula> default_probes(const Formula& psi, const Formula& mu, int n) {
    std::vector<Formula> probes{Formula::top()};
    for (int v = 1; v <= n; ++v) {
        probes.push_back(Formula::literal({static_cast<Var>(v), true}));
        probes.push_back(Formula::literal({static_cast<Var>(v), false}));
    }
    probes.push_back(psi);
    probes.push_back(!mu);
    return probes;
}

std::array<PostulateVerdict, 6> check_postulates(const RevisionOperator& op, const Formula& psi, const Formula& mu,
                                                 int n, const std::vector<Formula>& probes) {
    if (n > kOracleCap) throw CapacityError("postulate check limited to " + std::to_string(kOracleCap) + " variables");
    std::array<PostulateVerdict, 6> v{};
    for (std::size_t i = 0; i < v.size(); ++i) v[i].name = "R" + std::to_string(i + 1);
    auto fail = [&](int r, std::string why) {
        auto& verdict = v[static_cast<std::size_t>(r - 1)];
        if (!verdict.holds) return;
        verdict.holds = false;
        verdict.detail = std::move(why);
    };

    const ModelSet mod_psi = models(psi, n);
    const ModelSet mod_mu = models(mu, n);
    const ModelSet rev = op(psi, mu, n);

    if (!rev.subset_of(mod_mu)) fail(1, "result has a model outside mu");
    if (!(mod_psi & mod_mu).empty() && !(rev == (mod_psi & mod_mu))) fail(2, "psi & mu consistent but result differs");
    if (!mod_mu.empty() && rev.empty()) fail(3, "mu satisfiable but result empty");

    const Formula psi2 = (!(!psi)) & Formula::top();
    const Formula mu2 = mu | Formula::bottom();
    if (!(op(psi2, mu2, n) == rev)) fail(4, "equivalent inputs gave different results");

    for (const Formula& phi : probes) {
        const ModelSet mod_phi = models(phi, n);
        const ModelSet lhs = rev & mod_phi;
        const ModelSet rhs = op(psi, mu & phi, n);
        if (!lhs.subset_of(rhs)) fail(5, "fails for phi = " + to_string(phi));
        if (!lhs.empty() && !rhs.subset_of(lhs)) fail(6, "fails for phi = " + to_string(phi));
    }
    return v;
}

}  // namespace sddrev
