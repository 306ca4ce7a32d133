#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sddrev/compile.hpp"
#include "sddrev/formula.hpp"
#include "sddrev/sdd.hpp"

namespace sddrev {

// Identifies an order-l semi-resolvent: sorted variables and the sign
// applied to each.
struct ResolventKey {
    std::vector<Var> vars;
    SignVector signs;

    friend bool operator==(const ResolventKey&, const ResolventKey&) = default;
    friend auto operator<=>(const ResolventKey&, const ResolventKey&) = default;
};

std::string to_string(const ResolventKey& key);

// Semi-resolvents of one base diagram, keyed by ResolventKey. Order-l
// entries are derived from their order-(l-1) prefix.
class ResolventCache {
public:
    explicit ResolventCache(NodeId base) : base_(base) {}
    NodeId base() const noexcept { return base_; }
    std::optional<NodeId> find(const ResolventKey& key) const;
    void store(ResolventKey key, NodeId node) { entries_.insert_or_assign(std::move(key), node); }
    std::size_t size() const noexcept { return entries_.size(); }

private:
    NodeId base_;
    std::map<ResolventKey, NodeId> entries_;
};

// Semi-resolvent of `s` w.r.t. `x` by local transformation of the expanded
// diagram around the vtree parent of x's leaf, followed by a canonical
// rebuild. Throws InputError when x is not in the vtree.
NodeId semi_resolvent_sdd(SddManager& m, NodeId s, Var x, Sign sign);

// Iterated semi_resolvent_sdd over duplicate-free `vars`. When a cache is
// supplied it must have been created for `s`.
NodeId higher_semi_resolvent(SddManager& m, NodeId s, std::span<const Var> vars, std::span<const Sign> signs,
                             ResolventCache* cache = nullptr);

// Calls `fn` for every order-`order` key over x1..xn: subsets in
// lexicographic order, then sign vectors counted in binary with + as 0 and
// the first variable most significant. Stops early when `fn` returns false.
void for_each_resolvent_key(int n, int order, const std::function<bool(const ResolventKey&)>& fn);

struct RevisionStats {
    std::uint64_t semi_resolvents = 0;
    std::uint64_t consistency_checks = 0;
    std::uint64_t apply_calls = 0;
    std::chrono::duration<double> wall_time{0};
};

// Disjunction of every order-`order` semi-resolvent; 1 <= order <= n.
NodeId relax_sdd(SddManager& m, NodeId s, int order, RevisionStats* stats = nullptr);

enum class RevisionMode { Conjoined, Revised, CollectionRevised, BoundExceeded };
std::string to_string(RevisionMode mode);

struct RevisionOptions {
    // Largest relaxation order attempted; negative means n (exact Dalal).
    int max_order = -1;
    // Conjoin each compatible semi-resolvent with mu as it is found instead
    // of once at the end.
    bool intersect_each = false;
    // Start at order 1 even when psi and mu are consistent.
    bool skip_consistency_check = false;
    // revise_dnf only: complete an incomplete DNF instead of rejecting it.
    bool complete_dnf = false;
};

struct RevisionResult {
    // Revised diagram. Empty for collection results and for BoundExceeded.
    std::optional<NodeId> result;
    // revise_collection: one member per compatible semi-resolvent.
    std::vector<NodeId> collection;
    // revise_dnf: indices of the terms kept, and per term the semi-resolvent
    // keys found compatible with it at the final order.
    std::vector<std::size_t> kept_terms;
    std::vector<std::vector<ResolventKey>> witnesses;
    int order = 0;
    RevisionMode mode = RevisionMode::Conjoined;
    RevisionStats stats;
};

// Dalal revision of psi by mu. Throws UnsatisfiableError when mu is false.
RevisionResult revise(SddManager& m, NodeId psi, NodeId mu, const RevisionOptions& options = {});

// As revise, but keeps the compatible semi-resolvents conjoined with mu as a
// collection instead of disjoining them.
RevisionResult revise_collection(SddManager& m, NodeId psi, NodeId mu, const RevisionOptions& options = {});

// Revision by a DNF using per-term satisfiability checks. The DNF must be
// complete unless options.complete_dnf is set.
RevisionResult revise_dnf(SddManager& m, NodeId psi, const DnfInstance& mu, const RevisionOptions& options = {});

}  // namespace sddrev
