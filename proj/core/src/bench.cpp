#include "sddrev/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "sddrev/error.hpp"
#include "sddrev/revision.hpp"

namespace sddrev {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::string fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

struct Pair {
    CnfInstance psi;
    CnfInstance mu;
    int rejected = 0;
};

// Rejects pairs that are not revision tasks at the configured order.
std::optional<std::string> reject_reason(const BenchConfig& cfg, const Pair& pair, Clock::time_point deadline) {
    SddManager m(Vtree::balanced(pair.psi.n));
    m.set_deadline(deadline);
    const NodeId psi = compile_cnf(m, pair.psi);
    const NodeId mu = compile_cnf(m, pair.mu);
    if (m.model_count(psi) == 0) return "psi unsatisfiable";
    if (m.model_count(mu) == 0) return "mu unsatisfiable";
    if (m.model_count(m.conjoin(mu, m.negate(psi))) == 0) return "mu entails psi";
    if (cfg.require_inconsistent && m.model_count(m.conjoin(psi, mu)) > 0) return "psi and mu consistent";
    RevisionOptions options;
    options.max_order = cfg.max_order;
    options.skip_consistency_check = true;
    if (revise(m, psi, mu, options).mode == RevisionMode::BoundExceeded) return "order above cap";
    return std::nullopt;
}

Formula relaxation_formula(const Formula& psi, int n, int order) {
    std::vector<Formula> parts;
    for_each_resolvent_key(n, order, [&](const ResolventKey& key) {
        parts.push_back(semi_resolvent_formula(psi, key.vars, key.signs));
        return true;
    });
    return Formula::disjunction(std::move(parts));
}

}  // namespace

std::uint64_t BenchRng::uniform_below(std::uint64_t bound) {
    if (bound == 0) throw InputError("uniform_below needs a positive bound");
    // Largest multiple of bound representable; draws above it are rejected.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x > limit);
    return x % bound;
}

std::uint64_t instance_seed(std::uint64_t seed, int n, int rep) {
    return splitmix(splitmix(seed) ^ (static_cast<std::uint64_t>(n) << 32) ^ static_cast<std::uint32_t>(rep));
}

CnfInstance random_cnf(int n, int m, int width, BenchRng& rng) {
    if (n < 1 || width < 1 || width > n || m < 0) {
        throw InputError("random_cnf needs 1 <= width <= n and m >= 0");
    }
    CnfInstance cnf{n, {}};
    std::vector<Var> pool(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = static_cast<Var>(i + 1);
    for (int c = 0; c < m; ++c) {
        // Partial Fisher-Yates for `width` distinct variables.
        for (int i = 0; i < width; ++i) {
            const auto j = static_cast<std::size_t>(i) + rng.uniform_below(static_cast<std::uint64_t>(n - i));
            std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
        }
        std::vector<Var> vars(pool.begin(), pool.begin() + width);
        std::sort(vars.begin(), vars.end());
        std::vector<Literal> clause;
        for (Var v : vars) clause.push_back({v, rng.coin()});
        cnf.clauses.push_back(std::move(clause));
    }
    return cnf;
}

int BenchConfig::clauses(int n) const {
    return static_cast<int>(std::lround(clause_ratio * n));
}

void BenchConfig::validate() const {
    if (ns.empty()) throw InputError("no variable counts given");
    for (int n : ns) {
        if (n < 1 || n > 64) throw InputError("variable count " + std::to_string(n) + " outside 1..64");
        if (width > n) throw InputError("clause width exceeds variable count");
    }
    if (reps < 1) throw InputError("repetitions must be at least 1");
    if (width < 1) throw InputError("clause width must be at least 1");
    if (clause_ratio < 0) throw InputError("clause ratio must be non-negative");
    if (timeout.count() <= 0) throw InputError("timeout must be positive");
    if (max_order < 1) throw InputError("order cap must be at least 1");
    if (max_attempts < 1) throw InputError("attempt budget must be at least 1");
    if (jobs < 1) throw InputError("jobs must be at least 1");
}

std::vector<BenchRecord> run_instance(const BenchConfig& cfg, int n, int rep) {
    const std::uint64_t seed = instance_seed(cfg.seed, n, rep);
    BenchRng rng(seed);
    BenchRecord a;
    a.n = n;
    a.rep = rep;
    a.seed = seed;
    BenchRecord b = a;
    a.pipeline = kPipelineA;
    b.pipeline = kPipelineB;
    const int m = cfg.clauses(n);

    Pair pair;
    std::string last_reason;
    bool found = false;
    for (int attempt = 0; attempt < cfg.max_attempts && !found; ++attempt) {
        pair.psi = random_cnf(n, m, cfg.width, rng);
        pair.mu = random_cnf(n, m, cfg.width, rng);
        try {
            auto reason = reject_reason(cfg, pair, Clock::now() + std::chrono::duration_cast<Clock::duration>(cfg.timeout));
            if (!reason) {
                found = true;
                break;
            }
            last_reason = *reason;
        } catch (const TimeoutError&) {
            last_reason = "filter timeout";
        }
        ++pair.rejected;
    }
    a.rejected = b.rejected = pair.rejected;
    if (!found) {
        a.skip_reason = b.skip_reason = "no admissible pair (" + last_reason + ")";
        return {a, b};
    }

    const Vtree vtree = Vtree::balanced(n);
    const auto budget = std::chrono::duration_cast<Clock::duration>(cfg.timeout);

    SddManager ma(vtree);
    std::optional<NodeId> id_a;
    auto start = Clock::now();
    ma.set_deadline(start + budget);
    try {
        const NodeId psi = compile_cnf(ma, pair.psi);
        const NodeId mu = compile_cnf(ma, pair.mu);
        RevisionOptions options;
        options.max_order = cfg.max_order;
        options.skip_consistency_check = true;
        options.intersect_each = cfg.intersect_each;
        const RevisionResult r = revise(ma, psi, mu, options);
        if (!r.result) throw InvariantError("admissible pair exceeded the order cap");
        id_a = *r.result;
        a.size = ma.size(*id_a);
        a.k = r.order;
    } catch (const TimeoutError&) {
        a.timeout = true;
    }
    a.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    ma.set_deadline(std::nullopt);

    start = Clock::now();
    try {
        SddManager mb(vtree);
        mb.set_deadline(start + budget);
        const Formula revised = relaxation_formula(pair.psi.to_formula(), n, a.k > 0 ? a.k : cfg.max_order) &
                                pair.mu.to_formula();
        const NodeId id_b = compile_formula(mb, revised);
        b.size = mb.size(id_b);
        b.k = a.k > 0 ? a.k : cfg.max_order;
        b.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        if (id_a) b.same_id = ma.parse(mb.serialize(id_b)) == *id_a;
    } catch (const TimeoutError&) {
        b.timeout = true;
        b.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    }
    return {a, b};
}

std::vector<BenchRecord> run_bench(const BenchConfig& cfg) {
    cfg.validate();
    std::vector<std::pair<int, int>> tasks;
    for (int n : cfg.ns)
        for (int rep = 0; rep < cfg.reps; ++rep) tasks.emplace_back(n, rep);

    std::vector<std::vector<BenchRecord>> slots(tasks.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            try {
                slots[i] = run_instance(cfg, tasks[i].first, tasks[i].second);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const int jobs = std::min<int>(cfg.jobs, static_cast<int>(tasks.size()));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::vector<BenchRecord> out;
    for (auto& s : slots)
        for (auto& r : s) out.push_back(std::move(r));
    return out;
}

std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records) {
    struct Acc {
        std::vector<double> sizes;
        std::size_t timeouts = 0;
    };
    std::map<std::pair<int, std::string>, Acc> groups;
    for (const auto& r : records) {
        if (!r.skip_reason.empty()) continue;
        auto& g = groups[{r.n, r.pipeline}];
        if (r.timeout)
            ++g.timeouts;
        else
            g.sizes.push_back(static_cast<double>(r.size));
    }
    std::vector<SummaryRow> rows;
    for (const auto& [key, g] : groups) {
        SummaryRow row{key.first, key.second};
        row.count = g.sizes.size();
        row.timeouts = g.timeouts;
        if (!g.sizes.empty()) {
            double sum = 0;
            for (double s : g.sizes) sum += s;
            row.mean_size = sum / static_cast<double>(g.sizes.size());
            double sq = 0;
            for (double s : g.sizes) sq += (s - row.mean_size) * (s - row.mean_size);
            row.std_size = std::sqrt(sq / static_cast<double>(g.sizes.size()));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
    std::ostringstream os;
    os << "n,pipeline,mean_size,std_size,count,timeouts\n";
    for (const auto& r : rows) {
        os << r.n << ',' << r.pipeline << ',' << fixed(r.mean_size, 2) << ',' << fixed(r.std_size, 2) << ','
           << r.count << ',' << r.timeouts << '\n';
    }
    return os.str();
}

std::string records_csv(const std::vector<BenchRecord>& records) {
    std::ostringstream os;
    os << "n,rep,seed,pipeline,size,k,timeout,same_id,rejected,skip_reason\n";
    for (const auto& r : records) {
        os << r.n << ',' << r.rep << ',' << r.seed << ',' << r.pipeline << ',' << r.size << ',' << r.k << ','
           << (r.timeout ? 1 : 0) << ',' << (r.same_id ? 1 : 0) << ',' << r.rejected << ',' << '"' << r.skip_reason
           << '"' << '\n';
    }
    return os.str();
}

std::string plot_script(const std::string& csv_path) {
    std::ostringstream os;
    os << "import csv\n"
          "import collections\n"
          "import matplotlib\n"
          "matplotlib.use('Agg')\n"
          "import matplotlib.pyplot as plt\n\n"
          "rows = collections.defaultdict(list)\n"
          "with open('"
       << csv_path
       << "') as fh:\n"
          "    for r in csv.DictReader(fh):\n"
          "        rows[r['pipeline']].append((int(r['n']), float(r['mean_size']), float(r['std_size'])))\n\n"
          "fig, ax = plt.subplots()\n"
          "for name, pts in sorted(rows.items()):\n"
          "    pts.sort()\n"
          "    ax.errorbar([p[0] for p in pts], [p[1] for p in pts], yerr=[p[2] for p in pts],\n"
          "                marker='o', capsize=3, label=name)\n"
          "ax.set_yscale('log')\n"
          "ax.set_xlabel('n')\n"
          "ax.set_ylabel('revised SDD size')\n"
          "ax.legend()\n"
          "fig.savefig('"
       << csv_path << ".png', dpi=150)\n";
    return os.str();
}

}  // namespace sddrev
