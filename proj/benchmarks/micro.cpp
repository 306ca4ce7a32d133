#include <benchmark/benchmark.h>

#include "sddrev/bench.hpp"
#include "sddrev/compile.hpp"
#include "sddrev/revision.hpp"

namespace {

using namespace sddrev;

CnfInstance instance(int n, int clauses, std::uint64_t seed) {
    BenchRng rng(seed);
    return random_cnf(n, clauses, 3, rng);
}

void BM_CompileCnf(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const CnfInstance cnf = instance(n, n, 17);
    std::size_t size = 0;
    for (auto _ : state) {
        SddManager m(Vtree::balanced(n));
        const NodeId s = compile_cnf(m, cnf);
        size = m.size(s);
        benchmark::DoNotOptimize(s);
    }
    state.counters["size"] = static_cast<double>(size);
}
BENCHMARK(BM_CompileCnf)->DenseRange(16, 36, 4)->Unit(benchmark::kMillisecond);

void BM_Apply(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const Vtree vtree = Vtree::balanced(n);
    SddManager source(vtree);
    const std::string a_text = source.serialize(compile_cnf(source, instance(n, n / 2, 23)));
    const std::string b_text = source.serialize(compile_cnf(source, instance(n, n / 2, 29)));
    for (auto _ : state) {
        // A fresh manager per round keeps the apply cache cold.
        state.PauseTiming();
        SddManager m(vtree);
        const NodeId a = m.parse(a_text);
        const NodeId b = m.parse(b_text);
        state.ResumeTiming();
        benchmark::DoNotOptimize(m.conjoin(a, b));
    }
}
BENCHMARK(BM_Apply)->DenseRange(16, 32, 8);

void BM_SemiResolvent(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SddManager m(Vtree::balanced(n));
    const NodeId s = compile_cnf(m, instance(n, n, 31));
    Var x = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(semi_resolvent_sdd(m, s, x, Sign::Plus));
        x = x % static_cast<Var>(n) + 1;
    }
    state.counters["size"] = static_cast<double>(m.size(s));
    state.SetComplexityN(static_cast<std::int64_t>(m.size(s)));
}
BENCHMARK(BM_SemiResolvent)->DenseRange(16, 36, 4)->Complexity(benchmark::oN);

void BM_Revise(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    BenchConfig cfg;
    cfg.ns = {n};
    for (auto _ : state) benchmark::DoNotOptimize(run_instance(cfg, n, 0));
}
BENCHMARK(BM_Revise)->DenseRange(10, 16, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
