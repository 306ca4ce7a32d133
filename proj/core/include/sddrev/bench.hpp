#pragma once

#include <chrono>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sddrev/compile.hpp"

namespace sddrev {

// Seeded generator: std::mt19937_64 (fully specified by the standard) with
// rejection sampling for bounded integers, so streams agree across
// platforms and standard libraries.
class BenchRng {
public:
    explicit BenchRng(std::uint64_t seed) : engine_(seed) {}
    // Uniform in [0, bound); bound > 0.
    std::uint64_t uniform_below(std::uint64_t bound);
    bool coin() { return uniform_below(2) == 1; }

private:
    std::mt19937_64 engine_;
};

// Stable per-instance seed derived from the run seed, n and repetition.
std::uint64_t instance_seed(std::uint64_t seed, int n, int rep);

// `m` clauses over x1..xn, each with `width` distinct variables and
// independent uniform polarities. Variables within a clause are sorted.
CnfInstance random_cnf(int n, int m, int width, BenchRng& rng);

struct BenchConfig {
    std::vector<int> ns{10, 12, 14, 16};
    int reps = 100;
    double clause_ratio = 0.5;  // clauses per variable
    int width = 3;
    std::chrono::duration<double> timeout{60.0};
    std::uint64_t seed = 1;
    int max_order = 1;
    // Also reject pairs where psi and mu are already consistent.
    bool require_inconsistent = false;
    bool intersect_each = false;
    int max_attempts = 1000;  // resampling budget per repetition
    int jobs = 1;

    int clauses(int n) const;
    // Throws InputError on an invalid configuration.
    void validate() const;
};

inline constexpr const char* kPipelineA = "compile-then-revise";
inline constexpr const char* kPipelineB = "revise-then-compile";

struct BenchRecord {
    int n = 0;
    int rep = 0;
    std::uint64_t seed = 0;
    std::string pipeline;
    std::size_t size = 0;
    double seconds = 0.0;
    int k = -1;
    bool timeout = false;
    std::string skip_reason;  // non-empty when the instance was skipped
    int rejected = 0;         // pairs resampled before this one
    bool same_id = false;     // pipeline B only: id equals pipeline A's
};

// One repetition: samples (psi, mu) until mu is satisfiable and does not
// entail psi, then runs both pipelines. Always returns two records.
std::vector<BenchRecord> run_instance(const BenchConfig& cfg, int n, int rep);

// All instances, `cfg.jobs` at a time; records ordered by (n, rep, pipeline).
std::vector<BenchRecord> run_bench(const BenchConfig& cfg);

struct SummaryRow {
    int n = 0;
    std::string pipeline;
    double mean_size = 0.0;
    double std_size = 0.0;  // population standard deviation
    std::size_t count = 0;
    std::size_t timeouts = 0;
};

std::vector<SummaryRow> summarize(const std::vector<BenchRecord>& records);
std::string summary_csv(const std::vector<SummaryRow>& rows);
std::string records_csv(const std::vector<BenchRecord>& records);
// Python/matplotlib script plotting mean sizes with error bars from `csv_path`.
std::string plot_script(const std::string& csv_path);

}  // namespace sddrev
