#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "povmdisc/classify.hpp"

namespace povmdisc {

struct SweepConfig {
    int dim = 2;
    std::vector<int> m_values;   // each in [d, d^2]
    int samples_per_point = 1000;
    std::uint64_t master_seed = 1;
    ClassifyOptions classifier;  // parallel_uses is ignored by sweeps
    int workers = 0;             // 0: hardware concurrency
};

struct SweepRow {
    int m = 0;
    long n_samples = 0;
    long n_adaptive_only = 0;
    long n_not_distinguishable = 0;
    long n_undetermined = 0;
    double p_adaptive = 0.0;
    double std_error = 0.0;  // binomial sqrt(p(1-p)/n)
};

/// Monte-Carlo sweep over effect counts: for each m, samples N independent
/// pairs of Haar-random POVMs, classifies them and tallies the verdicts.
/// Sample k at effect count m always uses the stream derived from
/// (master_seed, m, k), so the result is byte-stable under any worker count.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

std::string format_csv(const std::vector<SweepRow>& rows);

/// Writes the CSV atomically (temp file + rename), LF line endings, reals
/// with 17 significant digits.
void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

}  // namespace povmdisc
