#include "povmdisc/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "povmdisc/json_io.hpp"
#include "povmdisc/rng.hpp"

namespace povmdisc {

namespace {

void validate_config(const SweepConfig& cfg) {
    if (cfg.dim < 2) throw PreconditionError("sweep: dimension must be at least 2");
    if (cfg.m_values.empty()) throw PreconditionError("sweep: no effect counts given");
    for (int m : cfg.m_values)
        if (m < cfg.dim || m > cfg.dim * cfg.dim)
            throw PreconditionError("sweep: m = " + std::to_string(m) + " outside [d, d^2] for d = " +
                                    std::to_string(cfg.dim));
    if (cfg.samples_per_point < 1)
        throw PreconditionError("sweep: need at least one sample per point");
}

Category classify_sample(const SweepConfig& cfg, int m, int k) {
    const auto mm = static_cast<std::uint64_t>(m);
    const auto kk = static_cast<std::uint64_t>(k);
    RngStream first_rng = RngStream::derive(cfg.master_seed, {mm, kk, 0});
    RngStream second_rng = RngStream::derive(cfg.master_seed, {mm, kk, 1});
    PovmPair pair;
    pair.first = sample_random_povm(cfg.dim, m, first_rng);
    pair.second = sample_random_povm(cfg.dim, m, second_rng);

    ClassifyOptions options = cfg.classifier;
    options.parallel_uses.clear();
    options.skip_positive_when_decided = true;
    options.seed = derive_stream_id(cfg.master_seed, {mm, kk, 2});
    return classify(pair, options).category;
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    validate_config(cfg);
    const int n = cfg.samples_per_point;
    int workers = cfg.workers > 0 ? cfg.workers
                                  : static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = std::min(workers, n);

    std::vector<SweepRow> rows;
    for (int m : cfg.m_values) {
        std::vector<Category> categories(n);
        std::atomic<int> next{0};
        std::atomic<bool> failed{false};
        std::mutex error_mutex;
        std::string error_message;

        auto work = [&]() {
            while (!failed.load(std::memory_order_relaxed)) {
                const int k = next.fetch_add(1);
                if (k >= n) return;
                try {
                    categories[k] = classify_sample(cfg, m, k);
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!failed.exchange(true))
                        error_message = "sweep: sample failed at m = " + std::to_string(m) +
                                        ", index " + std::to_string(k) + ": " + e.what();
                    return;
                }
            }
        };

        if (workers == 1) {
            work();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (int w = 0; w < workers; ++w) pool.emplace_back(work);
            for (std::thread& t : pool) t.join();
        }
        if (failed) throw Error(error_message);

        SweepRow row;
        row.m = m;
        row.n_samples = n;
        for (Category c : categories) {
            switch (c) {
                case Category::AdaptiveOnly: ++row.n_adaptive_only; break;
                case Category::NotPerfectlyDistinguishable: ++row.n_not_distinguishable; break;
                case Category::FiniteDistinguishableParallelUndetermined:
                    ++row.n_undetermined;
                    break;
            }
        }
        row.p_adaptive = static_cast<double>(row.n_adaptive_only) / static_cast<double>(n);
        row.std_error = std::sqrt(row.p_adaptive * (1.0 - row.p_adaptive) / static_cast<double>(n));
        rows.push_back(row);
    }
    return rows;
}

namespace {

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string format_csv(const std::vector<SweepRow>& rows) {
    std::string out = "m,n_samples,n_adaptive_only,n_not_distinguishable,n_undetermined,"
                      "p_adaptive,stderr\n";
    for (const SweepRow& r : rows) {
        out += std::to_string(r.m) + ',' + std::to_string(r.n_samples) + ',' +
               std::to_string(r.n_adaptive_only) + ',' + std::to_string(r.n_not_distinguishable) +
               ',' + std::to_string(r.n_undetermined) + ',' + format_real(r.p_adaptive) + ',' +
               format_real(r.std_error) + '\n';
    }
    return out;
}

void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
    if (rows.empty()) throw PreconditionError("emit_csv: no rows to write");
    write_text_atomic(path, format_csv(rows));
}

}  // namespace povmdisc
