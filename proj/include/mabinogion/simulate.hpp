#pragma once

/**
 * @file simulate.hpp
 * @brief Seedable, reproducible, parallel Monte Carlo engine for the urn
 *        process under any removal strategy, with optional conditional
 *        (all-black) sampling and exponentially discounted payoffs.
 *
 * Trajectories are independent. Runs are split into fixed-size batches; each
 * batch owns a random stream derived from (seed, stream tag, batch index)
 * and produces integer moment sums, which are folded in batch order, so a
 * given configuration yields bit-identical summaries at any thread count.
 * A state is two counters; one draw costs one bounded RNG call.
 */

#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <utility>
#include <vector>

#include "mabinogion/exact.hpp"
#include "mabinogion/mprocess.hpp"
#include "mabinogion/numeric.hpp"
#include "mabinogion/rng.hpp"
#include "mabinogion/strategies.hpp"
#include "mabinogion/urn.hpp"

namespace mab::sim {

struct SimConfig {
    UrnState start;
    strategies::StrategySpec strategy = strategies::StrategySpec::none();
    std::uint64_t runs = 10000;
    std::uint64_t seed = 1;
    std::vector<double> mu_values;  // discounted payoff e^{-mu H} B_H per entry
    bool conditional = false;       // sample the h-transformed chain (strategy must be none)
    unsigned threads = 0;           // 0: hardware concurrency
    std::uint64_t batch_size = 4096;  // part of the reproducibility contract
    std::uint64_t stream_tag = 0;     // extra stream separation for scans
};

struct SimulationSummary {
    std::uint64_t runs = 0;
    double mean_H = 0.0;
    double stderr_H = 0.0;
    double mean_final_black = 0.0;
    double stderr_final_black = 0.0;
    std::vector<double> mean_discounted;    // one per mu value
    std::vector<double> stderr_discounted;  // one per mu value
    double prob_all_black = 0.0;
};

struct PathRecord {
    std::vector<std::pair<std::uint64_t, long>> points;  // (step, black count)
};

namespace detail {

struct BatchStats {
    std::uint64_t n = 0;
    std::uint64_t sum_h = 0;
    unsigned __int128 sum_h2 = 0;
    std::uint64_t sum_b = 0;
    unsigned __int128 sum_b2 = 0;
    std::uint64_t all_black = 0;
    std::vector<NeumaierSum> sum_disc;
    std::vector<NeumaierSum> sum_disc2;
};

struct TrajectoryResult {
    std::uint64_t steps = 0;
    long final_black = 0;
};

inline TrajectoryResult run_trajectory(const UrnState& start,
                                       const strategies::StrategySpec& strategy,
                                       rng::Xoshiro256pp& stream) {
    long w = start.white, b = start.black;
    auto strip = [&] {
        while (w > 0 && b > 0) {
            const long r = strategy.removal({w, b});
            if (r == 0) break;
            w -= r;
        }
    };
    strip();
    std::uint64_t steps = 0;
    while (w > 0 && b > 0) {
        const std::uint64_t u = stream.bounded(static_cast<std::uint64_t>(w + b));
        if (u < static_cast<std::uint64_t>(b)) {
            --w;
            ++b;  // black drawn: one white is repainted black
        } else {
            ++w;
            --b;  // white drawn: one black is repainted white
        }
        ++steps;
        strip();
    }
    return {steps, b};
}

inline std::uint64_t run_conditional_trajectory(long N, long start_black,
                                                const std::vector<double>& log_h,
                                                rng::Xoshiro256pp& stream) {
    long n = start_black;
    std::uint64_t steps = 0;
    while (n < N) {
        if (n == 1) {
            ++n;  // h(0) = 0: the down move has probability zero
            ++steps;
            continue;
        }
        const double p_up = std::exp(log_h[static_cast<std::size_t>(n + 1)] -
                                     log_h[static_cast<std::size_t>(n)]) *
                            (double(n) / double(N));
        if (stream.uniform01() < p_up)
            ++n;
        else
            --n;
        ++steps;
    }
    return steps;
}

inline void validate(const SimConfig& cfg) {
    require_valid(cfg.start);
    if (cfg.runs < 1) throw std::invalid_argument("invalid-config: runs must be at least 1");
    if (cfg.batch_size < 1)
        throw std::invalid_argument("invalid-config: batch size must be at least 1");
    if (cfg.conditional) {
        if (cfg.strategy.kind != strategies::StrategyKind::none)
            throw std::invalid_argument(
                "invalid-config: conditional sampling is defined only for the uncontrolled chain");
        if (cfg.start.black < 1)
            throw std::invalid_argument("invalid-config: conditional start needs a black ball");
    }
    for (double mu : cfg.mu_values)
        if (!(mu >= 0)) throw std::invalid_argument("invalid-config: mu must be nonnegative");
}

}  // namespace detail

inline SimulationSummary simulate(const SimConfig& cfg) {
    detail::validate(cfg);
    const std::uint64_t batches = (cfg.runs + cfg.batch_size - 1) / cfg.batch_size;
    std::vector<detail::BatchStats> parts(batches);

    std::vector<double> log_h;
    if (cfg.conditional && cfg.start.white > 0) log_h = mproc::conditional_log_h(cfg.start.total());

    const std::size_t n_mu = cfg.mu_values.size();
    auto run_batch = [&](std::uint64_t index) {
        detail::BatchStats stats;
        stats.sum_disc.resize(n_mu);
        stats.sum_disc2.resize(n_mu);
        const std::uint64_t lo = index * cfg.batch_size;
        const std::uint64_t hi = std::min(cfg.runs, lo + cfg.batch_size);
        rng::Xoshiro256pp stream(rng::mix64(rng::mix64(cfg.seed, cfg.stream_tag), index));
        for (std::uint64_t r = lo; r < hi; ++r) {
            detail::TrajectoryResult res;
            if (cfg.conditional) {
                if (cfg.start.white == 0) {
                    res = {0, cfg.start.black};
                } else {
                    res.steps = detail::run_conditional_trajectory(cfg.start.total(),
                                                                   cfg.start.black, log_h, stream);
                    res.final_black = cfg.start.total();
                }
            } else {
                res = detail::run_trajectory(cfg.start, cfg.strategy, stream);
            }
            ++stats.n;
            stats.sum_h += res.steps;
            stats.sum_h2 += static_cast<unsigned __int128>(res.steps) * res.steps;
            stats.sum_b += static_cast<std::uint64_t>(res.final_black);
            stats.sum_b2 += static_cast<unsigned __int128>(res.final_black) * res.final_black;
            if (res.final_black > 0) ++stats.all_black;
            for (std::size_t i = 0; i < n_mu; ++i) {
                const double value =
                    std::exp(-cfg.mu_values[i] * double(res.steps)) * double(res.final_black);
                stats.sum_disc[i].add(value);
                stats.sum_disc2[i].add(value * value);
            }
        }
        parts[index] = std::move(stats);
    };

    unsigned workers = cfg.threads != 0 ? cfg.threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = static_cast<unsigned>(
        std::min<std::uint64_t>(workers, batches));
    if (workers <= 1) {
        for (std::uint64_t i = 0; i < batches; ++i) run_batch(i);
    } else {
        std::atomic<std::uint64_t> cursor{0};
        auto drain = [&] {
            for (;;) {
                const std::uint64_t i = cursor.fetch_add(1);
                if (i >= batches) return;
                run_batch(i);
            }
        };
        std::vector<std::thread> pool;
        pool.reserve(workers - 1);
        for (unsigned t = 0; t + 1 < workers; ++t) pool.emplace_back(drain);
        drain();
        for (auto& t : pool) t.join();
    }

    // Fold in batch order: integer sums are exact, discounted sums keep one
    // compensated accumulator per mu, so the merge order is fixed by
    // construction and independent of the worker schedule.
    std::uint64_t n = 0, sum_h = 0, sum_b = 0, all_black = 0;
    unsigned __int128 sum_h2 = 0, sum_b2 = 0;
    std::vector<NeumaierSum> disc(n_mu), disc2(n_mu);
    for (const auto& part : parts) {
        n += part.n;
        sum_h += part.sum_h;
        sum_h2 += part.sum_h2;
        sum_b += part.sum_b;
        sum_b2 += part.sum_b2;
        all_black += part.all_black;
        for (std::size_t i = 0; i < n_mu; ++i) {
            disc[i].add(part.sum_disc[i].value());
            disc2[i].add(part.sum_disc2[i].value());
        }
    }

    auto int_stats = [n](std::uint64_t sum, unsigned __int128 sum_sq, double& mean,
                         double& stderr_out) {
        mean = double(sum) / double(n);
        if (n < 2) {
            stderr_out = 0.0;
            return;
        }
        // n * sum_sq - sum^2 is exact in 128-bit integers
        const unsigned __int128 scaled = static_cast<unsigned __int128>(n) * sum_sq;
        const unsigned __int128 square = static_cast<unsigned __int128>(sum) * sum;
        const double variance = double(scaled - square) / (double(n) * double(n - 1));
        stderr_out = std::sqrt(variance / double(n));
    };

    SimulationSummary out;
    out.runs = n;
    int_stats(sum_h, sum_h2, out.mean_H, out.stderr_H);
    int_stats(sum_b, sum_b2, out.mean_final_black, out.stderr_final_black);
    out.prob_all_black = double(all_black) / double(n);
    out.mean_discounted.resize(n_mu);
    out.stderr_discounted.resize(n_mu);
    for (std::size_t i = 0; i < n_mu; ++i) {
        const double mean = disc[i].value() / double(n);
        out.mean_discounted[i] = mean;
        if (n < 2) {
            out.stderr_discounted[i] = 0.0;
        } else {
            double variance = (disc2[i].value() - double(n) * mean * mean) / double(n - 1);
            if (variance < 0.0) variance = 0.0;  // rounding guard near zero variance
            out.stderr_discounted[i] = std::sqrt(variance / double(n));
        }
    }
    return out;
}

/// Full black-count trajectories for plotting; single stream per path.
inline std::vector<PathRecord> sample_paths(const UrnState& start, long n_paths,
                                            std::uint64_t seed, bool conditional = false) {
    require_valid(start);
    if (n_paths < 1) throw std::invalid_argument("sample_paths: need at least one path");
    if (conditional && start.black < 1)
        throw std::invalid_argument("sample_paths: conditional start needs a black ball");
    std::vector<double> log_h;
    if (conditional && start.white > 0) log_h = mproc::conditional_log_h(start.total());

    std::vector<PathRecord> paths;
    paths.reserve(static_cast<std::size_t>(n_paths));
    for (long p = 0; p < n_paths; ++p) {
        rng::Xoshiro256pp stream(rng::mix64(seed, static_cast<std::uint64_t>(p)));
        PathRecord rec;
        long w = start.white, b = start.black;
        std::uint64_t step = 0;
        rec.points.emplace_back(step, b);
        if (conditional) {
            const long N = start.total();
            while (b < N && w > 0) {
                if (b == 1) {
                    ++b;
                } else {
                    const double p_up = std::exp(log_h[static_cast<std::size_t>(b + 1)] -
                                                 log_h[static_cast<std::size_t>(b)]) *
                                        (double(b) / double(N));
                    if (stream.uniform01() < p_up)
                        ++b;
                    else
                        --b;
                }
                w = N - b;
                rec.points.emplace_back(++step, b);
            }
        } else {
            while (w > 0 && b > 0) {
                const std::uint64_t u = stream.bounded(static_cast<std::uint64_t>(w + b));
                if (u < static_cast<std::uint64_t>(b)) {
                    --w;
                    ++b;
                } else {
                    ++w;
                    --b;
                }
                rec.points.emplace_back(++step, b);
            }
        }
        paths.push_back(std::move(rec));
    }
    return paths;
}

/// One cell of the absorption-time grid over total count N and initial black
/// fraction x (b = ceil(xN), w = N - b), simulated under policy A.
struct GridCell {
    long total = 0;
    Rat x;
    long white = 0;
    long black = 0;
    SimulationSummary summary;
};

inline const std::vector<long>& grid_totals() {
    static const std::vector<long> totals{200, 2000, 20000, 200000, 2000000};
    return totals;
}

inline const std::vector<Rat>& grid_fractions() {
    static const std::vector<Rat> fractions{Rat(1, 2), Rat(101, 200), Rat(11, 20), Rat(3, 5),
                                            Rat(3, 4)};
    return fractions;
}

/// Simulates the 5x5 grid. Cells with N >= large_threshold run with
/// runs_large trajectories, the rest with runs; max_total can cut the grid
/// down for quick passes.
inline std::vector<GridCell> simulate_grid(std::uint64_t runs, std::uint64_t runs_large,
                                           std::uint64_t seed, unsigned threads,
                                           long max_total = 2000000,
                                           long large_threshold = 200000) {
    std::vector<GridCell> cells;
    std::uint64_t tag = 0;
    for (long total : grid_totals()) {
        if (total > max_total) continue;
        for (const Rat& x : grid_fractions()) {
            GridCell cell;
            cell.total = total;
            cell.x = x;
            cell.black = ceil_rat(x * total).convert_to<long>();
            cell.white = total - cell.black;
            SimConfig cfg;
            cfg.start = {cell.white, cell.black};
            cfg.strategy = strategies::StrategySpec::policy_a();
            cfg.runs = total >= large_threshold ? runs_large : runs;
            cfg.seed = seed;
            cfg.threads = threads;
            cfg.stream_tag = tag++;
            cell.summary = simulate(cfg);
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

/// One scanned strategy cell: summary under a q-threshold strategy with the
/// configured mu grid.
struct QScanCell {
    Rat q;
    SimulationSummary summary;
};

inline std::vector<QScanCell> scan_q(const UrnState& start, const std::vector<Rat>& q_values,
                                     std::uint64_t runs, const std::vector<double>& mu_values,
                                     std::uint64_t seed, unsigned threads = 0) {
    std::vector<QScanCell> cells;
    std::uint64_t tag = 0;
    for (const Rat& q : q_values) {
        if (!(q > 0 && q < 1))
            throw std::invalid_argument("scan_q: q values must lie strictly between 0 and 1");
        SimConfig cfg;
        cfg.start = start;
        cfg.strategy = strategies::StrategySpec::q_threshold(q);
        cfg.runs = runs;
        cfg.seed = seed;
        cfg.mu_values = mu_values;
        cfg.threads = threads;
        cfg.stream_tag = tag++;
        cells.push_back({q, simulate(cfg)});
    }
    return cells;
}

}  // namespace mab::sim
