// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Exact criteria compare rationals with zero tolerance; statistical
// criteria use fixed seeds and the stated multiples of the sampled standard
// error.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "mabinogion/mabinogion.hpp"

namespace {

using namespace mab;
using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int criterion, const std::string& what, bool pass, double seconds,
            const std::string& detail = "") {
    std::printf("%s  criterion %2d: %s (%.2f s)%s%s\n", pass ? "PASS" : "FAIL", criterion,
                what.c_str(), seconds, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

template <class F>
void criterion(int number, const std::string& what, F body) {
    const auto start = Clock::now();
    bool pass = false;
    std::string detail;
    try {
        pass = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    report(number, what, pass, seconds, detail);
}

recursion::ChainSpec urn_chain(long total) {
    recursion::ChainSpec chain;
    chain.num_states = total + 1;
    chain.transitions = [total](long b) {
        return std::vector<std::pair<long, Rat>>{{b + 1, Rat(b, total)},
                                                 {b - 1, Rat(total - b, total)}};
    };
    chain.absorbing = [total](long b) { return b == 0 || b == total; };
    chain.step_cost = [](long) { return Rat(1); };
    chain.terminal_payoff = [](long b) { return Rat(b); };
    return chain;
}

bool within(double value, double reference, double tolerance) {
    return std::abs(value - reference) < tolerance;
}

}  // namespace

int main() {
    criterion(1, "plain-process formulas equal the linear-system oracle, totals <= 30",
              [](std::string& detail) {
                  const auto t0 = Clock::now();
                  for (long total = 2; total <= 30; ++total) {
                      const auto chain = urn_chain(total);
                      const auto value = recursion::brute_force_values(
                          chain, recursion::ChainQuantity::expected_terminal_payoff);
                      const auto time = recursion::brute_force_values(
                          chain, recursion::ChainQuantity::expected_total_cost);
                      for (long b = 0; b <= total; ++b) {
                          const UrnState s{total - b, b};
                          if (mproc::expected_final_black(s) != value[std::size_t(b)] ||
                              mproc::expected_time(s) != time[std::size_t(b)] ||
                              mproc::absorb_prob_black(s) * total != value[std::size_t(b)]) {
                              detail = "mismatch at total " + std::to_string(total) + ", black " +
                                       std::to_string(b);
                              return false;
                          }
                      }
                  }
                  const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
                  if (elapsed >= 30.0) {
                      detail = "runtime budget of 30 s exceeded";
                      return false;
                  }
                  return true;
              });

    criterion(2, "double-sum identities hold exactly for n <= 200", [](std::string& detail) {
        const auto t0 = Clock::now();
        for (const auto& r : identities::verify_identities(200))
            if (!r.holds) {
                detail = "identity " + std::to_string(r.identity) + " fails at n = " +
                         std::to_string(r.n);
                return false;
            }
        const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
        if (elapsed >= 10.0) {
            detail = "runtime budget of 10 s exceeded";
            return false;
        }
        return true;
    });

    criterion(3, "symmetric closed form equals the double sum for k <= 50",
              [](std::string& detail) {
                  for (long k = 1; k <= 50; ++k)
                      if (mproc::expected_time_symmetric(k) != mproc::expected_time({k, k})) {
                          detail = "k = " + std::to_string(k);
                          return false;
                      }
                  return true;
              });

    criterion(4, "policy-A recursions match the strategy evaluator at (k,k), k <= 20",
              [](std::string& detail) {
                  const auto seq = policy_a::policy_a_sequences(20);
                  if (seq.v[2] != Rat(7, 3) || seq.t[2] != 1 || seq.t[3] != Rat(25, 11)) {
                      detail = "spot values v_2, t_2, t_3";
                      return false;
                  }
                  strategies::Evaluator<Rat> black(strategies::StrategySpec::policy_a(),
                                                   strategies::Quantity::final_black, Rat(1));
                  strategies::Evaluator<Rat> time(strategies::StrategySpec::policy_a(),
                                                  strategies::Quantity::time, Rat(1));
                  for (long k = 1; k <= 20; ++k) {
                      if (black.value({k, k}) != seq.v[std::size_t(k)] ||
                          time.value({k, k}) != seq.t[std::size_t(k)]) {
                          detail = "k = " + std::to_string(k);
                          return false;
                      }
                  }
                  return true;
              });

    criterion(5, "general-state policy-A formulas match the evaluator, totals <= 30",
              [](std::string& detail) {
                  strategies::Evaluator<Rat> black(strategies::StrategySpec::policy_a(),
                                                   strategies::Quantity::final_black, Rat(1));
                  strategies::Evaluator<Rat> time(strategies::StrategySpec::policy_a(),
                                                  strategies::Quantity::time, Rat(1));
                  for (long total = 2; total <= 30; ++total)
                      for (long b = total / 2 + 1; b < total; ++b) {
                          const UrnState s{total - b, b};
                          if (policy_a::expected_final_black_A(s) != black.value(s) ||
                              policy_a::expected_time_A(s) != time.value(s)) {
                              detail = "state (" + std::to_string(s.white) + ", " +
                                       std::to_string(s.black) + ")";
                              return false;
                          }
                      }
                  for (long k = 1; k <= 100; ++k)
                      if (policy_a::final_black_even(k, k) != 2 * k ||
                          policy_a::time_even(k, k) != 0) {
                          detail = "boundary telescoping at k = " + std::to_string(k);
                          return false;
                      }
                  return true;
              });

    criterion(6, "conditional time equals the plain time from symmetric starts, k <= 30",
              [](std::string& detail) {
                  for (long k = 1; k <= 30; ++k)
                      if (mproc::conditional_expected_time({k, k}) !=
                          mproc::expected_time_symmetric(k)) {
                          detail = "k = " + std::to_string(k);
                          return false;
                      }
                  return true;
              });

    criterion(7, "approximation error bands: abs < 0.1 for k > 3, rel < 0.001 for k > 25",
              [](std::string& detail) {
                  const auto t0 = Clock::now();
                  const auto black = asymptotics::audit_final_black_A(4, 200);
                  const auto time = asymptotics::audit_time_A(4, 200);
                  for (const auto& r : black) {
                      if (r.abs_err >= 0.1 || (r.parameter > 25 && r.rel_err >= 0.001)) {
                          detail = "final-black audit at k = " + std::to_string(r.parameter);
                          return false;
                      }
                  }
                  for (const auto& r : time) {
                      if (r.abs_err >= 0.1 || (r.parameter > 25 && r.rel_err >= 0.001)) {
                          detail = "time audit at k = " + std::to_string(r.parameter);
                          return false;
                      }
                  }
                  const double elapsed = std::chrono::duration<double>(Clock::now() - t0).count();
                  if (elapsed >= 60.0) {
                      detail = "runtime budget of 60 s exceeded";
                      return false;
                  }
                  return true;
              });

    criterion(8, "worked example at k = 50000 rounds to 319582 / 99604 / 318219",
              [](std::string& detail) {
                  const long long t_plain = std::llround(asymptotics::approx_time_symmetric(50000));
                  const long long v_ctrl = std::llround(asymptotics::approx_final_black_A(50000));
                  const long long t_ctrl = std::llround(asymptotics::approx_time_A(50000));
                  detail = std::to_string(t_plain) + " / " + std::to_string(v_ctrl) + " / " +
                           std::to_string(t_ctrl);
                  return t_plain == 319582 && v_ctrl == 99604 && t_ctrl == 318219;
              });

    criterion(9, "absorption-time grid reproduction under policy A", [](std::string& detail) {
        struct Cell {
            long total;
            Rat x;
            double printed;  // published simulated mean
        };
        const std::vector<Cell> cells{
            {200, Rat(1, 2), 296.77},      {200, Rat(101, 200), 299.59},
            {200, Rat(11, 20), 249.67},    {200, Rat(3, 5), 168.91},
            {200, Rat(3, 4), 70.07},       {2000, Rat(1, 2), 4298.94},
            {2000, Rat(101, 200), 4246.77}, {2000, Rat(11, 20), 2329.69},
            {2000, Rat(3, 5), 1616.19},    {2000, Rat(3, 4), 694.21},
            {20000, Rat(1, 2), 55349.26},  {20000, Rat(101, 200), 48374.06},
            {20000, Rat(11, 20), 23044.07}, {20000, Rat(3, 5), 16099.79},
            {20000, Rat(3, 4), 6933.57}};

        const auto exact100 = policy_a::policy_a_sequences(100);
        const auto float_seq = policy_a::policy_a_sequences_f(10000);
        std::uint64_t tag = 0;
        for (const auto& cell : cells) {
            const long black = ceil_rat(cell.x * cell.total).convert_to<long>();
            sim::SimConfig cfg;
            cfg.start = {cell.total - black, black};
            cfg.strategy = strategies::StrategySpec::policy_a();
            cfg.runs = 10000;
            cfg.seed = 20250810;
            cfg.stream_tag = tag++;
            const auto s = sim::simulate(cfg);

            if (!within(s.mean_H, cell.printed, 0.01 * cell.printed)) {
                detail = "total " + std::to_string(cell.total) +
                         " off the published value: " + std::to_string(s.mean_H);
                return false;
            }
            if (cell.x == Rat(1, 2)) {
                const long k = cell.total / 2;
                const double reference = k <= 100 ? to_real(exact100.t[std::size_t(k)])
                                                  : float_seq.t[std::size_t(k)];
                if (!within(s.mean_H, reference, 4.0 * s.stderr_H)) {
                    detail = "total " + std::to_string(cell.total) + " outside 4 SE of t_k";
                    return false;
                }
            }
        }

        // largest grid total, heavily skewed cell: reduced runs, widened band
        sim::SimConfig big;
        big.start = {500000, 1500000};
        big.strategy = strategies::StrategySpec::policy_a();
        big.runs = 1000;
        big.seed = 20250810;
        big.stream_tag = tag;
        const auto s = sim::simulate(big);
        const double reference = 1000000.0 * std::log(2.0);
        const double tolerance = 0.001 * std::sqrt(10.0) * reference;
        if (!within(s.mean_H, reference, tolerance)) {
            detail = "2e6-ball cell: " + std::to_string(s.mean_H) + " vs " +
                     std::to_string(reference);
            return false;
        }
        return true;
    });

    criterion(10, "q-strategy recursion matches the evaluator; q = 1/2 collapses to policy A",
              [](std::string& detail) {
                  for (const Rat& q : {Rat(1, 2), Rat(3, 5), Rat(2, 3), Rat(3, 4)}) {
                      strategies::Evaluator<Rat> eval(strategies::StrategySpec::q_threshold(q),
                                                      strategies::Quantity::final_black, Rat(1));
                      const auto vq = strategies::v_q_sequence(20, q);
                      for (long k = 1; k <= 20; ++k)
                          if (vq[std::size_t(k)] !=
                              eval.value({strategies::phi(k, q), k})) {
                              detail = "q = " + output::format_fraction(q) +
                                       ", k = " + std::to_string(k);
                              return false;
                          }
                  }
                  const auto va = policy_a::v_sequence(50);
                  const auto vhalf = strategies::v_q_sequence(50, Rat(1, 2));
                  for (long k = 1; k <= 50; ++k) {
                      if (strategies::p_q(k, Rat(1, 2)) != central_prob(k)) {
                          detail = "p_k at q = 1/2, k = " + std::to_string(k);
                          return false;
                      }
                      if (vhalf[std::size_t(k)] != va[std::size_t(k)]) {
                          detail = "v_k at q = 1/2, k = " + std::to_string(k);
                          return false;
                      }
                  }
                  return true;
              });

    criterion(11, "discounting sanity and the crossover beyond policy A", [](std::string& detail) {
        const std::vector<strategies::StrategySpec> all{
            strategies::StrategySpec::none(), strategies::StrategySpec::policy_a(),
            strategies::StrategySpec::policy_r(),
            strategies::StrategySpec::q_threshold(Rat(2, 3)),
            strategies::StrategySpec::q_threshold(Rat(3, 4))};
        for (const auto& strat : all) {
            strategies::Evaluator<Rat> boundless(strat, strategies::Quantity::final_black, Rat(1));
            strategies::Evaluator<Rat> flat(strat, strategies::Quantity::discounted, Rat(1));
            for (long total = 1; total <= 30; ++total)
                for (long b = 0; b <= total; ++b)
                    if (flat.value({total - b, b}) != boundless.value({total - b, b})) {
                        detail = "mu = 0 mismatch at total " + std::to_string(total);
                        return false;
                    }
        }
        for (double mu : {0.0, 0.3, 2.0})
            for (long b : {1L, 17L})
                if (strategies::discounted_value({40, b}, strategies::StrategySpec::policy_r(),
                                                 mu) != double(b)) {
                    detail = "policy R discounted value";
                    return false;
                }
        if (strategies::exact_discounted_value({12, 5}, strategies::StrategySpec::policy_r(),
                                               Rat(1, 3)) != 5) {
            detail = "policy R exact discounted value";
            return false;
        }

        // simulated crossover at (50, 50), mu = 0.01
        auto summarize = [](const strategies::StrategySpec& strat, std::uint64_t tag) {
            sim::SimConfig cfg;
            cfg.start = {50, 50};
            cfg.strategy = strat;
            cfg.runs = 20000;
            cfg.seed = 424242;
            cfg.stream_tag = tag;
            cfg.mu_values = {0.01};
            return sim::simulate(cfg);
        };
        const auto policy_a_run = summarize(strategies::StrategySpec::policy_a(), 0);
        bool crossover = false;
        std::uint64_t tag = 1;
        for (const Rat& q : {Rat(3, 5), Rat(7, 10), Rat(4, 5)}) {
            const auto run = summarize(strategies::StrategySpec::q_threshold(q), tag++);
            const double gap = run.mean_discounted[0] - policy_a_run.mean_discounted[0];
            const double combined = std::sqrt(run.stderr_discounted[0] * run.stderr_discounted[0] +
                                              policy_a_run.stderr_discounted[0] *
                                                  policy_a_run.stderr_discounted[0]);
            if (gap > 3.0 * combined) crossover = true;
        }
        if (!crossover) {
            detail = "no q-strategy beat policy A by 3 combined standard errors at mu = 0.01";
            return false;
        }
        return true;
    });

    criterion(12, "simulation consistency and determinism", [](std::string& detail) {
        // The plain-process reference at (100, 100) is the exact closed form
        // k sum 1/(2i+1) = 328.434...; the nearby controlled value t_100 is
        // 296.546..., the quantity that published 296.57-ish figures refer to.
        const double plain_reference = to_real(mproc::expected_time_symmetric(100));
        if (!within(plain_reference, 328.4342, 5e-4)) {
            detail = "closed form at k = 100 drifted: " + std::to_string(plain_reference);
            return false;
        }
        const double controlled_reference =
            to_real(policy_a::policy_a_sequences(100).t[100]);
        if (!within(controlled_reference, 296.567, 0.05)) {
            detail = "t_100 strayed from the published scale: " +
                     std::to_string(controlled_reference);
            return false;
        }

        sim::SimConfig cfg;
        cfg.start = {100, 100};
        cfg.runs = 100000;
        cfg.seed = 1009;
        const auto s = sim::simulate(cfg);
        if (!within(s.mean_H, plain_reference, 4.0 * s.stderr_H)) {
            detail = "plain mean " + std::to_string(s.mean_H) + " outside 4 SE of " +
                     std::to_string(plain_reference);
            return false;
        }

        sim::SimConfig freq;
        freq.start = {1, 2};
        freq.runs = 100000;
        freq.seed = 4004;
        const auto f = sim::simulate(freq);
        const double se = std::sqrt(0.75 * 0.25 / double(freq.runs));
        if (!within(f.prob_all_black, 0.75, 4.0 * se)) {
            detail = "absorption frequency " + std::to_string(f.prob_all_black);
            return false;
        }

        cfg.threads = 1;
        const auto once = sim::simulate(cfg);
        cfg.threads = 2;
        const auto twice = sim::simulate(cfg);
        if (once.mean_H != twice.mean_H || once.stderr_H != twice.stderr_H ||
            once.mean_final_black != twice.mean_final_black ||
            once.prob_all_black != twice.prob_all_black) {
            detail = "summaries differ across thread counts";
            return false;
        }
        return true;
    });

    if (failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
