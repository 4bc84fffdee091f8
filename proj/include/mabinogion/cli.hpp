#pragma once

/**
 * @file cli.hpp
 * @brief Command-line front end. Subcommands: exact, simulate, table1,
 *        scan-q, verify, audit, paths. Every command renders an
 *        OutputEnvelope as CSV (default) or JSON; identical flags produce
 *        identical bytes. Exit codes: 0 success, 1 verification failure,
 *        2 usage error.
 */

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mabinogion/asymptotics.hpp"
#include "mabinogion/exact.hpp"
#include "mabinogion/identities.hpp"
#include "mabinogion/mprocess.hpp"
#include "mabinogion/output.hpp"
#include "mabinogion/policy_a.hpp"
#include "mabinogion/simulate.hpp"
#include "mabinogion/strategies.hpp"

namespace mab::cli {

namespace detail {

using output::format_decimal;
using output::format_fraction;
using output::Format;
using output::OutputEnvelope;

inline Format parse_format(const std::string& name) {
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    throw CLI::ValidationError("--format", "expected csv or json");
}

inline strategies::StrategySpec parse_strategy(const std::string& name) {
    if (name == "none") return strategies::StrategySpec::none();
    if (name == "A") return strategies::StrategySpec::policy_a();
    if (name == "R") return strategies::StrategySpec::policy_r();
    if (name.rfind("q:", 0) == 0)
        return strategies::StrategySpec::q_threshold(parse_rational(name.substr(2)));
    throw CLI::ValidationError("--strategy", "expected none, A, R or q:<rational>");
}

/// "a:b:n" -> n evenly spaced rationals; the end point is excluded when
/// end_exclusive (used for q grids so the cutoff stays below 1).
inline std::vector<Rat> parse_grid(const std::string& text, bool end_exclusive) {
    const auto first = text.find(':');
    const auto second = text.find(':', first + 1);
    if (first == std::string::npos || second == std::string::npos)
        return {parse_rational(text)};
    const Rat lo = parse_rational(text.substr(0, first));
    const Rat hi = parse_rational(text.substr(first + 1, second - first - 1));
    const long count = std::stol(text.substr(second + 1));
    if (count < 1) throw CLI::ValidationError("grid", "count must be positive");
    std::vector<Rat> grid;
    grid.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        grid.push_back(lo);
        return grid;
    }
    const Rat span = hi - lo;
    const long divisor = end_exclusive ? count : count - 1;
    for (long i = 0; i < count; ++i) grid.push_back(lo + span * i / divisor);
    return grid;
}

inline unsigned thread_cap(unsigned requested) {
    unsigned cap = 0;
    if (const char* env = std::getenv("MAB_THREADS")) {
        const long parsed = std::atol(env);
        if (parsed > 0) cap = static_cast<unsigned>(parsed);
    }
    if (requested == 0) return cap;  // 0 lets the engine pick, capped below
    return cap == 0 ? requested : std::min(requested, cap);
}

inline std::string rational_cell(const Rat& value) {
    return format_fraction(value) + " (" + format_decimal(to_real(value)) + ")";
}

// ---------------------------------------------------------------------------
// exact
// ---------------------------------------------------------------------------

struct ExactArgs {
    std::string process = "m";
    long white = 0;
    long black = 0;
    std::string quantity = "time";
    long exact_limit = mproc::kExactTotalLimit;
    std::string format = "csv";
};

inline int run_exact(const ExactArgs& args, std::ostream& out) {
    const UrnState state{args.white, args.black};
    require_valid(state);
    if (state.total() < 1) throw CLI::ValidationError("exact", "urn must contain a ball");

    std::string fraction, decimal;
    auto emit_exact = [&](const Rat& value) {
        fraction = format_fraction(value);
        decimal = format_decimal(to_real(value));
    };
    auto emit_float = [&](double value) {
        fraction = "";
        decimal = format_decimal(value);
    };

    double mu = 0.0;
    std::string quantity = args.quantity;
    if (quantity.rfind("discounted:", 0) == 0) {
        mu = to_real(parse_rational(quantity.substr(11)));
        if (mu < 0) throw CLI::ValidationError("--quantity", "mu must be nonnegative");
        quantity = "discounted";
    }

    const bool large = state.total() > args.exact_limit;
    if (args.process == "m") {
        if (quantity == "time")
            large ? emit_float(mproc::expected_time_f(state)) : emit_exact(mproc::expected_time(state));
        else if (quantity == "final-black")
            large ? emit_float(mproc::expected_final_black_f(state))
                  : emit_exact(mproc::expected_final_black(state));
        else if (quantity == "absorb-prob")
            large ? emit_float(mproc::absorb_prob_black_f(state))
                  : emit_exact(mproc::absorb_prob_black(state));
        else if (quantity == "discounted")
            mu == 0.0 ? emit_exact(strategies::exact_discounted_value(
                            state, strategies::StrategySpec::none(), Rat(1)))
                      : emit_float(strategies::discounted_value(
                            state, strategies::StrategySpec::none(), mu));
        else
            throw CLI::ValidationError("--quantity", "invalid quantity for process m");
    } else if (args.process == "a" || args.process.rfind("q:", 0) == 0) {
        const bool is_a = args.process == "a";
        const auto strategy = is_a ? strategies::StrategySpec::policy_a()
                                   : strategies::StrategySpec::q_threshold(
                                         parse_rational(args.process.substr(2)));
        if (quantity == "time")
            is_a ? emit_exact(policy_a::expected_time_A(state))
                 : emit_exact(strategies::exact_value_under_strategy(
                       state, strategy, strategies::Quantity::time));
        else if (quantity == "final-black")
            is_a ? emit_exact(policy_a::expected_final_black_A(state))
                 : emit_exact(strategies::exact_value_under_strategy(
                       state, strategy, strategies::Quantity::final_black));
        else if (quantity == "discounted")
            mu == 0.0 ? emit_exact(strategies::exact_discounted_value(state, strategy, Rat(1)))
                      : emit_float(strategies::discounted_value(state, strategy, mu));
        else
            throw CLI::ValidationError("--quantity",
                                       "absorb-prob is defined only for the plain process");
    } else if (args.process == "conditional") {
        if (quantity != "time")
            throw CLI::ValidationError("--quantity", "conditional process supports time only");
        if (large)
            throw CLI::ValidationError("exact",
                                       "conditional time uses the exact chain solver; raise "
                                       "--exact-limit to allow this total");
        emit_exact(mproc::conditional_expected_time(state));
    } else {
        throw CLI::ValidationError("--process", "expected m, a, q:<rational> or conditional");
    }

    OutputEnvelope env;
    env.command = "exact";
    env.parameters = {{"process", args.process},
                      {"white", std::to_string(args.white)},
                      {"black", std::to_string(args.black)},
                      {"quantity", args.quantity}};
    env.columns = {"process", "white", "black", "quantity", "value", "decimal"};
    env.add_row({args.process, std::to_string(args.white), std::to_string(args.black),
                 args.quantity, fraction, decimal});
    output::write(env, parse_format(args.format), out);
    return 0;
}

// ---------------------------------------------------------------------------
// simulate / table1 / scan-q
// ---------------------------------------------------------------------------

struct SimulateArgs {
    long white = 0;
    long black = 0;
    std::string strategy = "none";
    std::uint64_t runs = 10000;
    std::uint64_t runs_large = 1000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::uint64_t batch_size = 4096;
    bool conditional = false;
    std::string mu;  // single value or a:b:n (inclusive grid)
    std::string scan_q;  // a:b:n (end-exclusive grid)
    bool table1 = false;
    long max_total = 2000000;
    std::string format = "csv";
};

inline void append_summary_rows(OutputEnvelope& env, const std::string& label_q,
                                const UrnState& state, const std::string& strategy,
                                bool conditional, std::uint64_t runs, std::uint64_t seed,
                                const std::vector<double>& mus, const sim::SimulationSummary& s) {
    auto base = [&](const std::string& mu_cell, const std::string& disc_mean,
                    const std::string& disc_err) {
        env.add_row({label_q, std::to_string(state.white), std::to_string(state.black), strategy,
                     conditional ? "true" : "false", std::to_string(runs), std::to_string(seed),
                     mu_cell, format_decimal(s.mean_H), format_decimal(s.stderr_H),
                     format_decimal(s.mean_final_black), format_decimal(s.stderr_final_black),
                     disc_mean, disc_err, format_decimal(s.prob_all_black)});
    };
    if (mus.empty()) {
        base("", "", "");
        return;
    }
    for (std::size_t i = 0; i < mus.size(); ++i)
        base(format_decimal(mus[i]), format_decimal(s.mean_discounted[i]),
             format_decimal(s.stderr_discounted[i]));
}

inline const std::vector<std::string>& summary_columns() {
    static const std::vector<std::string> cols{
        "q",      "white",  "black",        "strategy",        "conditional",
        "runs",   "seed",   "mu",           "mean_h",          "stderr_h",
        "mean_b", "stderr_b", "mean_discounted", "stderr_discounted", "prob_all_black"};
    return cols;
}

inline int run_simulate(const SimulateArgs& args, std::ostream& out) {
    const Format format = parse_format(args.format);
    const unsigned threads = thread_cap(args.threads);

    std::vector<double> mus;
    if (!args.mu.empty())
        for (const Rat& r : parse_grid(args.mu, false)) mus.push_back(to_real(r));

    OutputEnvelope env;
    if (args.table1) {
        env.command = "table1";
        env.parameters = {{"runs", std::to_string(args.runs)},
                          {"runs_large", std::to_string(args.runs_large)},
                          {"seed", std::to_string(args.seed)},
                          {"max_total", std::to_string(args.max_total)}};
        env.columns = {"total",  "x",        "white",  "black",    "runs",
                       "mean_h", "stderr_h", "mean_b", "stderr_b", "prob_all_black"};
        const auto cells = sim::simulate_grid(args.runs, args.runs_large, args.seed, threads,
                                              args.max_total);
        for (const auto& cell : cells)
            env.add_row({std::to_string(cell.total), format_decimal(to_real(cell.x)),
                         std::to_string(cell.white), std::to_string(cell.black),
                         std::to_string(cell.summary.runs), format_decimal(cell.summary.mean_H),
                         format_decimal(cell.summary.stderr_H),
                         format_decimal(cell.summary.mean_final_black),
                         format_decimal(cell.summary.stderr_final_black),
                         format_decimal(cell.summary.prob_all_black)});
        output::write(env, format, out);
        return 0;
    }

    const UrnState state{args.white, args.black};
    env.command = "simulate";
    env.parameters = {{"white", std::to_string(args.white)},
                      {"black", std::to_string(args.black)},
                      {"strategy", args.strategy},
                      {"runs", std::to_string(args.runs)},
                      {"seed", std::to_string(args.seed)}};
    env.columns = summary_columns();

    if (!args.scan_q.empty()) {
        const auto grid = parse_grid(args.scan_q, true);
        const auto cells = sim::scan_q(state, grid, args.runs, mus, args.seed, threads);
        for (const auto& cell : cells)
            append_summary_rows(env, format_fraction(cell.q), state,
                                "q:" + format_fraction(cell.q), false, args.runs, args.seed, mus,
                                cell.summary);
        output::write(env, format, out);
        return 0;
    }

    sim::SimConfig cfg;
    cfg.start = state;
    cfg.strategy = parse_strategy(args.strategy);
    cfg.runs = args.runs;
    cfg.seed = args.seed;
    cfg.mu_values = mus;
    cfg.conditional = args.conditional;
    cfg.threads = threads;
    cfg.batch_size = args.batch_size;
    append_summary_rows(env, "", state, args.strategy, args.conditional, args.runs, args.seed, mus,
                        sim::simulate(cfg));
    output::write(env, format, out);
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyArgs {
    bool identities = false;
    bool oracle = false;
    bool asymptotics = false;
    long max_n = 200;
    long max_total = 30;
    long k_max = 200;
    std::string format = "csv";
};

inline int run_verify(const VerifyArgs& args, std::ostream& out) {
    if (!args.identities && !args.oracle && !args.asymptotics)
        throw CLI::ValidationError("verify",
                                   "choose at least one of --identities/--oracle/--asymptotics");
    OutputEnvelope env;
    env.command = "verify";
    env.columns = {"check", "parameter", "detail", "pass"};
    bool all_pass = true;
    auto record = [&](const std::string& check, long parameter, const std::string& detail,
                      bool pass) {
        env.add_row({check, std::to_string(parameter), detail, pass ? "true" : "false"});
        all_pass = all_pass && pass;
    };

    if (args.identities) {
        env.parameters.emplace_back("max_n", std::to_string(args.max_n));
        for (const auto& report : identities::verify_identities(args.max_n))
            record(report.identity == 1 ? "double-sum-harmonic" : "double-sum-deficit", report.n,
                   format_fraction(report.lhs) + " vs " + format_fraction(report.rhs),
                   report.holds);
    }

    if (args.oracle) {
        env.parameters.emplace_back("max_total", std::to_string(args.max_total));
        for (long total = 2; total <= args.max_total; ++total) {
            recursion::ChainSpec chain;
            chain.num_states = total + 1;
            chain.transitions = [total](long b) {
                return std::vector<std::pair<long, Rat>>{{b + 1, Rat(b, total)},
                                                         {b - 1, Rat(total - b, total)}};
            };
            chain.absorbing = [total](long b) { return b == 0 || b == total; };
            chain.step_cost = [](long) { return Rat(1); };
            chain.terminal_payoff = [](long b) { return Rat(b); };
            const auto value = recursion::brute_force_values(
                chain, recursion::ChainQuantity::expected_terminal_payoff);
            const auto time = recursion::brute_force_values(
                chain, recursion::ChainQuantity::expected_total_cost);
            bool pass = true;
            for (long b = 0; b <= total; ++b) {
                const UrnState s{total - b, b};
                pass = pass && mproc::expected_final_black(s) == value[static_cast<std::size_t>(b)];
                pass = pass && mproc::expected_time(s) == time[static_cast<std::size_t>(b)];
                pass = pass &&
                       mproc::absorb_prob_black(s) * total == value[static_cast<std::size_t>(b)];
            }
            record("formula-vs-chain", total, "all states at this total", pass);
        }
    }

    if (args.asymptotics) {
        env.parameters.emplace_back("k_max", std::to_string(args.k_max));
        bool final_ok = true, time_ok = true;
        for (const auto& r : asymptotics::audit_final_black_A(4, args.k_max)) {
            final_ok = final_ok && r.abs_err < 0.1;
            if (r.parameter > 25) final_ok = final_ok && r.rel_err < 0.001;
        }
        record("final-black-approximation", args.k_max, "abs<0.1 (k>3), rel<0.001 (k>25)",
               final_ok);
        for (const auto& r : asymptotics::audit_time_A(4, args.k_max)) {
            time_ok = time_ok && r.abs_err < 0.1;
            if (r.parameter > 25) time_ok = time_ok && r.rel_err < 0.001;
        }
        record("time-approximation", args.k_max, "abs<0.1 (k>3), rel<0.001 (k>25)", time_ok);
    }

    output::write(env, parse_format(args.format), out);
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// audit
// ---------------------------------------------------------------------------

struct AuditArgs {
    std::string which = "VA";  // T | VA | TA | p | Tskew
    long k_min = 1;
    long k_max = 200;
    long total = 20000;
    std::string x = "3/4";
    std::string format = "csv";
};

inline int run_audit(const AuditArgs& args, std::ostream& out) {
    OutputEnvelope env;
    env.command = "audit";
    env.parameters = {{"which", args.which},
                      {"k_min", std::to_string(args.k_min)},
                      {"k_max", std::to_string(args.k_max)}};
    env.columns = {"quantity", "parameter", "exact", "approx", "abs_err", "rel_err"};
    auto add = [&](const std::string& name, const asymptotics::ApproxReport& r) {
        env.add_row({name, std::to_string(r.parameter),
                     r.exact ? format_decimal(*r.exact) : std::string{},
                     format_decimal(r.approx), r.exact ? format_decimal(r.abs_err) : std::string{},
                     r.exact ? format_decimal(r.rel_err) : std::string{}});
    };

    if (args.which == "T")
        for (const auto& r : asymptotics::audit_time_symmetric(args.k_min, args.k_max))
            add("time-symmetric", r);
    else if (args.which == "VA")
        for (const auto& r : asymptotics::audit_final_black_A(args.k_min, args.k_max))
            add("final-black-controlled", r);
    else if (args.which == "TA")
        for (const auto& r : asymptotics::audit_time_A(args.k_min, args.k_max))
            add("time-controlled", r);
    else if (args.which == "p")
        for (const auto& r : asymptotics::audit_central_prob(args.k_min, args.k_max))
            add("central-probability", r);
    else if (args.which == "Tskew") {
        env.parameters.emplace_back("total", std::to_string(args.total));
        env.parameters.emplace_back("x", args.x);
        add("time-skewed", asymptotics::audit_time_skewed(args.total, to_real(parse_rational(args.x))));
    } else {
        throw CLI::ValidationError("--which", "expected T, VA, TA, p or Tskew");
    }
    output::write(env, parse_format(args.format), out);
    return 0;
}

// ---------------------------------------------------------------------------
// paths
// ---------------------------------------------------------------------------

struct PathsArgs {
    long white = 100;
    long black = 100;
    long n_paths = 5;
    std::uint64_t seed = 1;
    bool conditional = false;
    std::string format = "csv";
};

inline int run_paths(const PathsArgs& args, std::ostream& out) {
    OutputEnvelope env;
    env.command = "paths";
    env.parameters = {{"white", std::to_string(args.white)},
                      {"black", std::to_string(args.black)},
                      {"n_paths", std::to_string(args.n_paths)},
                      {"seed", std::to_string(args.seed)},
                      {"conditional", args.conditional ? "true" : "false"}};
    env.columns = {"path", "step", "black"};
    const auto paths =
        sim::sample_paths({args.white, args.black}, args.n_paths, args.seed, args.conditional);
    for (std::size_t p = 0; p < paths.size(); ++p)
        for (const auto& [step, black] : paths[p].points)
            env.add_row({std::to_string(p), std::to_string(step), std::to_string(black)});
    output::write(env, parse_format(args.format), out);
    return 0;
}

}  // namespace detail

/// Entry point shared by the binary and the tests.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Mabinogion urn toolkit: exact values, audits and simulation"};
    app.require_subcommand(1);

    detail::ExactArgs exact_args;
    auto* exact = app.add_subcommand("exact", "closed-form value for one state");
    exact->add_option("--process", exact_args.process, "m | a | q:<rational> | conditional");
    exact->add_option("-w,--white", exact_args.white)->required();
    exact->add_option("-b,--black", exact_args.black)->required();
    exact->add_option("--quantity", exact_args.quantity,
                      "time | final-black | absorb-prob | discounted:<mu>");
    exact->add_option("--exact-limit", exact_args.exact_limit,
                      "largest total served by the rational path");
    exact->add_option("--format", exact_args.format, "csv | json");

    detail::SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo runs for one configuration");
    simulate->add_option("-w,--white", sim_args.white);
    simulate->add_option("-b,--black", sim_args.black);
    simulate->add_option("--strategy", sim_args.strategy, "none | A | R | q:<rational>");
    simulate->add_option("--runs", sim_args.runs);
    simulate->add_option("--runs-large", sim_args.runs_large,
                         "runs for grid cells with at least 200000 balls");
    simulate->add_option("--seed", sim_args.seed);
    simulate->add_option("--threads", sim_args.threads, "0 uses all cores (MAB_THREADS caps)");
    simulate->add_option("--batch-size", sim_args.batch_size);
    simulate->add_flag("--conditional", sim_args.conditional);
    simulate->add_option("--mu", sim_args.mu, "discount rate, single value or a:b:n grid");
    simulate->add_option("--scan-q", sim_args.scan_q, "q grid a:b:n (end-exclusive)");
    simulate->add_flag("--table1", sim_args.table1, "simulate the N-by-x absorption-time grid");
    simulate->add_option("--max-n", sim_args.max_total, "largest grid total to simulate");
    simulate->add_option("--format", sim_args.format, "csv | json");

    detail::SimulateArgs table_args;
    table_args.table1 = true;
    auto* table1 = app.add_subcommand("table1", "absorption-time grid (alias of simulate --table1)");
    table1->add_option("--runs", table_args.runs);
    table1->add_option("--runs-large", table_args.runs_large);
    table1->add_option("--seed", table_args.seed);
    table1->add_option("--threads", table_args.threads);
    table1->add_option("--max-n", table_args.max_total);
    table1->add_option("--format", table_args.format);

    detail::SimulateArgs scan_args;
    auto* scan = app.add_subcommand("scan-q", "sweep q-threshold strategies (alias into simulate)");
    scan->add_option("-w,--white", scan_args.white)->required();
    scan->add_option("-b,--black", scan_args.black)->required();
    scan->add_option("--q", scan_args.scan_q, "q grid a:b:n (end-exclusive)")->required();
    scan->add_option("--mu", scan_args.mu, "discount grid a:b:n (inclusive) or single value");
    scan->add_option("--runs", scan_args.runs);
    scan->add_option("--seed", scan_args.seed);
    scan->add_option("--threads", scan_args.threads);
    scan->add_option("--format", scan_args.format);

    detail::VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "exact self-checks; exit 1 on any failure");
    verify->add_flag("--identities", verify_args.identities, "double-sum identities");
    verify->add_flag("--oracle", verify_args.oracle, "formulas vs linear-system oracle");
    verify->add_flag("--asymptotics", verify_args.asymptotics, "approximation error bands");
    verify->add_option("--max-n", verify_args.max_n);
    verify->add_option("--max-total", verify_args.max_total);
    verify->add_option("--k-max", verify_args.k_max);
    verify->add_option("--format", verify_args.format);

    detail::AuditArgs audit_args;
    auto* audit = app.add_subcommand("audit", "approximation-vs-exact error reports");
    audit->add_option("--which", audit_args.which, "T | VA | TA | p | Tskew");
    audit->add_option("--k-min", audit_args.k_min);
    audit->add_option("--k-max", audit_args.k_max);
    audit->add_option("--total", audit_args.total, "ball count for Tskew");
    audit->add_option("--x", audit_args.x, "black fraction for Tskew (rational)");
    audit->add_option("--format", audit_args.format);

    detail::PathsArgs paths_args;
    auto* paths = app.add_subcommand("paths", "full black-count trajectories");
    paths->add_option("-w,--white", paths_args.white);
    paths->add_option("-b,--black", paths_args.black);
    paths->add_option("--n-paths", paths_args.n_paths);
    paths->add_option("--seed", paths_args.seed);
    paths->add_flag("--conditional", paths_args.conditional);
    paths->add_option("--format", paths_args.format);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (exact->parsed()) return detail::run_exact(exact_args, out);
        if (simulate->parsed()) return detail::run_simulate(sim_args, out);
        if (table1->parsed()) return detail::run_simulate(table_args, out);
        if (scan->parsed()) return detail::run_simulate(scan_args, out);
        if (verify->parsed()) return detail::run_verify(verify_args, out);
        if (audit->parsed()) return detail::run_audit(audit_args, out);
        if (paths->parsed()) return detail::run_paths(paths_args, out);
    } catch (const CLI::ValidationError& e) {
        err << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return 2;
    }
    return 2;
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace mab::cli
