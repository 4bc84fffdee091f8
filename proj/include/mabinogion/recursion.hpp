#pragma once

/**
 * @file recursion.hpp
 * @brief Solvers for second-order linear recursions with boundary values,
 *        the discounted tridiagonal variant, and an exact linear-system
 *        reference solver for arbitrary finite absorbing chains.
 *
 * The boundary solver handles X(k) = p(k) X(k-1) + (1-p(k)) X(k+1) + r(k) on
 * a < k < b with X(a), X(b) given. It evaluates the classical closed form by
 * one forward accumulation of the odds ratio rho = p/(1-p) and two prefix
 * sums, so a full table costs O(b-a) scalar operations instead of the naive
 * nested products. Empty products are 1 and empty sums are 0; in particular
 * r == 0 makes the inhomogeneous part vanish identically.
 */

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mabinogion/exact.hpp"

namespace mab::recursion {

template <class S>
struct RecursionProblem {
    long a = 0;  // left boundary index
    long b = 0;  // right boundary index, b > a
    std::function<S(long)> down_prob;  // p(k) in (0,1) for a < k < b
    std::function<S(long)> step_cost;  // r(k); may be null for r == 0
    S left_value{};                    // X(a)
    S right_value{};                   // X(b)
};

namespace detail {
template <class S>
void check_prob(const S& p) {
    if (!(p > S(0) && p < S(1)))
        throw std::domain_error("recursion solver: invalid probability (must lie in (0,1))");
}
}  // namespace detail

/// Solves the boundary problem for every index a..b at once.
template <class S>
std::vector<S> solve_boundary_all(const RecursionProblem<S>& prob) {
    const long a = prob.a, b = prob.b;
    if (b <= a) throw std::invalid_argument("solve_boundary: requires b > a");
    const long n = b - a;

    // prefix_pi[d] = sum_{i=1}^{d} prod_{m=1}^{i-1} rho(a+m)
    // prefix_q[d]  = Q(a+d), accumulated from the inner sums s_i
    std::vector<S> prefix_pi(static_cast<std::size_t>(n) + 1);
    std::vector<S> prefix_q(static_cast<std::size_t>(n) + 1);
    S pi = S(1);  // prod_{m=1}^{i-1} rho(a+m)
    S s = S(0);   // sum_{j=1}^{i-1} r(a+j)/(1-p(a+j)) prod_{m=j+1}^{i-1} rho(a+m)
    S pp = S(0), qq = S(0);
    prefix_pi[0] = pp;
    prefix_q[0] = qq;
    for (long i = 1; i <= n; ++i) {
        pp += pi;
        qq += s;
        prefix_pi[static_cast<std::size_t>(i)] = pp;
        prefix_q[static_cast<std::size_t>(i)] = qq;
        if (i < n) {
            const S p = prob.down_prob(a + i);
            detail::check_prob(p);
            const S one_minus = S(1) - p;
            const S rho = p / one_minus;
            s = rho * s;
            if (prob.step_cost) s += prob.step_cost(a + i) / one_minus;
            pi = pi * rho;
        }
    }

    const S scale =
        (prob.right_value - prob.left_value + prefix_q[static_cast<std::size_t>(n)]) /
        prefix_pi[static_cast<std::size_t>(n)];
    std::vector<S> x(static_cast<std::size_t>(n) + 1);
    for (long d = 0; d <= n; ++d)
        x[static_cast<std::size_t>(d)] =
            prob.left_value - prefix_q[static_cast<std::size_t>(d)] +
            prefix_pi[static_cast<std::size_t>(d)] * scale;
    return x;
}

template <class S>
S solve_boundary(const RecursionProblem<S>& prob, long c) {
    if (c < prob.a || c > prob.b)
        throw std::invalid_argument("solve_boundary: query index outside [a, b]");
    if (c == prob.a) return prob.left_value;
    if (c == prob.b) return prob.right_value;
    return solve_boundary_all(prob)[static_cast<std::size_t>(c - prob.a)];
}

/// Solves U(k) = discount * [p(k) U(k-1) + (1-p(k)) U(k+1)] on a < k < b with
/// U(a), U(b) given, by tridiagonal elimination over the scalar type: exact
/// when S is rational, ordinary floating elimination for S = double. The
/// per-step discount must lie in (0, 1]; discount 1 reduces to the boundary
/// problem with zero running cost.
template <class S>
std::vector<S> solve_discounted_all(long a, long b, const std::function<S(long)>& down_prob,
                                    const S& discount, const S& left_value,
                                    const S& right_value) {
    if (!(discount > S(0) && discount <= S(1)))
        throw std::domain_error("solve_discounted: invalid discount (must lie in (0,1])");
    if (b <= a) throw std::invalid_argument("solve_discounted: requires b > a");
    const long n = b - a - 1;  // number of interior unknowns
    std::vector<S> x(static_cast<std::size_t>(b - a) + 1);
    x.front() = left_value;
    x.back() = right_value;
    if (n == 0) return x;

    std::vector<S> diag(static_cast<std::size_t>(n), S(1));
    std::vector<S> upper(static_cast<std::size_t>(n));
    std::vector<S> rhs(static_cast<std::size_t>(n), S(0));
    for (long j = 0; j < n; ++j) {
        const long k = a + 1 + j;
        const S p = down_prob(k);
        detail::check_prob(p);
        const S low = -discount * p;
        upper[static_cast<std::size_t>(j)] = -discount * (S(1) - p);
        if (j == 0) rhs[static_cast<std::size_t>(j)] -= low * left_value;
        if (j == n - 1)
            rhs[static_cast<std::size_t>(j)] -= upper[static_cast<std::size_t>(j)] * right_value;
        if (j > 0) {
            // eliminate the subdiagonal entry against the previous row
            const S m = low / diag[static_cast<std::size_t>(j - 1)];
            diag[static_cast<std::size_t>(j)] -= m * upper[static_cast<std::size_t>(j - 1)];
            rhs[static_cast<std::size_t>(j)] += -m * rhs[static_cast<std::size_t>(j - 1)];
        }
    }
    for (long j = n - 1; j >= 0; --j) {
        S v = rhs[static_cast<std::size_t>(j)];
        if (j < n - 1) v -= upper[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j + 2)];
        x[static_cast<std::size_t>(j + 1)] = v / diag[static_cast<std::size_t>(j)];
    }
    return x;
}

template <class S>
S solve_discounted(long a, long b, const std::function<S(long)>& down_prob, const S& discount,
                   const S& left_value, const S& right_value, long c) {
    if (c < a || c > b) throw std::invalid_argument("solve_discounted: query index outside [a, b]");
    return solve_discounted_all(a, b, down_prob, discount, left_value, right_value)
        [static_cast<std::size_t>(c - a)];
}

/// A finite chain given by explicit transition lists. Only transient states
/// are asked for transitions; absorbing states carry a terminal payoff.
struct ChainSpec {
    long num_states = 0;
    std::function<std::vector<std::pair<long, Rat>>(long)> transitions;
    std::function<bool(long)> absorbing;
    std::function<Rat(long)> step_cost;        // per-step cost at transient states
    std::function<Rat(long)> terminal_payoff;  // value at absorbing states
};

enum class ChainQuantity { expected_terminal_payoff, expected_total_cost };

/// Exact first-step linear system solved by sparse Gaussian elimination over
/// rationals. Returns one value per state; absorbing states carry their
/// payoff (or zero cost).
inline std::vector<Rat> brute_force_values(const ChainSpec& chain, ChainQuantity quantity) {
    const long n = chain.num_states;
    if (n <= 0) throw std::invalid_argument("brute_force_values: empty chain");
    if (n > 50000) throw std::invalid_argument("brute_force_values: chain exceeds 5e4 states");

    std::vector<long> transient_index(static_cast<std::size_t>(n), -1);
    std::vector<long> transient_states;
    for (long s = 0; s < n; ++s) {
        if (!chain.absorbing(s)) {
            transient_index[static_cast<std::size_t>(s)] =
                static_cast<long>(transient_states.size());
            transient_states.push_back(s);
        }
    }
    const long m = static_cast<long>(transient_states.size());

    // Gather rows; validate stochasticity while we are at it.
    std::vector<std::vector<std::pair<long, Rat>>> outgoing(static_cast<std::size_t>(m));
    for (long row = 0; row < m; ++row) {
        auto moves = chain.transitions(transient_states[static_cast<std::size_t>(row)]);
        Rat total = 0;
        for (const auto& [to, p] : moves) {
            if (to < 0 || to >= n)
                throw std::invalid_argument("brute_force_values: transition target out of range");
            if (p < 0) throw std::invalid_argument("brute_force_values: negative probability");
            total += p;
        }
        if (total != 1)
            throw std::invalid_argument("brute_force_values: row probabilities must sum to 1");
        outgoing[static_cast<std::size_t>(row)] = std::move(moves);
    }

    // Reachability scan: every transient state must reach an absorbing one.
    {
        std::vector<std::vector<long>> incoming(static_cast<std::size_t>(n));
        for (long row = 0; row < m; ++row)
            for (const auto& [to, p] : outgoing[static_cast<std::size_t>(row)])
                if (p > 0)
                    incoming[static_cast<std::size_t>(to)].push_back(
                        transient_states[static_cast<std::size_t>(row)]);
        std::vector<char> reached(static_cast<std::size_t>(n), 0);
        std::deque<long> frontier;
        for (long s = 0; s < n; ++s)
            if (chain.absorbing(s)) {
                reached[static_cast<std::size_t>(s)] = 1;
                frontier.push_back(s);
            }
        while (!frontier.empty()) {
            const long s = frontier.front();
            frontier.pop_front();
            for (long from : incoming[static_cast<std::size_t>(s)])
                if (!reached[static_cast<std::size_t>(from)]) {
                    reached[static_cast<std::size_t>(from)] = 1;
                    frontier.push_back(from);
                }
        }
        for (long s = 0; s < n; ++s)
            if (!reached[static_cast<std::size_t>(s)])
                throw std::invalid_argument(
                    "brute_force_values: non-absorbing chain (state cannot reach absorption)");
    }

    // Assemble x_s - sum_t P(s,t) x_t = rhs over transient states.
    std::vector<std::map<long, Rat>> rows(static_cast<std::size_t>(m));
    std::vector<Rat> rhs(static_cast<std::size_t>(m), Rat(0));
    std::vector<std::set<long>> column_rows(static_cast<std::size_t>(m));
    for (long row = 0; row < m; ++row) {
        const long s = transient_states[static_cast<std::size_t>(row)];
        auto& r = rows[static_cast<std::size_t>(row)];
        r[row] = 1;
        if (quantity == ChainQuantity::expected_total_cost && chain.step_cost)
            rhs[static_cast<std::size_t>(row)] = chain.step_cost(s);
        for (const auto& [to, p] : outgoing[static_cast<std::size_t>(row)]) {
            if (p == 0) continue;
            const long col = transient_index[static_cast<std::size_t>(to)];
            if (col >= 0) {
                r[col] -= p;
                if (r[col] == 0) r.erase(col);
            } else if (quantity == ChainQuantity::expected_terminal_payoff &&
                       chain.terminal_payoff) {
                rhs[static_cast<std::size_t>(row)] += p * chain.terminal_payoff(to);
            }
        }
        for (const auto& [col, coeff] : r) column_rows[static_cast<std::size_t>(col)].insert(row);
    }

    auto erase_entry = [&](long row, long col) {
        rows[static_cast<std::size_t>(row)].erase(col);
        column_rows[static_cast<std::size_t>(col)].erase(row);
    };
    auto set_entry = [&](long row, long col, Rat value) {
        if (value == 0) {
            erase_entry(row, col);
        } else {
            rows[static_cast<std::size_t>(row)][col] = std::move(value);
            column_rows[static_cast<std::size_t>(col)].insert(row);
        }
    };

    // Forward elimination in natural order; absorbing chains keep the
    // diagonal nonzero but we guard with a swap anyway.
    for (long col = 0; col < m; ++col) {
        auto& holders = column_rows[static_cast<std::size_t>(col)];
        if (rows[static_cast<std::size_t>(col)].count(col) == 0) {
            auto it = holders.upper_bound(col);
            if (it == holders.end())
                throw std::runtime_error("brute_force_values: singular system");
            const long swap_row = *it;
            std::swap(rows[static_cast<std::size_t>(col)], rows[static_cast<std::size_t>(swap_row)]);
            std::swap(rhs[static_cast<std::size_t>(col)], rhs[static_cast<std::size_t>(swap_row)]);
            for (auto& cset : column_rows) {
                const bool had_a = cset.erase(col) > 0;
                const bool had_b = cset.erase(swap_row) > 0;
                if (had_a) cset.insert(swap_row);
                if (had_b) cset.insert(col);
            }
        }
        const Rat pivot = rows[static_cast<std::size_t>(col)].at(col);
        const std::vector<long> below(holders.upper_bound(col), holders.end());
        for (long row : below) {
            const Rat factor = rows[static_cast<std::size_t>(row)].at(col) / pivot;
            erase_entry(row, col);
            for (const auto& [c2, v2] : rows[static_cast<std::size_t>(col)]) {
                if (c2 == col) continue;
                Rat updated = -factor * v2;
                auto found = rows[static_cast<std::size_t>(row)].find(c2);
                if (found != rows[static_cast<std::size_t>(row)].end()) updated += found->second;
                set_entry(row, c2, std::move(updated));
            }
            rhs[static_cast<std::size_t>(row)] -= factor * rhs[static_cast<std::size_t>(col)];
        }
    }

    std::vector<Rat> solution(static_cast<std::size_t>(m));
    for (long row = m - 1; row >= 0; --row) {
        Rat v = rhs[static_cast<std::size_t>(row)];
        for (const auto& [col, coeff] : rows[static_cast<std::size_t>(row)]) {
            if (col == row) continue;
            v -= coeff * solution[static_cast<std::size_t>(col)];
        }
        solution[static_cast<std::size_t>(row)] = v / rows[static_cast<std::size_t>(row)].at(row);
    }

    std::vector<Rat> values(static_cast<std::size_t>(n), Rat(0));
    for (long s = 0; s < n; ++s) {
        const long row = transient_index[static_cast<std::size_t>(s)];
        if (row >= 0)
            values[static_cast<std::size_t>(s)] = solution[static_cast<std::size_t>(row)];
        else if (quantity == ChainQuantity::expected_terminal_payoff && chain.terminal_payoff)
            values[static_cast<std::size_t>(s)] = chain.terminal_payoff(s);
    }
    return values;
}

}  // namespace mab::recursion
