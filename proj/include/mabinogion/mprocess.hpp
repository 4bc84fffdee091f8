#pragma once

/**
 * @file mprocess.hpp
 * @brief Closed-form quantities for the uncontrolled urn process and for the
 *        conditional process given absorption in the all-black state.
 *
 * Exact formulas are used up to kExactTotalLimit total balls (rational
 * arithmetic); above that the same expressions are evaluated in log space
 * with compensated summation. The two paths are cross-validated in the test
 * suite on overlapping ball counts.
 */

#include <cmath>
#include <memory>
#include <vector>

#include "mabinogion/exact.hpp"
#include "mabinogion/numeric.hpp"
#include "mabinogion/recursion.hpp"
#include "mabinogion/urn.hpp"

namespace mab::mproc {

/// Largest total ball count served by the exact rational path by default.
inline constexpr long kExactTotalLimit = 2000;

/// P(all balls end up black | start state) = 2^{-(w+b-1)} sum_{i<b} C(w+b-1, i).
inline Rat absorb_prob_black(const UrnState& s) {
    require_valid(s);
    if (s.total() < 1) throw std::domain_error("absorb_prob_black: empty urn");
    if (s.white == 0) return 1;
    if (s.black == 0) return 0;
    const long n = s.total() - 1;
    BinomRow row(n);
    BigInt prefix = 0;
    for (long i = 0; i < s.black; ++i) {
        prefix += row.value();
        if (i + 1 < s.black) row.advance();
    }
    return Rat(prefix, pow2(n));
}

/// Expected final number of black balls: (w+b) * absorb_prob_black.
inline Rat expected_final_black(const UrnState& s) {
    return s.total() * absorb_prob_black(s);
}

/// Expected number of draws to absorption,
///   T(w,b) = (w+b)/(2(w+b-1)) sum_{i<min(w,b)} sum_{j=i}^{w+b-2-i} C(w+b-1,i)/C(w+b-2,j),
/// evaluated with one pass of binomial-row prefix sums. Symmetric in (w, b).
inline Rat expected_time(const UrnState& s) {
    require_valid(s);
    if (s.absorbed()) return 0;
    const long lo = std::min(s.white, s.black);
    const long n = s.total();

    // Prefix sums of reciprocals of row n-2.
    std::vector<Rat> rec_prefix(static_cast<std::size_t>(n - 1));
    {
        BinomRow row(n - 2);
        Rat acc = 0;
        for (long j = 0; j <= n - 2; ++j) {
            acc += Rat(BigInt(1), row.value());
            rec_prefix[static_cast<std::size_t>(j)] = acc;
            if (j < n - 2) row.advance();
        }
    }

    BinomRow outer(n - 1);
    Rat sum = 0;
    for (long i = 0; i < lo; ++i) {
        Rat inner = rec_prefix[static_cast<std::size_t>(n - 2 - i)];
        if (i > 0) inner -= rec_prefix[static_cast<std::size_t>(i - 1)];
        sum += Rat(outer.value()) * inner;
        if (i + 1 < lo) outer.advance();
    }
    return sum * n / (2 * (n - 1));
}

/// Symmetric-start absorption time, T(k,k) = k * sum_{i<k} 1/(2i+1).
inline Rat expected_time_symmetric(long k) {
    if (k < 1) throw std::domain_error("expected_time_symmetric: k must be positive");
    Rat s = 0;
    for (long i = 0; i < k; ++i) s += Rat(1, 2 * i + 1);
    return s * k;
}

/// Table of h(n) = P(absorb all black | n black of N total) for n = 0..N.
/// h is harmonic for the process killed on hitting 0 or N.
struct HarmonicTable {
    long total = 0;
    std::vector<Rat> values;  // index n = 0..total
};

inline HarmonicTable harmonic_table(long N) {
    if (N < 1) throw std::domain_error("harmonic_table: N must be positive");
    HarmonicTable table;
    table.total = N;
    table.values.assign(static_cast<std::size_t>(N) + 1, Rat(0));
    const BigInt denom = pow2(N - 1);
    BinomRow row(N - 1);
    BigInt prefix = 0;
    for (long n = 1; n <= N; ++n) {
        prefix += row.value();
        if (n < N) row.advance();
        table.values[static_cast<std::size_t>(n)] = Rat(prefix, denom);
    }
    return table;
}

/// Transition list of the conditional process at black count n of N: the
/// uncontrolled probabilities reweighted by h. Zero-probability moves are
/// omitted, so the n = 1 row is the single forced up-step.
inline std::vector<std::pair<long, Rat>> conditional_transition(long n, const HarmonicTable& h) {
    const long N = h.total;
    if (N < 2) throw std::domain_error("conditional_transition: N must be at least 2");
    if (n == 0)
        throw std::domain_error(
            "conditional_transition: undefined at 0 (state excluded from the conditional chain)");
    if (n < 1 || n > N - 1)
        throw std::domain_error("conditional_transition: n must lie in 1..N-1");
    const Rat& hn = h.values[static_cast<std::size_t>(n)];
    std::vector<std::pair<long, Rat>> moves;
    const Rat up = h.values[static_cast<std::size_t>(n + 1)] / hn * Rat(n, N);
    if (up > 0) moves.emplace_back(n + 1, up);
    const Rat down = h.values[static_cast<std::size_t>(n - 1)] / hn * Rat(N - n, N);
    if (down > 0) moves.emplace_back(n - 1, down);
    return moves;
}

inline std::vector<std::pair<long, Rat>> conditional_transition(long n, long N) {
    return conditional_transition(n, harmonic_table(N));
}

/// The conditional process as an explicit chain on black counts 0..N with N
/// absorbing; state 0 is unreachable and kept only to preserve indexing.
inline recursion::ChainSpec conditional_chain(long N) {
    if (N < 1) throw std::domain_error("conditional_chain: N must be positive");
    auto h = std::make_shared<const HarmonicTable>(harmonic_table(N));
    recursion::ChainSpec chain;
    chain.num_states = N + 1;
    chain.transitions = [h](long n) { return conditional_transition(n, *h); };
    chain.absorbing = [N](long n) { return n == 0 || n == N; };
    chain.step_cost = [](long) { return Rat(1); };
    chain.terminal_payoff = [](long n) { return Rat(n); };
    return chain;
}

/// Expected number of draws to absorption for the conditional process
/// started from the given state, computed by exact elimination on the chain.
inline Rat conditional_expected_time(const UrnState& s) {
    require_valid(s);
    if (s.black < 1)
        throw std::domain_error("conditional_expected_time: needs at least one black ball");
    if (s.white == 0) return 0;
    const long N = s.total();
    const auto values =
        recursion::brute_force_values(conditional_chain(N), recursion::ChainQuantity::expected_total_cost);
    return values[static_cast<std::size_t>(s.black)];
}

// ---------------------------------------------------------------------------
// Floating-point path for ball counts beyond the exact limit.
// ---------------------------------------------------------------------------

/// absorb_prob_black in log space: exp(log sum_{i<b} C(N-1,i) - (N-1) log 2).
inline double absorb_prob_black_f(const UrnState& s) {
    require_valid(s);
    if (s.total() < 1) throw std::domain_error("absorb_prob_black_f: empty urn");
    if (s.white == 0) return 1.0;
    if (s.black == 0) return 0.0;
    const long n = s.total() - 1;
    double log_sum = -std::numeric_limits<double>::infinity();
    for (long i = 0; i < s.black; ++i) log_sum = logaddexp(log_sum, log_binomial(n, i));
    return std::exp(log_sum - double(n) * std::log(2.0));
}

inline double expected_final_black_f(const UrnState& s) {
    return double(s.total()) * absorb_prob_black_f(s);
}

/// Floating evaluation of the double-sum time formula. The reciprocal inner
/// sums are dominated by their two ends, so each is accumulated from both
/// edges and truncated once terms stop contributing at double precision.
inline double expected_time_f(const UrnState& state) {
    require_valid(state);
    if (state.absorbed()) return 0.0;
    long w = state.white, b = state.black;
    if (b > w) std::swap(w, b);
    const long n = w + b;
    if (w == b) return double(b) * odd_harmonic(b);

    NeumaierSum outer;
    for (long i = 0; i < b; ++i) {
        const double li = log_binomial(n - 1, i);
        const long j_hi = n - 2 - i;
        NeumaierSum inner;
        // ascending from the left edge
        double m = log_binomial(n - 2, i);
        long j = i;
        while (j <= j_hi) {
            const double term = std::exp(li - m);
            inner.add(term);
            if (term <= 1e-18 * inner.value() && j > i) break;
            m += std::log(double(n - 2 - j) / double(j + 1));
            ++j;
        }
        if (j < j_hi) {
            // descending from the right edge, stopping before overlap
            double m2 = log_binomial(n - 2, i);  // symmetry: C(n-2, j_hi) = C(n-2, i)
            long j2 = j_hi;
            while (j2 > j) {
                const double term = std::exp(li - m2);
                inner.add(term);
                if (term <= 1e-18 * inner.value()) break;
                m2 += std::log(double(j2) / double(n - 2 - j2 + 1));
                --j2;
            }
        }
        outer.add(inner.value());
    }
    return outer.value() * double(n) / (2.0 * double(n - 1));
}

/// log h(n) for n = 0..N (log of the harmonic table), safe for ball counts
/// where the raw probabilities underflow a double.
inline std::vector<double> conditional_log_h(long N) {
    if (N < 1) throw std::domain_error("conditional_log_h: N must be positive");
    std::vector<double> logh(static_cast<std::size_t>(N) + 1,
                             -std::numeric_limits<double>::infinity());
    const double scale = double(N - 1) * std::log(2.0);
    double acc = -std::numeric_limits<double>::infinity();
    for (long n = 1; n <= N; ++n) {
        acc = logaddexp(acc, log_binomial(N - 1, n - 1));
        logh[static_cast<std::size_t>(n)] = acc - scale;
    }
    logh[static_cast<std::size_t>(N)] = 0.0;  // exactly 1 by construction
    return logh;
}

}  // namespace mab::mproc
