#pragma once

/**
 * @file policy_a.hpp
 * @brief Exact quantities for the threshold-controlled process that keeps
 *        white balls strictly below black ("policy A"): the symmetric-start
 *        sequences v_k (expected final black count) and t_k (expected
 *        absorption time), the auxiliary binomial-ratio sums alpha_k(n) and
 *        beta_k(n), and the general-state formulas built from them.
 */

#include <vector>

#include "mabinogion/exact.hpp"
#include "mabinogion/identities.hpp"
#include "mabinogion/numeric.hpp"
#include "mabinogion/urn.hpp"

namespace mab::policy_a {

/// v_k = expected final black count and t_k = expected absorption time from
/// the symmetric state (k, k) under policy A; 1-based, filled by the coupled
/// recursions
///   v_{k+1} = (1-p_k)/(1+p_k) v_k + (2k+1) 2p_k/(1+p_k),          v_1 = 1,
///   t_{k+1} = (1-p_k)/(1+p_k) t_k + (2k+1) p_k/(1+p_k) H_k^odd,   t_1 = 0,
/// where p_k is the central binomial probability and H_k^odd the sum of the
/// first k odd reciprocals.
struct PolicyASequences {
    std::vector<Rat> v;  // index k = 1..k_max
    std::vector<Rat> t;
};

inline PolicyASequences policy_a_sequences(long k_max) {
    if (k_max < 1) throw std::domain_error("policy_a_sequences: k_max must be positive");
    PolicyASequences seq;
    seq.v.assign(static_cast<std::size_t>(k_max) + 1, Rat(0));
    seq.t.assign(static_cast<std::size_t>(k_max) + 1, Rat(0));
    seq.v[1] = 1;
    seq.t[1] = 0;
    Rat p(1, 2);      // central binomial probability at current k
    Rat odd_sum = 0;  // sum of 1/(2i+1) for i < k
    for (long k = 1; k < k_max; ++k) {
        odd_sum += Rat(1, 2 * k - 1);
        const Rat shrink = (1 - p) / (1 + p);
        const Rat gain = Rat(2 * k + 1) * p / (1 + p);
        seq.v[static_cast<std::size_t>(k + 1)] = shrink * seq.v[static_cast<std::size_t>(k)] + 2 * gain;
        seq.t[static_cast<std::size_t>(k + 1)] =
            shrink * seq.t[static_cast<std::size_t>(k)] + gain * odd_sum;
        p *= Rat(2 * k + 1, 2 * k + 2);
    }
    return seq;
}

inline std::vector<Rat> v_sequence(long k_max) { return policy_a_sequences(k_max).v; }
inline std::vector<Rat> t_sequence(long k_max) { return policy_a_sequences(k_max).t; }

/// The binomial-ratio double sums
///   alpha_k(n) = 1/(2k-1) sum_{i=k+1}^{k+n-1} sum_{j=k}^{i-1} C(2k-1,i)/C(2k-2,j),
///   beta_k(n)  = 1/(2k)   sum_{i=k+1}^{k+n-1} sum_{j=k}^{i-1} C(2k,i)/C(2k-1,j),
/// built incrementally for all n at once (the inner sums share prefixes).
/// alpha is defined for n = 0..k, beta for n = 0..k+1; both vanish at n <= 1.
class AlphaBetaTable {
  public:
    explicit AlphaBetaTable(long k) : k_(k) {
        if (k < 1) throw std::domain_error("AlphaBetaTable: k must be positive");
        alpha_.assign(static_cast<std::size_t>(k) + 1, Rat(0));
        beta_.assign(static_cast<std::size_t>(k) + 2, Rat(0));

        if (k >= 2) {
            BinomRow hi(2 * k - 1);
            while (hi.index() < k + 1) hi.advance();
            BinomRow lo(2 * k - 2);
            while (lo.index() < k) lo.advance();
            Rat inner = 0, raw = 0;
            for (long n = 2; n <= k; ++n) {
                inner += Rat(BigInt(1), lo.value());  // extends j to k+n-2
                if (n < k) lo.advance();
                raw += Rat(hi.value()) * inner;  // adds the i = k+n-1 term
                if (n < k) hi.advance();
                alpha_[static_cast<std::size_t>(n)] = raw / (2 * k - 1);
            }
        }
        {
            BinomRow hi(2 * k);
            while (hi.index() < k + 1) hi.advance();
            BinomRow lo(2 * k - 1);
            while (lo.index() < k) lo.advance();
            Rat inner = 0, raw = 0;
            for (long n = 2; n <= k + 1; ++n) {
                inner += Rat(BigInt(1), lo.value());
                if (n < k + 1) lo.advance();
                raw += Rat(hi.value()) * inner;
                if (n < k + 1) hi.advance();
                beta_[static_cast<std::size_t>(n)] = raw / (2 * k);
            }
        }
    }

    long k() const { return k_; }

    const Rat& alpha(long n) const {
        if (n < 0 || n > k_) throw std::domain_error("alpha: n must lie in 0..k");
        return alpha_[static_cast<std::size_t>(n)];
    }

    const Rat& beta(long n) const {
        if (n < 0 || n > k_ + 1) throw std::domain_error("beta: n must lie in 0..k+1");
        return beta_[static_cast<std::size_t>(n)];
    }

  private:
    long k_;
    std::vector<Rat> alpha_, beta_;
};

inline Rat alpha(long k, long n) { return AlphaBetaTable(k).alpha(n); }
inline Rat beta(long k, long n) { return AlphaBetaTable(k).beta(n); }

namespace detail {
/// sum_{i=from}^{to} C(row, i); empty when to < from.
inline BigInt partial_row_sum(long row, long from, long to) {
    BigInt sum = 0;
    if (to < from) return sum;
    BinomRow r(row);
    while (r.index() < from) r.advance();
    for (long i = from; i <= to; ++i) {
        sum += r.value();
        if (i < to) r.advance();
    }
    return sum;
}
}  // namespace detail

/// Expected final black count from (k-c, k+c), even total, c in 1..k:
///   v_k + (2k - v_k) 2^{-(2k-2)} sum_{i=k}^{k+c-1} C(2k-1, i).
inline Rat final_black_even(long k, long c) {
    if (k < 1 || c < 1 || c > k) throw std::domain_error("final_black_even: need 1 <= c <= k");
    const Rat v_k = policy_a_sequences(k).v[static_cast<std::size_t>(k)];
    const Rat tail = Rat(detail::partial_row_sum(2 * k - 1, k, k + c - 1), pow2(2 * k - 2));
    return v_k + (2 * k - v_k) * tail;
}

/// Expected final black count from (k+1-c, k+c), odd total, c in 1..k+1:
///   v_k + ((2k+1) - v_k) 2^{-(2k-1)}/(1+p_k) sum_{i=k}^{k+c-1} C(2k, i).
inline Rat final_black_odd(long k, long c) {
    if (k < 1 || c < 1 || c > k + 1) throw std::domain_error("final_black_odd: need 1 <= c <= k+1");
    const Rat v_k = policy_a_sequences(k).v[static_cast<std::size_t>(k)];
    const Rat p_k = central_prob(k);
    const Rat tail =
        Rat(detail::partial_row_sum(2 * k, k, k + c - 1), pow2(2 * k - 1)) / (1 + p_k);
    return v_k + (2 * k + 1 - v_k) * tail;
}

/// Expected absorption time from (k-c, k+c), even total, c in 1..k:
///   t_k + (2k alpha_k(k) - t_k) 2^{-(2k-2)} sum_{i=k}^{k+c-1} C(2k-1, i) - 2k alpha_k(c).
inline Rat time_even(long k, long c) {
    if (k < 1 || c < 1 || c > k) throw std::domain_error("time_even: need 1 <= c <= k");
    const Rat t_k = policy_a_sequences(k).t[static_cast<std::size_t>(k)];
    const AlphaBetaTable table(k);
    const Rat tail = Rat(detail::partial_row_sum(2 * k - 1, k, k + c - 1), pow2(2 * k - 2));
    return t_k + (2 * k * table.alpha(k) - t_k) * tail - 2 * k * table.alpha(c);
}

/// Expected absorption time from (k+1-c, k+c), odd total, c in 1..k+1:
///   t_k + ((2k+1) beta_k(k+1) - t_k) 2^{-(2k-1)}/(1+p_k) sum_{i=k}^{k+c-1} C(2k, i)
///       - (2k+1) beta_k(c).
inline Rat time_odd(long k, long c) {
    if (k < 1 || c < 1 || c > k + 1) throw std::domain_error("time_odd: need 1 <= c <= k+1");
    const Rat t_k = policy_a_sequences(k).t[static_cast<std::size_t>(k)];
    const AlphaBetaTable table(k);
    const Rat p_k = central_prob(k);
    const Rat tail =
        Rat(detail::partial_row_sum(2 * k, k, k + c - 1), pow2(2 * k - 1)) / (1 + p_k);
    return t_k + ((2 * k + 1) * table.beta(k + 1) - t_k) * tail - (2 * k + 1) * table.beta(c);
}

/// Expected final black count from an arbitrary state under policy A. With
/// w >= b the policy removes down to (b-1, b) immediately, so the value is
/// v_b; with w < b the state is decomposed by total parity.
inline Rat expected_final_black_A(const UrnState& s) {
    require_valid(s);
    if (s.total() < 1) throw std::domain_error("expected_final_black_A: empty urn");
    if (s.white == 0) return s.black;
    if (s.black == 0) return 0;
    if (s.white >= s.black) return policy_a_sequences(s.black).v[static_cast<std::size_t>(s.black)];
    const long n = s.total();
    const long k = n / 2;
    const long c = s.black - k;
    return (n % 2 == 0) ? final_black_even(k, c) : final_black_odd(k, c);
}

/// Expected absorption time from an arbitrary state under policy A.
inline Rat expected_time_A(const UrnState& s) {
    require_valid(s);
    if (s.total() < 1) throw std::domain_error("expected_time_A: empty urn");
    if (s.absorbed()) return 0;
    if (s.white >= s.black) return policy_a_sequences(s.black).t[static_cast<std::size_t>(s.black)];
    const long n = s.total();
    const long k = n / 2;
    const long c = s.black - k;
    return (n % 2 == 0) ? time_even(k, c) : time_odd(k, c);
}

/// Floating-point twins of the exact sequences, for index ranges where the
/// rational path would be wasteful. All terms are positive, so plain
/// compensated recursion keeps full double accuracy.
struct PolicyAFloatSequences {
    std::vector<double> v;
    std::vector<double> t;
};

inline PolicyAFloatSequences policy_a_sequences_f(long k_max) {
    if (k_max < 1) throw std::domain_error("policy_a_sequences_f: k_max must be positive");
    PolicyAFloatSequences seq;
    seq.v.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
    seq.t.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
    seq.v[1] = 1.0;
    double p = 0.5;
    NeumaierSum odd_sum;
    for (long k = 1; k < k_max; ++k) {
        odd_sum.add(1.0 / double(2 * k - 1));
        const double shrink = (1.0 - p) / (1.0 + p);
        const double gain = double(2 * k + 1) * p / (1.0 + p);
        seq.v[static_cast<std::size_t>(k + 1)] = shrink * seq.v[static_cast<std::size_t>(k)] + 2.0 * gain;
        seq.t[static_cast<std::size_t>(k + 1)] =
            shrink * seq.t[static_cast<std::size_t>(k)] + gain * odd_sum.value();
        p *= double(2 * k + 1) / double(2 * k + 2);
    }
    return seq;
}

}  // namespace mab::policy_a
