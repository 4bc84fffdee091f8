#pragma once

/**
 * @file strategies.hpp
 * @brief Removal strategies for the controlled urn (none, policy A, policy R,
 *        q-threshold, custom removal maps) and an exact dynamic-programming
 *        evaluator for expected final black count, expected absorption time,
 *        and discounted value under any of them.
 *
 * Removal is instantaneous: it happens just after time 0 and just after each
 * draw, consumes no time step and no discount factor, and never touches
 * black balls. The evaluator therefore treats a controlled state's value as
 * exactly the value of its post-removal state.
 */

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mabinogion/exact.hpp"
#include "mabinogion/recursion.hpp"
#include "mabinogion/urn.hpp"

namespace mab::strategies {

enum class StrategyKind { none, policy_a, policy_r, q_threshold, custom };

/// A removal policy. Construct through the named factories.
struct StrategySpec {
    StrategyKind kind = StrategyKind::none;
    Rat q{};  // cutoff for q_threshold
    std::function<long(UrnState)> custom_removal;
    // machine-word copy of q for the per-draw hot path; 0 when q overflows it
    long long q_num = 0;
    long long q_den = 0;

    static StrategySpec none() { return {}; }
    static StrategySpec policy_a() { return {StrategyKind::policy_a, Rat{}, nullptr}; }
    static StrategySpec policy_r() { return {StrategyKind::policy_r, Rat{}, nullptr}; }

    static StrategySpec q_threshold(const Rat& q) {
        if (!(q > 0 && q < 1))
            throw std::domain_error("q_threshold: cutoff must lie strictly between 0 and 1");
        StrategySpec spec{StrategyKind::q_threshold, q, nullptr};
        const BigInt limit = (BigInt(1) << 62);
        if (numerator(q) < limit && denominator(q) < limit) {
            spec.q_num = numerator(q).convert_to<long long>();
            spec.q_den = denominator(q).convert_to<long long>();
        }
        return spec;
    }

    static StrategySpec custom(std::function<long(UrnState)> removal) {
        if (!removal) throw std::invalid_argument("custom strategy: removal map required");
        return {StrategyKind::custom, Rat{}, std::move(removal)};
    }

    /// White balls to remove right now. Always 0 at absorbed states; never
    /// exceeds the white count and never adds balls.
    long removal(const UrnState& s) const {
        require_valid(s);
        if (s.absorbed()) return 0;
        switch (kind) {
            case StrategyKind::none:
                return 0;
            case StrategyKind::policy_a:
                return s.white >= s.black ? s.white - (s.black - 1) : 0;
            case StrategyKind::policy_r:
                return s.white;
            case StrategyKind::q_threshold: {
                if (q_den != 0) {
                    const __int128 scaled = static_cast<__int128>(s.black) * q_den;
                    const __int128 target = (scaled + q_num - 1) / q_num;  // ceil(B/q)
                    __int128 r = static_cast<__int128>(s.total()) - target + 1;
                    if (r < 0) r = 0;
                    if (r > s.white) r = s.white;
                    return static_cast<long>(r);
                }
                const BigInt target = ceil_div(s.black * denominator(q), numerator(q));
                BigInt r = s.total() - target + 1;
                if (r < 0) r = 0;
                if (r > s.white) r = s.white;
                return r.convert_to<long>();
            }
            case StrategyKind::custom: {
                const long r = custom_removal(s);
                if (r < 0 || r > s.white)
                    throw std::domain_error(
                        "custom strategy: removal must lie between 0 and the white count");
                return r;
            }
        }
        return 0;
    }
};

/// Applies removal to a fixpoint (custom maps may need several rounds).
inline UrnState settle(const StrategySpec& strategy, UrnState s) {
    for (;;) {
        const long r = strategy.removal(s);
        if (r == 0) return s;
        s.white -= r;
    }
}

/// Smallest white count that forces removal when k black balls are present
/// under a q-threshold strategy: ceil(k (1-q)/q), in exact arithmetic.
inline long phi(long k, const Rat& q) {
    if (k < 1) throw std::domain_error("phi: k must be positive");
    if (!(q > 0 && q < 1)) throw std::domain_error("phi: q must lie strictly between 0 and 1");
    const BigInt num = k * (denominator(q) - numerator(q));
    return ceil_div(num, numerator(q)).convert_to<long>();
}

/// White balls a q-threshold strategy removes at the given state:
/// max(W + B - ceil(B/q) + 1, 0), clamped to the white count.
inline long removal_count(const UrnState& s, const Rat& q) {
    return StrategySpec::q_threshold(q).removal(s);
}

/// The step probability entering the q-strategy recursion:
///   p_k^q = C(m, k) / (2 sum_{j=k}^{m} C(m, j) - C(m, k)),  m = phi(k+1)+k-1.
/// Defined for 1/2 <= q < 1; small k can make the ratio degenerate (value 1),
/// which is reported as computed.
inline Rat p_q(long k, const Rat& q) {
    if (k < 1) throw std::domain_error("p_q: k must be positive");
    if (!(q >= Rat(1, 2) && q < 1)) throw std::domain_error("p_q: q must lie in [1/2, 1)");
    const long m = phi(k + 1, q) + k - 1;
    const BigInt center = binomial(m, k);
    BigInt tail = 0;
    {
        BinomRow row(m);
        while (row.index() < k) row.advance();
        for (long j = k; j <= m; ++j) {
            tail += row.value();
            if (j < m) row.advance();
        }
    }
    return Rat(center, 2 * tail - center);
}

/// Values V^q(phi(k), k) for k = 1..k_max under a q-threshold strategy,
/// filled by the recursion
///   V^q(phi(k+1), k+1) = (1-p_k^q)/(1+p_k^q) V^q(phi(k), k)
///                        + (phi(k+1)+k) 2 p_k^q/(1+p_k^q),
/// with V^q(phi(1), 1) = 1. Restricted to 1/2 <= q < 1.
inline std::vector<Rat> v_q_sequence(long k_max, const Rat& q) {
    if (k_max < 1) throw std::domain_error("v_q_sequence: k_max must be positive");
    if (!(q >= Rat(1, 2) && q < 1))
        throw std::domain_error("v_q_sequence: q must lie in [1/2, 1)");
    std::vector<Rat> v(static_cast<std::size_t>(k_max) + 1, Rat(0));
    v[1] = 1;
    for (long k = 1; k < k_max; ++k) {
        const Rat p = p_q(k, q);
        v[static_cast<std::size_t>(k + 1)] = (1 - p) / (1 + p) * v[static_cast<std::size_t>(k)] +
                                             Rat(phi(k + 1, q) + k) * 2 * p / (1 + p);
    }
    return v;
}

enum class Quantity { final_black, time, discounted };

/// Layered dynamic program over total ball count. Draws stay within one
/// total; removals jump strictly downward, so the state graph is acyclic and
/// each total decomposes into bands of removal-free states solvable as one
/// boundary-value problem. The memo persists across queries, so sweeping
/// many states under one strategy costs one pass over the state space.
template <class S>
class Evaluator {
  public:
    Evaluator(StrategySpec strategy, Quantity quantity, S discount)
        : strategy_(std::move(strategy)), quantity_(quantity), discount_(std::move(discount)) {}

    S value(UrnState s) {
        require_valid(s);
        if (s.total() > 3000)
            throw std::invalid_argument(
                "state-space-too-large: exact strategy evaluation is limited to 3000 balls");
        return eval(s);
    }

  private:
    S absorbed_value(const UrnState& s) const {
        if (quantity_ == Quantity::time) return S(0);
        return S(s.black);  // final-black and discounted both pay the black count
    }

    S eval(UrnState s) {
        s = settle(strategy_, s);
        if (s.absorbed()) return absorbed_value(s);
        const long n = s.total();
        auto& layer = memo_[n];
        if (layer.empty()) layer.assign(static_cast<std::size_t>(n) + 1, std::nullopt);
        auto& slot = layer[static_cast<std::size_t>(s.black)];
        if (!slot.has_value()) solve_band(n, s.black);
        return *memo_[n][static_cast<std::size_t>(s.black)];
    }

    /// Value of the state bordering a band (absorbing or removal-triggering).
    S boundary_value(long n, long black) {
        const UrnState s{n - black, black};
        if (s.absorbed()) return absorbed_value(s);
        return eval(s);  // settles to a strictly smaller total
    }

    void solve_band(long n, long black) {
        auto rest = [&](long b) {
            if (b <= 0 || b >= n) return false;
            return strategy_.removal({n - b, b}) == 0;
        };
        long lo = black, hi = black;
        while (rest(lo - 1)) --lo;
        while (rest(hi + 1)) ++hi;

        const S left = boundary_value(n, lo - 1);
        const S right = boundary_value(n, hi + 1);
        auto down_prob = [n](long b) { return S(n - b) / S(n); };

        std::vector<S> band;
        if (quantity_ == Quantity::discounted) {
            band = recursion::solve_discounted_all<S>(lo - 1, hi + 1, down_prob, discount_, left,
                                                      right);
        } else {
            recursion::RecursionProblem<S> prob;
            prob.a = lo - 1;
            prob.b = hi + 1;
            prob.down_prob = down_prob;
            if (quantity_ == Quantity::time)
                prob.step_cost = [](long) { return S(1); };
            prob.left_value = left;
            prob.right_value = right;
            band = recursion::solve_boundary_all(prob);
        }
        auto& layer = memo_[n];
        for (long b = lo; b <= hi; ++b)
            layer[static_cast<std::size_t>(b)] = band[static_cast<std::size_t>(b - lo + 1)];
    }

    StrategySpec strategy_;
    Quantity quantity_;
    S discount_;
    std::map<long, std::vector<std::optional<S>>> memo_;  // total -> values by black count
};

/// Exact expected final black count or expected absorption time from a state
/// under a strategy.
inline Rat exact_value_under_strategy(const UrnState& s, const StrategySpec& strategy,
                                      Quantity quantity) {
    if (quantity == Quantity::discounted)
        throw std::invalid_argument("exact_value_under_strategy: use the discounted overloads");
    Evaluator<Rat> eval(strategy, quantity, Rat(1));
    return eval.value(s);
}

/// Exact discounted value when the per-step factor e^{-mu} is itself an
/// exact rational (mu = 0 gives factor 1 and reduces to the final-black
/// value).
inline Rat exact_discounted_value(const UrnState& s, const StrategySpec& strategy,
                                  const Rat& per_step_discount) {
    Evaluator<Rat> eval(strategy, Quantity::discounted, per_step_discount);
    return eval.value(s);
}

/// Discounted value with per-draw rate mu >= 0, evaluated in floating point
/// (per-step factor e^{-mu} as a double).
inline double discounted_value(const UrnState& s, const StrategySpec& strategy, double mu) {
    if (mu < 0) throw std::domain_error("discounted_value: mu must be nonnegative");
    Evaluator<double> eval(strategy, Quantity::discounted, std::exp(-mu));
    return eval.value(s);
}

}  // namespace mab::strategies
