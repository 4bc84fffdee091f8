#pragma once

/**
 * @file numeric.hpp
 * @brief Floating-point support layer: compensated summation and log-space
 *        evaluation of binomial quantities for ball counts too large for the
 *        exact rational path.
 */

#include <algorithm>
#include <cmath>
#include <limits>

namespace mab {

inline constexpr double euler_gamma = 0.5772156649015329;

/// Kahan-Neumaier compensated accumulator.
struct NeumaierSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }

    double value() const { return sum + comp; }
};

/// log C(n, k); -inf outside the row.
inline double log_binomial(long n, long k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    if (k == 0 || k == n) return 0.0;
    return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
           std::lgamma(double(n - k) + 1.0);
}

inline double logaddexp(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(-std::abs(a - b)));
}

/// Sum of the first k odd reciprocals 1 + 1/3 + ... + 1/(2k-1), compensated.
inline double odd_harmonic(long k) {
    NeumaierSum s;
    for (long i = 0; i < k; ++i) s.add(1.0 / double(2 * i + 1));
    return s.value();
}

/// Central binomial probability 2^{-2k} C(2k, k) in floating point via
/// log-gamma; usable at any k where the exact path would be wasteful.
inline double central_prob_f(long k) {
    if (k == 0) return 1.0;
    return std::exp(log_binomial(2 * k, k) - double(2 * k) * std::log(2.0));
}

}  // namespace mab
