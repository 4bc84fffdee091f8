#pragma once

/**
 * @file identities.hpp
 * @brief Exact evaluation of two binomial-ratio double sums and the closed
 *        forms they collapse to. Both identities are checked in rational
 *        arithmetic, so a verification run is free of rounding doubt; they
 *        also back the simplified symmetric-start time formulas elsewhere in
 *        the library.
 */

#include <vector>

#include "mabinogion/exact.hpp"

namespace mab::identities {

/// (1/2) * sum_{i=0}^{n-1} 1/(2i+1).
inline Rat half_odd_harmonic(long n) {
    if (n < 1) throw std::domain_error("half_odd_harmonic: n must be positive");
    Rat s = 0;
    for (long i = 0; i < n; ++i) s += Rat(1, 2 * i + 1);
    return s / 2;
}

/// (1/2n) * sum_{j=0}^{n-1} sum_{i=0}^{j} C(2n,i)/C(2n-1,j).
inline Rat double_sum_22_lhs(long n) {
    if (n < 1) throw std::domain_error("double_sum_22_lhs: n must be positive");
    BinomRow upper(2 * n);      // C(2n, i), folded into a prefix sum
    BinomRow lower(2 * n - 1);  // C(2n-1, j)
    BigInt prefix = 0;
    Rat sum = 0;
    for (long j = 0; j < n; ++j) {
        prefix += upper.value();  // extends prefix to include i = j
        upper.advance();
        sum += Rat(prefix, lower.value());
        lower.advance();
    }
    return sum / (2 * n);
}

/// (1/(2n-1)) * sum_{j=0}^{n-2} sum_{i=0}^{j} C(2n-1,i)/C(2n-2,j).
/// The outer range is empty for n = 1, giving 0.
inline Rat double_sum_23_lhs(long n) {
    if (n < 1) throw std::domain_error("double_sum_23_lhs: n must be positive");
    if (n == 1) return 0;
    BinomRow upper(2 * n - 1);
    BinomRow lower(2 * n - 2);
    BigInt prefix = 0;
    Rat sum = 0;
    for (long j = 0; j <= n - 2; ++j) {
        prefix += upper.value();
        upper.advance();
        sum += Rat(prefix, lower.value());
        lower.advance();
    }
    return sum / (2 * n - 1);
}

/// Closed form matching double_sum_23_lhs:
/// half_odd_harmonic(n) - 2^{2n-2} / (n C(2n,n)).
inline Rat double_sum_23_rhs(long n) {
    if (n < 1) throw std::domain_error("double_sum_23_rhs: n must be positive");
    return half_odd_harmonic(n) - Rat(pow2(2 * n - 2), n * binomial(2 * n, n));
}

struct IdentityReport {
    long n = 0;
    int identity = 0;  // 1: harmonic form, 2: harmonic form minus central-binomial deficit
    Rat lhs;
    Rat rhs;
    bool holds = false;
};

/// Compares both double sums against their closed forms for every n up to
/// n_max. A false flag is a finding, not an error.
inline std::vector<IdentityReport> verify_identities(long n_max) {
    if (n_max < 1) throw std::domain_error("verify_identities: n_max must be positive");
    std::vector<IdentityReport> reports;
    reports.reserve(static_cast<std::size_t>(2 * n_max));
    for (long n = 1; n <= n_max; ++n) {
        IdentityReport first{n, 1, double_sum_22_lhs(n), half_odd_harmonic(n), false};
        first.holds = first.lhs == first.rhs;
        reports.push_back(std::move(first));
        IdentityReport second{n, 2, double_sum_23_lhs(n), double_sum_23_rhs(n), false};
        second.holds = second.lhs == second.rhs;
        reports.push_back(std::move(second));
    }
    return reports;
}

}  // namespace mab::identities
