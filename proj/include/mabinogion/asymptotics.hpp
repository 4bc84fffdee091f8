#pragma once

/**
 * @file asymptotics.hpp
 * @brief Large-count approximations for the absorption quantities and audit
 *        reports comparing them against exact references.
 */

#include <cmath>
#include <optional>
#include <vector>

#include "mabinogion/exact.hpp"
#include "mabinogion/mprocess.hpp"
#include "mabinogion/numeric.hpp"
#include "mabinogion/policy_a.hpp"

namespace mab::asymptotics {

/// Uncontrolled symmetric-start time: (k/2)(ln k + ln 4 + gamma).
inline double approx_time_symmetric(long k) {
    if (k < 1) throw std::domain_error("approx_time_symmetric: k must be positive");
    return 0.5 * double(k) * (std::log(double(k)) + std::log(4.0) + euler_gamma);
}

/// Policy-A symmetric-start final black count: 2k + pi/4 - sqrt(pi k).
inline double approx_final_black_A(long k) {
    if (k < 1) throw std::domain_error("approx_final_black_A: k must be positive");
    const double pi = std::acos(-1.0);
    return 2.0 * double(k) + pi / 4.0 - std::sqrt(pi * double(k));
}

/// Policy-A symmetric-start time:
/// (k/2 + pi/16 - sqrt(pi k)/4)(ln k + ln 4 + gamma) + 3pi/16 - sqrt(pi k)/4 - 1/4.
inline double approx_time_A(long k) {
    if (k < 1) throw std::domain_error("approx_time_A: k must be positive");
    const double pi = std::acos(-1.0);
    const double root = std::sqrt(pi * double(k));
    const double logs = std::log(double(k)) + std::log(4.0) + euler_gamma;
    return (0.5 * double(k) + pi / 16.0 - root / 4.0) * logs + 3.0 * pi / 16.0 - root / 4.0 - 0.25;
}

/// Skewed-start time for black fraction x in (1/2, 1): (N/2) ln(1/(2x-1)).
inline double approx_time_skewed(long N, double x) {
    if (N < 1) throw std::domain_error("approx_time_skewed: N must be positive");
    if (!(x > 0.5 && x < 1.0))
        throw std::domain_error("approx_time_skewed: x must lie strictly between 1/2 and 1");
    return 0.5 * double(N) * std::log(1.0 / (2.0 * x - 1.0));
}

/// Central binomial probability: 1/sqrt(pi k).
inline double approx_central_prob(long k) {
    if (k < 1) throw std::domain_error("approx_central_prob: k must be positive");
    return 1.0 / std::sqrt(std::acos(-1.0) * double(k));
}

struct ApproxReport {
    long parameter = 0;
    std::optional<double> exact;
    double approx = 0.0;
    double abs_err = 0.0;  // only meaningful when exact is present
    double rel_err = 0.0;
};

namespace detail {
inline ApproxReport make_report(long parameter, double exact, double approx) {
    ApproxReport r;
    r.parameter = parameter;
    r.exact = exact;
    r.approx = approx;
    r.abs_err = std::abs(exact - approx);
    r.rel_err = exact != 0.0 ? r.abs_err / std::abs(exact) : r.abs_err;
    return r;
}

/// Exact references come from the rational recursions up to this k; beyond
/// it the same recursions run in floating point with compensated summation.
inline constexpr long kExactReferenceLimit = 200;
}  // namespace detail

inline std::vector<ApproxReport> audit_time_symmetric(long k_min, long k_max) {
    std::vector<ApproxReport> out;
    for (long k = k_min; k <= k_max; ++k) {
        const double exact = k <= detail::kExactReferenceLimit
                                 ? to_real(mproc::expected_time_symmetric(k))
                                 : double(k) * odd_harmonic(k);
        out.push_back(detail::make_report(k, exact, approx_time_symmetric(k)));
    }
    return out;
}

inline std::vector<ApproxReport> audit_final_black_A(long k_min, long k_max) {
    std::vector<ApproxReport> out;
    const long exact_top = std::min(k_max, detail::kExactReferenceLimit);
    const auto seq = policy_a::policy_a_sequences(std::max(exact_top, 1L));
    const auto seq_f = k_max > detail::kExactReferenceLimit
                           ? policy_a::policy_a_sequences_f(k_max)
                           : policy_a::PolicyAFloatSequences{};
    for (long k = k_min; k <= k_max; ++k) {
        const double exact = k <= exact_top ? to_real(seq.v[static_cast<std::size_t>(k)])
                                            : seq_f.v[static_cast<std::size_t>(k)];
        out.push_back(detail::make_report(k, exact, approx_final_black_A(k)));
    }
    return out;
}

inline std::vector<ApproxReport> audit_time_A(long k_min, long k_max) {
    std::vector<ApproxReport> out;
    const long exact_top = std::min(k_max, detail::kExactReferenceLimit);
    const auto seq = policy_a::policy_a_sequences(std::max(exact_top, 1L));
    const auto seq_f = k_max > detail::kExactReferenceLimit
                           ? policy_a::policy_a_sequences_f(k_max)
                           : policy_a::PolicyAFloatSequences{};
    for (long k = k_min; k <= k_max; ++k) {
        const double exact = k <= exact_top ? to_real(seq.t[static_cast<std::size_t>(k)])
                                            : seq_f.t[static_cast<std::size_t>(k)];
        out.push_back(detail::make_report(k, exact, approx_time_A(k)));
    }
    return out;
}

inline std::vector<ApproxReport> audit_central_prob(long k_min, long k_max) {
    std::vector<ApproxReport> out;
    for (long k = k_min; k <= k_max; ++k) {
        // exact rational while the binomial stays modest, log-gamma beyond
        const double exact =
            k <= mproc::kExactTotalLimit / 2 ? to_real(central_prob(k)) : central_prob_f(k);
        out.push_back(detail::make_report(k, exact, approx_central_prob(k)));
    }
    return out;
}

/// Audit of the skewed-start approximation against the exact double-sum time
/// formula (rational up to the exact limit, log-space beyond).
inline ApproxReport audit_time_skewed(long N, double x) {
    const long b = static_cast<long>(std::ceil(x * double(N)));
    const long w = N - b;
    const UrnState s{w, b};
    const double exact =
        N <= mproc::kExactTotalLimit ? to_real(mproc::expected_time(s)) : mproc::expected_time_f(s);
    ApproxReport r = detail::make_report(N, exact, approx_time_skewed(N, x));
    return r;
}

}  // namespace mab::asymptotics
