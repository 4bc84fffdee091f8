#include <catch2/catch_amalgamated.hpp>

#include "mabinogion/identities.hpp"
#include "mabinogion/policy_a.hpp"

using namespace mab;
using namespace mab::identities;

TEST_CASE("half odd harmonic values") {
    CHECK(half_odd_harmonic(1) == Rat(1, 2));
    CHECK(half_odd_harmonic(2) == Rat(2, 3));
    CHECK(half_odd_harmonic(3) == Rat(23, 30));
    CHECK_THROWS_AS(half_odd_harmonic(0), std::domain_error);
}

TEST_CASE("first double sum: hand values") {
    CHECK(double_sum_22_lhs(1) == Rat(1, 2));
    CHECK(double_sum_22_lhs(2) == Rat(2, 3));
    CHECK(double_sum_22_lhs(3) == Rat(23, 30));
}

TEST_CASE("second double sum: hand values") {
    CHECK(double_sum_23_lhs(1) == 0);
    CHECK(double_sum_23_lhs(2) == Rat(1, 3));
    CHECK(double_sum_23_rhs(1) == 0);
    CHECK(double_sum_23_rhs(2) == Rat(2, 3) - Rat(4, 12));
}

TEST_CASE("brute-force double sums agree with the streamlined evaluation") {
    // literal double loops, independent of the prefix-sum path
    for (long n = 1; n <= 25; ++n) {
        Rat lhs22 = 0;
        for (long j = 0; j <= n - 1; ++j)
            for (long i = 0; i <= j; ++i)
                lhs22 += Rat(binomial(2 * n, i), binomial(2 * n - 1, j));
        lhs22 /= 2 * n;
        REQUIRE(lhs22 == double_sum_22_lhs(n));

        Rat lhs23 = 0;
        for (long j = 0; j <= n - 2; ++j)
            for (long i = 0; i <= j; ++i)
                lhs23 += Rat(binomial(2 * n - 1, i), binomial(2 * n - 2, j));
        lhs23 /= 2 * n - 1;
        REQUIRE(lhs23 == double_sum_23_lhs(n));
    }
}

TEST_CASE("verification run holds through n = 60") {
    const auto reports = verify_identities(60);
    REQUIRE(reports.size() == 120);
    for (const auto& report : reports) {
        INFO("n = " << report.n << " identity " << report.identity);
        CHECK(report.holds);
        CHECK(report.lhs == report.rhs);
    }
}

TEST_CASE("first identity matches the policy-A beta sum at full width") {
    for (long k = 1; k <= 30; ++k) {
        CHECK(double_sum_22_lhs(k) == policy_a::beta(k, k + 1));
        CHECK(half_odd_harmonic(k) == policy_a::beta(k, k + 1));
    }
}
