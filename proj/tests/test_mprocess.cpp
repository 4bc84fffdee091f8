#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mabinogion/mprocess.hpp"

using namespace mab;
using namespace mab::mproc;

namespace {

recursion::ChainSpec urn_chain(long N) {
    recursion::ChainSpec chain;
    chain.num_states = N + 1;
    chain.transitions = [N](long b) {
        return std::vector<std::pair<long, Rat>>{{b + 1, Rat(b, N)}, {b - 1, Rat(N - b, N)}};
    };
    chain.absorbing = [N](long b) { return b == 0 || b == N; };
    chain.step_cost = [](long) { return Rat(1); };
    chain.terminal_payoff = [](long b) { return Rat(b); };
    return chain;
}

}  // namespace

TEST_CASE("absorption probability in the all-black state") {
    for (long k : {1L, 2L, 5L, 9L}) CHECK(absorb_prob_black({k, k}) == Rat(1, 2));
    CHECK(absorb_prob_black({1, 2}) == Rat(3, 4));
    CHECK(absorb_prob_black({0, 7}) == 1);
    CHECK(absorb_prob_black({7, 0}) == 0);
    CHECK(absorb_prob_black({3, 7}) == Rat(233, 256));
}

TEST_CASE("expected final black count") {
    for (long k = 1; k <= 30; ++k) CHECK(expected_final_black({k, k}) == k);
    CHECK(expected_final_black({1, 2}) == Rat(9, 4));
    CHECK(expected_final_black({5, 0}) == 0);
    CHECK(expected_final_black({0, 5}) == 5);
}

TEST_CASE("expected absorption time") {
    CHECK(expected_time({1, 1}) == 1);
    CHECK(expected_time({1, 2}) == Rat(3, 2));
    CHECK(expected_time({2, 2}) == Rat(8, 3));
    CHECK(expected_time({0, 9}) == 0);
    CHECK(expected_time({9, 0}) == 0);
}

TEST_CASE("symmetric-start closed form") {
    CHECK(expected_time_symmetric(1) == 1);
    CHECK(expected_time_symmetric(2) == Rat(8, 3));
    CHECK(expected_time_symmetric(3) == Rat(23, 5));
    for (long k = 1; k <= 50; ++k)
        REQUIRE(expected_time_symmetric(k) == expected_time({k, k}));
}

TEST_CASE("symmetry and complement identities") {
    for (long w = 1; w <= 12; ++w)
        for (long b = 1; b <= 12; ++b) {
            REQUIRE(expected_time({w, b}) == expected_time({b, w}));
            REQUIRE(absorb_prob_black({w, b}) + absorb_prob_black({b, w}) == 1);
        }
}

TEST_CASE("formulas agree with the chain oracle through 14 balls") {
    for (long N = 2; N <= 14; ++N) {
        const auto chain = urn_chain(N);
        const auto value =
            recursion::brute_force_values(chain, recursion::ChainQuantity::expected_terminal_payoff);
        const auto time =
            recursion::brute_force_values(chain, recursion::ChainQuantity::expected_total_cost);
        for (long b = 0; b <= N; ++b) {
            const UrnState s{N - b, b};
            REQUIRE(expected_final_black(s) == value[static_cast<std::size_t>(b)]);
            REQUIRE(expected_time(s) == time[static_cast<std::size_t>(b)]);
            REQUIRE(absorb_prob_black(s) * N == value[static_cast<std::size_t>(b)]);
        }
    }
}

TEST_CASE("harmonic table") {
    const auto table = harmonic_table(3);
    REQUIRE(table.values.size() == 4);
    CHECK(table.values[0] == 0);
    CHECK(table.values[1] == Rat(1, 4));
    CHECK(table.values[2] == Rat(3, 4));
    CHECK(table.values[3] == 1);

    SECTION("harmonic for the killed chain, strictly increasing") {
        for (long N : {2L, 3L, 17L, 60L}) {
            const auto h = harmonic_table(N);
            CHECK(h.values.front() == 0);
            CHECK(h.values.back() == 1);
            for (long n = 1; n <= N; ++n)
                REQUIRE(h.values[static_cast<std::size_t>(n)] >
                        h.values[static_cast<std::size_t>(n - 1)]);
            for (long n = 1; n < N; ++n)
                REQUIRE(h.values[static_cast<std::size_t>(n)] ==
                        Rat(n, N) * h.values[static_cast<std::size_t>(n + 1)] +
                            Rat(N - n, N) * h.values[static_cast<std::size_t>(n - 1)]);
        }
    }
}

TEST_CASE("conditional transitions") {
    const auto row2 = conditional_transition(2, 3);
    REQUIRE(row2.size() == 2);
    CHECK(row2[0] == std::pair<long, Rat>{3, Rat(8, 9)});
    CHECK(row2[1] == std::pair<long, Rat>{1, Rat(1, 9)});

    const auto row1 = conditional_transition(1, 3);
    REQUIRE(row1.size() == 1);
    CHECK(row1[0] == std::pair<long, Rat>{2, Rat(1)});

    CHECK_THROWS_AS(conditional_transition(0, 3), std::domain_error);

    SECTION("rows sum to one for every interior state") {
        for (long N : {2L, 3L, 25L, 200L})
            for (long n = 1; n < N; ++n) {
                Rat total = 0;
                for (const auto& [to, p] : conditional_transition(n, N)) total += p;
                REQUIRE(total == 1);
            }
    }
}

TEST_CASE("conditional expected time") {
    CHECK(conditional_expected_time({1, 2}) == Rat(5, 4));
    CHECK(conditional_expected_time({0, 4}) == 0);

    SECTION("symmetric starts match the unconditional time") {
        for (long k = 1; k <= 12; ++k)
            REQUIRE(conditional_expected_time({k, k}) == expected_time_symmetric(k));
    }

    SECTION("splitting by absorption color recovers the unconditional time") {
        for (long w = 1; w <= 6; ++w)
            for (long b = 1; b <= 6; ++b) {
                const Rat h = absorb_prob_black({w, b});
                const Rat t_black = conditional_expected_time({w, b});
                const Rat t_white = conditional_expected_time({b, w});
                REQUIRE(t_black * h + t_white * (1 - h) == expected_time({w, b}));
            }
    }
}

TEST_CASE("conditional-vs-plain gap shrinks with the ball count at fixed skew") {
    // quarter white, three quarters black
    double previous = 1e300;
    for (long N : {16L, 32L, 64L}) {
        const UrnState s{N / 4, 3 * N / 4};
        const double gap =
            std::abs(to_real(expected_time(s) - conditional_expected_time(s)));
        REQUIRE(gap < previous);
        previous = gap;
    }
}

TEST_CASE("floating path matches the exact path on overlapping counts") {
    for (long N : {500L, 1000L, 2000L}) {
        for (long b : {N / 4, N / 2 - 1, N / 2 + 3, (3 * N) / 4}) {
            const UrnState s{N - b, b};
            const double exact_p = to_real(absorb_prob_black(s));
            REQUIRE(absorb_prob_black_f(s) == Catch::Approx(exact_p).epsilon(1e-10));
            REQUIRE(expected_final_black_f(s) ==
                    Catch::Approx(to_real(expected_final_black(s))).epsilon(1e-10));
        }
    }
    SECTION("time formula, exact vs log-space") {
        for (long b : {100L, 200L}) {
            const UrnState s{500 - b, b};
            REQUIRE(expected_time_f(s) ==
                    Catch::Approx(to_real(expected_time(s))).epsilon(1e-10));
        }
    }
    SECTION("log h table vs exact harmonic table") {
        const long N = 300;
        const auto exact = harmonic_table(N);
        const auto logs = conditional_log_h(N);
        for (long n = 1; n <= N; ++n) {
            const double reference = std::log(to_real(exact.values[static_cast<std::size_t>(n)]));
            REQUIRE(logs[static_cast<std::size_t>(n)] ==
                    Catch::Approx(reference).margin(1e-9));
        }
    }
}
