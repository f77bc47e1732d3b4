#include <doctest.h>

#include <random>

#include "tvmdp/discount.hpp"

using namespace tvmdp;

TEST_CASE("evaluation per family") {
    auto down = DiscountFunction::down_step(Rational(1, 2), 3);
    CHECK(down(3) == Rational(1, 2));
    CHECK(down(4) == 0);
    CHECK(down(0) == Rational(1, 2));

    auto constant = DiscountFunction::constant(Rational(3, 4));
    CHECK(constant(0) == Rational(3, 4));
    CHECK(constant(BigInt("123456789012345678901234567890")) == Rational(3, 4));

    auto geo = DiscountFunction::geometric_approach(Rational(9, 10), Rational(1, 2), Rational(1, 2));
    CHECK(geo(0) == Rational(2, 5));    // 0.9 - 0.5
    CHECK(geo(2) == Rational(31, 40));  // 0.9 - 0.125 = 0.775

    auto table = DiscountFunction::table({Rational(1, 10), Rational(1, 5)}, Rational(1, 2));
    CHECK(table(0) == Rational(1, 10));
    CHECK(table(1) == Rational(1, 5));
    CHECK(table(2) == Rational(1, 2));
    CHECK(table(1000) == Rational(1, 2));

    auto two = DiscountFunction::two_phase(Rational(1, 10), Rational(4, 5), 0);
    CHECK(two(0) == Rational(1, 10));
    CHECK(two(1) == Rational(4, 5));
}

TEST_CASE("validation rejects out-of-range parameters") {
    CHECK_THROWS_AS(DiscountFunction::constant(Rational(1)), std::invalid_argument);
    CHECK_THROWS_AS(DiscountFunction::constant(Rational(-1, 10)), std::invalid_argument);
    CHECK_THROWS_AS(DiscountFunction::geometric_approach(Rational(1, 2), Rational(0), Rational(1)),
                    std::invalid_argument);
    CHECK_THROWS_AS(DiscountFunction::geometric_approach(Rational(1), Rational(0), Rational(1, 2)),
                    std::invalid_argument);
    // Limit 1 approached from below is fine.
    auto toward_one = DiscountFunction::geometric_approach(Rational(1), Rational(1, 4), Rational(1, 2));
    CHECK(toward_one(0) == Rational(3, 4));
    CHECK(toward_one.limit() == 1);
    // Values below 0 clamp to 0.
    auto clamped = DiscountFunction::geometric_approach(Rational(1, 4), Rational(1, 2), Rational(1, 2));
    CHECK(clamped(0) == 0);
    CHECK(clamped(1) == 0);
    CHECK(clamped(2) == Rational(1, 8));
}

TEST_CASE("limits") {
    CHECK(DiscountFunction::down_step(Rational(1, 2), BigInt("1000000000")).limit() == 0);
    CHECK(DiscountFunction::constant(Rational(3, 10)).limit() == Rational(3, 10));
    CHECK(DiscountFunction::geometric_approach(Rational(9, 10), Rational(1, 2), Rational(1, 2)).limit() ==
          Rational(9, 10));
    CHECK(DiscountFunction::two_phase(Rational(1, 10), Rational(4, 5), 7).limit() == Rational(4, 5));
    CHECK(DiscountFunction::table({Rational(1, 10)}, Rational(2, 5)).limit() == Rational(2, 5));
}

TEST_CASE("convergence oracle: frozen examples") {
    auto down5 = DiscountFunction::down_step(Rational(1, 2), 5);
    CHECK(convergence_oracle(down5, Rational(1, 10)).time == 6);
    CHECK(convergence_oracle(down5, Rational(3, 5)).time == 0);
    CHECK(convergence_oracle(DiscountFunction::constant(Rational(1, 2)), Rational(1, 1000)).time == 0);
    CHECK_THROWS_AS(convergence_oracle(down5, Rational(0)), std::invalid_argument);
}

TEST_CASE("certificate soundness and minimality (property)") {
    std::mt19937_64 rng(17);
    std::vector<DiscountFunction> pool;
    pool.push_back(DiscountFunction::down_step(Rational(1, 2), 5));
    pool.push_back(DiscountFunction::down_step(Rational(9, 10), 12));
    pool.push_back(DiscountFunction::two_phase(Rational(1, 10), Rational(4, 5), 3));
    pool.push_back(DiscountFunction::two_phase(Rational(4, 5), Rational(1, 10), 9));
    pool.push_back(DiscountFunction::geometric_approach(Rational(4, 5), Rational(1, 5), Rational(1, 2)));
    pool.push_back(DiscountFunction::geometric_approach(Rational(1), Rational(1, 4), Rational(3, 4)));
    pool.push_back(DiscountFunction::table({Rational(1, 10), Rational(7, 10), Rational(2, 5)}, Rational(1, 2)));
    std::vector<Rational> deltas{Rational(1, 2), Rational(1, 10), Rational(1, 100), Rational(1, 10000)};
    for (const auto& g : pool) {
        BigInt prev_time(-1);
        for (const auto& delta : deltas) {
            auto cert = convergence_oracle(g, delta);
            // Soundness: sample t in {T..T+1000} and a few large t.
            Rational gT = g(cert.time);
            for (int k = 0; k <= 1000; k += 37) CHECK(abs(g(cert.time + k) - gT) <= delta);
            for (int k = 0; k < 5; ++k) {
                BigInt t = cert.time + BigInt(std::uniform_int_distribution<long>(1000, 2000000)(rng));
                CHECK(abs(g(t) - gT) <= delta);
            }
            // Monotone: smaller delta, later time.
            CHECK(cert.time >= prev_time);
            prev_time = cert.time;
            // Minimality for step and table families: T-1 must violate.
            const bool minimal_family = g.family_name() == "down_step" || g.family_name() == "two_phase" ||
                                        g.family_name() == "table";
            if (minimal_family && cert.time > 0) {
                BigInt earlier = cert.time - 1;
                Rational gE = g(earlier);
                bool violated = false;
                for (int k = 0; k <= 2000 && !violated; ++k)
                    if (abs(g(earlier + k) - gE) > delta) violated = true;
                CHECK(violated);
            }
        }
    }
}

TEST_CASE("log-space oracle agrees with the plain oracle on representable thresholds") {
    std::vector<DiscountFunction> pool;
    pool.push_back(DiscountFunction::down_step(Rational(1, 2), 5));
    pool.push_back(DiscountFunction::two_phase(Rational(1, 10), Rational(4, 5), 3));
    pool.push_back(DiscountFunction::table({Rational(1, 10), Rational(7, 10)}, Rational(1, 2)));
    for (const auto& g : pool) {
        for (long k : {1L, 3L, 10L}) {
            Rational delta{1, 1L << k};
            BigInt plain = convergence_oracle(g, delta).time;
            BigInt logspace = convergence_time_log2(g, Rational(-k));
            CHECK(plain == logspace);
        }
    }
    // Geometric: the log-space time may overshoot but must stay sound.
    auto geo = DiscountFunction::geometric_approach(Rational(4, 5), Rational(1, 5), Rational(1, 2));
    for (long k : {1L, 5L, 20L}) {
        Rational delta{1, 1L << k};
        BigInt t = convergence_time_log2(geo, Rational(-k));
        Rational gT = geo(t);
        for (int j = 0; j <= 500; j += 11) CHECK(abs(geo(t + j) - gT) <= delta);
    }
    // Astronomically small thresholds stay in log space without overflow.
    auto down = DiscountFunction::down_step(Rational(1, 2), 7);
    BigInt huge_neg_exp;
    mpz_ui_pow_ui(huge_neg_exp.get_mpz_t(), 2, 65);
    CHECK(convergence_time_log2(down, Rational(-Rational(huge_neg_exp))) == 8);
}
