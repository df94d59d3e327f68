#include "rumour/distributions.hpp"
#include "rumour/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

using namespace rumour;

namespace {
const double kZ2 = 0.60792710185402663;  // 6 / pi^2
}

// Power-law references: Z = 1/zeta(alpha), tail(k) = Z * hurwitz_zeta(alpha, k+1),
// evaluated with mpmath at 40 digits.
TEST_CASE("power law normalizer and tails against high-precision values")
{
    struct Ref {
        double alpha, z;
        std::uint64_t k[4];
        double tail[4];
    };
    const Ref refs[] = {
        {1.5, 0.38279338399942656, {1, 10, 1000, 1000000},
         {0.61720661600057344, 0.23619839149468784, 0.024203928351922931, 0.00076558657660220897}},
        {2.0, kZ2, {1, 10, 1000, 1000000},
         {0.39207289814597337, 0.057854194645034659, 0.00060762323962426299, 6.0792679789057702e-7}},
        {2.5, 0.74544129628877717, {1, 10, 1000, 1000000},
         {0.25455870371122283, 0.014585618632310556, 1.5703500837373072e-5, 4.9696049147202527e-10}},
        {3.0, 0.83190737258070747, {1, 10, 1000, 1000000},
         {0.16809262741929253, 0.0037643122164244757, 4.155379405808372e-7, 4.1595327033687542e-13}},
    };
    for (const auto& r : refs) {
        const auto d = RadiusDistribution::power_law(r.alpha);
        CAPTURE(r.alpha);
        CHECK(d.power_law_params()->normalizer == doctest::Approx(r.z).epsilon(1e-13));
        CHECK(d.pmf(0) == doctest::Approx(r.z).epsilon(1e-13));
        CHECK(d.tail(0) == 1.0);
        for (int i = 0; i < 4; ++i) {
            CAPTURE(r.k[i]);
            CHECK(std::fabs(d.tail(r.k[i]) - r.tail[i]) <= 1e-12);
            CHECK(d.tail(r.k[i]) == doctest::Approx(r.tail[i]).epsilon(1e-9));
        }
    }
    CHECK(RadiusDistribution::power_law(1.01).pmf(0) == doctest::Approx(0.0099425377653078762).epsilon(1e-11));
}

TEST_CASE("catalog examples")
{
    const auto half = RadiusDistribution::finite({{0, 0.5}, {1, 0.5}});
    CHECK(half.strict_cdf(1) == 0.5);
    CHECK(half.strict_cdf(2) == 1.0);
    CHECK(half.strict_cdf(0.5) == 0.5);
    CHECK(half.sample(0.25) == 0);
    CHECK(half.sample(0.75) == 1);
    CHECK(half.mean().finite);
    CHECK(half.mean().value == 0.5);

    CHECK(RadiusDistribution::geometric(0.5).tail(3) == 0.125);

    const auto p2 = RadiusDistribution::power_law(2.0);
    CHECK(p2.tail(1) == doctest::Approx(1 - kZ2).epsilon(1e-13));
    CHECK(p2.strict_cdf(1) == doctest::Approx(kZ2).epsilon(1e-13));
    CHECK(p2.sample(0.607) == 0);
    CHECK(p2.sample(0.608) == 1);
    CHECK_FALSE(p2.mean().finite);
    CHECK(RadiusDistribution::power_law(3.0).mean().finite);
    CHECK_FALSE(RadiusDistribution::power_law(1.5).mean().finite);
    // E[R] = sum_{k>=1} tail(k) = Z3 (zeta(2) - zeta(3))
    CHECK(RadiusDistribution::power_law(3.0).mean().value ==
          doctest::Approx(0.83190737258070747 * (1.6449340668482264 - 1.2020569031595943)).epsilon(1e-9));
    CHECK_FALSE(RadiusDistribution::critical_tail().mean().finite);
}

TEST_CASE("alpha = 2 limit anchor")
{
    const auto d = RadiusDistribution::power_law(2.0);
    CHECK(std::fabs(10000.0 * d.tail(10000) - kZ2) <= 1e-3);
    const auto L = d.raabe_limit();
    REQUIRE(L);
    CHECK(L->value == doctest::Approx(kZ2).epsilon(1e-12));
}

TEST_CASE("power law integral bracket")
{
    for (double alpha : {1.5, 2.0, 2.5}) {
        const auto d = RadiusDistribution::power_law(alpha);
        const double z = d.power_law_params()->normalizer;
        for (std::uint64_t n = 1; n <= 10000; ++n) {
            const double t = d.tail(n);
            const double lo = z / ((alpha - 1) * std::pow(n + 1.0, alpha - 1));
            const double hi = z / ((alpha - 1) * std::pow(static_cast<double>(n), alpha - 1));
            if (!(lo <= t * (1 + 1e-12) && t <= hi * (1 + 1e-12))) {
                FAIL_CHECK("bracket violated at alpha=" << alpha << " n=" << n);
                break;
            }
        }
    }
}

TEST_CASE("catalog-wide tail identities")
{
    for (const auto& e : homogeneous_catalog()) {
        CAPTURE(e.name);
        const auto& d = e.law;
        CHECK(d.tail(0) == 1.0);
        double sum = 0.0, prev = 1.0;
        bool ok = true;
        for (Radius k = 0; k <= 10000 && ok; ++k) {
            const double t = d.tail(k);
            ok = t <= prev && t >= 0.0 && std::fabs(d.pmf(k) - (t - d.tail(k + 1))) <= 1e-12 &&
                 std::fabs(d.strict_cdf(static_cast<double>(k)) + t - 1.0) <= 1e-12 && d.pmf(k) >= 0.0;
            prev = t;
            sum += d.pmf(k);
        }
        CHECK(ok);
        CHECK(sum + d.tail(10001) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("sampling frequencies match tails")
{
    constexpr std::uint64_t n = 1000000;
    for (const auto& e : homogeneous_catalog()) {
        CAPTURE(e.name);
        SlotStream s(derive_key(99, 1));
        const Radius ks[] = {1, 2, 5, 10};
        std::uint64_t hits[4] = {};
        for (std::uint64_t i = 0; i < n; ++i) {
            const Radius r = e.law.sample(s.uniform(i));
            for (int j = 0; j < 4; ++j)
                hits[j] += r >= ks[j];
        }
        for (int j = 0; j < 4; ++j) {
            const double p = e.law.tail(ks[j]);
            const double se = std::sqrt(p * (1 - p) / n);
            CHECK(std::fabs(static_cast<double>(hits[j]) / n - p) <= 4 * se + 1e-15);
        }
    }
}

TEST_CASE("sample is the inverse of the distribution function")
{
    for (const auto& e : homogeneous_catalog()) {
        CAPTURE(e.name);
        for (double u : {1e-9, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999999, 1 - 1e-12}) {
            const Radius k = e.law.sample(u);
            // smallest k with P(R >= k+1) <= 1-u, compared on the tail side
            CHECK((k == kRadiusCap || e.law.tail(k + 1) <= 1.0 - u));
            if (k > 0)
                CHECK(e.law.tail(k) > 1.0 - u);
        }
        CHECK_THROWS_AS(e.law.sample(0.0), std::domain_error);
        CHECK_THROWS_AS(e.law.sample(1.0), std::domain_error);
    }
}

TEST_CASE("heavy tails saturate rather than overflow")
{
    const auto d = RadiusDistribution::power_law(1.01);
    const Radius r = d.sample(1 - 0x1p-53);
    CHECK(r > 1000000);
    CHECK(r <= kRadiusCap);
}

TEST_CASE("constructor preconditions")
{
    CHECK_THROWS_AS(RadiusDistribution::power_law(1.0), std::invalid_argument);
    CHECK_THROWS_AS(RadiusDistribution::geometric(1.0), std::invalid_argument);
    CHECK_THROWS_AS(RadiusDistribution::finite({{0, 0.5}, {1, 0.4}}), std::invalid_argument);
    CHECK_THROWS_AS(BSequence::table({0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(BSequence::table({1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("b-sequences and example schedules")
{
    const auto b = BSequence::log_harmonic(1.0);
    CHECK(b(0) == doctest::Approx(1.0 / (2.0 * std::log(2.0))).epsilon(1e-14));
    CHECK(b(0) == doctest::Approx(0.7213).epsilon(1e-4));
    CHECK(b.sum_diverges());
    CHECK_FALSE(BSequence::inverse_square(0.5).sum_diverges());

    const auto ex41 = DistributionSchedule::example(ExampleFamily::ex41, b);
    for (std::uint64_t n : {0u, 1u, 7u, 100u}) {
        CHECK(ex41.tail(n, 1) == doctest::Approx(b(n)).epsilon(1e-14));
        CHECK(ex41.tail(n, 5) == doctest::Approx(b(n + 4)).epsilon(1e-14));
        CHECK(ex41.law(n).pmf(0) == doctest::Approx(1 - b(n)).epsilon(1e-14));
    }
    const auto sq = BSequence::inverse_square(0.5);
    const auto ex42 = DistributionSchedule::example(ExampleFamily::ex42, sq);
    CHECK(ex42.law(3).pmf(0) == doctest::Approx(sq(3)));
    CHECK(ex42.law(3).pmf(1) == doctest::Approx(1 - sq(3)));
    CHECK(ex42.tail(3, 2) == 0.0);

    const auto ex43 = DistributionSchedule::example(ExampleFamily::ex43, b);
    CHECK(ex43.law(0).pmf(0) == 1.0);
    CHECK(ex43.law(5).pmf(5) == doctest::Approx(b(5)));
    CHECK(ex43.law(5).pmf(0) == doctest::Approx(1 - b(5)));
    CHECK(ex43.tail(5, 3) == doctest::Approx(b(5)));
    CHECK(ex43.tail(5, 6) == 0.0);
}

TEST_CASE("schedules are deterministic and shareable across threads")
{
    const auto sched = DistributionSchedule::homogeneous(RadiusDistribution::power_law(1.5));
    CHECK(sched.is_homogeneous());
    CHECK(sched.tail(0, 17) == sched.tail(123456, 17));
    std::vector<double> results(4);
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t)
        pool.emplace_back([&, t] { results[t] = sched.tail(0, 5000 + 1000 * t) + sched.law(t).tail(900000); });
    for (auto& th : pool)
        th.join();
    for (int t = 0; t < 4; ++t)
        CHECK(results[t] == sched.tail(0, 5000 + 1000 * t) + sched.tail(0, 900000));
}
