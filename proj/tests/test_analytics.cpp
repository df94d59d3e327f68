#include "rumour/analytics.hpp"
#include "rumour/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace rumour;

namespace {

const double kZ2 = 0.60792710185402663;

RadiusDistribution half_half()
{
    return RadiusDistribution::finite({{0, 0.5}, {1, 0.5}});
}

DistributionSchedule constant(const RadiusDistribution& d)
{
    return DistributionSchedule::homogeneous(d);
}

}  // namespace

TEST_CASE("a-sequence examples")
{
    const auto a = a_sequence(constant(half_half()), 1, 20);
    REQUIRE(a.size() == 21);
    for (double x : a)
        CHECK(x == 0.5);
    for (double x : a_sequence(constant(RadiusDistribution::point_mass(1)), 1, 10))
        CHECK(x == 0.0);
    CHECK(a_sequence(constant(RadiusDistribution::power_law(2.0)), 1, 0)[0] == doctest::Approx(kZ2).epsilon(1e-13));

    // arithmetic layout: a_1 = P(R < m) P(R < 2m)
    const auto g = a_sequence(constant(RadiusDistribution::geometric(0.5)), 2, 1);
    CHECK(g[1] == doctest::Approx((1 - 0.25) * (1 - 0.0625)).epsilon(1e-14));

    // log-space form agrees where a_n does not underflow
    const auto pl = constant(RadiusDistribution::power_law(2.5));
    const auto lin = a_sequence(pl, 1, 200);
    const auto lg = log_a_sequence(pl, 1, 200);
    for (std::size_t n = 0; n < lin.size(); ++n)
        CHECK(std::exp(lg[n]) == doctest::Approx(lin[n]).epsilon(1e-12));
}

TEST_CASE("a-sequence of a heterogeneous schedule follows the defining product")
{
    const auto s = DistributionSchedule::example(ExampleFamily::ex41, BSequence::log_harmonic(1.0));
    const auto a = a_sequence(s, 1, 30);
    for (std::uint64_t n = 0; n <= 30; ++n) {
        double p = 1.0;
        for (std::uint64_t i = 0; i <= n; ++i)
            p *= s.strict_cdf(n - i, static_cast<double>(i + 1));
        CHECK(a[n] == doctest::Approx(p).epsilon(1e-12));
    }
}

TEST_CASE("homogeneous a-sequences are nonincreasing and satisfy the ratio identity")
{
    for (const auto& e : homogeneous_catalog()) {
        CAPTURE(e.name);
        const auto a = a_sequence(constant(e.law), 1, 101);
        for (std::size_t n = 0; n + 1 < a.size(); ++n) {
            CHECK(a[n + 1] <= a[n]);
            if (a[n + 1] > 0) {
                const double lhs = a[n] / a[n + 1] - 1.0;
                const double rhs = e.law.tail(n + 2) / e.law.strict_cdf(static_cast<double>(n + 2));
                CHECK(std::fabs(lhs - rhs) <= 1e-12);
            }
        }
    }
}

TEST_CASE("Raabe classification")
{
    const auto v15 = raabe_classify(RadiusDistribution::power_law(1.5));
    CHECK(v15.classification == Classification::Survives);
    CHECK(v15.tier == Tier::analytic);
    CHECK(std::isinf(v15.evidence.at("L")));

    const auto v2 = raabe_classify(RadiusDistribution::power_law(2.0));
    CHECK(v2.classification == Classification::Dies);
    CHECK(v2.evidence.at("L") == doctest::Approx(kZ2).epsilon(1e-12));

    const auto crit = raabe_classify(RadiusDistribution::critical_tail());
    CHECK(crit.classification == Classification::Dies);
    CHECK_FALSE(crit.rule.empty());

    // numeric tier on a bare tail function: L = 3 and L = 0.2
    const auto up = raabe_classify([](std::uint64_t n) { return n == 0 ? 1.0 : std::min(1.0, 3.0 / n); });
    CHECK(up.classification == Classification::Survives);
    CHECK(up.tier == Tier::numeric);
    const auto down = raabe_classify([](std::uint64_t n) { return n == 0 ? 1.0 : 0.2 / n; });
    CHECK(down.classification == Classification::Dies);
    // L = 1 with tails above 1/(n-1): no rule applies
    const auto edge = raabe_classify([](std::uint64_t n) { return n < 2 ? 1.0 : std::min(1.0, 1.0 / (n - 1.5)); });
    CHECK(edge.classification == Classification::Inconclusive);
    CHECK(edge.rule.empty());
}

TEST_CASE("homogeneous firework verdicts")
{
    CHECK(classify_firework_homogeneous(half_half()).classification == Classification::Dies);
    for (double alpha : {1.2, 1.5, 1.8})
        CHECK(classify_firework_homogeneous(RadiusDistribution::power_law(alpha)).classification ==
              Classification::Survives);
    for (double alpha : {2.0, 2.5, 3.0}) {
        const auto v = classify_firework_homogeneous(RadiusDistribution::power_law(alpha));
        CHECK(v.classification == Classification::Dies);
        CHECK(v.tier == Tier::analytic);
    }
    CHECK(classify_firework_homogeneous(RadiusDistribution::point_mass(0)).classification == Classification::Dies);
    const auto sure = classify_firework_homogeneous(RadiusDistribution::point_mass(2));
    CHECK(sure.classification == Classification::Survives);
    CHECK(sure.rule == "degenerate_certain_survival");
    CHECK(classify_firework_homogeneous(RadiusDistribution::critical_tail()).classification ==
          Classification::Survives);
}

TEST_CASE("exact reach probability")
{
    const auto hh = constant(half_half());
    CHECK(exact_reach_prob(hh, 1, 3) == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(exact_reach_prob(hh, 1, 0) == 1.0);
    for (std::uint64_t n = 0; n <= 10; ++n)
        CHECK(exact_reach_prob(hh, 1, n) == doctest::Approx(std::ldexp(1.0, -static_cast<int>(n))).epsilon(1e-14));
    CHECK(exact_reach_prob(constant(RadiusDistribution::power_law(2.0)), 1, 1) ==
          doctest::Approx(1 - kZ2).epsilon(1e-13));
    CHECK(exact_reach_prob(hh, VertexLayout::arithmetic(2), 3) == exact_reach_prob(hh, 2, 3));
    CHECK_THROWS_AS(exact_reach_prob(hh, VertexLayout::table({0, 1, 3}, 2), 2), std::invalid_argument);
}

TEST_CASE("exact reach probability against enumeration")
{
    // {0,1}-supported laws cannot jump, so the product is exact.
    const DistributionSchedule exact[] = {
        constant(half_half()),
        constant(RadiusDistribution::finite({{0, 0.3}, {1, 0.7}})),
        DistributionSchedule::from_table({RadiusDistribution::finite({{0, 0.1}, {1, 0.9}}), half_half(),
                                          RadiusDistribution::finite({{0, 0.6}, {1, 0.4}})}),
    };
    for (const auto& s : exact) {
        for (std::uint64_t n = 1; n <= 6; ++n) {
            const auto o = oracle_firework(s, VertexLayout::identity(), n);
            CHECK(std::fabs(exact_reach_prob(s, 1, n) - o.lo) <= 1e-10);
        }
    }
    // Laws that jump: the product is a lower bound.
    const DistributionSchedule jumpy[] = {
        constant(RadiusDistribution::finite({{0, 0.5}, {2, 0.5}})),
        constant(RadiusDistribution::finite({{0, 0.25}, {1, 0.25}, {2, 0.25}, {3, 0.25}})),
    };
    for (const auto& s : jumpy) {
        for (std::uint64_t n = 1; n <= 6; ++n)
            CHECK(exact_reach_prob(s, 1, n) <= oracle_firework(s, VertexLayout::identity(), n).lo + 1e-12);
    }
    CHECK(exact_reach_prob(jumpy[0], 1, 2) == doctest::Approx(0.375));
    CHECK(oracle_firework(jumpy[0], VertexLayout::identity(), 2).lo == doctest::Approx(0.5));
}

TEST_CASE("firework lower bound")
{
    const auto hh = lower_bound_firework(constant(half_half()), 1, 1000);
    CHECK(hh.value == 0.0);

    const auto p15 = lower_bound_firework(constant(RadiusDistribution::power_law(1.5)), 1, 10000);
    CHECK(p15.value > 0.0);
    CHECK(p15.value <= p15.truncated_value);
    CHECK(p15.rigor == Rigor::rigorous);
    CHECK(std::isfinite(p15.tail_mass_bound));

    const auto sure = lower_bound_firework(constant(RadiusDistribution::point_mass(1)), 1, 0);
    CHECK(sure.value == 1.0);

    // nonincreasing in depth
    for (const auto& e : homogeneous_catalog()) {
        CAPTURE(e.name);
        double prev = 2.0;
        for (std::uint64_t J : {0u, 1u, 5u, 50u, 500u, 2000u}) {
            const double v = lower_bound_firework(constant(e.law), 1, J).truncated_value;
            CHECK(v <= prev);
            prev = v;
        }
    }
}

TEST_CASE("firework upper bound")
{
    CHECK(upper_bound_firework_homogeneous(half_half(), 1).value == doctest::Approx(0.25));
    CHECK(upper_bound_firework_homogeneous(RadiusDistribution::point_mass(0), 1).value == 0.0);
    CHECK(upper_bound_firework_homogeneous(RadiusDistribution::power_law(2.0), 1).value ==
          doctest::Approx(1 - kZ2 - kZ2 * kZ2 / 4).epsilon(1e-12));
    CHECK(upper_bound_firework_homogeneous(RadiusDistribution::power_law(2.0), 1).value ==
          doctest::Approx(0.2999).epsilon(1e-3));
    for (const auto& e : homogeneous_catalog()) {
        CAPTURE(e.name);
        double prev = 2.0;
        for (std::uint64_t n : {1u, 2u, 10u, 50u, 400u}) {
            const double v = upper_bound_firework_homogeneous(e.law, n).value;
            CHECK(v <= prev + 1e-15);
            prev = v;
        }
        CHECK(upper_bound_firework_homogeneous(e.law, 50).value + 1e-12 >= exact_reach_prob(constant(e.law), 1, 50));
    }
}

TEST_CASE("bound sandwich against enumeration on finite laws")
{
    const RadiusDistribution laws[] = {
        half_half(), RadiusDistribution::finite({{0, 0.2}, {1, 0.3}, {3, 0.5}}),
        RadiusDistribution::finite({{0, 0.5}, {2, 0.5}}), RadiusDistribution::finite({{0, 0.1}, {2, 0.9}})};
    for (const auto& d : laws) {
        for (std::uint64_t n = 1; n <= 6; ++n) {
            const auto o = oracle_firework(constant(d), VertexLayout::identity(), n);
            CHECK(lower_bound_firework(constant(d), 1, n).value <= o.lo + 1e-12);
        }
    }
}

TEST_CASE("heterogeneous reach upper bound")
{
    const auto b = BSequence::log_harmonic(1.0);
    const auto ex41 = DistributionSchedule::example(ExampleFamily::ex41, b);
    const auto ex43 = DistributionSchedule::example(ExampleFamily::ex43, b);
    for (std::uint64_t n : {1u, 2u, 7u, 40u, 200u}) {
        CHECK(upper_bound_reach_heterogeneous(ex41, n) == doctest::Approx(std::min(1.0, n * b(n - 1))).epsilon(1e-12));
        double s = 0.0;
        for (std::uint64_t k = (n + 1) / 2; k < n; ++k)
            s += b(k);
        CHECK(upper_bound_reach_heterogeneous(ex43, n) == doctest::Approx(std::min(1.0, s)).epsilon(1e-12));
    }
    CHECK(upper_bound_reach_heterogeneous(constant(half_half()), 1) == 0.5);
}

TEST_CASE("heterogeneous firework verdicts")
{
    const auto sq = BSequence::inverse_square(0.5);
    const auto v42 = classify_firework_heterogeneous(DistributionSchedule::example(ExampleFamily::ex42, sq), 1, 1);
    CHECK(v42.classification == Classification::Survives);
    CHECK(v42.rule == "summable_radius_deficit");

    const auto lh = BSequence::log_harmonic(1.0);
    const auto v41 = classify_firework_heterogeneous(DistributionSchedule::example(ExampleFamily::ex41, lh), 1, 1);
    CHECK(v41.classification == Classification::Dies);
    CHECK(v41.rule == "reach_upper_bound_vanishes");
    CHECK(classify_firework_heterogeneous(DistributionSchedule::example(ExampleFamily::ex43, lh), 1, 1)
              .classification == Classification::Dies);

    // any schedule dominated by {0:1/2, 1:1/2}
    const auto table = DistributionSchedule::from_table(
        {RadiusDistribution::finite({{0, 0.7}, {1, 0.3}}), RadiusDistribution::point_mass(0), half_half()});
    const auto dom = classify_firework_heterogeneous(table, 1, 1,
                                                     Domination{half_half(), Domination::Direction::above, {}});
    CHECK(dom.classification == Classification::Dies);
    CHECK(dom.rule == "coupling_dominated_above");
    // a false domination claim is caught
    CHECK_THROWS_AS(classify_firework_heterogeneous(table, 1, 1,
                                                    Domination{RadiusDistribution::point_mass(0),
                                                               Domination::Direction::above, {}}),
                    std::invalid_argument);

    CHECK_THROWS_AS(classify_firework_heterogeneous(table, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(classify_firework_heterogeneous(table, 1, 0), std::invalid_argument);
}

TEST_CASE("reverse verdicts")
{
    CHECK(classify_reverse_homogeneous(RadiusDistribution::power_law(2.0)).classification ==
          Classification::SurvivesAlmostSurely);
    CHECK(classify_reverse_homogeneous(RadiusDistribution::power_law(1.5)).classification ==
          Classification::SurvivesAlmostSurely);
    CHECK(classify_reverse_homogeneous(RadiusDistribution::power_law(2.5)).classification == Classification::Dies);
    CHECK(classify_reverse_homogeneous(RadiusDistribution::power_law(3.0)).classification == Classification::Dies);
    CHECK(classify_reverse_homogeneous(half_half()).classification == Classification::Dies);

    const auto lh = BSequence::log_harmonic(1.0);
    const auto v43 = classify_reverse_heterogeneous(DistributionSchedule::example(ExampleFamily::ex43, lh));
    CHECK(v43.classification == Classification::SurvivesAlmostSurely);
    CHECK(v43.tier == Tier::analytic);
    CHECK(classify_reverse_heterogeneous(constant(RadiusDistribution::power_law(2.0))).classification ==
          Classification::SurvivesAlmostSurely);
    CHECK(classify_reverse_heterogeneous(constant(half_half())).classification == Classification::Dies);

    const auto v42 = classify_reverse_heterogeneous(
        DistributionSchedule::example(ExampleFamily::ex42, BSequence::inverse_square(0.5)));
    CHECK(v42.classification == Classification::Survives);
    CHECK(std::isfinite(v42.evidence.at("rho")));
}

TEST_CASE("classifiers agree on constant schedules")
{
    for (const auto& e : homogeneous_catalog()) {
        CAPTURE(e.name);
        CHECK(classify_firework_homogeneous(e.law).classification ==
              classify_firework_heterogeneous(constant(e.law), 1, 1).classification);
        CHECK(classify_reverse_homogeneous(e.law).classification ==
              classify_reverse_heterogeneous(constant(e.law)).classification);
    }
}

TEST_CASE("reverse lower bound")
{
    CHECK(lower_bound_reverse(constant(RadiusDistribution::point_mass(0)), 10, 10).value == 0.0);
    // K = 1: every factor is tail(1) = 1/2
    const auto hh = lower_bound_reverse(constant(half_half()), 5, 1);
    CHECK(hh.truncated_value == doctest::Approx(std::pow(0.5, 6)).epsilon(1e-12));
    CHECK(lower_bound_reverse(constant(half_half()), 1000, 1).value == 0.0);

    const auto p2 = lower_bound_reverse(constant(RadiusDistribution::power_law(2.0)), 1000, 1000);
    CHECK(p2.value >= 0.0);
    CHECK(p2.value <= 1.0);
    CHECK(p2.truncated_value > 0.0);
}

TEST_CASE("serialized reports carry every section")
{
    const auto d = RadiusDistribution::power_law(2.0);
    const auto v = classify_firework_homogeneous(d);
    const BoundsReport br{lower_bound_firework(constant(d), 1, 100), upper_bound_firework_homogeneous(d, 100)};
    const auto j = report_json(v, br);
    for (const char* key : {"verdict", "rule", "evidence", "bounds", "truncation"})
        CHECK(j.contains(key));
    CHECK(j["verdict"] == "Dies");
    CHECK(j["evidence"]["mean"] == "inf");
    CHECK(j["bounds"]["lower"]["rigor"] == "rigorous");
}
