#include "rumour/experiment.hpp"
#include "rumour/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

using namespace rumour;
using nlohmann::json;

namespace {

TrialSpec firework_spec(const RadiusDistribution& d, std::uint64_t horizon)
{
    return TrialSpec{ProcessKind::firework, DistributionSchedule::homogeneous(d), VertexLayout::identity(), horizon};
}

std::string csv_of(const ExperimentConfig& c)
{
    std::ostringstream os;
    write_rows_csv(run_sweep(c), os);
    return os.str();
}

}  // namespace

// Reference intervals: statsmodels proportion_confint(method="wilson").
TEST_CASE("Wilson interval")
{
    struct Ref {
        std::uint64_t s, n;
        double lo, hi;
    };
    const Ref refs[] = {
        {0, 10, 0.0, 0.27753279986288926},
        {10, 10, 0.7224672001371106, 1.0},
        {5, 10, 0.23659309051256394, 0.7634069094874361},
        {1604, 2000, 0.7839638291131115, 0.8188782743290117},
        {1, 100000, 1.7652477303783092e-06, 5.664709659040968e-05},
    };
    for (const auto& r : refs) {
        const auto w = wilson_interval(r.s, r.n);
        CHECK(w.lo == doctest::Approx(r.lo).epsilon(1e-12));
        CHECK(w.hi == doctest::Approx(r.hi).epsilon(1e-12));
    }
}

TEST_CASE("estimates do not depend on the worker count")
{
    const auto spec = firework_spec(RadiusDistribution::power_law(1.5), 300);
    const auto one = survival_indicators(spec, 5000, 42, 1);
    CHECK(survival_indicators(spec, 5000, 42, 3) == one);
    CHECK(survival_indicators(spec, 5000, 42, 8) == one);
    // trial i is a function of (lane, i) only
    for (std::uint64_t t : {0u, 17u, 4999u})
        CHECK(run_one_trial(spec, 42, t).survived == static_cast<bool>(one[t]));
}

TEST_CASE("worker count falls back to the environment")
{
    ::setenv("RUMOUR_SIM_WORKERS", "3", 1);
    CHECK(resolve_workers(0) == 3);
    CHECK(resolve_workers(5) == 5);
    ::setenv("RUMOUR_SIM_WORKERS", "garbage", 1);
    CHECK(resolve_workers(0) >= 1);
    ::unsetenv("RUMOUR_SIM_WORKERS");
}

TEST_CASE("identical configs give byte-identical tables")
{
    auto c = parse_experiment_config(json{{"distribution", {{"kind", "power_law"}, {"alpha", 2}}},
                                          {"trials", 3000},
                                          {"horizon", 200},
                                          {"sweep", {{"param", "alpha"}, {"from", 1.4}, {"to", 2.2}, {"step", 0.4}}}});
    c.workers = 1;
    const auto a = csv_of(c);
    c.workers = 4;
    CHECK(csv_of(c) == a);
    c.seed = 2;
    CHECK(csv_of(c) != a);
}

TEST_CASE("survival indicators are nested in the horizon")
{
    for (const auto& e : homogeneous_catalog()) {
        CAPTURE(e.name);
        const auto s10 = survival_indicators(firework_spec(e.law, 10), 3000, 9, 1);
        const auto s100 = survival_indicators(firework_spec(e.law, 100), 3000, 9, 1);
        const auto s1000 = survival_indicators(firework_spec(e.law, 1000), 3000, 9, 1);
        int violations = 0;
        for (std::size_t i = 0; i < s10.size(); ++i)
            violations += (s100[i] > s10[i]) + (s1000[i] > s100[i]);
        CHECK(violations == 0);
    }
}

TEST_CASE("horizon sweep estimates are nonincreasing")
{
    const auto c = parse_experiment_config(json{{"distribution", {{"kind", "power_law"}, {"alpha", 1.5}}},
                                                {"trials", 4000},
                                                {"sweep", {{"param", "horizon"}, {"values", {10, 100, 1000}}}}});
    // sweep points use separate lanes, so compare with one shared lane instead
    double prev = 1.0;
    for (std::uint64_t h : {10u, 100u, 1000u}) {
        const auto e = estimate_survival(build_trial_spec(config_at(c, "horizon", static_cast<double>(h))), 4000, 5);
        CHECK(e.p_hat <= prev);
        prev = e.p_hat;
    }
    CHECK(run_sweep(c).size() == 3);
}

TEST_CASE("table layout")
{
    auto c = parse_experiment_config(json{{"trials", 10}, {"horizon", 5}});
    const auto rows = run_sweep(c);
    REQUIRE(rows.size() == 1);
    std::ostringstream os;
    write_rows_csv(rows, os);
    const std::string text = os.str();
    CHECK(text.rfind("process,schedule_label,param_name,param_value,horizon,trials,survivors,p_hat,ci_lo,ci_hi,"
                     "verdict,rule,lower_bound,upper_bound,seed,duration_ms\n",
                     0) == 0);
    CHECK(text.find("\"finite{0:0.5,1:0.5}\"") != std::string::npos);
    CHECK(text.find(",,,5,10,") != std::string::npos);
    CHECK(text.substr(text.size() - 3) == ",0\n");

    const auto j = rows_to_json(rows, c);
    CHECK(parse_experiment_config(j["config"]) == c);
    CHECK(j["rows"][0]["trials"] == 10);
    CHECK(j["rows"][0]["report"].contains("bounds"));
}

TEST_CASE("invalid trial counts are rejected")
{
    CHECK_THROWS_AS(estimate_survival(firework_spec(RadiusDistribution::geometric(0.5), 5), 0, 1),
                    std::invalid_argument);
}

TEST_CASE("Wilson interval coverage over repeated seeds on golden instances")
{
    // 100 lanes of 400 trials per instance; the 95% interval should cover the
    // exact value in at least 95 of them up to binomial noise (>= 90 keeps
    // the false-alarm rate below 1%).
    const auto half = DistributionSchedule::homogeneous(RadiusDistribution::finite({{0, 0.5}, {1, 0.5}}));
    const auto pl2 = DistributionSchedule::homogeneous(RadiusDistribution::power_law(2.0));
    const auto geo = DistributionSchedule::homogeneous(RadiusDistribution::geometric(0.5));
    struct Case {
        DistributionSchedule s;
        ProcessKind p;
        std::uint64_t n;
    };
    const Case cases[] = {{half, ProcessKind::firework, 3}, {pl2, ProcessKind::firework, 4},
                          {geo, ProcessKind::reverse, 6}, {pl2, ProcessKind::reverse, 5}};
    for (const auto& k : cases) {
        const double exact = k.p == ProcessKind::firework ? oracle_firework(k.s, VertexLayout::identity(), k.n).lo
                                                          : oracle_reverse(k.s, k.n).lo;
        const TrialSpec spec{k.p, k.s, VertexLayout::identity(), k.n};
        int covered = 0;
        for (std::uint64_t lane = 0; lane < 100; ++lane) {
            const auto e = estimate_survival(spec, 400, derive_key(777, lane), 1);
            covered += e.ci_lo <= exact && exact <= e.ci_hi;
        }
        CAPTURE(exact);
        CHECK(covered >= 90);
    }
}
