#include "rumour/analytics.hpp"
#include "rumour/cli.hpp"
#include "rumour/distributions.hpp"
#include "rumour/oracle.hpp"
#include "rumour/processes.hpp"

#include <fmt/format.h>

#include <cmath>
#include <functional>
#include <string>

namespace rumour {
namespace {

struct Tally {
    std::ostream& out;
    int failures = 0;
    int checks = 0;

    void check(const std::string& name, const std::function<std::string()>& body)
    {
        ++checks;
        std::string problem;
        try {
            problem = body();
        } catch (const std::exception& e) {
            problem = fmt::format("threw: {}", e.what());
        }
        if (problem.empty()) {
            out << "PASS " << name << "\n";
        } else {
            ++failures;
            out << "FAIL " << name << ": " << problem << "\n";
        }
    }
};

std::string pmf_matches_tail(const RadiusDistribution& d)
{
    for (Radius k = 0; k <= 10000; ++k) {
        const double diff = d.pmf(k) - (d.tail(k) - d.tail(k + 1));
        if (std::fabs(diff) > 1e-12)
            return fmt::format("pmf({}) off by {}", k, diff);
        if (std::fabs(d.strict_cdf(static_cast<double>(k)) + d.tail(k) - 1.0) > 1e-12)
            return fmt::format("strict_cdf + tail != 1 at {}", k);
    }
    return {};
}

std::string sampling_matches_tail(const RadiusDistribution& d)
{
    constexpr std::uint64_t n = 200000;
    SlotStream s(0x5e1f7e57ULL);
    const Radius ks[] = {1, 2, 5, 10};
    std::uint64_t hits[4] = {0, 0, 0, 0};
    for (std::uint64_t i = 0; i < n; ++i) {
        const Radius r = d.sample(s.uniform(i));
        for (int j = 0; j < 4; ++j)
            hits[j] += r >= ks[j] ? 1 : 0;
    }
    for (int j = 0; j < 4; ++j) {
        const double p = d.tail(ks[j]);
        const double f = static_cast<double>(hits[j]) / n;
        const double se = std::sqrt(std::max(p * (1 - p), 1e-12) / n);
        if (std::fabs(f - p) > 4 * se + 1e-12)
            return fmt::format("P(R >= {}): empirical {} vs {}", ks[j], f, p);
    }
    return {};
}

std::string simulators_agree(const RadiusDistribution& d)
{
    const auto sched = DistributionSchedule::homogeneous(d);
    const auto layout = VertexLayout::identity();
    for (std::uint64_t t = 0; t < 2000; ++t) {
        const std::uint64_t key = derive_key(0xa11ce, t);
        SlotStream s1(key), s2(key), s3(key), s4(key);
        if (!(simulate_firework(layout, sched, 60, s1, FireworkMode::frontier) ==
              simulate_firework(layout, sched, 60, s2, FireworkMode::generations)))
            return fmt::format("firework modes differ on trial {}", t);
        if (!(simulate_reverse(sched, 60, std::nullopt, s3, ReverseMode::one_pass) ==
              simulate_reverse(sched, 60, std::nullopt, s4, ReverseMode::sweep)))
            return fmt::format("reverse modes differ on trial {}", t);
    }
    return {};
}

std::string reverse_order_free(const RadiusDistribution& d)
{
    for (std::uint64_t t = 0; t < 500; ++t) {
        SlotStream s(derive_key(0xfeed, t));
        std::vector<Radius> radii(41, 0);
        for (std::uint64_t i = 1; i < radii.size(); ++i)
            radii[i] = d.sample(s.uniform(i));
        if (reverse_fixpoint(radii, false) != reverse_fixpoint(radii, true))
            return fmt::format("scan order changes the closure on trial {}", t);
    }
    return {};
}

std::string horizons_nested(const RadiusDistribution& d)
{
    const auto sched = DistributionSchedule::homogeneous(d);
    const auto layout = VertexLayout::identity();
    for (std::uint64_t t = 0; t < 300; ++t) {
        bool prev = true;
        for (const std::uint64_t h : {10u, 100u, 1000u}) {
            SlotStream s(derive_key(0xbee, t));
            const bool now = simulate_firework(layout, sched, h, s).survived;
            if (now && !prev)
                return fmt::format("trial {} survives to {} but not to a smaller horizon", t, h);
            prev = now;
        }
    }
    return {};
}

std::string a_sequence_monotone(const RadiusDistribution& d)
{
    const auto a = a_sequence(DistributionSchedule::homogeneous(d), 1, 200);
    for (std::size_t n = 1; n < a.size(); ++n) {
        if (a[n] > a[n - 1])
            return fmt::format("a_{} > a_{}", n, n - 1);
    }
    return {};
}

std::string verdicts_consistent(const RadiusDistribution& d)
{
    const auto sched = DistributionSchedule::homogeneous(d);
    const auto f1 = classify_firework_homogeneous(d).classification;
    const auto f2 = classify_firework_heterogeneous(sched, 1, 1).classification;
    if (f1 != f2)
        return fmt::format("firework: {} vs {}", to_string(f1), to_string(f2));
    const auto r1 = classify_reverse_homogeneous(d).classification;
    const auto r2 = classify_reverse_heterogeneous(sched).classification;
    if (r1 != r2)
        return fmt::format("reverse: {} vs {}", to_string(r1), to_string(r2));
    return {};
}

std::string bounds_ordered(const RadiusDistribution& d)
{
    const auto sched = DistributionSchedule::homogeneous(d);
    const auto lo = lower_bound_firework(sched, 1, 200);
    const auto hi = upper_bound_firework_homogeneous(d, 200);
    if (lo.value > hi.value + 1e-12)
        return fmt::format("lower {} above upper {}", lo.value, hi.value);
    if (hi.value + 1e-12 < exact_reach_prob(sched, 1, 50) && upper_bound_firework_homogeneous(d, 50).value + 1e-12 <
                                                               exact_reach_prob(sched, 1, 50))
        return "upper bound below the exact reach probability";
    return {};
}

}  // namespace

int run_selftest(std::ostream& out)
{
    Tally t{out};
    for (const auto& entry : homogeneous_catalog()) {
        const auto& d = entry.law;
        t.check(entry.name + " pmf/tail/cdf", [&] { return pmf_matches_tail(d); });
        t.check(entry.name + " sampling", [&] { return sampling_matches_tail(d); });
        t.check(entry.name + " simulator modes", [&] { return simulators_agree(d); });
        t.check(entry.name + " reverse closure order", [&] { return reverse_order_free(d); });
        t.check(entry.name + " nested horizons", [&] { return horizons_nested(d); });
        t.check(entry.name + " a-sequence monotone", [&] { return a_sequence_monotone(d); });
        t.check(entry.name + " classifier agreement", [&] { return verdicts_consistent(d); });
        t.check(entry.name + " bound ordering", [&] { return bounds_ordered(d); });
    }
    t.check("oracle half/half n=2", [] {
        const auto s = DistributionSchedule::homogeneous(RadiusDistribution::finite({{0, 0.5}, {1, 0.5}}));
        const auto r = oracle_firework(s, VertexLayout::identity(), 2);
        return std::fabs(r.lo - 0.25) < 1e-12 && std::fabs(r.hi - 0.25) < 1e-12
                   ? std::string()
                   : fmt::format("got [{}, {}]", r.lo, r.hi);
    });
    out << fmt::format("{} of {} checks passed\n", t.checks - t.failures, t.checks);
    return t.failures;
}

}  // namespace rumour
