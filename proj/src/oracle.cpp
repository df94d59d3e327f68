#include "rumour/oracle.hpp"

#include "rumour/numeric.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <deque>

namespace rumour {

double TruncatedSchedule::total_truncated_mass() const
{
    CompensatedSum s;
    for (const double x : truncated_mass)
        s += x;
    return s.value();
}

BudgetExceeded::BudgetExceeded(std::uint64_t req, std::uint64_t budget)
    : std::runtime_error(
          fmt::format("oracle state space needs {} assignments, budget is {}", req, budget)),
      required(req)
{
}

namespace {

// Atoms 0..distance-1 individually, plus P(R >= distance) at `distance`.
// Stops early once the remaining tail drops below `cut`.
std::vector<std::pair<Radius, double>> lumped_atoms(const RadiusDistribution& law, Radius distance, double cut,
                                                    double& truncated)
{
    std::vector<std::pair<Radius, double>> atoms;
    truncated = 0.0;
    for (Radius k = 0; k < distance; ++k) {
        const double tk = law.tail(k);
        if (tk == 0.0)
            return atoms;
        if (k > 0 && tk < cut) {
            truncated = tk;
            return atoms;
        }
        const double p = law.pmf(k);
        if (p > 0.0)
            atoms.emplace_back(k, p);
    }
    const double rest = law.tail(distance);
    if (rest > 0.0)
        atoms.emplace_back(distance, rest);
    return atoms;
}

void check_n(std::uint64_t n)
{
    if (n > kOracleMaxN)
        throw std::invalid_argument(fmt::format("oracle handles n <= {} (got {})", kOracleMaxN, n));
}

std::uint64_t state_count(const TruncatedSchedule& ts, std::uint64_t first, std::uint64_t last)
{
    std::uint64_t total = 1;
    for (std::uint64_t i = first; i <= last; ++i) {
        const std::uint64_t s = ts.support.at(i).size();
        if (s == 0)
            return 0;
        if (total > kOracleBudget * 16 / s)
            return kOracleBudget * 16;  // saturate; already over budget
        total *= s;
    }
    return total;
}

// Mixed-radix odometer over vertices first..last. visit(radii, prob).
template <class Visit>
std::uint64_t enumerate(const TruncatedSchedule& ts, std::uint64_t first, std::uint64_t last, std::size_t width,
                        Visit&& visit)
{
    const std::uint64_t count = state_count(ts, first, last);
    if (count > kOracleBudget)
        throw BudgetExceeded(count, kOracleBudget);
    if (count == 0)
        return 0;
    std::vector<std::size_t> digit(width, 0);
    std::vector<Radius> radii(width, 0);
    for (std::uint64_t it = 0; it < count; ++it) {
        double p = 1.0;
        for (std::uint64_t i = first; i <= last; ++i) {
            const auto& atom = ts.support[i][digit[i]];
            radii[i] = atom.first;
            p *= atom.second;
        }
        visit(radii, p);
        for (std::uint64_t i = first; i <= last; ++i) {
            if (++digit[i] < ts.support[i].size())
                break;
            digit[i] = 0;
        }
    }
    return count;
}

}  // namespace

TruncatedSchedule truncate_for_firework(const DistributionSchedule& schedule, const VertexLayout& layout,
                                        std::uint64_t n, double tail_cut)
{
    check_n(n);
    TruncatedSchedule ts;
    const std::uint64_t target = layout.position(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        double lost = 0.0;
        ts.support.push_back(lumped_atoms(schedule.law(i), target - layout.position(i), tail_cut, lost));
        ts.truncated_mass.push_back(lost);
    }
    return ts;
}

TruncatedSchedule truncate_for_reverse(const DistributionSchedule& schedule, std::uint64_t n, double tail_cut)
{
    check_n(n);
    TruncatedSchedule ts;
    ts.support.emplace_back();
    ts.truncated_mass.push_back(0.0);
    for (std::uint64_t k = 1; k <= n; ++k) {
        double lost = 0.0;
        ts.support.push_back(lumped_atoms(schedule.law(k), k, tail_cut, lost));
        ts.truncated_mass.push_back(lost);
    }
    return ts;
}

ReachInterval brute_force_firework_reach(const TruncatedSchedule& ts, const VertexLayout& layout, std::uint64_t n)
{
    check_n(n);
    ReachInterval out;
    if (n == 0) {
        out.lo = out.hi = 1.0;
        return out;
    }
    if (ts.support.size() < n)
        throw std::invalid_argument("truncated schedule does not cover vertices 0..n-1");
    std::vector<std::uint64_t> pos(n + 1);
    for (std::uint64_t i = 0; i <= n; ++i)
        pos[i] = layout.position(i);

    CompensatedSum hit;
    std::vector<char> active(n + 1);
    std::deque<std::uint64_t> queue;
    out.assignments = enumerate(ts, 0, n - 1, n, [&](const std::vector<Radius>& r, double p) {
        // Each activated vertex explodes once and lights every vertex in
        // (u_j, u_j + R_j].
        std::fill(active.begin(), active.end(), 0);
        active[0] = 1;
        queue.assign(1, 0);
        while (!queue.empty() && !active[n]) {
            const std::uint64_t j = queue.front();
            queue.pop_front();
            for (std::uint64_t i = 0; i <= n; ++i) {
                if (!active[i] && pos[i] > pos[j] && pos[i] - pos[j] <= r[j]) {
                    active[i] = 1;
                    if (i < n)
                        queue.push_back(i);
                }
            }
        }
        if (active[n])
            hit += p;
    });
    out.truncated_mass = ts.total_truncated_mass();
    out.lo = hit.value();
    out.hi = std::min(1.0, out.lo + out.truncated_mass);
    return out;
}

ReachInterval brute_force_reverse_reach(const TruncatedSchedule& ts, std::uint64_t n)
{
    check_n(n);
    ReachInterval out;
    if (n == 0) {
        out.lo = out.hi = 1.0;
        return out;
    }
    if (ts.support.size() < n + 1)
        throw std::invalid_argument("truncated schedule does not cover vertices 1..n");
    CompensatedSum hit;
    std::vector<char> active(n + 1);
    out.assignments = enumerate(ts, 1, n, n + 1, [&](const std::vector<Radius>& r, double p) {
        // Closure: repeat full passes until nothing changes.
        std::fill(active.begin(), active.end(), 0);
        active[0] = 1;
        for (bool changed = true; changed;) {
            changed = false;
            for (std::uint64_t k = 1; k <= n; ++k) {
                if (active[k])
                    continue;
                for (std::uint64_t v = 0; v < k; ++v) {
                    if (active[v] && k - v <= r[k]) {
                        active[k] = 1;
                        changed = true;
                        break;
                    }
                }
            }
        }
        if (active[n])
            hit += p;
    });
    out.truncated_mass = ts.total_truncated_mass();
    out.lo = hit.value();
    out.hi = std::min(1.0, out.lo + out.truncated_mass);
    return out;
}

ReachInterval oracle_firework(const DistributionSchedule& schedule, const VertexLayout& layout, std::uint64_t n)
{
    return brute_force_firework_reach(truncate_for_firework(schedule, layout, n), layout, n);
}

ReachInterval oracle_reverse(const DistributionSchedule& schedule, std::uint64_t n)
{
    return brute_force_reverse_reach(truncate_for_reverse(schedule, n), n);
}

std::vector<GoldenRow> golden_rows()
{
    const auto half = DistributionSchedule::homogeneous(RadiusDistribution::finite({{0, 0.5}, {1, 0.5}}));
    const auto skip = DistributionSchedule::homogeneous(RadiusDistribution::finite({{0, 0.5}, {2, 0.5}}));
    const auto quarters =
        DistributionSchedule::homogeneous(RadiusDistribution::finite({{0, 0.25}, {1, 0.25}, {2, 0.25}, {3, 0.25}}));
    const auto one = DistributionSchedule::homogeneous(RadiusDistribution::point_mass(1));
    const auto zero = DistributionSchedule::homogeneous(RadiusDistribution::point_mass(0));
    const auto pl2 = DistributionSchedule::homogeneous(RadiusDistribution::power_law(2.0));
    const auto pl15 = DistributionSchedule::homogeneous(RadiusDistribution::power_law(1.5));
    const auto geo = DistributionSchedule::homogeneous(RadiusDistribution::geometric(0.5));
    const auto ex41 = DistributionSchedule::example(ExampleFamily::ex41, BSequence::log_harmonic(1.0));
    const auto ex42 = DistributionSchedule::example(ExampleFamily::ex42, BSequence::inverse_square(0.5));
    const auto ex43 = DistributionSchedule::example(ExampleFamily::ex43, BSequence::log_harmonic(1.0));
    const auto id = VertexLayout::identity();
    const auto two = VertexLayout::arithmetic(2);

    std::vector<GoldenRow> rows;
    auto fw = [&](const std::string& name, const DistributionSchedule& s, const VertexLayout& l, std::uint64_t n) {
        rows.push_back({name, "firework", n, oracle_firework(s, l, n)});
    };
    auto rv = [&](const std::string& name, const DistributionSchedule& s, std::uint64_t n) {
        rows.push_back({name, "reverse", n, oracle_reverse(s, n)});
    };
    for (std::uint64_t n = 1; n <= 10; ++n)
        fw("half_half", half, id, n);
    fw("point_mass_1", one, id, 5);
    fw("zero_or_two", skip, id, 2);
    fw("zero_or_two", skip, id, 5);
    fw("quarters_m2", quarters, two, 5);
    for (std::uint64_t n = 1; n <= 4; ++n)
        fw("power_law_2", pl2, id, n);
    fw("power_law_1.5", pl15, id, 6);
    fw("geometric_0.5", geo, id, 6);
    fw("ex41_log_harmonic", ex41, id, 5);
    fw("ex42_inverse_square", ex42, id, 6);
    fw("ex43_log_harmonic", ex43, id, 6);
    for (std::uint64_t n = 1; n <= 6; ++n)
        rv("half_half", half, n);
    rv("point_mass_0", zero, 1);
    rv("zero_or_two", skip, 5);
    rv("power_law_2", pl2, 5);
    rv("power_law_1.5", pl15, 4);
    rv("geometric_0.5", geo, 6);
    rv("ex42_inverse_square", ex42, 6);
    rv("ex43_log_harmonic", ex43, 8);
    return rows;
}

void write_golden_csv(const std::vector<GoldenRow>& rows, std::ostream& out)
{
    out << "instance_id,process,n,lo,hi,truncated_mass\n";
    for (const auto& r : rows)
        out << fmt::format("{},{},{},{},{},{}\n", r.instance_id, r.process, r.n, r.interval.lo, r.interval.hi,
                           r.interval.truncated_mass);
}

}  // namespace rumour
