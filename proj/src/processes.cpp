#include "rumour/processes.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace rumour {
namespace {

constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) noexcept
{
    return (a > kNever - b) ? kNever : a + b;
}

void check_horizon(std::uint64_t horizon)
{
    if (horizon < 1)
        throw std::invalid_argument("horizon must be >= 1");
}

TrialOutcome survived_outcome(std::uint64_t horizon, std::uint64_t count)
{
    TrialOutcome out;
    out.survived = true;
    out.rightmost_index = horizon;
    out.activated_count = count;
    return out;
}

// Breadth-first generations over a bitset. `radius(j)` supplies R_j; it is
// called once per activated vertex below the horizon, in increasing order.
template <class RadiusFn, class OnGeneration>
TrialOutcome firework_bfs(const VertexLayout& layout, std::uint64_t horizon, RadiusFn&& radius,
                          OnGeneration&& on_generation)
{
    std::vector<bool> active(horizon + 1, false);
    active[0] = true;
    std::vector<std::uint64_t> frontier{0};
    std::vector<std::uint64_t> next;
    std::uint64_t count = 1;
    std::uint64_t rightmost = 0;
    on_generation(frontier);
    for (std::uint64_t gen = 0;; ++gen) {
        next.clear();
        for (const std::uint64_t j : frontier) {
            const std::uint64_t limit = saturating_add(layout.position(j), radius(j));
            for (std::uint64_t i = j + 1; i <= horizon && layout.position(i) <= limit; ++i) {
                if (!active[i]) {
                    active[i] = true;
                    next.push_back(i);
                }
            }
        }
        std::sort(next.begin(), next.end());
        count += next.size();
        if (!next.empty()) {
            rightmost = std::max(rightmost, next.back());
            on_generation(next);
        }
        if (active[horizon])
            return survived_outcome(horizon, count);
        if (next.empty()) {
            TrialOutcome out;
            out.rightmost_index = rightmost;
            out.extinction_generation = gen;
            out.activated_count = count;
            return out;
        }
        frontier.swap(next);
    }
}

TrialOutcome firework_frontier(const VertexLayout& layout, const DistributionSchedule& schedule,
                               std::uint64_t horizon, SlotStream& stream)
{
    // The activated set is always a prefix and each generation a contiguous
    // block [a, b] of indices, so a generation is summarised by its bounds.
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    std::uint64_t reach = 0;
    for (std::uint64_t gen = 0;; ++gen) {
        for (std::uint64_t i = a; i <= b; ++i) {
            const Radius r = schedule.sample(i, stream.uniform(i));
            reach = std::max(reach, saturating_add(layout.position(i), r));
        }
        const std::uint64_t end = std::min(layout.last_index_within(reach), horizon);
        if (end >= horizon)
            return survived_outcome(horizon, horizon + 1);
        if (end == b) {
            TrialOutcome out;
            out.rightmost_index = b;
            out.extinction_generation = gen;
            out.activated_count = b + 1;
            return out;
        }
        a = b + 1;
        b = end;
    }
}

std::uint64_t resolve_cap(std::uint64_t horizon, std::optional<std::uint64_t> cap)
{
    const std::uint64_t c = cap.value_or(horizon);
    if (c < 1)
        throw std::invalid_argument("generation cap must be >= 1");
    return c;
}

std::vector<Radius> draw_reverse_radii(const DistributionSchedule& schedule, std::uint64_t horizon,
                                       SlotStream& stream)
{
    std::vector<Radius> radii(horizon + 1, 0);
    for (std::uint64_t k = 1; k <= horizon; ++k)
        radii[k] = schedule.sample(k, stream.uniform(k));
    return radii;
}

// Activation generation of every vertex: g[0] = 0 and
// g[k] = 1 + min{g[v] : k - R_k <= v < k}. The window is a suffix of [0, k),
// so a stack of indices with strictly increasing g answers each query by
// binary search.
std::vector<std::uint64_t> reverse_activation_times(const std::vector<Radius>& radii)
{
    const std::size_t n = radii.size();
    std::vector<std::uint64_t> g(n, kNever);
    std::vector<std::uint64_t> idx;
    std::vector<std::uint64_t> val;
    g[0] = 0;
    idx.push_back(0);
    val.push_back(0);
    for (std::uint64_t k = 1; k < n; ++k) {
        const Radius r = radii[k];
        if (r == 0)
            continue;
        const std::uint64_t left = r >= k ? 0 : k - r;
        const auto it = std::lower_bound(idx.begin(), idx.end(), left);
        if (it == idx.end())
            continue;
        g[k] = val[static_cast<std::size_t>(it - idx.begin())] + 1;
        while (!val.empty() && val.back() >= g[k]) {
            val.pop_back();
            idx.pop_back();
        }
        idx.push_back(k);
        val.push_back(g[k]);
    }
    return g;
}

TrialOutcome summarise_reverse(const std::vector<std::uint64_t>& g, std::uint64_t horizon, std::uint64_t cap)
{
    TrialOutcome out;
    if (g[horizon] <= cap) {
        const std::uint64_t stop = g[horizon];
        out = survived_outcome(horizon, static_cast<std::uint64_t>(
                                            std::count_if(g.begin(), g.end(), [stop](auto x) { return x <= stop; })));
        return out;
    }
    std::uint64_t last = 0;
    for (std::uint64_t k = 0; k <= horizon; ++k) {
        if (g[k] == kNever)
            continue;
        last = std::max(last, g[k]);
        if (g[k] <= cap) {
            out.rightmost_index = k;
            ++out.activated_count;
        }
    }
    if (last >= cap) {
        out.generation_cap_hit = true;
        out.extinction_generation = cap;
    } else {
        out.extinction_generation = last + 1;
    }
    return out;
}

TrialOutcome reverse_sweep(const std::vector<Radius>& radii, std::uint64_t horizon, std::uint64_t cap)
{
    std::vector<bool> active(horizon + 1, false);
    std::vector<std::uint64_t> prefix(horizon + 2, 0);
    std::vector<std::uint64_t> fresh;
    active[0] = true;
    std::uint64_t count = 1;
    std::uint64_t rightmost = 0;
    for (std::uint64_t t = 1;; ++t) {
        for (std::uint64_t v = 0; v <= horizon; ++v)
            prefix[v + 1] = prefix[v] + (active[v] ? 1 : 0);
        fresh.clear();
        for (std::uint64_t k = 1; k <= horizon; ++k) {
            if (active[k] || radii[k] == 0)
                continue;
            const std::uint64_t left = radii[k] >= k ? 0 : k - radii[k];
            if (prefix[k] - prefix[left] > 0)
                fresh.push_back(k);
        }
        for (const auto k : fresh)
            active[k] = true;
        count += fresh.size();
        if (!fresh.empty())
            rightmost = std::max(rightmost, fresh.back());
        if (active[horizon])
            return survived_outcome(horizon, count);
        if (fresh.empty() || t == cap) {
            TrialOutcome out;
            out.rightmost_index = rightmost;
            out.activated_count = count;
            out.extinction_generation = t;
            out.generation_cap_hit = !fresh.empty();
            return out;
        }
    }
}

}  // namespace

TrialOutcome simulate_firework(const VertexLayout& layout, const DistributionSchedule& schedule,
                               std::uint64_t horizon, SlotStream& stream, FireworkMode mode)
{
    check_horizon(horizon);
    layout.validate(horizon);
    if (mode == FireworkMode::frontier)
        return firework_frontier(layout, schedule, horizon, stream);
    return firework_bfs(
        layout, horizon, [&](std::uint64_t j) { return schedule.sample(j, stream.uniform(j)); },
        [](const std::vector<std::uint64_t>&) {});
}

TrialOutcome simulate_firework_traced(const VertexLayout& layout, const DistributionSchedule& schedule,
                                      std::uint64_t horizon, SlotStream& stream, TrialTrace& trace,
                                      bool full_radii)
{
    check_horizon(horizon);
    layout.validate(horizon);
    trace = TrialTrace{};
    trace.full_radii = full_radii;
    trace.radii.assign(horizon, 0);
    trace.radius_drawn.assign(horizon, false);
    for (std::uint64_t i = 0; i <= horizon; ++i)
        trace.positions.push_back(layout.position(i));
    if (full_radii) {
        for (std::uint64_t i = 0; i < horizon; ++i) {
            trace.radii[i] = schedule.sample(i, stream.uniform(i));
            trace.radius_drawn[i] = true;
        }
    }
    auto radius = [&](std::uint64_t j) {
        if (!trace.radius_drawn[j]) {
            trace.radii[j] = schedule.sample(j, stream.uniform(j));
            trace.radius_drawn[j] = true;
        }
        return trace.radii[j];
    };
    return firework_bfs(layout, horizon, radius,
                        [&](const std::vector<std::uint64_t>& gen) { trace.generations.push_back(gen); });
}

TrialOutcome simulate_reverse(const DistributionSchedule& schedule, std::uint64_t horizon,
                              std::optional<std::uint64_t> generation_cap, SlotStream& stream, ReverseMode mode)
{
    check_horizon(horizon);
    const std::uint64_t cap = resolve_cap(horizon, generation_cap);
    const auto radii = draw_reverse_radii(schedule, horizon, stream);
    if (mode == ReverseMode::sweep)
        return reverse_sweep(radii, horizon, cap);
    return summarise_reverse(reverse_activation_times(radii), horizon, cap);
}

TrialOutcome simulate_reverse_traced(const DistributionSchedule& schedule, std::uint64_t horizon,
                                     std::optional<std::uint64_t> generation_cap, SlotStream& stream,
                                     TrialTrace& trace)
{
    check_horizon(horizon);
    const std::uint64_t cap = resolve_cap(horizon, generation_cap);
    trace = TrialTrace{};
    trace.radii = draw_reverse_radii(schedule, horizon, stream);
    trace.radius_drawn.assign(horizon + 1, true);
    trace.radius_drawn[0] = false;
    for (std::uint64_t i = 0; i <= horizon; ++i)
        trace.positions.push_back(i);
    const auto g = reverse_activation_times(trace.radii);
    const auto out = summarise_reverse(g, horizon, cap);
    const std::uint64_t stop = out.survived ? g[horizon] : std::min(cap, out.extinction_generation.value_or(cap));
    trace.generations.assign(stop + 1, {});
    for (std::uint64_t k = 0; k <= horizon; ++k) {
        if (g[k] <= stop)
            trace.generations[g[k]].push_back(k);
    }
    while (!trace.generations.empty() && trace.generations.back().empty())
        trace.generations.pop_back();
    return out;
}

std::vector<bool> reverse_fixpoint(const std::vector<Radius>& radii, bool descending_scan)
{
    const std::size_t n = radii.size();
    std::vector<bool> active(n, false);
    if (n == 0)
        return active;
    active[0] = true;
    auto try_activate = [&](std::size_t k) {
        if (active[k] || radii[k] == 0)
            return false;
        const std::size_t left = radii[k] >= k ? 0 : k - radii[k];
        for (std::size_t v = left; v < k; ++v) {
            if (active[v]) {
                active[k] = true;
                return true;
            }
        }
        return false;
    };
    for (bool changed = true; changed;) {
        changed = false;
        if (descending_scan) {
            for (std::size_t k = n; k-- > 1;)
                changed |= try_activate(k);
        } else {
            for (std::size_t k = 1; k < n; ++k)
                changed |= try_activate(k);
        }
    }
    return active;
}

bool renewal_event_indicator(const TrialTrace& trace, std::uint64_t n)
{
    if (n < 1)
        throw std::invalid_argument("renewal event index must be >= 1");
    if (!trace.full_radii)
        throw std::invalid_argument("renewal event needs a trace recorded with full radii");
    if (trace.radii.size() < n || trace.positions.size() <= n)
        throw std::invalid_argument("renewal event index lies beyond the traced horizon");
    const std::uint64_t target = trace.positions[n];
    for (std::uint64_t x = 0; x < n; ++x) {
        if (saturating_add(trace.positions[x], trace.radii[x]) >= target)
            return false;
    }
    return true;
}

void write_trace_jsonl(const TrialTrace& trace, std::ostream& out)
{
    for (std::size_t g = 0; g < trace.generations.size(); ++g) {
        nlohmann::json rec;
        rec["generation"] = g;
        rec["activated"] = trace.generations[g];
        out << rec.dump() << '\n';
    }
}

}  // namespace rumour
