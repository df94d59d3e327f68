#pragma once

// Finite-horizon simulators for the firework process and its reverse.
//
// Randomness discipline: vertex i reads its radius variate from slot i of the
// trial's SlotStream, whatever the mode. Two simulations of one trial at
// different horizons, or in different modes, therefore see the same radii.
// Vertices with index > horizon never take part (the observation window).

#include "rumour/distributions.hpp"
#include "rumour/layout.hpp"
#include "rumour/rng.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

namespace rumour {

struct TrialOutcome {
    bool survived = false;  ///< vertex `horizon` was activated
    /// Rightmost activated index inside the window [0, horizon].
    std::uint64_t rightmost_index = 0;
    /// Firework: last nonempty generation. Reverse: generation at which the
    /// fixpoint was observed (or the cap when it was hit). Absent on survival.
    std::optional<std::uint64_t> extinction_generation;
    /// Activated vertices inside the window.
    std::uint64_t activated_count = 0;
    bool generation_cap_hit = false;

    bool operator==(const TrialOutcome&) const = default;
};

struct TrialTrace {
    std::vector<std::vector<std::uint64_t>> generations;  ///< newly activated indices per generation
    std::vector<std::uint64_t> positions;                 ///< u_0..u_horizon
    std::vector<Radius> radii;                            ///< drawn radii, indexed by vertex
    std::vector<bool> radius_drawn;
    bool full_radii = false;  ///< every radius below the horizon was drawn
};

enum class FireworkMode {
    frontier,     ///< O(1) memory: tracks generation boundaries only
    generations,  ///< literal breadth-first generations over a bitset
};

enum class ReverseMode {
    one_pass,  ///< activation times by a left-to-right shortest-path pass
    sweep,     ///< literal synchronous generations
};

TrialOutcome simulate_firework(const VertexLayout& layout, const DistributionSchedule& schedule,
                               std::uint64_t horizon, SlotStream& stream,
                               FireworkMode mode = FireworkMode::frontier);

/// Generation-faithful run that records a trace. With full_radii, radii for
/// every vertex 0..horizon-1 are drawn up front, activated or not.
TrialOutcome simulate_firework_traced(const VertexLayout& layout, const DistributionSchedule& schedule,
                                      std::uint64_t horizon, SlotStream& stream, TrialTrace& trace,
                                      bool full_radii = false);

/// generation_cap defaults to horizon, which never binds.
TrialOutcome simulate_reverse(const DistributionSchedule& schedule, std::uint64_t horizon,
                              std::optional<std::uint64_t> generation_cap, SlotStream& stream,
                              ReverseMode mode = ReverseMode::one_pass);

TrialOutcome simulate_reverse_traced(const DistributionSchedule& schedule, std::uint64_t horizon,
                                     std::optional<std::uint64_t> generation_cap, SlotStream& stream,
                                     TrialTrace& trace);

/// Fixpoint of the reverse activation rule on [0, radii.size()-1] computed by
/// in-place relaxation in the given scan order; radii[0] is ignored.
std::vector<bool> reverse_fixpoint(const std::vector<Radius>& radii, bool descending_scan);

/// B_n: no vertex left of u_n reaches it, i.e. u_n > u_x + R_x for all x < n.
/// Needs a full-radii trace covering 0..n-1.
bool renewal_event_indicator(const TrialTrace& trace, std::uint64_t n);

/// One JSON record per generation: {"generation": g, "activated": [...]}.
void write_trace_jsonl(const TrialTrace& trace, std::ostream& out);

}  // namespace rumour
