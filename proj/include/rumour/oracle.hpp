#pragma once

// Exact enumeration of reach probabilities on small instances.
//
// Radii are cut to finite supports. Values at or beyond the distance that
// already reaches the target vertex are merged into one atom, which loses
// nothing; only mass that is still short of the target but sits below the
// cutoff tail is discarded, and it is reported as the width of the interval.

#include "rumour/distributions.hpp"
#include "rumour/layout.hpp"

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rumour {

struct TruncatedSchedule {
    /// support[i] lists (radius, probability) atoms for vertex i.
    std::vector<std::vector<std::pair<Radius, double>>> support;
    std::vector<double> truncated_mass;

    double total_truncated_mass() const;
};

inline constexpr double kDefaultTailCut = 1e-6;
inline constexpr std::uint64_t kOracleBudget = 10'000'000;
inline constexpr std::uint64_t kOracleMaxN = 12;

/// Atoms for vertices 0..n-1, merged at the distance u_n - u_i.
TruncatedSchedule truncate_for_firework(const DistributionSchedule& schedule, const VertexLayout& layout,
                                        std::uint64_t n, double tail_cut = kDefaultTailCut);
/// Atoms for vertices 1..n (index 0 left empty), merged at distance k.
TruncatedSchedule truncate_for_reverse(const DistributionSchedule& schedule, std::uint64_t n,
                                       double tail_cut = kDefaultTailCut);

struct ReachInterval {
    double lo = 0.0;
    double hi = 0.0;
    double truncated_mass = 0.0;
    std::uint64_t assignments = 0;
};

/// Thrown when the enumeration would exceed kOracleBudget assignments.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(std::uint64_t required, std::uint64_t budget);
    std::uint64_t required;
};

/// P(u_n activated), enumerating radii of vertices 0..n-1.
ReachInterval brute_force_firework_reach(const TruncatedSchedule& ts, const VertexLayout& layout, std::uint64_t n);
/// P(vertex n active in the reverse closure), enumerating radii of 1..n.
ReachInterval brute_force_reverse_reach(const TruncatedSchedule& ts, std::uint64_t n);

// Convenience wrappers that truncate first.
ReachInterval oracle_firework(const DistributionSchedule& schedule, const VertexLayout& layout, std::uint64_t n);
ReachInterval oracle_reverse(const DistributionSchedule& schedule, std::uint64_t n);

struct GoldenRow {
    std::string instance_id;
    std::string process;  ///< "firework" or "reverse"
    std::uint64_t n = 0;
    ReachInterval interval;
};

/// The fixed instance set behind tests/golden/oracle_small.csv.
std::vector<GoldenRow> golden_rows();
/// CSV with header instance_id,process,n,lo,hi,truncated_mass.
void write_golden_csv(const std::vector<GoldenRow>& rows, std::ostream& out);

}  // namespace rumour
