#pragma once

// Closed-form side of the engine: a-sequences, Raabe-type classification of
// the firework and reverse processes, and product bounds on the survival
// probability with explicit truncation bookkeeping.
//
// Every verdict carries a tier. "analytic" means the decision follows from a
// closed form known for the law or family; "numeric" means it was read off
// probe evaluations and is a heuristic. Bounds carry a rigor flag: a value is
// "rigorous" only when every truncated factor is covered by a certificate.

#include "rumour/distributions.hpp"
#include "rumour/layout.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rumour {

enum class Classification { Survives, Dies, SurvivesAlmostSurely, Inconclusive };
enum class Tier { analytic, numeric };
enum class Rigor { rigorous, truncated_estimate };

std::string to_string(Classification c);
std::string to_string(Tier t);
std::string to_string(Rigor r);

struct Verdict {
    Classification classification = Classification::Inconclusive;
    std::string rule;  ///< empty only when Inconclusive
    Tier tier = Tier::numeric;
    std::map<std::string, double> evidence;
    std::uint64_t truncation_depth = 0;
};

struct BoundEntry {
    double value = 0.0;            ///< the reported bound
    double truncated_value = 0.0;  ///< raw finite product/sum before tail handling
    Rigor rigor = Rigor::truncated_estimate;
    std::map<std::string, std::uint64_t> depths;
    /// Certified bound on the neglected tail sum; +inf when the tail diverges,
    /// NaN when no certificate is available.
    double tail_mass_bound = 0.0;
    bool tail_divergent = false;
    std::string certificate;  ///< which argument controls the tail
};

struct BoundsReport {
    std::optional<BoundEntry> lower;
    std::optional<BoundEntry> upper;
};

// --------------------------------------------------------------------------
// sequences

/// a_n = prod_{i=0}^{n} P(R_{n-i} < (i+1) m) for n = 0..n_max.
std::vector<double> a_sequence(const DistributionSchedule& schedule, std::uint64_t m, std::uint64_t n_max);
/// Same in log space (entries may be -inf).
std::vector<double> log_a_sequence(const DistributionSchedule& schedule, std::uint64_t m, std::uint64_t n_max);

// --------------------------------------------------------------------------
// Raabe-type classification of sum a_n through L = lim n P(R >= n)

struct RaabeOptions {
    unsigned max_exponent = 24;  ///< probes at n = 2^1 .. 2^max_exponent
    double tolerance = 1e-4;     ///< successive estimates must agree this well
    double margin = 1e-3;        ///< half-width of the band around L = 1
};

/// Numeric tier: probes n P(R >= n) along powers of two.
Verdict raabe_classify(const std::function<double(std::uint64_t)>& tail_at, const RaabeOptions& opts = {});
/// Analytic tier when the law knows its limit, numeric otherwise.
Verdict raabe_classify(const RadiusDistribution& dist, const RaabeOptions& opts = {});

// --------------------------------------------------------------------------
// firework

Verdict classify_firework_homogeneous(const RadiusDistribution& dist);

/// prod_{j=0}^{n-1} (1 - a_j) for the arithmetic layout u_i = m i. This is
/// P(V_n) when no radius can jump over the next vertex (every law supported on
/// R < 2m); for other laws it is the product lower bound.
double exact_reach_prob(const DistributionSchedule& schedule, std::uint64_t m, std::uint64_t n);
/// Rejects layouts that are not arithmetic.
double exact_reach_prob(const DistributionSchedule& schedule, const VertexLayout& layout, std::uint64_t n);

/// prod_{j=0}^{J} (1 - a_j), times a certified factor for j > J when available.
BoundEntry lower_bound_firework(const DistributionSchedule& schedule, std::uint64_t m, std::uint64_t J);

/// 1 - P(R=0) - sum_{k=1}^{n} P(R=k) prod_{j<k} P(R <= j).
BoundEntry upper_bound_firework_homogeneous(const RadiusDistribution& dist, std::uint64_t n);

/// min(1, sum_{k=0}^{n-1} P(R_k >= n-k)); bounds P(V_n) on any integer layout.
double upper_bound_reach_heterogeneous(const DistributionSchedule& schedule, std::uint64_t n);

struct Domination {
    enum class Direction {
        above,  ///< P(R_n >= k) <= P(R >= k) for all n, k
        below,  ///< P(R_n >= k) >= P(R >= k) for all n, k
        gap,    ///< P(R >= k) - P(R_n >= k) <= b_k for all n, k
    };
    RadiusDistribution law;
    Direction direction = Direction::above;
    std::optional<BSequence> gap;  ///< required for Direction::gap
};

/// `m` is the gap bound of the layout, `t` the exponent of the summability test.
Verdict classify_firework_heterogeneous(const DistributionSchedule& schedule, std::uint64_t m, std::uint64_t t,
                                        const std::optional<Domination>& domination = {});

// --------------------------------------------------------------------------
// reverse

Verdict classify_reverse_homogeneous(const RadiusDistribution& dist);

struct ReverseProbe {
    std::uint64_t max_index = 64;   ///< n probed in 0..max_index
    std::uint64_t max_depth = 4096; ///< k summed in 1..max_depth
};

Verdict classify_reverse_heterogeneous(const DistributionSchedule& schedule, const ReverseProbe& probe = {},
                                       const std::optional<Domination>& domination = {});

/// prod_{n=0}^{N} [1 - prod_{j=1}^{K} (1 - P(R_{n+j} >= j))] with outer-tail handling.
BoundEntry lower_bound_reverse(const DistributionSchedule& schedule, std::uint64_t N, std::uint64_t K);

// --------------------------------------------------------------------------
// serialization; non-finite numbers become the strings "inf", "-inf", "nan"

nlohmann::json finite_or_string(double x);
nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const BoundEntry& b);
/// {"verdict", "rule", "evidence", "bounds", "truncation"}
nlohmann::json report_json(const Verdict& v, const BoundsReport& bounds);

}  // namespace rumour
