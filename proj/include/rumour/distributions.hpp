#pragma once

// Radius-of-influence laws and index-dependent schedules of laws.
//
// All built-in laws are integer valued. Queries are exact closed forms
// (power-law tails go through a compensated zeta-tail table), and sampling is
// inverse-CDF: sample(u) = min{k : P(R >= k+1) <= 1 - u}. Because sampling
// only compares tails against 1 - u, two implementations that agree on tails
// agree on samples bit for bit.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rumour {

using Radius = std::uint64_t;

/// Samples saturate here; any radius beyond every practical horizon behaves
/// identically in finite-horizon simulation.
inline constexpr Radius kRadiusCap = Radius{1} << 62;

enum class LawKind { power_law, geometric, finite_table, critical_tail, b_family_member };

std::string to_string(LawKind kind);

/// Expectation that may be +infinity.
struct MeanValue {
    bool finite = true;
    double value = 0.0;  ///< +inf when !finite
};

/// Closed-form value of lim n P(R >= n), when the law knows it.
struct RaabeLimit {
    double value = 0.0;  ///< may be +inf
    /// P(R >= n) <= 1/(n-1) for all large n (only meaningful when value == 1).
    bool critical_bound_holds = false;
};

struct PowerLawParams {
    double alpha = 0.0;
    double normalizer = 0.0;  ///< Z_alpha = 1 / zeta(alpha)
};

/// Riemann zeta tail sum_{j >= n} j^-s for s > 1, n >= 1.
double zeta_tail(double s, std::uint64_t n);

// --------------------------------------------------------------------------

enum class BFamily { log_harmonic, inverse_square, table };

std::string to_string(BFamily family);

/// Non-increasing sequence b_n -> 0 with b_0 < 1.
///   log_harmonic:   b_n = c / ((n+2) ln(n+2)),  sum diverges, n b_n -> 0
///   inverse_square: b_n = c / (n+1)^2,           sum converges
///   table:          b_n = values[n], 0 beyond the table
class BSequence {
public:
    static BSequence log_harmonic(double c = 1.0);
    static BSequence inverse_square(double c = 0.5);
    static BSequence table(std::vector<double> values);

    double operator()(std::uint64_t n) const;

    BFamily family() const noexcept { return family_; }
    double scale() const noexcept { return c_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::string label() const;

    bool sum_diverges() const noexcept { return family_ == BFamily::log_harmonic; }
    /// Whether sum_n b_n^t converges.
    bool power_sum_converges(double t) const noexcept;
    /// Certified upper bound on sum_{j > J} b_j (+inf when divergent).
    double tail_sum_bound(std::uint64_t J) const;
    /// Certified upper bound on sum_{j > J} b_j^t (+inf when divergent).
    double power_tail_sum_bound(std::uint64_t J, double t) const;
    /// sum_{j >= n} b_j, +inf when divergent.
    double sum_from(std::uint64_t n) const;
    /// lim n b_n, which is 0 for every supported family.
    double n_times_b_limit() const noexcept { return 0.0; }

    bool operator==(const BSequence& other) const = default;

private:
    BSequence(BFamily family, double c, std::vector<double> values);

    BFamily family_;
    double c_;
    std::vector<double> values_;
};

enum class ExampleFamily { ex41, ex42, ex43 };

std::string to_string(ExampleFamily which);

// --------------------------------------------------------------------------

namespace detail {
class Law;
}

/// Immutable, cheaply copyable handle to a law of a nonnegative integer radius.
class RadiusDistribution {
public:
    /// P(R = k) = Z / (k+1)^alpha, alpha > 1.
    static RadiusDistribution power_law(double alpha);
    /// P(R >= k) = q^k, q in [0,1).
    static RadiusDistribution geometric(double q);
    /// Explicit pmf over a finite support; must sum to 1 within 1e-9.
    static RadiusDistribution finite(const std::map<Radius, double>& pmf);
    static RadiusDistribution point_mass(Radius value);
    /// P(R >= n) = 1/n for n >= 1.
    static RadiusDistribution critical_tail();
    /// Law of R_n in one of the b-sequence example schedules.
    static RadiusDistribution b_family_member(ExampleFamily which, const BSequence& b, std::uint64_t n);

    /// P(R >= k).
    double tail(Radius k) const;
    /// P(R = k).
    double pmf(Radius k) const;
    /// P(R < x) for real x >= 0.
    double strict_cdf(double x) const;
    MeanValue mean() const;
    Radius sample(double u) const;

    LawKind kind() const;
    std::string label() const;
    /// Parameters of the law keyed by name (alpha, q, c, n, ...).
    std::map<std::string, double> params() const;
    std::optional<RaabeLimit> raabe_limit() const;
    std::optional<PowerLawParams> power_law_params() const;
    /// Largest value with positive mass, if the support is finite.
    std::optional<Radius> support_max() const;

private:
    explicit RadiusDistribution(std::shared_ptr<const detail::Law> law) : law_(std::move(law)) {}
    std::shared_ptr<const detail::Law> law_;
};

/// Smallest k with tail(k+1) <= 1 - u, found by galloping then bisection.
/// `tail` must be nonincreasing. Result saturates at kRadiusCap.
Radius sample_by_tail(const std::function<double(Radius)>& tail, double u, Radius start = 0);

// --------------------------------------------------------------------------

/// Index-to-law map n -> law of R_n.
class DistributionSchedule {
public:
    static DistributionSchedule homogeneous(RadiusDistribution law);
    static DistributionSchedule example(ExampleFamily which, BSequence b);
    /// Laws for indices 0..size-1; later indices reuse the last law.
    static DistributionSchedule from_table(std::vector<RadiusDistribution> laws, std::string label = "table");
    /// Arbitrary generator; must return the same law for the same index.
    static DistributionSchedule from_generator(std::function<RadiusDistribution(std::uint64_t)> generator,
                                               std::string label);

    bool is_homogeneous() const noexcept;
    /// The common law when every index shares one.
    std::optional<RadiusDistribution> constant_law() const;
    std::optional<ExampleFamily> example_family() const;
    const BSequence* b_sequence() const;

    RadiusDistribution law(std::uint64_t n) const;
    double tail(std::uint64_t n, Radius k) const;
    double strict_cdf(std::uint64_t n, double x) const;
    Radius sample(std::uint64_t n, double u) const;

    std::string label() const;

private:
    struct Impl;
    explicit DistributionSchedule(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Homogeneous laws used for catalog-wide checks.
struct CatalogEntry {
    std::string name;
    RadiusDistribution law;
};
std::vector<CatalogEntry> homogeneous_catalog();

}  // namespace rumour
