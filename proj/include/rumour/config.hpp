#pragma once

// JSON configuration: distribution / schedule / layout specs and the
// experiment document. Errors name the offending field ("distribution.alpha")
// and, for syntax errors, the line and column.

#include "rumour/distributions.hpp"
#include "rumour/layout.hpp"
#include "rumour/processes.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rumour {

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message);
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Parses text, reporting syntax errors with line and column.
nlohmann::json parse_json_text(const std::string& text, const std::string& source = "config");
nlohmann::json load_json_file(const std::string& path);

/// { "kind": "power_law", "alpha": 2 } | { "kind": "geometric", "q": 0.5 } |
/// { "kind": "finite", "pmf": {"0": 0.5, "1": 0.5} } | { "kind": "point_mass", "value": 1 } |
/// { "kind": "critical_tail" }
RadiusDistribution parse_distribution(const nlohmann::json& spec, const std::string& field = "distribution");
/// { "family": "log_harmonic" | "inverse_square", "c": 1 } | { "family": "table", "values": [...] }
BSequence parse_b_sequence(const nlohmann::json& spec, const std::string& field = "b");
/// A distribution spec (homogeneous), { "kind": "schedule", "example": "ex41", "b": {...} },
/// or { "kind": "table", "laws": [spec, ...] }.
DistributionSchedule parse_schedule(const nlohmann::json& spec, const std::string& field = "distribution");
/// { "kind": "identity" } | { "kind": "arithmetic", "m": 2 } |
/// { "kind": "table", "positions": [...], "gap_bound": 2 }
VertexLayout parse_layout(const nlohmann::json& spec, const std::string& field = "layout");

enum class ProcessKind { firework, reverse };
std::string to_string(ProcessKind p);

struct SweepSpec {
    std::string param;  ///< alpha | q | c | horizon
    std::vector<double> values;

    bool operator==(const SweepSpec&) const = default;
};

/// Grid from, from+step, ... up to `to` (inclusive within rounding).
std::vector<double> arithmetic_grid(double from, double to, double step);

struct BoundDepths {
    std::uint64_t firework_J = 1000;
    std::uint64_t upper_n = 1000;
    std::uint64_t reverse_N = 1000;
    std::uint64_t reverse_K = 1000;

    bool operator==(const BoundDepths&) const = default;
};

struct ExperimentConfig {
    ProcessKind process = ProcessKind::firework;
    nlohmann::json distribution = {{"kind", "finite"}, {"pmf", {{"0", 0.5}, {"1", 0.5}}}};
    nlohmann::json layout = {{"kind", "identity"}};
    std::uint64_t horizon = 100;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> generation_cap;
    FireworkMode firework_mode = FireworkMode::frontier;
    ReverseMode reverse_mode = ReverseMode::one_pass;
    std::optional<SweepSpec> sweep;
    BoundDepths bounds;
    bool timing = false;
    /// Execution detail only; never affects results and is not echoed.
    unsigned workers = 0;

    bool operator==(const ExperimentConfig& o) const;
};

/// Validates every field; throws ConfigError.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
/// Canonical echo; parse_experiment_config(config_to_json(c)) == c.
nlohmann::json config_to_json(const ExperimentConfig& c);

/// Sets a dotted path ("distribution.alpha") to a value. The value text is
/// read as JSON when it parses, else as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);
void set_path(nlohmann::json& doc, const std::string& dotted, nlohmann::json value);

}  // namespace rumour
