#pragma once

// Monte Carlo orchestration.
//
// Seeding: trial i of a lane with key K runs on SlotStream(derive_key(K, i)).
// A plain run uses the master seed as its lane key; grid point g of a sweep
// uses derive_key(master, g). Survivor counts are integers summed per trial
// index, so results do not depend on the number of worker threads.

#include "rumour/analytics.hpp"
#include "rumour/config.hpp"

#include <json.hpp>

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace rumour {

inline constexpr double kWilsonZ = 1.959963984540054;

struct WilsonInterval {
    double lo = 0.0;
    double hi = 1.0;
};

/// 95% Wilson score interval for `successes` out of `trials`.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kWilsonZ);

struct SurvivalEstimate {
    std::uint64_t trials = 0;
    std::uint64_t survivors = 0;
    double p_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 1.0;
    std::uint64_t horizon = 0;
    double duration_ms = 0.0;  ///< 0 unless timing was requested

    /// Half-width of the interval in units of a normal standard error.
    double sigma() const { return (ci_hi - ci_lo) / (2.0 * kWilsonZ); }
};

/// A fully built simulation target.
struct TrialSpec {
    ProcessKind process = ProcessKind::firework;
    DistributionSchedule schedule;
    VertexLayout layout = VertexLayout::identity();
    std::uint64_t horizon = 1;
    std::optional<std::uint64_t> generation_cap;
    FireworkMode firework_mode = FireworkMode::frontier;
    ReverseMode reverse_mode = ReverseMode::one_pass;
};

/// Resolves RUMOUR_SIM_WORKERS, then hardware concurrency, when `requested` is 0.
unsigned resolve_workers(unsigned requested);

/// One outcome of the given trial; the stream is derive_key(lane_key, trial).
TrialOutcome run_one_trial(const TrialSpec& spec, std::uint64_t lane_key, std::uint64_t trial);

/// Survival indicator per trial index (1 = survived to the horizon).
std::vector<std::uint8_t> survival_indicators(const TrialSpec& spec, std::uint64_t trials, std::uint64_t lane_key,
                                              unsigned workers = 0);

SurvivalEstimate estimate_survival(const TrialSpec& spec, std::uint64_t trials, std::uint64_t lane_key,
                                   unsigned workers = 0, bool timing = false);

TrialSpec build_trial_spec(const ExperimentConfig& config);

/// Plain run: lane key = master seed.
SurvivalEstimate run_trials(const ExperimentConfig& config);

struct SweepRow {
    std::string process;
    std::string schedule_label;
    std::string param_name;
    double param_value = 0.0;
    SurvivalEstimate estimate;
    Verdict verdict;
    std::optional<BoundEntry> lower;
    std::optional<BoundEntry> upper;
    std::uint64_t seed = 0;
};

/// Verdict and bounds for the configuration's process and schedule.
void annotate_row(SweepRow& row, const TrialSpec& spec, const BoundDepths& depths);

/// One row per grid point (a config without a sweep yields a single row).
std::vector<SweepRow> run_sweep(const ExperimentConfig& config);

/// Config with the sweep parameter set to `value`.
ExperimentConfig config_at(const ExperimentConfig& config, const std::string& param, double value);

void write_rows_csv(const std::vector<SweepRow>& rows, std::ostream& out);
nlohmann::json rows_to_json(const std::vector<SweepRow>& rows, const ExperimentConfig& config);

}  // namespace rumour
