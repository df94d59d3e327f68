#include "rumour/experiment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace rumour {

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z)
{
    if (trials == 0)
        return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    WilsonInterval w{std::max(0.0, center - half), std::min(1.0, center + half)};
    // the score interval touches the boundary exactly at 0 and n successes
    if (successes == 0)
        w.lo = 0.0;
    if (successes == trials)
        w.hi = 1.0;
    return w;
}

unsigned resolve_workers(unsigned requested)
{
    if (requested > 0)
        return requested;
    if (const char* env = std::getenv("RUMOUR_SIM_WORKERS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 4096)
            return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

TrialOutcome run_one_trial(const TrialSpec& spec, std::uint64_t lane_key, std::uint64_t trial)
{
    SlotStream stream(derive_key(lane_key, trial));
    if (spec.process == ProcessKind::firework)
        return simulate_firework(spec.layout, spec.schedule, spec.horizon, stream, spec.firework_mode);
    return simulate_reverse(spec.schedule, spec.horizon, spec.generation_cap, stream, spec.reverse_mode);
}

std::vector<std::uint8_t> survival_indicators(const TrialSpec& spec, std::uint64_t trials, std::uint64_t lane_key,
                                              unsigned workers)
{
    std::vector<std::uint8_t> out(trials, 0);
    const unsigned w = static_cast<unsigned>(std::min<std::uint64_t>(resolve_workers(workers), trials));
    constexpr std::uint64_t kChunk = 256;
    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        while (true) {
            const std::uint64_t start = next.fetch_add(kChunk);
            if (start >= trials)
                return;
            const std::uint64_t stop = std::min(trials, start + kChunk);
            for (std::uint64_t i = start; i < stop; ++i)
                out[i] = run_one_trial(spec, lane_key, i).survived ? 1 : 0;
        }
    };
    if (w <= 1) {
        work();
        return out;
    }
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned t = 0; t < w; ++t) {
        pool.emplace_back([&] {
            try {
                work();
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(trials);
            }
        });
    }
    for (auto& th : pool)
        th.join();
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

SurvivalEstimate estimate_survival(const TrialSpec& spec, std::uint64_t trials, std::uint64_t lane_key,
                                   unsigned workers, bool timing)
{
    if (trials < 1)
        throw std::invalid_argument("trials must be >= 1");
    const auto t0 = std::chrono::steady_clock::now();
    const auto ind = survival_indicators(spec, trials, lane_key, workers);
    const auto t1 = std::chrono::steady_clock::now();
    SurvivalEstimate e;
    e.trials = trials;
    e.survivors = static_cast<std::uint64_t>(std::count(ind.begin(), ind.end(), std::uint8_t{1}));
    e.p_hat = static_cast<double>(e.survivors) / static_cast<double>(trials);
    const auto w = wilson_interval(e.survivors, trials);
    e.ci_lo = w.lo;
    e.ci_hi = w.hi;
    e.horizon = spec.horizon;
    if (timing)
        e.duration_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return e;
}

TrialSpec build_trial_spec(const ExperimentConfig& config)
{
    TrialSpec spec{config.process,
                   parse_schedule(config.distribution, "distribution"),
                   parse_layout(config.layout, "layout"),
                   config.horizon,
                   config.generation_cap,
                   config.firework_mode,
                   config.reverse_mode};
    return spec;
}

SurvivalEstimate run_trials(const ExperimentConfig& config)
{
    const TrialSpec spec = build_trial_spec(config);
    return estimate_survival(spec, config.trials, config.seed, config.workers, config.timing);
}

void annotate_row(SweepRow& row, const TrialSpec& spec, const BoundDepths& depths)
{
    const auto law = spec.schedule.constant_law();
    if (spec.process == ProcessKind::firework) {
        const bool identity = spec.layout.kind() == VertexLayout::Kind::identity;
        const auto m = spec.layout.gap_bound();
        if (law && identity) {
            row.verdict = classify_firework_homogeneous(*law);
            row.upper = upper_bound_firework_homogeneous(*law, depths.upper_n);
        } else {
            if (m)
                row.verdict = classify_firework_heterogeneous(spec.schedule, *m, 1);
            BoundEntry up;
            up.value = upper_bound_reach_heterogeneous(spec.schedule, spec.horizon);
            up.truncated_value = up.value;
            up.rigor = Rigor::rigorous;
            up.certificate = "reach_union_bound";
            up.depths["n"] = spec.horizon;
            row.upper = up;
        }
        if (m)
            row.lower = lower_bound_firework(spec.schedule, *m, depths.firework_J);
    } else {
        row.verdict = law ? classify_reverse_homogeneous(*law) : classify_reverse_heterogeneous(spec.schedule);
        row.lower = lower_bound_reverse(spec.schedule, depths.reverse_N, depths.reverse_K);
    }
}

ExperimentConfig config_at(const ExperimentConfig& config, const std::string& param, double value)
{
    ExperimentConfig c = config;
    c.sweep.reset();
    if (param == "alpha")
        c.distribution["alpha"] = value;
    else if (param == "q")
        c.distribution["q"] = value;
    else if (param == "c")
        c.distribution["b"]["c"] = value;
    else if (param == "horizon")
        c.horizon = static_cast<std::uint64_t>(value);
    else
        throw ConfigError("sweep.param", fmt::format("unknown sweep parameter '{}'", param));
    return c;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config)
{
    std::vector<ExperimentConfig> points;
    std::vector<TrialSpec> specs;
    if (config.sweep) {
        if (config.sweep->values.empty())
            throw ConfigError("sweep.values", "grid is empty");
        for (std::size_t g = 0; g < config.sweep->values.size(); ++g) {
            points.push_back(config_at(config, config.sweep->param, config.sweep->values[g]));
            try {
                specs.push_back(build_trial_spec(points.back()));
            } catch (const ConfigError& e) {
                throw ConfigError(fmt::format("sweep.values[{}]", g), e.what());
            }
        }
    } else {
        points.push_back(config);
        specs.push_back(build_trial_spec(config));
    }

    std::vector<SweepRow> rows;
    for (std::size_t g = 0; g < specs.size(); ++g) {
        SweepRow row;
        row.process = to_string(config.process);
        row.schedule_label = specs[g].schedule.label();
        if (config.sweep) {
            row.param_name = config.sweep->param;
            row.param_value = config.sweep->values[g];
        }
        const std::uint64_t lane = config.sweep ? derive_key(config.seed, g) : config.seed;
        row.estimate = estimate_survival(specs[g], config.trials, lane, config.workers, config.timing);
        row.seed = config.seed;
        annotate_row(row, specs[g], config.bounds);
        rows.push_back(std::move(row));
    }
    return rows;
}

namespace {

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (const char ch : s) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + "\"";
}

std::string num(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    return fmt::format("{}", x);
}

}  // namespace

void write_rows_csv(const std::vector<SweepRow>& rows, std::ostream& out)
{
    out << "process,schedule_label,param_name,param_value,horizon,trials,survivors,p_hat,ci_lo,ci_hi,verdict,rule,"
           "lower_bound,upper_bound,seed,duration_ms\n";
    for (const auto& r : rows) {
        const auto& e = r.estimate;
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", csv_field(r.process),
                           csv_field(r.schedule_label), csv_field(r.param_name),
                           r.param_name.empty() ? std::string() : num(r.param_value), e.horizon, e.trials,
                           e.survivors, num(e.p_hat), num(e.ci_lo), num(e.ci_hi), to_string(r.verdict.classification),
                           csv_field(r.verdict.rule), r.lower ? num(r.lower->value) : "nan",
                           r.upper ? num(r.upper->value) : "nan", r.seed, num(e.duration_ms));
    }
}

nlohmann::json rows_to_json(const std::vector<SweepRow>& rows, const ExperimentConfig& config)
{
    nlohmann::json j;
    j["config"] = config_to_json(config);
    j["metadata"] = {
        {"generator", "xoshiro256++ seeded from splitmix64; trial stream key = derive_key(lane, trial)"},
        {"lane_key", config.sweep ? "derive_key(seed, grid_index)" : "seed"},
        {"window", "vertices with index above the horizon never take part"},
        {"interval", "Wilson score, 95%"},
    };
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        const auto& e = r.estimate;
        nlohmann::json row;
        row["process"] = r.process;
        row["schedule_label"] = r.schedule_label;
        row["param_name"] = r.param_name;
        row["param_value"] = r.param_name.empty() ? nlohmann::json(nullptr) : nlohmann::json(r.param_value);
        row["horizon"] = e.horizon;
        row["trials"] = e.trials;
        row["survivors"] = e.survivors;
        row["p_hat"] = e.p_hat;
        row["ci_lo"] = e.ci_lo;
        row["ci_hi"] = e.ci_hi;
        row["verdict"] = to_string(r.verdict.classification);
        row["rule"] = r.verdict.rule;
        row["lower_bound"] = r.lower ? finite_or_string(r.lower->value) : nlohmann::json(nullptr);
        row["upper_bound"] = r.upper ? finite_or_string(r.upper->value) : nlohmann::json(nullptr);
        row["seed"] = r.seed;
        row["duration_ms"] = e.duration_ms;
        BoundsReport br{r.lower, r.upper};
        row["report"] = report_json(r.verdict, br);
        arr.push_back(std::move(row));
    }
    j["rows"] = std::move(arr);
    return j;
}

}  // namespace rumour
