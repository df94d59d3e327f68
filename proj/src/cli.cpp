#include "rumour/cli.hpp"

#include "rumour/analytics.hpp"
#include "rumour/config.hpp"
#include "rumour/experiment.hpp"
#include "rumour/oracle.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace rumour {
namespace {

struct Options {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> trials;
    std::optional<std::uint64_t> horizon;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::optional<std::string> process;
    std::optional<std::string> param;
    std::optional<double> from;
    std::optional<double> to;
    std::optional<double> step;
    bool timing = false;
};

void add_common(CLI::App* sub, Options& o, bool with_format)
{
    sub->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out_path, "Write output here instead of stdout");
    sub->add_option("--set", o.overrides, "Override a config field, e.g. distribution.alpha=1.5");
    sub->add_option("--trials", o.trials, "Number of trials (>= 1)");
    sub->add_option("--horizon", o.horizon, "Horizon index (>= 1)");
    sub->add_option("--seed", o.seed, "Master seed (unsigned 64-bit)");
    sub->add_option("--workers", o.workers, "Worker threads (defaults to RUMOUR_SIM_WORKERS, then all cores)")
        ->check(CLI::Range(1u, 4096u));
    sub->add_option("--process", o.process, "firework or reverse")
        ->check(CLI::IsMember({"firework", "reverse"}));
    sub->add_flag("--timing", o.timing, "Record wall-clock duration (makes output run-dependent)");
    if (with_format)
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

nlohmann::json build_document(const Options& o)
{
    nlohmann::json doc = o.config_path.empty() ? nlohmann::json::object() : load_json_file(o.config_path);
    if (!doc.is_object())
        throw ConfigError("", "config must be a JSON object");
    for (const auto& s : o.overrides)
        apply_override(doc, s);
    if (o.trials)
        doc["trials"] = *o.trials;
    if (o.horizon)
        doc["horizon"] = *o.horizon;
    if (o.seed)
        doc["seed"] = *o.seed;
    if (o.workers)
        doc["workers"] = *o.workers;
    if (o.process)
        doc["process"] = *o.process;
    if (o.timing)
        doc["timing"] = true;
    if (o.param || o.from || o.to || o.step) {
        if (!o.param)
            throw ConfigError("sweep.param", "--from/--to/--step need --param");
        nlohmann::json sweep = {{"param", *o.param}};
        if (o.from || o.to || o.step) {
            if (!o.from || !o.to || !o.step)
                throw ConfigError("sweep", "--from, --to and --step must be given together");
            sweep["from"] = *o.from;
            sweep["to"] = *o.to;
            sweep["step"] = *o.step;
        } else if (doc.contains("sweep") && doc["sweep"].is_object()) {
            for (const auto& [k, v] : doc["sweep"].items()) {
                if (k != "param")
                    sweep[k] = v;
            }
        }
        doc["sweep"] = sweep;
    }
    return doc;
}

// Writes to --out when given, else to `out`.
void emit(const Options& o, std::ostream& out, const std::string& text)
{
    if (o.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f)
        throw ConfigError("--out", fmt::format("cannot open '{}' for writing", o.out_path));
    f << text;
}

std::string format_rows(const Options& o, const std::vector<SweepRow>& rows, const ExperimentConfig& config)
{
    if (o.format == "json")
        return rows_to_json(rows, config).dump(2) + "\n";
    std::ostringstream ss;
    write_rows_csv(rows, ss);
    return ss.str();
}

std::string describe(const Verdict& v)
{
    std::string s = to_string(v.classification);
    if (!v.rule.empty())
        s += fmt::format("  (rule: {}; tier: {})", v.rule, to_string(v.tier));
    else
        s += fmt::format("  (no rule applies; tier: {})", to_string(v.tier));
    return s;
}

int cmd_criteria(const Options& o, std::ostream& out)
{
    const ExperimentConfig config = parse_experiment_config(build_document(o));
    const TrialSpec spec = build_trial_spec(config);
    const auto law = spec.schedule.constant_law();
    const auto m = spec.layout.gap_bound();

    struct Entry {
        std::string name;
        Verdict verdict;
    };
    std::vector<Entry> entries;
    if (law && spec.layout.kind() == VertexLayout::Kind::identity)
        entries.push_back({"firework, homogeneous", classify_firework_homogeneous(*law)});
    if (m)
        entries.push_back({"firework, heterogeneous", classify_firework_heterogeneous(spec.schedule, *m, 1)});
    if (law)
        entries.push_back({"reverse, homogeneous", classify_reverse_homogeneous(*law)});
    entries.push_back({"reverse, heterogeneous", classify_reverse_heterogeneous(spec.schedule)});

    std::ostringstream ss;
    if (o.format == "json") {
        nlohmann::json j;
        j["schedule"] = spec.schedule.label();
        j["layout"] = spec.layout.label();
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& e : entries) {
            auto v = to_json(e.verdict);
            v["classifier"] = e.name;
            arr.push_back(v);
        }
        j["verdicts"] = arr;
        ss << j.dump(2) << "\n";
    } else {
        ss << fmt::format("schedule: {}\nlayout:   {}\n", spec.schedule.label(), spec.layout.label());
        for (const auto& e : entries) {
            ss << fmt::format("{:<26}{}\n", e.name + ":", describe(e.verdict));
            for (const auto& [k, x] : e.verdict.evidence)
                ss << fmt::format("{:<26}  {} = {}\n", "", k, x);
        }
    }
    emit(o, out, ss.str());
    return kExitOk;
}

int cmd_bounds(const Options& o, std::ostream& out)
{
    const ExperimentConfig config = parse_experiment_config(build_document(o));
    const TrialSpec spec = build_trial_spec(config);
    SweepRow row;
    annotate_row(row, spec, config.bounds);
    const BoundsReport report{row.lower, row.upper};
    nlohmann::json j = report_json(row.verdict, report);
    j["process"] = to_string(config.process);
    j["schedule"] = spec.schedule.label();
    emit(o, out, j.dump(2) + "\n");
    return kExitOk;
}

int cmd_run(const Options& o, std::ostream& out, bool sweep)
{
    ExperimentConfig config = parse_experiment_config(build_document(o));
    if (sweep && !config.sweep)
        throw ConfigError("sweep", "the sweep subcommand needs a grid (--param with --from/--to/--step, or a "
                                   "sweep object in the config)");
    if (!sweep)
        config.sweep.reset();
    const auto rows = run_sweep(config);
    emit(o, out, format_rows(o, rows, config));
    return kExitOk;
}

int cmd_oracle(const Options& o, std::ostream& out)
{
    std::ostringstream ss;
    write_golden_csv(golden_rows(), ss);
    emit(o, out, ss.str());
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Firework and reverse firework rumour processes: simulation, criteria and bounds", "rumour_sim"};
    app.require_subcommand(1, 1);
    Options o;
    auto* simulate = app.add_subcommand("simulate", "Estimate the survival-to-horizon probability");
    auto* criteria = app.add_subcommand("criteria", "Classify survival with every applicable criterion");
    auto* bounds = app.add_subcommand("bounds", "Lower and upper bounds on the survival probability (JSON)");
    auto* sweep = app.add_subcommand("sweep", "Estimate over a parameter grid with verdicts and bounds");
    auto* oracle = app.add_subcommand("oracle", "Emit the brute-force golden table as CSV");
    auto* selftest = app.add_subcommand("selftest", "Run the invariant suite on the catalog laws");

    add_common(simulate, o, true);
    add_common(criteria, o, false);
    criteria->add_option("--format", o.format, "Report format (text or json)")
        ->check(CLI::IsMember({"text", "json"}));
    add_common(bounds, o, false);
    add_common(sweep, o, true);
    sweep->add_option("--param", o.param, "Swept parameter: alpha, q, c or horizon");
    sweep->add_option("--from", o.from, "First grid value");
    sweep->add_option("--to", o.to, "Last grid value (inclusive)");
    sweep->add_option("--step", o.step, "Grid spacing (> 0)");
    oracle->add_option("--out", o.out_path, "Write the CSV here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }
    if (criteria->parsed() && o.format == "csv")
        o.format = "text";

    try {
        if (simulate->parsed())
            return cmd_run(o, out, false);
        if (sweep->parsed())
            return cmd_run(o, out, true);
        if (criteria->parsed())
            return cmd_criteria(o, out);
        if (bounds->parsed())
            return cmd_bounds(o, out);
        if (oracle->parsed())
            return cmd_oracle(o, out);
        if (selftest->parsed())
            return run_selftest(out) == 0 ? kExitOk : kExitInvariant;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInvariant;
    }
    return kExitConfig;
}

}  // namespace rumour
