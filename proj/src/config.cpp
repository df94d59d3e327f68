#include "rumour/config.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace rumour {

ConfigError::ConfigError(std::string field, const std::string& message)
    : std::runtime_error(field.empty() ? message : field + ": " + message), field_(std::move(field))
{
}

std::string to_string(ProcessKind p)
{
    return p == ProcessKind::firework ? "firework" : "reverse";
}

nlohmann::json parse_json_text(const std::string& text, const std::string& source)
{
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // e.byte is 1-based and points just past the offending character
        std::size_t line = 1;
        std::size_t col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string what = e.what();
        if (const auto p = what.find("syntax error"); p != std::string::npos)
            what = what.substr(p);
        throw ConfigError("", fmt::format("{}:{}:{}: {}", source, line, col, what));
    }
}

nlohmann::json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("", fmt::format("cannot read config file '{}'", path));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json_text(ss.str(), path);
}

namespace {

std::string join(const std::string& field, const std::string& key)
{
    return field.empty() ? key : field + "." + key;
}

const nlohmann::json& require(const nlohmann::json& spec, const std::string& key, const std::string& field)
{
    if (!spec.is_object())
        throw ConfigError(field, "expected an object");
    const auto it = spec.find(key);
    if (it == spec.end())
        throw ConfigError(join(field, key), "missing required field");
    return *it;
}

double get_number(const nlohmann::json& spec, const std::string& key, const std::string& field)
{
    const auto& v = require(spec, key, field);
    if (!v.is_number())
        throw ConfigError(join(field, key), fmt::format("expected a number, got {}", v.dump()));
    const double x = v.get<double>();
    if (!std::isfinite(x))
        throw ConfigError(join(field, key), "must be finite");
    return x;
}

std::uint64_t as_uint(const nlohmann::json& v, const std::string& field)
{
    if (v.is_number_unsigned())
        return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        const auto x = v.get<std::int64_t>();
        if (x < 0)
            throw ConfigError(field, fmt::format("must be >= 0, got {}", v.dump()));
        return static_cast<std::uint64_t>(x);
    }
    if (v.is_number_float()) {
        const double x = v.get<double>();
        if (x >= 0 && x == std::floor(x) && x < 1.8e19)
            return static_cast<std::uint64_t>(x);
    }
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        try {
            std::size_t used = 0;
            const std::uint64_t x = std::stoull(s, &used, 0);
            if (used == s.size() && !s.empty() && s[0] != '-')
                return x;
        } catch (const std::exception&) {
        }
    }
    throw ConfigError(field, fmt::format("expected a nonnegative integer, got {}", v.dump()));
}

std::uint64_t get_uint(const nlohmann::json& spec, const std::string& key, const std::string& field)
{
    return as_uint(require(spec, key, field), join(field, key));
}

std::string get_string(const nlohmann::json& spec, const std::string& key, const std::string& field)
{
    const auto& v = require(spec, key, field);
    if (!v.is_string())
        throw ConfigError(join(field, key), fmt::format("expected a string, got {}", v.dump()));
    return v.get<std::string>();
}

void reject_unknown(const nlohmann::json& spec, const std::set<std::string>& allowed, const std::string& field)
{
    for (const auto& [k, _] : spec.items()) {
        if (!allowed.count(k))
            throw ConfigError(join(field, k), "unknown field");
    }
}

template <class F>
auto wrap(const std::string& field, F&& build)
{
    try {
        return build();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(field, e.what());
    } catch (const std::domain_error& e) {
        throw ConfigError(field, e.what());
    }
}

}  // namespace

RadiusDistribution parse_distribution(const nlohmann::json& spec, const std::string& field)
{
    const std::string kind = get_string(spec, "kind", field);
    if (kind == "power_law") {
        reject_unknown(spec, {"kind", "alpha"}, field);
        const double alpha = get_number(spec, "alpha", field);
        return wrap(join(field, "alpha"), [&] { return RadiusDistribution::power_law(alpha); });
    }
    if (kind == "geometric") {
        reject_unknown(spec, {"kind", "q"}, field);
        const double q = get_number(spec, "q", field);
        return wrap(join(field, "q"), [&] { return RadiusDistribution::geometric(q); });
    }
    if (kind == "finite") {
        reject_unknown(spec, {"kind", "pmf"}, field);
        const auto& pmf = require(spec, "pmf", field);
        if (!pmf.is_object() || pmf.empty())
            throw ConfigError(join(field, "pmf"), "expected a nonempty object of value: probability");
        std::map<Radius, double> table;
        for (const auto& [k, v] : pmf.items()) {
            const std::string f = join(join(field, "pmf"), k);
            const Radius r = as_uint(nlohmann::json(k), f);
            if (!v.is_number())
                throw ConfigError(f, "expected a probability");
            table[r] += v.get<double>();
        }
        return wrap(join(field, "pmf"), [&] { return RadiusDistribution::finite(table); });
    }
    if (kind == "point_mass") {
        reject_unknown(spec, {"kind", "value"}, field);
        return RadiusDistribution::point_mass(get_uint(spec, "value", field));
    }
    if (kind == "critical_tail") {
        reject_unknown(spec, {"kind"}, field);
        return RadiusDistribution::critical_tail();
    }
    throw ConfigError(join(field, "kind"),
                      fmt::format("unknown distribution kind '{}' (expected power_law, geometric, finite, "
                                  "point_mass, critical_tail, schedule or table)",
                                  kind));
}

BSequence parse_b_sequence(const nlohmann::json& spec, const std::string& field)
{
    const std::string family = get_string(spec, "family", field);
    if (family == "log_harmonic" || family == "inverse_square") {
        reject_unknown(spec, {"family", "c"}, field);
        const double c = spec.contains("c") ? get_number(spec, "c", field) : (family == "log_harmonic" ? 1.0 : 0.5);
        return wrap(join(field, "c"), [&] {
            return family == "log_harmonic" ? BSequence::log_harmonic(c) : BSequence::inverse_square(c);
        });
    }
    if (family == "table") {
        reject_unknown(spec, {"family", "values"}, field);
        const auto& vals = require(spec, "values", field);
        if (!vals.is_array())
            throw ConfigError(join(field, "values"), "expected an array");
        std::vector<double> v;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            if (!vals[i].is_number())
                throw ConfigError(fmt::format("{}[{}]", join(field, "values"), i), "expected a number");
            v.push_back(vals[i].get<double>());
        }
        return wrap(join(field, "values"), [&] { return BSequence::table(std::move(v)); });
    }
    throw ConfigError(join(field, "family"),
                      fmt::format("unknown b-sequence family '{}' (expected log_harmonic, inverse_square, table)",
                                  family));
}

DistributionSchedule parse_schedule(const nlohmann::json& spec, const std::string& field)
{
    const std::string kind = get_string(spec, "kind", field);
    if (kind == "schedule") {
        reject_unknown(spec, {"kind", "example", "b"}, field);
        const std::string ex = get_string(spec, "example", field);
        ExampleFamily which;
        if (ex == "ex41")
            which = ExampleFamily::ex41;
        else if (ex == "ex42")
            which = ExampleFamily::ex42;
        else if (ex == "ex43")
            which = ExampleFamily::ex43;
        else
            throw ConfigError(join(field, "example"), fmt::format("unknown example '{}' (expected ex41, ex42, ex43)", ex));
        const BSequence b = parse_b_sequence(require(spec, "b", field), join(field, "b"));
        return DistributionSchedule::example(which, b);
    }
    if (kind == "table") {
        reject_unknown(spec, {"kind", "laws"}, field);
        const auto& laws = require(spec, "laws", field);
        if (!laws.is_array() || laws.empty())
            throw ConfigError(join(field, "laws"), "expected a nonempty array of distributions");
        std::vector<RadiusDistribution> out;
        std::string label = "table[";
        for (std::size_t i = 0; i < laws.size(); ++i) {
            out.push_back(parse_distribution(laws[i], fmt::format("{}[{}]", join(field, "laws"), i)));
            label += (i ? ";" : "") + out.back().label();
        }
        return DistributionSchedule::from_table(std::move(out), label + "]");
    }
    return DistributionSchedule::homogeneous(parse_distribution(spec, field));
}

VertexLayout parse_layout(const nlohmann::json& spec, const std::string& field)
{
    const std::string kind = get_string(spec, "kind", field);
    if (kind == "identity") {
        reject_unknown(spec, {"kind"}, field);
        return VertexLayout::identity();
    }
    if (kind == "arithmetic") {
        reject_unknown(spec, {"kind", "m"}, field);
        const std::uint64_t m = get_uint(spec, "m", field);
        return wrap(join(field, "m"), [&] { return VertexLayout::arithmetic(m); });
    }
    if (kind == "table") {
        reject_unknown(spec, {"kind", "positions", "gap_bound"}, field);
        const auto& pos = require(spec, "positions", field);
        if (!pos.is_array())
            throw ConfigError(join(field, "positions"), "expected an array");
        std::vector<std::uint64_t> p;
        for (std::size_t i = 0; i < pos.size(); ++i)
            p.push_back(as_uint(pos[i], fmt::format("{}[{}]", join(field, "positions"), i)));
        std::optional<std::uint64_t> gap;
        if (spec.contains("gap_bound"))
            gap = get_uint(spec, "gap_bound", field);
        return wrap(join(field, "positions"), [&] { return VertexLayout::table(std::move(p), gap); });
    }
    throw ConfigError(join(field, "kind"),
                      fmt::format("unknown layout kind '{}' (expected identity, arithmetic, table)", kind));
}

std::vector<double> arithmetic_grid(double from, double to, double step)
{
    if (!std::isfinite(from) || !std::isfinite(to) || !std::isfinite(step))
        throw ConfigError("sweep", "grid bounds must be finite");
    if (!(step > 0.0))
        throw ConfigError("sweep.step", "must be > 0");
    if (to < from)
        throw ConfigError("sweep.to", "must be >= sweep.from");
    const double span = (to - from) / step;
    if (span > 1e6)
        throw ConfigError("sweep", "grid has more than 10^6 points");
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> grid;
    grid.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        // snap to 12 decimals so 1.2 + 3 * 0.2 reads as 1.8
        const double x = from + static_cast<double>(i) * step;
        grid.push_back(std::round(x * 1e12) / 1e12);
    }
    return grid;
}

namespace {

SweepSpec parse_sweep(const nlohmann::json& spec, const nlohmann::json& distribution)
{
    const std::string field = "sweep";
    reject_unknown(spec, {"param", "values", "from", "to", "step"}, field);
    SweepSpec s;
    s.param = get_string(spec, "param", field);
    if (spec.contains("values")) {
        const auto& v = spec["values"];
        if (!v.is_array())
            throw ConfigError("sweep.values", "expected an array");
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number())
                throw ConfigError(fmt::format("sweep.values[{}]", i), "expected a number");
            s.values.push_back(v[i].get<double>());
        }
    } else if (spec.contains("from") || spec.contains("to") || spec.contains("step")) {
        s.values = arithmetic_grid(get_number(spec, "from", field), get_number(spec, "to", field),
                                   get_number(spec, "step", field));
    }
    if (s.values.empty())
        throw ConfigError("sweep.values", "grid is empty");

    const std::string kind = distribution.is_object() && distribution.contains("kind") &&
                                     distribution["kind"].is_string()
                                 ? distribution["kind"].get<std::string>()
                                 : "";
    if (s.param == "alpha") {
        if (kind != "power_law")
            throw ConfigError("sweep.param", "alpha applies to power_law distributions only");
    } else if (s.param == "q") {
        if (kind != "geometric")
            throw ConfigError("sweep.param", "q applies to geometric distributions only");
    } else if (s.param == "c") {
        const bool ok = kind == "schedule" && distribution.contains("b") && distribution["b"].is_object() &&
                        distribution["b"].value("family", "") != "table";
        if (!ok)
            throw ConfigError("sweep.param", "c applies to example schedules with a parametric b-sequence only");
    } else if (s.param == "horizon") {
        for (std::size_t i = 0; i < s.values.size(); ++i) {
            const double h = s.values[i];
            if (!(h >= 1.0) || h != std::floor(h))
                throw ConfigError(fmt::format("sweep.values[{}]", i), "horizon values must be integers >= 1");
        }
    } else {
        throw ConfigError("sweep.param", fmt::format("unknown sweep parameter '{}' (expected alpha, q, c, horizon)",
                                                     s.param));
    }
    return s;
}

}  // namespace

ExperimentConfig parse_experiment_config(const nlohmann::json& doc)
{
    if (!doc.is_object())
        throw ConfigError("", "config must be a JSON object");
    reject_unknown(doc,
                   {"process", "distribution", "schedule", "layout", "horizon", "trials", "seed", "generation_cap",
                    "mode", "sweep", "bounds", "timing", "workers", "output"},
                   "");
    ExperimentConfig c;
    if (doc.contains("process")) {
        const std::string p = get_string(doc, "process", "");
        if (p == "firework")
            c.process = ProcessKind::firework;
        else if (p == "reverse")
            c.process = ProcessKind::reverse;
        else
            throw ConfigError("process", fmt::format("expected firework or reverse, got '{}'", p));
    }
    if (doc.contains("distribution") && doc.contains("schedule"))
        throw ConfigError("schedule", "give either distribution or schedule, not both");
    if (doc.contains("distribution"))
        c.distribution = doc["distribution"];
    else if (doc.contains("schedule"))
        c.distribution = doc["schedule"];
    const std::string dist_field = doc.contains("schedule") ? "schedule" : "distribution";
    parse_schedule(c.distribution, dist_field);

    if (doc.contains("layout"))
        c.layout = doc["layout"];
    const VertexLayout layout = parse_layout(c.layout, "layout");
    if (c.process == ProcessKind::reverse && layout.kind() != VertexLayout::Kind::identity)
        throw ConfigError("layout", "the reverse process runs on the identity layout u_i = i only");

    if (doc.contains("horizon"))
        c.horizon = get_uint(doc, "horizon", "");
    if (c.horizon < 1)
        throw ConfigError("horizon", "must be >= 1");
    wrap("layout", [&] {
        layout.validate(c.horizon);
        return 0;
    });
    if (doc.contains("trials"))
        c.trials = get_uint(doc, "trials", "");
    if (c.trials < 1)
        throw ConfigError("trials", "must be >= 1");
    if (doc.contains("seed"))
        c.seed = get_uint(doc, "seed", "");
    if (doc.contains("generation_cap") && !doc["generation_cap"].is_null()) {
        c.generation_cap = get_uint(doc, "generation_cap", "");
        if (*c.generation_cap < 1)
            throw ConfigError("generation_cap", "must be >= 1");
        if (c.process == ProcessKind::firework)
            throw ConfigError("generation_cap", "applies to the reverse process only");
    }
    if (doc.contains("mode")) {
        const std::string m = get_string(doc, "mode", "");
        if (c.process == ProcessKind::firework) {
            if (m == "frontier")
                c.firework_mode = FireworkMode::frontier;
            else if (m == "generations")
                c.firework_mode = FireworkMode::generations;
            else
                throw ConfigError("mode", fmt::format("firework mode must be frontier or generations, got '{}'", m));
        } else {
            if (m == "one_pass")
                c.reverse_mode = ReverseMode::one_pass;
            else if (m == "sweep")
                c.reverse_mode = ReverseMode::sweep;
            else
                throw ConfigError("mode", fmt::format("reverse mode must be one_pass or sweep, got '{}'", m));
        }
    }
    if (doc.contains("sweep") && !doc["sweep"].is_null())
        c.sweep = parse_sweep(doc["sweep"], c.distribution);
    if (doc.contains("bounds")) {
        const auto& b = doc["bounds"];
        reject_unknown(b, {"J", "upper_n", "N", "K"}, "bounds");
        auto depth = [&](const char* key, std::uint64_t& dst) {
            if (b.contains(key)) {
                dst = get_uint(b, key, "bounds");
                if (dst < 1)
                    throw ConfigError(join("bounds", key), "must be >= 1");
                if (dst > 100000)
                    throw ConfigError(join("bounds", key), "must be <= 100000");
            }
        };
        depth("J", c.bounds.firework_J);
        depth("upper_n", c.bounds.upper_n);
        depth("N", c.bounds.reverse_N);
        depth("K", c.bounds.reverse_K);
    }
    if (doc.contains("timing")) {
        if (!doc["timing"].is_boolean())
            throw ConfigError("timing", "expected true or false");
        c.timing = doc["timing"].get<bool>();
    }
    if (doc.contains("workers")) {
        const std::uint64_t w = get_uint(doc, "workers", "");
        if (w > 4096)
            throw ConfigError("workers", "must be <= 4096");
        c.workers = static_cast<unsigned>(w);
    }
    return c;
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const
{
    return process == o.process && distribution == o.distribution && layout == o.layout && horizon == o.horizon &&
           trials == o.trials && seed == o.seed && generation_cap == o.generation_cap &&
           (process == ProcessKind::firework ? firework_mode == o.firework_mode : reverse_mode == o.reverse_mode) &&
           sweep == o.sweep && bounds == o.bounds && timing == o.timing;
}

nlohmann::json config_to_json(const ExperimentConfig& c)
{
    nlohmann::json j;
    j["process"] = to_string(c.process);
    j["distribution"] = c.distribution;
    j["layout"] = c.layout;
    j["horizon"] = c.horizon;
    j["trials"] = c.trials;
    j["seed"] = c.seed;
    if (c.generation_cap)
        j["generation_cap"] = *c.generation_cap;
    if (c.process == ProcessKind::firework)
        j["mode"] = c.firework_mode == FireworkMode::frontier ? "frontier" : "generations";
    else
        j["mode"] = c.reverse_mode == ReverseMode::one_pass ? "one_pass" : "sweep";
    if (c.sweep)
        j["sweep"] = {{"param", c.sweep->param}, {"values", c.sweep->values}};
    j["bounds"] = {{"J", c.bounds.firework_J},
                   {"upper_n", c.bounds.upper_n},
                   {"N", c.bounds.reverse_N},
                   {"K", c.bounds.reverse_K}};
    j["timing"] = c.timing;
    return j;
}

void set_path(nlohmann::json& doc, const std::string& dotted, nlohmann::json value)
{
    if (dotted.empty())
        throw ConfigError("", "override key is empty");
    if (!doc.is_object())
        doc = nlohmann::json::object();
    nlohmann::json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty())
            throw ConfigError(dotted, "malformed override key");
        if (dot == std::string::npos) {
            (*node)[key] = std::move(value);
            return;
        }
        auto& child = (*node)[key];
        if (!child.is_object())
            child = nlohmann::json::object();
        node = &child;
        start = dot + 1;
    }
}

void apply_override(nlohmann::json& doc, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError(assignment, "override must look like key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    nlohmann::json value = nlohmann::json::parse(text, nullptr, false);
    if (value.is_discarded())
        value = text;
    set_path(doc, key, std::move(value));
}

}  // namespace rumour
