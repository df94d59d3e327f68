#include "rumour/config.hpp"

#include <doctest.h>

#include <string>

using namespace rumour;
using nlohmann::json;

namespace {

std::string error_of(const json& doc)
{
    try {
        parse_experiment_config(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

bool starts_with(const std::string& s, const std::string& prefix)
{
    return s.rfind(prefix, 0) == 0;
}

}  // namespace

TEST_CASE("defaults")
{
    const auto c = parse_experiment_config(json::object());
    CHECK(c.process == ProcessKind::firework);
    CHECK(c.horizon == 100);
    CHECK(c.trials == 10000);
    CHECK(c.seed == 1);
    CHECK_FALSE(c.sweep.has_value());
}

TEST_CASE("distribution specs")
{
    CHECK(parse_distribution(json{{"kind", "power_law"}, {"alpha", 2.0}}).kind() == LawKind::power_law);
    CHECK(parse_distribution(json{{"kind", "geometric"}, {"q", 0.5}}).tail(3) == 0.125);
    CHECK(parse_distribution(json{{"kind", "finite"}, {"pmf", {{"0", 0.5}, {"1", 0.5}}}}).pmf(1) == 0.5);
    CHECK(parse_distribution(json{{"kind", "point_mass"}, {"value", 3}}).tail(3) == 1.0);
    CHECK(parse_distribution(json{{"kind", "critical_tail"}}).tail(4) == 0.25);

    const auto s = parse_schedule(
        json{{"kind", "schedule"}, {"example", "ex41"}, {"b", {{"family", "log_harmonic"}, {"c", 1.0}}}});
    CHECK(s.example_family() == ExampleFamily::ex41);
    CHECK(parse_schedule(json{{"kind", "table"},
                              {"laws", json::array({json{{"kind", "point_mass"}, {"value", 0}},
                                                    json{{"kind", "point_mass"}, {"value", 2}}})}})
              .tail(5, 2) == 1.0);
    CHECK(parse_layout(json{{"kind", "arithmetic"}, {"m", 3}}).position(4) == 12);
    CHECK(parse_layout(json{{"kind", "table"}, {"positions", {0, 2, 3}}, {"gap_bound", 2}}).position(2) == 3);
}

TEST_CASE("errors name the field")
{
    CHECK(starts_with(error_of(json{{"trials", 0}}), "trials:"));
    CHECK(starts_with(error_of(json{{"horizon", 0}}), "horizon:"));
    CHECK(starts_with(error_of(json{{"horizon", -3}}), "horizon:"));
    CHECK(starts_with(error_of(json{{"distribution", {{"kind", "power_law"}, {"alpha", 1.0}}}}), "distribution"));
    CHECK(starts_with(error_of(json{{"distribution", {{"kind", "power_law"}}}}), "distribution.alpha:"));
    CHECK(starts_with(error_of(json{{"distribution", {{"kind", "gamma"}}}}), "distribution.kind:"));
    CHECK(starts_with(error_of(json{{"distribution", {{"kind", "geometric"}, {"q", 0.5}, {"p", 1}}}}),
                      "distribution.p:"));
    CHECK(starts_with(error_of(json{{"trails", 10}}), "trails:"));
    CHECK(starts_with(error_of(json{{"process", "reverse"}, {"layout", {{"kind", "arithmetic"}, {"m", 2}}}}),
                      "layout:"));
    CHECK(starts_with(error_of(json{{"generation_cap", 5}}), "generation_cap:"));
    CHECK(starts_with(error_of(json{{"sweep", {{"param", "q"}, {"values", {0.1}}}}}), "sweep.param:"));
    CHECK(starts_with(error_of(json{{"layout", {{"kind", "table"}, {"positions", {0, 1, 5}}, {"gap_bound", 2}}},
                                    {"horizon", 5}}),
                      "layout:"));
}

TEST_CASE("syntax errors report line and column")
{
    try {
        parse_json_text("{\n  \"trials\": 10,\n  \"horizon\": ,\n}", "cfg.json");
        FAIL("expected a ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(starts_with(what, "cfg.json:3:"));
    }
    CHECK_THROWS_AS(load_json_file("/nonexistent/file.json"), ConfigError);
}

TEST_CASE("sweep grids")
{
    const auto g = arithmetic_grid(1.2, 2.6, 0.2);
    REQUIRE(g.size() == 8);
    CHECK(g.front() == 1.2);
    CHECK(g[4] == 2.0);
    CHECK(g.back() == 2.6);
    CHECK(arithmetic_grid(1, 1, 0.5).size() == 1);
    CHECK_THROWS_AS(arithmetic_grid(1, 2, 0), ConfigError);
    CHECK_THROWS_AS(arithmetic_grid(2, 1, 0.1), ConfigError);

    const auto c = parse_experiment_config(json{{"distribution", {{"kind", "power_law"}, {"alpha", 2}}},
                                                {"sweep", {{"param", "alpha"}, {"from", 1.2}, {"to", 2.6}, {"step", 0.2}}}});
    REQUIRE(c.sweep);
    CHECK(c.sweep->values == g);
}

TEST_CASE("overrides")
{
    json doc = {{"distribution", {{"kind", "power_law"}, {"alpha", 2}}}};
    apply_override(doc, "distribution.alpha=1.5");
    apply_override(doc, "trials=50");
    apply_override(doc, "process=reverse");
    apply_override(doc, "layout={\"kind\": \"identity\"}");
    const auto c = parse_experiment_config(doc);
    CHECK(c.distribution["alpha"] == 1.5);
    CHECK(c.trials == 50);
    CHECK(c.process == ProcessKind::reverse);
    CHECK_THROWS_AS(apply_override(doc, "no_equals_sign"), ConfigError);
    CHECK_THROWS_AS(apply_override(doc, "a..b=1"), ConfigError);
}

TEST_CASE("config round trip")
{
    const json docs[] = {
        json::object(),
        json{{"process", "reverse"},
             {"distribution", {{"kind", "power_law"}, {"alpha", 1.5}}},
             {"horizon", 300},
             {"trials", 77},
             {"seed", "18446744073709551615"},
             {"generation_cap", 40},
             {"mode", "sweep"},
             {"bounds", {{"N", 20}, {"K", 30}}}},
        json{{"schedule", {{"kind", "schedule"}, {"example", "ex43"}, {"b", {{"family", "log_harmonic"}, {"c", 1}}}}},
             {"layout", {{"kind", "arithmetic"}, {"m", 2}}},
             {"mode", "generations"},
             {"sweep", {{"param", "c"}, {"values", {0.5, 1.0}}}},
             {"timing", true}},
        json{{"sweep", {{"param", "horizon"}, {"from", 10}, {"to", 30}, {"step", 10}}}},
    };
    for (const auto& d : docs) {
        const auto c = parse_experiment_config(d);
        const auto echo = config_to_json(c);
        CHECK(parse_experiment_config(echo) == c);
        CHECK(config_to_json(parse_experiment_config(echo)) == echo);
    }
    CHECK(parse_experiment_config(docs[1]).seed == 18446744073709551615ULL);
}
