// Python bindings. Configs cross the boundary as JSON text; the package
// wrapper in rumour_sim/__init__.py turns dicts into that text.

#include "rumour/analytics.hpp"
#include "rumour/config.hpp"
#include "rumour/experiment.hpp"
#include "rumour/oracle.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace rumour;

namespace {

nlohmann::json parse(const std::string& text) { return parse_json_text(text, "argument"); }

RadiusDistribution law(const std::string& text) { return parse_distribution(parse(text)); }

DistributionSchedule schedule(const std::string& text) { return parse_schedule(parse(text)); }

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Firework and reverse firework rumour processes";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def("tail", [](const std::string& d, Radius k) { return law(d).tail(k); }, py::arg("distribution"),
          py::arg("k"), "P(R >= k)");
    m.def("pmf", [](const std::string& d, Radius k) { return law(d).pmf(k); }, py::arg("distribution"),
          py::arg("k"));
    m.def("sample", [](const std::string& d, double u) { return law(d).sample(u); }, py::arg("distribution"),
          py::arg("u"), "Inverse-CDF draw for a uniform u in (0, 1]");

    m.def("a_sequence", [](const std::string& s, std::uint64_t n_max) { return a_sequence(schedule(s), 1, n_max); },
          py::arg("schedule"), py::arg("n_max"));
    m.def("exact_reach_prob", [](const std::string& s, std::uint64_t n) { return exact_reach_prob(schedule(s), 1, n); },
          py::arg("schedule"), py::arg("n"));
    m.def(
        "oracle",
        [](const std::string& s, const std::string& process, std::uint64_t n) {
            py::gil_scoped_release release;
            const auto sched = schedule(s);
            const auto r = process == "reverse" ? oracle_reverse(sched, n)
                                                : oracle_firework(sched, VertexLayout::identity(), n);
            return std::make_pair(r.lo, r.hi);
        },
        py::arg("schedule"), py::arg("process"), py::arg("n"),
        "Brute-force interval [lo, hi] for reaching vertex n");

    m.def(
        "criteria",
        [](const std::string& s) {
            const auto sched = schedule(s);
            nlohmann::json out = nlohmann::json::object();
            if (const auto d = sched.constant_law()) {
                out["firework_homogeneous"] = to_json(classify_firework_homogeneous(*d));
                out["reverse_homogeneous"] = to_json(classify_reverse_homogeneous(*d));
            }
            out["firework_heterogeneous"] = to_json(classify_firework_heterogeneous(sched, 1, 1));
            out["reverse_heterogeneous"] = to_json(classify_reverse_heterogeneous(sched));
            return out.dump();
        },
        py::arg("schedule"));

    m.def(
        "simulate",
        [](const std::string& config) {
            const auto c = parse_experiment_config(parse(config));
            SurvivalEstimate e;
            {
                py::gil_scoped_release release;
                e = run_trials(c);
            }
            return py::make_tuple(e.survivors, e.trials, e.p_hat, e.ci_lo, e.ci_hi);
        },
        py::arg("config"), "Returns (survivors, trials, p_hat, ci_lo, ci_hi)");
    m.def(
        "sweep",
        [](const std::string& config) {
            const auto c = parse_experiment_config(parse(config));
            std::vector<SweepRow> rows;
            {
                py::gil_scoped_release release;
                rows = run_sweep(c);
            }
            return rows_to_json(rows, c).dump();
        },
        py::arg("config"));

    m.def("wilson_interval", [](std::uint64_t s, std::uint64_t n) {
        const auto w = wilson_interval(s, n);
        return std::make_pair(w.lo, w.hi);
    });
    m.def("derive_key", &derive_key, py::arg("parent"), py::arg("index"));
}
