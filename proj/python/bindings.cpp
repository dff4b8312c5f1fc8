#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ar/report.hpp"
#include "ar/scenario_json.hpp"
#include "ar/scenarios.hpp"

namespace py = pybind11;

namespace {

struct Overrides {
    std::optional<double> epsilon;
    std::optional<std::size_t> trials;
};

std::string single(const ar::ScenarioBundle& bundle, ar::CheckDecl decl, std::uint64_t seed, const Overrides& o)
{
    if (o.epsilon) {
        decl.epsilon = *o.epsilon;
    }
    if (o.trials) {
        decl.trials = *o.trials;
    }
    ar::RunReport report;
    report.scenario = bundle.name;
    report.seed = seed;
    report.results.push_back(ar::run_check(bundle, decl, ar::TrialSeed{seed}));
    return ar::render_json(report);
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Bindings for the ar_core verification library";
    m.attr("FORMAT_VERSION") = std::string(ar::kScenarioFormatVersion);

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> storage;
    storage.call_once_and_store_result([&]() { return py::object(py::exception<ar::Error>(m, "ArError", PyExc_ValueError)); });
    py::register_exception_translator([](std::exception_ptr p) {
        const py::object& error = storage.get_stored();
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const ar::Error& e) {
            py::object exc = error(std::string(e.what()));
            py::setattr(exc, "code", py::str(std::string(ar::to_string(e.code()))));
            PyErr_SetObject(error.ptr(), exc.ptr());
        } catch (const nlohmann::json::exception& e) {
            PyErr_SetString(error.ptr(), e.what());
        }
    });

    m.def("builtin_names", &ar::scenarios::builtin_names);

    py::class_<ar::ScenarioBundle>(m, "Scenario")
        .def_static("builtin", &ar::scenarios::builtin, py::arg("name"))
        .def_static("parse", [](const std::string& text) { return ar::parse_scenario(text); }, py::arg("text"))
        .def_readonly("name", &ar::ScenarioBundle::name)
        .def("emit", &ar::emit_scenario)
        .def("theory_ids",
             [](const ar::ScenarioBundle& b) {
                 std::vector<std::string> out;
                 for (const auto& t : b.theories()) {
                     out.push_back(t.id());
                 }
                 return out;
             })
        .def("check_names",
             [](const ar::ScenarioBundle& b) {
                 std::vector<std::string> out;
                 for (const auto& c : b.checks()) {
                     out.push_back(c.name);
                 }
                 return out;
             })
        .def(
            "run_checks_json",
            [](const ar::ScenarioBundle& b, std::uint64_t seed, std::optional<std::string> filter,
               std::optional<double> epsilon, std::optional<std::size_t> trials) {
                return ar::render_json(ar::run_checks(b, ar::TrialSeed{seed}, filter, {epsilon, trials}));
            },
            py::arg("seed") = 0, py::arg("filter") = py::none(), py::arg("epsilon") = py::none(),
            py::arg("trials") = py::none())
        .def(
            "validate_theory_json",
            [](const ar::ScenarioBundle& b, const std::string& theory, std::uint64_t seed, std::optional<double> epsilon,
               std::optional<std::size_t> trials) {
                ar::CheckDecl d;
                d.name = "validate-" + theory;
                d.kind = ar::CheckKind::ValidateTheory;
                d.theory = theory;
                return single(b, d, seed, {epsilon, trials});
            },
            py::arg("theory"), py::arg("seed") = 0, py::arg("epsilon") = py::none(), py::arg("trials") = py::none())
        .def(
            "compute_json",
            [](const ar::ScenarioBundle& b, const std::string& theory, const std::string& input,
               std::string program, std::string embedding, std::uint64_t seed) {
                ar::CheckDecl d;
                d.name = "compute-" + theory;
                d.kind = ar::CheckKind::Compute;
                d.theory = theory;
                const auto& t = b.theory(theory);
                d.prediction = program.empty() && !t.predictions().empty() ? t.predictions().front().name : program;
                d.embedding = std::move(embedding);
                d.state = ar::parse_literal(input);
                return single(b, d, seed, {});
            },
            py::arg("theory"), py::arg("input"), py::arg("program") = "", py::arg("embedding") = "",
            py::arg("seed") = 0)
        .def(
            "check_stack_json",
            [](const ar::ScenarioBundle& b, const std::string& stack, std::uint64_t seed) {
                ar::CheckDecl d;
                d.name = "stack-" + stack;
                d.kind = ar::CheckKind::Stack;
                d.stack = stack;
                return single(b, d, seed, {});
            },
            py::arg("stack"), py::arg("seed") = 0)
        .def(
            "classify_json",
            [](const ar::ScenarioBundle& b, const std::string& joint, bool oracle, std::uint64_t seed) {
                ar::CheckDecl d;
                d.name = "classify-" + joint;
                d.kind = ar::CheckKind::Classify;
                d.composition = joint;
                d.oracle = oracle;
                return single(b, d, seed, {});
            },
            py::arg("joint"), py::arg("oracle") = false, py::arg("seed") = 0);

    m.def(
        "render_report",
        [](const std::string& json, const std::string& format) {
            auto r = ar::report_from_json(ar::Json::parse(json));
            return format == "text" ? ar::render_text(r) : ar::render_json(r);
        },
        py::arg("report_json"), py::arg("format") = "text");
}
