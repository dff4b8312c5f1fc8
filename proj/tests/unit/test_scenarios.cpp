#include "ar/report.hpp"
#include "ar/scenarios.hpp"

#include <doctest.h>

using namespace ar;

TEST_CASE("built-ins are reproducible and pass their own checks")
{
    for (const auto& name : scenarios::builtin_names()) {
        CAPTURE(name);
        auto a = scenarios::builtin(name);
        auto b = scenarios::builtin(name);
        CHECK(a == b);
        auto report = run_checks(a, TrialSeed{});
        CHECK(report.count(Outcome::Error) == 0);
        const bool faulted = name.find("faulted") != std::string::npos || name.find("misdeclared") != std::string::npos;
        CHECK(report.passed() == !faulted);
    }
    CHECK_THROWS_AS(scenarios::builtin("nope"), Error);
    CHECK_THROWS_AS(scenarios::build_voltage_adder(1.5), Error);
}

TEST_CASE("fault-flagged variants fail exactly their documented checks")
{
    auto outcomes = [](const ScenarioBundle& b) {
        std::map<std::string, Outcome> out;
        for (const auto& r : run_checks(b, TrialSeed{}).results) {
            out[r.name] = r.outcome;
        }
        return out;
    };
    auto faulted = outcomes(scenarios::build_voltage_adder(0.0, scenarios::AdderFault::StuckAtZeroLowOutput));
    CHECK(faulted.at("adder-validate") == Outcome::Fail);
    CHECK(faulted.at("adder-commutes-01-10") == Outcome::Fail);
    CHECK(faulted.at("adder-history-01-10") == Outcome::Fail);
    CHECK(faulted.at("adder-compute-01-10") == Outcome::Fail);
    CHECK(faulted.at("adder-instantiate-01-10") == Outcome::Pass);

    auto misdeclared = outcomes(scenarios::build_refinement_stack(true));
    CHECK(misdeclared.at("layer-S_AB-misdeclared") == Outcome::Fail);
    CHECK(misdeclared.at("layer-S_BC") == Outcome::Pass);
    CHECK(misdeclared.at("stack-end-to-end") == Outcome::Fail);
}

TEST_CASE("swap device")
{
    auto bundle = scenarios::build_swap_device();
    auto theory = validate_theory(bundle.theory("swap"), 0.0, Metric::Discrete, 1, 1.0, TrialSeed{}).first;
    CHECK(theory.validated());
    auto pair = theory.abstract_space();
    auto out = run_compute_cycle(theory, make_state(pair, Value(Value::Tuple{integer(7), integer(9)})), "swap", TrialSeed{});
    CHECK(out.output.value == Value(Value::Tuple{integer(9), integer(7)}));
}

TEST_CASE("staged ADD/ADC chain equals single-step ripple-add")
{
    auto bundle = scenarios::build_refinement_stack();
    const auto& layers = bundle.stack("adder-stack").layers();
    const auto& staged = layers.back().dynamics;
    REQUIRE(staged.steps().size() == 2);
    auto single = AbstractDynamics::builtin("ref.add", staged.space(), Builtin::RippleAdd);
    std::size_t zero_sum_inputs = 0;
    for (const auto& s : enumerate(staged.space())) {
        CAPTURE(format_state(s));
        CHECK(evolve_abstract(staged, s) == evolve_abstract(single, s));
        zero_sum_inputs += s.value.tuple()[2].bits().digits == "000" ? 1 : 0;
    }
    CHECK(zero_sum_inputs == 16);
}
