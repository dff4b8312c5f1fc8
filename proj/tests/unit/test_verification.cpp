#include "ar/scenarios.hpp"
#include "ar/verification.hpp"

#include "random_systems.hpp"

#include <doctest.h>

using namespace ar;

namespace {

PhysicalState adder_input(const Theory& t, const char* a, const char* b)
{
    return make_state(t.physical_space(), scenarios::adder_voltages(a, b));
}

}  // namespace

TEST_CASE("success rule divides successes by trials")
{
    CHECK(passes(7, 10, 0.7));
    CHECK_FALSE(passes(6, 10, 0.7));
    CHECK(passes(1, 1, 1.0));
    CHECK_FALSE(passes(0, 0, 0.5));
    CHECK(passes(2, 3, 2.0 / 3.0));
}

TEST_CASE("adder diagram for 01 + 10")
{
    auto theory = scenarios::build_voltage_adder().theory("adder");
    auto spec = DiagramSpec::for_prediction(theory, "add");
    auto r = check_commutation(spec, adder_input(theory, "01", "10"), TrialSeed{});
    CHECK(r.passed);
    CHECK(r.upper_path_result.value == Value(Value::Tuple{bits("01"), bits("10"), bits("011")}));
    REQUIRE(r.lower_path_results.size() == 1);
    CHECK(r.lower_path_results[0] == r.upper_path_result);
    CHECK(r.distances == std::vector<double>{0.0});
    CHECK_FALSE(r.evidence);

    auto experiment = run_experiment(theory, adder_input(theory, "01", "10"), spec, TrialSeed{});
    CHECK(experiment.evidence);
    auto outside = make_state(theory.physical_space(), scenarios::adder_voltages("01", "10", "011"));
    try {
        run_experiment(theory, outside, spec, TrialSeed{});
        FAIL("expected OutOfDomain");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::OutOfDomain);
    }
}

TEST_CASE("DiagramSpec parameters are validated")
{
    auto theory = scenarios::build_voltage_adder().theory("adder");
    CHECK_THROWS_AS(DiagramSpec::for_prediction(theory, "add", -1.0), Error);
    CHECK_THROWS_AS(DiagramSpec::for_prediction(theory, "add", 0.0, Metric::Discrete, 0), Error);
    CHECK_THROWS_AS(DiagramSpec::for_prediction(theory, "add", 0.0, Metric::Discrete, 1, 1.5), Error);
    auto spec = DiagramSpec::for_prediction(theory, "add", 0.0, Metric::AbsoluteDifference);
    try {
        check_commutation(spec, adder_input(theory, "00", "00"), TrialSeed{});
        FAIL("expected MetricMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MetricMismatch);
    }
}

TEST_CASE("validation covers the declared domain only")
{
    auto theory = scenarios::build_voltage_adder().theory("adder");
    auto [valid, report] = validate_theory(theory, 0.0, Metric::Discrete, 1, 1.0, TrialSeed{});
    CHECK(report.coverage == 16);
    CHECK(report.passed_cells == 16);
    CHECK(report.all_passed);
    CHECK_FALSE(report.untested_states.has_value());  // continuous space
    CHECK(valid.validated());
    CHECK(valid.evidence() != nullptr);
    CHECK(theory.validity() == ValidityStatus::Untested);

    auto swap = scenarios::build_swap_device().theory("swap");
    auto [swap_valid, swap_report] = validate_theory(swap, 0.0, Metric::Discrete, 1, 1.0, TrialSeed{});
    CHECK(swap_report.coverage == 100);
    CHECK(*swap_report.untested_states == 0);

    auto p = PhysicalSpace::labeled("p", {"a"});
    auto m = AbstractSpace::labeled("m", {"x"});
    auto r = RepresentationRelation::lookup("r", p, m, {{label("a"), label("x")}});
    Theory empty("empty", r, {}, {Prediction{"run", AbstractDynamics::builtin("c", m, Builtin::Identity),
                                             PhysicalDynamics::identity("h", p)}});
    try {
        validate_theory(empty, 0.0, Metric::Discrete, 1, 1.0, TrialSeed{});
        FAIL("expected EmptyDomain");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyDomain);
    }
}

TEST_CASE("faulted adder fails exactly where the low output bit is 1")
{
    auto theory = scenarios::build_voltage_adder(0.0, scenarios::AdderFault::StuckAtZeroLowOutput).theory("adder");
    auto spec = DiagramSpec::for_prediction(theory, "add");
    for (std::uint64_t a = 0; a < 4; ++a) {
        for (std::uint64_t b = 0; b < 4; ++b) {
            auto r = check_commutation(
                spec, adder_input(theory, uint_to_bits(a, 2).digits.c_str(), uint_to_bits(b, 2).digits.c_str()),
                TrialSeed{});
            CHECK(r.passed == (((a + b) & 1u) == 0));
        }
    }
    CHECK(validate_theory(theory, 0.0, Metric::Discrete, 1, 1.0, TrialSeed{}).first.validity() ==
          ValidityStatus::Invalid);
}

TEST_CASE("history cycle compares physical states")
{
    auto theory = scenarios::build_voltage_adder().theory("adder");
    auto spec = DiagramSpec::for_prediction(theory, "add");
    auto m = make_state(theory.abstract_space(), Value(Value::Tuple{bits("11"), bits("11"), bits("000")}));
    auto r = check_history(spec, m, Metric::MaxCoordinate, TrialSeed{});
    CHECK(r.passed);
    CHECK(r.evolved_abstract.value == Value(Value::Tuple{bits("11"), bits("11"), bits("110")}));
    CHECK(r.instantiated_target.value == scenarios::adder_voltages("11", "11", "110"));
    CHECK(r.distances == std::vector<double>{0.0});
}

TEST_CASE("commutation passes iff epsilon reaches the worst distance")
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 40; ++i) {
        auto [theory, size] = testing::random_deterministic_theory(rng, "t" + std::to_string(i));
        const auto& pr = theory.prediction("run");
        // Oracle: evaluate both paths directly from the tables.
        double worst = 0.0;
        for (const auto& p : theory.domain()) {
            auto up = pr.abstract.table().at(theory.representation().table().at(p.value)).integer();
            auto down = theory.representation().table().at(pr.physical.table().at(p.value)).integer();
            worst = std::max(worst, static_cast<double>(std::abs(up - down)));
        }
        for (double eps = 0.0; eps <= static_cast<double>(size); eps += 0.5) {
            auto [t, report] = validate_theory(theory, eps, Metric::AbsoluteDifference, 1, 1.0, TrialSeed{});
            CHECK(report.all_passed == (eps >= worst));
        }
    }
}

TEST_CASE("compute cycle requires a validated theory")
{
    auto theory = scenarios::build_voltage_adder().theory("adder");
    auto m = make_state(theory.abstract_space(), Value(Value::Tuple{bits("01"), bits("10"), bits("000")}));
    try {
        run_compute_cycle(theory, m, "add", TrialSeed{});
        FAIL("expected TheoryNotValidated");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TheoryNotValidated);
    }
    auto valid = validate_theory(theory, 0.0, Metric::Discrete, 1, 1.0, TrialSeed{}).first;
    auto r = run_compute_cycle(valid, m, "add", TrialSeed{});
    CHECK(r.output.value == Value(Value::Tuple{bits("01"), bits("10"), bits("011")}));
    REQUIRE(r.trace.size() == 4);
    CHECK(r.trace[0].stage == "input");
    CHECK(r.trace[1].stage == "encode");
    CHECK(r.trace[2].stage == "evolve");
    CHECK(r.trace[3].stage == "decode");
    CHECK(r.trace[3].literal == "(\"01\",\"10\",\"011\")");

    auto m66 = make_state(theory.abstract_space(), Value(Value::Tuple{bits("11"), bits("11"), bits("000")}));
    CHECK(run_compute_cycle(valid, m66, "add", TrialSeed{}).output.value.tuple()[2] == bits("110"));
}

TEST_CASE("problem embedding")
{
    auto bundle = scenarios::build_voltage_adder();
    const auto& e = bundle.embedding("adder.load-operands");
    auto in = make_state(e.problem_space(), Value(Value::Tuple{bits("10"), bits("11")}));
    CHECK(embed_problem(e, in).value == Value(Value::Tuple{bits("10"), bits("11"), bits("000")}));
    auto n = AbstractSpace::bounded_integer("n", 0, 1);
    CHECK_THROWS_AS(ProblemEmbedding("partial", n, n, {{integer(0), integer(0)}}), Error);
}
