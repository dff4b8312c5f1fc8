#include "ar/refinement.hpp"
#include "ar/scenarios.hpp"

#include <doctest.h>

using namespace ar;

namespace {

Value dec(Integer a, Integer b, Integer s) { return Value(Value::Tuple{integer(a), integer(b), integer(s)}); }

}  // namespace

TEST_CASE("layer checks on the adder stack")
{
    auto stack = scenarios::build_refinement_stack().stack("adder-stack");
    REQUIRE(stack.layers().size() == 3);
    REQUIRE(stack.simulations().size() == 2);
    for (const auto& s : stack.simulations()) {
        auto r = check_layer(s);
        CHECK(r.passed);
        CHECK(r.failures.empty());
        CHECK(r.checked == *s.upper.space.cardinality());
    }
}

TEST_CASE("misdeclared S_AB fails where the swapped encodings change the sum")
{
    auto stack = scenarios::build_refinement_stack(true).stack("adder-stack");
    auto r = check_layer(stack.simulations()[0]);
    CHECK_FALSE(r.passed);
    // Oracle: swapping 1 and 2 shifts a by d(a) with d(1)=+1, d(2)=-1, else 0;
    // the diagram breaks iff d(a)+d(b) != 0.
    auto d = [](Integer v) { return v == 1 ? 1 : v == 2 ? -1 : 0; };
    std::size_t expected = 0;
    for (Integer a = 0; a < 4; ++a) {
        for (Integer b = 0; b < 4; ++b) {
            expected += d(a) + d(b) != 0 ? 7 : 0;  // every sum-register value
        }
    }
    CHECK(r.failures.size() == expected);
    auto failed = [&](const Value& u) {
        return std::any_of(r.failures.begin(), r.failures.end(), [&](const auto& f) { return f.upper_state.value == u; });
    };
    CHECK(failed(dec(1, 1, 0)));
    CHECK_FALSE(failed(dec(1, 2, 0)));  // addition commutes
    CHECK(check_layer(stack.simulations()[1]).passed);

    auto report = check_stack_to_device(stack);
    CHECK_FALSE(report.passed);
    CHECK_FALSE(report.layers.at(0).passed);
    CHECK(report.layers.at(1).passed);
    CHECK(report.device_passed);
}

TEST_CASE("stack to device and end-to-end prediction")
{
    auto stack = scenarios::build_refinement_stack().stack("adder-stack");
    auto report = check_stack_to_device(stack);
    CHECK(report.passed);
    CHECK(report.layers_passed);
    CHECK(report.device_passed);
    REQUIRE(report.inline_validation.has_value());
    CHECK(report.inline_validation->all_passed);
    CHECK_FALSE(report.device_checks.empty());

    StackOptions strict;
    strict.require_validated = true;
    try {
        check_stack_to_device(stack, 0.0, Metric::Discrete, TrialSeed{}, strict);
        FAIL("expected TheoryNotValidated");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TheoryNotValidated);
    }

    auto valid = validate_theory(stack.bottom().theory, 0.0, Metric::Discrete, 1, 1.0, TrialSeed{}).first;
    auto grounded = stack.with_bottom_theory(valid);
    const auto& top = stack.top_layer().space;
    CHECK(predict_through_stack(grounded, make_state(top, dec(1, 2, 0)), TrialSeed{}).value == dec(1, 2, 3));
    CHECK(predict_through_stack(grounded, make_state(top, dec(0, 0, 0)), TrialSeed{}).value == dec(0, 0, 0));
    CHECK(predict_through_stack(grounded, make_state(top, dec(3, 3, 0)), TrialSeed{}).value == dec(3, 3, 6));
    CHECK(stack.map_down(make_state(top, dec(1, 2, 0))).value ==
          Value(Value::Tuple{bits("01"), bits("10"), bits("000")}));
}

TEST_CASE("assembly layer agrees with binary addition on every state")
{
    auto stack = scenarios::build_refinement_stack().stack("adder-stack");
    const auto& binary = stack.layers()[1].dynamics;
    const auto& assembly = stack.layers()[2].dynamics;
    for (const auto& s : enumerate(binary.space())) {
        CHECK(binary.apply(s.value) == assembly.apply(s.value));
    }
}

TEST_CASE("stack declarations are checked")
{
    auto stack = scenarios::build_refinement_stack().stack("adder-stack");
    auto layers = stack.layers();
    auto sims = stack.simulations();
    CHECK_THROWS_AS(RefinementStack("s", layers, {sims[0]}, stack.bottom()), Error);
    std::swap(sims[0], sims[1]);
    CHECK_THROWS_AS(RefinementStack("s", layers, sims, stack.bottom()), Error);
    auto n = AbstractSpace::bounded_integer("n", 0, 1);
    auto layer = RefinementLayer::make("l", AbstractDynamics::builtin("id", n, Builtin::Identity));
    CHECK_THROWS_AS(SimulationRelation::make("partial", layer, layer, {{integer(0), integer(0)}}), Error);
}
