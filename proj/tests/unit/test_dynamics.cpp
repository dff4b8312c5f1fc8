#include "ar/relations.hpp"
#include "ar/scenarios.hpp"

#include <doctest.h>

#include <set>

using namespace ar;

namespace {

AbstractSpace adder_space(std::size_t w)
{
    auto in = AbstractSpace::bitstring("in" + std::to_string(w), w);
    auto out = AbstractSpace::bitstring("out" + std::to_string(w), w + 1);
    return AbstractSpace::tuple("add" + std::to_string(w), {in, in, out});
}

PhysicalState lines(const std::string& a, const std::string& b, const std::string& s = "000")
{
    auto t = scenarios::build_voltage_adder().theory("adder");
    return make_state(t.physical_space(), scenarios::adder_voltages(a, b, s));
}

}  // namespace

TEST_CASE("ripple-add matches integer addition for widths 1 to 4")
{
    for (std::size_t w = 1; w <= 4; ++w) {
        auto space = adder_space(w);
        auto add = AbstractDynamics::builtin("add", space, Builtin::RippleAdd);
        for (std::uint64_t a = 0; a < (1u << w); ++a) {
            for (std::uint64_t b = 0; b < (1u << w); ++b) {
                auto in = make_state(space, Value(Value::Tuple{Value(uint_to_bits(a, w)), Value(uint_to_bits(b, w)),
                                                               Value(uint_to_bits(0, w + 1))}));
                auto out = evolve_abstract(add, in).value.tuple();
                CHECK(bits_to_uint(out[2].bits()) == a + b);
                CHECK(out[0].bits() == uint_to_bits(a, w));
                CHECK(out[1].bits() == uint_to_bits(b, w));
                // Low w bits are the sum modulo 2^w.
                CHECK(bits_to_uint(Bits{out[2].bits().digits.substr(1)}) == (a + b) % (1u << w));
            }
        }
    }
}

TEST_CASE("other builtins")
{
    auto b3 = AbstractSpace::bitstring("b3", 3);
    CHECK(AbstractDynamics::builtin("not", b3, Builtin::BitNot).apply(bits("010")) == bits("101"));
    auto pair = AbstractSpace::tuple("pair", {b3, b3});
    auto v = Value(Value::Tuple{bits("110"), bits("011")});
    CHECK(AbstractDynamics::builtin("and", pair, Builtin::And).apply(v) == Value(Value::Tuple{bits("010"), bits("011")}));
    CHECK(AbstractDynamics::builtin("xor", pair, Builtin::Xor).apply(v) == Value(Value::Tuple{bits("101"), bits("011")}));
    CHECK(AbstractDynamics::builtin("swap", pair, Builtin::SwapPair).apply(v) ==
          Value(Value::Tuple{bits("011"), bits("110")}));
    CHECK(AbstractDynamics::builtin("id", pair, Builtin::Identity).apply(v) == v);

    CHECK_THROWS_AS(AbstractDynamics::builtin("bad", AbstractSpace::bounded_integer("n", 0, 3), Builtin::BitNot), Error);
    CHECK_THROWS_AS(AbstractDynamics::builtin("bad", adder_space(2), Builtin::SwapPair), Error);
    CHECK_THROWS_AS(AbstractDynamics::builtin("bad", pair, Builtin::RippleAdd), Error);
}

TEST_CASE("lookup tables must be total and closed")
{
    auto n = AbstractSpace::bounded_integer("n", 0, 2);
    CHECK_THROWS_AS(AbstractDynamics::lookup("partial", n, {{integer(0), integer(1)}}), Error);
    CHECK_THROWS_AS(AbstractDynamics::lookup("escape", n, {{integer(0), integer(1)}, {integer(1), integer(2)},
                                                           {integer(2), integer(3)}}),
                    Error);
}

TEST_CASE("composition applies first then second")
{
    auto b2 = AbstractSpace::bitstring("b2", 2);
    std::map<Value, Value> shift;
    for (const auto& s : enumerate(b2)) {
        shift.emplace(s.value, bits(s.value.bits().digits.substr(1) + "0"));
    }
    auto left = AbstractDynamics::lookup("shift", b2, shift);
    auto invert = AbstractDynamics::builtin("not", b2, Builtin::BitNot);
    auto shift_then_not = compose_dynamics(left, invert);
    auto not_then_shift = compose_dynamics(invert, left);
    CHECK(shift_then_not.apply(bits("01")) == bits("01"));  // 01 -> 10 -> 01
    CHECK(not_then_shift.apply(bits("01")) == bits("00"));  // 01 -> 10 -> 00
    CHECK(shift_then_not.id() == "shift-then-not");
    CHECK_THROWS_AS(compose_dynamics(left, AbstractDynamics::builtin("x", AbstractSpace::bitstring("b3", 3),
                                                                     Builtin::Identity)),
                    Error);
}

TEST_CASE("voltage-level adder computes every sum")
{
    auto theory = scenarios::build_voltage_adder().theory("adder");
    const auto& device = theory.prediction("add").physical;
    CHECK_FALSE(device.stochastic());
    for (std::uint64_t a = 0; a < 4; ++a) {
        for (std::uint64_t b = 0; b < 4; ++b) {
            auto p = lines(uint_to_bits(a, 2).digits, uint_to_bits(b, 2).digits);
            auto out = represent(theory.representation(), evolve_physical(device, p, TrialSeed{}));
            CHECK(bits_to_uint(out.value.tuple()[2].bits()) == a + b);
        }
    }
}

TEST_CASE("stuck-at-zero fault, evaluated by hand")
{
    auto theory = scenarios::build_voltage_adder(0.0, scenarios::AdderFault::StuckAtZeroLowOutput).theory("adder");
    const auto& device = theory.prediction("add").physical;
    auto run = [&](const char* a, const char* b) {
        return evolve_physical(device, lines(a, b), TrialSeed{}).value.reals();
    };
    // 01 + 01 = 010: the faulted line should read 0 anyway.
    CHECK(run("01", "01") == RealVector{0, 5, 0, 5, 0, 5, 0});
    // 01 + 10 = 011, but the low output line is pinned to 0 V.
    CHECK(run("01", "10") == RealVector{0, 5, 5, 0, 0, 5, 0});
    // 11 + 11 = 110.
    CHECK(run("11", "11") == RealVector{5, 5, 5, 5, 5, 5, 0});
}

TEST_CASE("output-line noise matches the analytic success rate")
{
    auto theory = scenarios::build_voltage_adder(0.1).theory("adder");
    auto spec = DiagramSpec::for_prediction(theory, "add", 0.0, Metric::Discrete, 10000, 0.5);
    auto p = lines("01", "10");
    auto r = check_commutation(spec, p, TrialSeed{2024});
    CHECK(std::abs(r.success_fraction - 0.729) <= 0.03);
    auto again = check_commutation(spec, p, TrialSeed{2024});
    CHECK(again.success_fraction == r.success_fraction);
    CHECK(again.distances == r.distances);
    auto other = check_commutation(spec, p, TrialSeed{2025});
    CHECK(other.distances != r.distances);
}

TEST_CASE("flip probability one inverts every output line")
{
    auto theory = scenarios::build_voltage_adder(1.0).theory("adder");
    const auto& device = theory.prediction("add").physical;
    auto out = evolve_physical(device, lines("01", "10"), TrialSeed{7}).value.reals();
    CHECK(out == RealVector{0, 5, 5, 0, 5, 0, 0});  // 011 inverted to 100
    auto [validated, report] = validate_theory(theory, 0.0, Metric::Discrete, 3, 1.0, TrialSeed{});
    CHECK(report.passed_cells == 0);
    CHECK(validated.validity() == ValidityStatus::Invalid);
}

TEST_CASE("trial seeds")
{
    std::set<std::uint64_t> seen;
    for (std::uint64_t k = 0; k < 1000; ++k) {
        auto s = derive_seed(TrialSeed{42}, k);
        CHECK(s == derive_seed(TrialSeed{42}, k));
        seen.insert(s.value);
    }
    CHECK(seen.size() == 1000);
    CHECK_FALSE(derive_seed(TrialSeed{1}, 0) == derive_seed(TrialSeed{2}, 0));
}

TEST_CASE("noise declarations are validated")
{
    auto v = PhysicalSpace::real_vector("v", {0, 0}, {1, 1});
    Noise wrong_length;
    wrong_length.flip_probability = {0.5};
    CHECK_THROWS_AS(PhysicalDynamics::coordinate_update("n", v, Netlist{}, wrong_length), Error);
    Noise out_of_range;
    out_of_range.flip_probability = {0.5, 1.5};
    CHECK_THROWS_AS(PhysicalDynamics::coordinate_update("n", v, Netlist{}, out_of_range), Error);

    auto l = PhysicalSpace::labeled("l", {"a", "b"});
    Noise unpaired;
    unpaired.flip_probability = {0.5};
    CHECK_THROWS_AS(PhysicalDynamics::identity("id", l).with_noise("n", unpaired), Error);
    Noise paired = unpaired;
    paired.partners = {{"a", "b"}, {"b", "a"}};
    auto noisy = PhysicalDynamics::identity("id", l).with_noise("n", paired);
    CHECK(noisy.stochastic());
    std::size_t flips = 0;
    for (std::uint64_t k = 0; k < 2000; ++k) {
        flips += noisy.apply(label("a"), derive_seed(TrialSeed{3}, k)) == label("b");
    }
    CHECK(flips > 900);
    CHECK(flips < 1100);
}

TEST_CASE("netlists reject forward references and bad lines")
{
    auto v = PhysicalSpace::real_vector("v", {0, 0}, {1, 1});
    Netlist forward;
    forward.wires = {Gate{Gate::Op::Not, {1}, 0, 0, false}, Gate{Gate::Op::Sense, {}, 0, 0.5, false}};
    CHECK_THROWS_AS(PhysicalDynamics::coordinate_update("f", v, forward), Error);
    Netlist bad_line;
    bad_line.wires = {Gate{Gate::Op::Sense, {}, 5, 0.5, false}};
    CHECK_THROWS_AS(PhysicalDynamics::coordinate_update("b", v, bad_line), Error);
}
