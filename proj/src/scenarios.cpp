#include "ar/scenarios.hpp"

#include <algorithm>

namespace ar::scenarios {

namespace {

constexpr double kLow = 0.0;
constexpr double kHigh = 5.0;
constexpr double kThreshold = 2.5;
constexpr std::size_t kLines = 7;

struct AdderParts {
    PhysicalSpace lines;
    AbstractSpace reg2;
    AbstractSpace reg3;
    AbstractSpace state;
    Theory theory;
};

Gate sense(std::size_t line) { return Gate{Gate::Op::Sense, {}, line, kThreshold, false}; }
Gate gate(Gate::Op op, std::vector<std::size_t> inputs) { return Gate{op, std::move(inputs), 0, 0.0, false}; }

Netlist ripple_carry_netlist(AdderFault fault)
{
    Netlist net;
    net.wires = {
        sense(0),                               // 0: a1
        sense(1),                               // 1: a0
        sense(2),                               // 2: b1
        sense(3),                               // 3: b0
        gate(Gate::Op::Xor, {1, 3}),            // 4: s0
        gate(Gate::Op::And, {1, 3}),            // 5: c0
        gate(Gate::Op::Xor, {0, 2, 5}),         // 6: s1
        gate(Gate::Op::Majority, {0, 2, 5}),    // 7: c1
    };
    std::size_t low_output = 4;
    if (fault == AdderFault::StuckAtZeroLowOutput) {
        net.wires.push_back(Gate{Gate::Op::Constant, {}, 0, 0.0, false});
        low_output = 8;
    }
    net.drives = {{4, 7}, {5, 6}, {6, low_output}};
    return net;
}

AdderParts adder_parts(double flip_probability, AdderFault fault)
{
    if (!(flip_probability >= 0.0 && flip_probability <= 1.0)) {
        fail(ErrorCode::InvalidDeclaration, "flip probability must lie in [0, 1]");
    }
    auto lines = PhysicalSpace::real_vector("adder.lines", std::vector<double>(kLines, kLow),
                                            std::vector<double>(kLines, kHigh));
    auto reg2 = AbstractSpace::bitstring("reg2", 2);
    auto reg3 = AbstractSpace::bitstring("reg3", 3);
    auto state = AbstractSpace::tuple("adder.registers", {reg2, reg2, reg3});
    auto rep = RepresentationRelation::threshold("adder.voltage-encoding", lines, state,
                                                 std::vector<double>(kLines, kThreshold));

    std::string device_id = "adder.device";
    Noise noise;
    if (flip_probability > 0.0) {
        noise.flip_probability = {0, 0, 0, 0, flip_probability, flip_probability, flip_probability};
        noise.thresholds = std::vector<double>(kLines, kThreshold);
        device_id += "-noisy";
    }
    if (fault == AdderFault::StuckAtZeroLowOutput) {
        device_id += "-stuck-low";
    }
    auto device = PhysicalDynamics::coordinate_update(device_id, lines, ripple_carry_netlist(fault), noise);
    auto add = AbstractDynamics::builtin("adder.ripple-add", state, Builtin::RippleAdd);

    InstantiationProcedure inst;
    inst.engineering = PhysicalDynamics::identity("adder.prepare", lines);
    for (const auto& b : enumerate(AbstractSpace::bitstring("lines", kLines))) {
        const auto& d = b.value.bits().digits;
        inst.seeds.push_back(make_state(lines, adder_voltages(d.substr(0, 2), d.substr(2, 2), d.substr(4, 3))));
    }
    std::vector<PhysicalState> domain;
    for (const auto& a : enumerate(reg2)) {
        for (const auto& b : enumerate(reg2)) {
            domain.push_back(make_state(lines, adder_voltages(a.value.bits().digits, b.value.bits().digits)));
        }
    }
    Theory theory("adder", rep, std::move(domain), {Prediction{"add", add, device}}, std::move(inst));
    return AdderParts{lines, reg2, reg3, state, std::move(theory)};
}

Value registers(const std::string& a, const std::string& b, const std::string& sum)
{
    return Value(Value::Tuple{bits(a), bits(b), bits(sum)});
}

CheckDecl check(std::string name, CheckKind kind)
{
    CheckDecl c;
    c.name = std::move(name);
    c.kind = kind;
    return c;
}

std::string bin(std::uint64_t v, std::size_t width) { return uint_to_bits(v, width).digits; }

PhysicalDynamics identity_lookup(const std::string& id, const PhysicalSpace& space)
{
    return PhysicalDynamics::identity(id, space);
}

}  // namespace

Value adder_voltages(const std::string& a, const std::string& b, const std::string& sum)
{
    RealVector v;
    for (const auto* reg : {&a, &b, &sum}) {
        for (char c : *reg) {
            v.push_back(c == '1' ? kHigh : kLow);
        }
    }
    return Value(std::move(v));
}

ScenarioBundle build_voltage_adder(double flip_probability, AdderFault fault)
{
    auto parts = adder_parts(flip_probability, fault);
    ScenarioBundle bundle;
    bundle.name = "voltage-adder";
    bundle.description = "2-bit ripple-carry adder on seven voltage lines; high voltage reads as 1";
    if (flip_probability > 0.0) {
        bundle.name += "-noisy";
        bundle.description += "; output lines flip independently with probability " + std::to_string(flip_probability);
    }
    if (fault == AdderFault::StuckAtZeroLowOutput) {
        bundle.name += "-faulted";
        bundle.description += "; the low output line is stuck at 0 V (checks touching it fail)";
    }
    bundle.add_theory(parts.theory);

    auto operands = AbstractSpace::tuple("adder.operands", {parts.reg2, parts.reg2});
    std::map<Value, Value> embed;
    for (const auto& m : enumerate(operands)) {
        embed.emplace(m.value, registers(m.value.tuple()[0].bits().digits, m.value.tuple()[1].bits().digits, "000"));
    }
    bundle.add_embedding(ProblemEmbedding("adder.load-operands", operands, parts.state, std::move(embed)));

    if (flip_probability > 0.0) {
        // Calibrated stochastic checks: per-trial success is (1 - p)^3.
        const double success = (1.0 - flip_probability) * (1.0 - flip_probability) * (1.0 - flip_probability);
        auto c = check("adder-commutes-noisy", CheckKind::Commutation);
        c.theory = "adder";
        c.prediction = "add";
        c.state = adder_voltages("01", "10");
        c.trials = 10000;
        c.required_success = std::max(0.01, success - 0.05);
        bundle.add_check(c);
        return bundle;
    }

    auto validate = check("adder-validate", CheckKind::ValidateTheory);
    validate.theory = "adder";
    bundle.add_check(validate);

    auto commute = check("adder-commutes-01-10", CheckKind::Commutation);
    commute.theory = "adder";
    commute.prediction = "add";
    commute.state = adder_voltages("01", "10");
    commute.metric = Metric::MaxCoordinate;
    bundle.add_check(commute);

    auto history = check("adder-history-01-10", CheckKind::History);
    history.theory = "adder";
    history.prediction = "add";
    history.state = registers("01", "10", "000");
    history.physical_metric = Metric::MaxCoordinate;
    bundle.add_check(history);

    auto inst = check("adder-instantiate-01-10", CheckKind::Instantiate);
    inst.theory = "adder";
    inst.state = registers("01", "10", "000");
    bundle.add_check(inst);

    auto compute = check("adder-compute-01-10", CheckKind::Compute);
    compute.theory = "adder";
    compute.prediction = "add";
    compute.embedding = "adder.load-operands";
    compute.state = Value(Value::Tuple{bits("01"), bits("10")});
    compute.expect = registers("01", "10", "011");
    bundle.add_check(compute);
    return bundle;
}

ScenarioBundle build_refinement_stack(bool misdeclared)
{
    auto parts = adder_parts(0.0, AdderFault::None);
    const auto& state = parts.state;

    // Decimal layer.
    auto digit = AbstractSpace::bounded_integer("dec.digit", 0, 3);
    auto total = AbstractSpace::bounded_integer("dec.total", 0, 6);
    auto dec_space = AbstractSpace::tuple("dec.registers", {digit, digit, total});
    AbstractDynamics::Table dec_table;
    for (const auto& s : enumerate(dec_space)) {
        const auto& t = s.value.tuple();
        dec_table.emplace(s.value, Value(Value::Tuple{t[0], t[1], integer(t[0].integer() + t[1].integer())}));
    }
    auto dec = RefinementLayer::make("dec-add", AbstractDynamics::lookup("dec.add", dec_space, dec_table));

    // Binary layer.
    auto binary = RefinementLayer::make("binary-add", AbstractDynamics::builtin("bin.add", state, Builtin::RippleAdd));

    // Assembly layer: ADD on the low bits, then ADC on the high bits, with the
    // carry parked in the accumulator between the two instructions.
    AbstractDynamics::Table add_low;
    AbstractDynamics::Table add_high;
    for (const auto& s : enumerate(state)) {
        const auto& t = s.value.tuple();
        const auto& a = t[0].bits().digits;
        const auto& b = t[1].bits().digits;
        const auto& acc = t[2].bits().digits;
        const bool a0 = a[1] == '1', b0 = b[1] == '1';
        std::string low = std::string("0") + ((a0 && b0) ? '1' : '0') + ((a0 != b0) ? '1' : '0');
        add_low.emplace(s.value, registers(a, b, low));

        const bool a1 = a[0] == '1', b1 = b[0] == '1', carry = acc[1] == '1';
        const bool s1 = (a1 != b1) != carry;
        const bool c1 = (a1 && b1) || (carry && (a1 != b1));
        std::string high = std::string() + (c1 ? '1' : '0') + (s1 ? '1' : '0') + acc[2];
        add_high.emplace(s.value, registers(a, b, high));
    }
    auto asm_add = AbstractDynamics::chain("asm.add", {AbstractDynamics::lookup("asm.add-low", state, add_low),
                                                       AbstractDynamics::lookup("asm.adc-high", state, add_high)});
    auto assembly = RefinementLayer::make("asm-add", asm_add);

    auto encode = [&](Integer v) {
        if (misdeclared && (v == 1 || v == 2)) {
            v = 3 - v;
        }
        return bin(static_cast<std::uint64_t>(v), 2);
    };
    std::map<Value, Value> dec_to_bin;
    for (const auto& s : enumerate(dec_space)) {
        const auto& t = s.value.tuple();
        dec_to_bin.emplace(s.value, registers(encode(t[0].integer()), encode(t[1].integer()),
                                              bin(static_cast<std::uint64_t>(t[2].integer()), 3)));
    }
    std::map<Value, Value> bin_to_asm;
    for (const auto& s : enumerate(state)) {
        bin_to_asm.emplace(s.value, s.value);
    }
    auto s_ab = SimulationRelation::make(misdeclared ? "S_AB-misdeclared" : "S_AB", dec, binary, std::move(dec_to_bin));
    auto s_bc = SimulationRelation::make("S_BC", binary, assembly, std::move(bin_to_asm));
    RefinementStack stack("adder-stack", {dec, binary, assembly}, {s_ab, s_bc}, DeviceBinding{parts.theory, "add"});

    ScenarioBundle bundle;
    bundle.name = misdeclared ? "refinement-stack-misdeclared" : "refinement-stack";
    bundle.description = "decimal, binary and assembly addition refined down to the voltage adder";
    if (misdeclared) {
        bundle.description += "; S_AB swaps the encodings of 1 and 2, so the S_AB layer check fails";
    }
    bundle.add_stack(stack);

    auto end_to_end = check("stack-end-to-end", CheckKind::Stack);
    end_to_end.stack = "adder-stack";
    end_to_end.state = Value(Value::Tuple{integer(1), integer(2), integer(0)});
    end_to_end.expect = Value(Value::Tuple{integer(1), integer(2), integer(3)});
    bundle.add_check(end_to_end);
    for (const auto& s : stack.simulations()) {
        auto layer = check("layer-" + s.id, CheckKind::Layer);
        layer.stack = "adder-stack";
        layer.simulation = s.id;
        bundle.add_check(layer);
    }
    return bundle;
}

ScenarioBundle build_swap_device()
{
    std::vector<std::string> labels;
    for (int k = 0; k < 10; ++k) {
        labels.push_back("q" + std::to_string(k));
    }
    auto reg = PhysicalSpace::labeled("swap.register", labels);
    auto regs = PhysicalSpace::tuple("swap.registers", {reg, reg});
    auto digit = AbstractSpace::bounded_integer("swap.digit", 0, 9);
    auto pair = AbstractSpace::tuple("swap.pair", {digit, digit});

    RepresentationRelation::Table read;
    for (int k = 0; k < 10; ++k) {
        read.emplace(label(labels[k]), integer(k));
    }
    auto read_one = RepresentationRelation::lookup("swap.read", reg, digit, std::move(read));
    auto read_pair = RepresentationRelation::tuple_wise("swap.read-pair", regs, pair, {read_one, read_one});

    PhysicalDynamics::Table exchange;
    InstantiationProcedure inst;
    inst.engineering = identity_lookup("swap.prepare", regs);
    std::vector<PhysicalState> domain;
    for (const auto& s : enumerate(regs)) {
        const auto& t = s.value.tuple();
        exchange.emplace(s.value, Value(Value::Tuple{t[1], t[0]}));
        inst.seeds.push_back(s);
        domain.push_back(s);
    }
    auto device = PhysicalDynamics::lookup("swap.exchange", regs, std::move(exchange));
    auto swap = AbstractDynamics::builtin("swap.swap-pair", pair, Builtin::SwapPair);
    Theory theory("swap", read_pair, std::move(domain), {Prediction{"swap", swap, device}}, std::move(inst));

    ScenarioBundle bundle;
    bundle.name = "swap-device";
    bundle.description = "two digit registers exchanged by the device; abstractly the swap of a pair";
    bundle.add_theory(theory);

    auto validate = check("swap-validate", CheckKind::ValidateTheory);
    validate.theory = "swap";
    bundle.add_check(validate);
    auto compute = check("swap-compute-7-9", CheckKind::Compute);
    compute.theory = "swap";
    compute.prediction = "swap";
    compute.state = Value(Value::Tuple{integer(7), integer(9)});
    compute.expect = Value(Value::Tuple{integer(9), integer(7)});
    bundle.add_check(compute);
    auto same = check("swap-compute-4-4", CheckKind::Compute);
    same.theory = "swap";
    same.prediction = "swap";
    same.state = Value(Value::Tuple{integer(4), integer(4)});
    same.expect = same.state;
    bundle.add_check(same);
    return bundle;
}

ScenarioBundle build_social_machine()
{
    // Human: pictures in front of a volunteer, tagged by shape.
    auto percept = PhysicalSpace::labeled("human.percept", {"img-a", "img-b", "img-c", "img-d", "img-e", "img-f"});
    auto tag = AbstractSpace::labeled("human.tag", {"round", "square", "spiral"});
    const std::map<std::string, std::string> tags{{"img-a", "round"},  {"img-b", "round"},  {"img-c", "square"},
                                                  {"img-d", "spiral"}, {"img-e", "spiral"}, {"img-f", "round"}};
    RepresentationRelation::Table see;
    for (const auto& [img, t] : tags) {
        see.emplace(label(img), label(t));
    }
    auto tau = RepresentationRelation::lookup("human.tagging", percept, tag, see);
    auto look = identity_lookup("human.look", percept);
    auto report = AbstractDynamics::builtin("human.report", tag, Builtin::Identity);
    InstantiationProcedure human_inst{enumerate(percept), identity_lookup("human.present", percept)};
    Theory human("human", tau, enumerate(percept), {Prediction{"classify", report, look}}, human_inst);

    // Machine: a saturating vote tally.
    auto tally = PhysicalSpace::labeled("machine.tally", {"t0", "t1", "t2"});
    auto count = AbstractSpace::bounded_integer("machine.count", 0, 2);
    auto nu = RepresentationRelation::lookup("machine.read-tally", tally, count,
                                             {{label("t0"), integer(0)}, {label("t1"), integer(1)},
                                              {label("t2"), integer(2)}});
    auto step = PhysicalDynamics::lookup("machine.step", tally,
                                         {{label("t0"), label("t1")}, {label("t1"), label("t2")},
                                          {label("t2"), label("t2")}});
    auto increment = AbstractDynamics::lookup("machine.increment", count,
                                              {{integer(0), integer(1)}, {integer(1), integer(2)},
                                               {integer(2), integer(2)}});
    InstantiationProcedure machine_inst{enumerate(tally), identity_lookup("machine.reset", tally)};
    Theory machine("machine", nu, enumerate(tally), {Prediction{"aggregate", increment, step}}, machine_inst);

    // Joint: one catalogue entry per (picture, tally) pair.
    auto joint_space = PhysicalSpace::tuple("social.joint", {percept, tally});
    auto catalogue = AbstractSpace::labeled(
        "social.catalogue", {"pending", "candidate-elliptical", "candidate-spiral", "elliptical", "spiral"});
    const std::map<std::string, std::string> galaxy_class{
        {"round", "elliptical"}, {"square", "elliptical"}, {"spiral", "spiral"}};
    RepresentationRelation::Table entry;
    for (const auto& s : enumerate(joint_space)) {
        const auto& t = s.value.tuple();
        const auto& cls = galaxy_class.at(tags.at(t[0].label().name));
        const auto& votes = t[1].label().name;
        entry.emplace(s.value, label(votes == "t0" ? "pending" : votes == "t1" ? "candidate-" + cls : cls));
    }
    auto mu = RepresentationRelation::lookup("social.catalogue-entry", joint_space, catalogue, entry);
    auto consensus = AbstractDynamics::lookup("social.consensus", catalogue,
                                              {{label("pending"), label("pending")},
                                               {label("candidate-elliptical"), label("elliptical")},
                                               {label("candidate-spiral"), label("spiral")},
                                               {label("elliptical"), label("elliptical")},
                                               {label("spiral"), label("spiral")}});

    ScenarioBundle bundle;
    bundle.name = "social-machine";
    bundle.description = "toy crowd classification: human shape tags plus a machine vote tally, jointly a galaxy catalogue";
    for (const auto* t : {&human, &machine}) {
        auto v = check(t->id() + "-validate", CheckKind::ValidateTheory);
        v.theory = t->id();
        bundle.add_theory(*t);
        bundle.add_check(v);
    }
    CompositionDecl social{"social", {human, "classify"}, {machine, "aggregate"}, CompositionDecl::Mode::Declared,
                           mu, consensus};
    CompositionDecl side_by_side{"human-with-machine", {human, "classify"}, {machine, "aggregate"},
                                 CompositionDecl::Mode::Parallel, {}, {}};
    bundle.add_composition(social);
    bundle.add_composition(side_by_side);

    auto heterotic = check("social-classify", CheckKind::Classify);
    heterotic.composition = "social";
    heterotic.expect_class = CompositionKind::Heterotic;
    heterotic.oracle = true;
    bundle.add_check(heterotic);
    auto hybrid = check("side-by-side-classify", CheckKind::Classify);
    hybrid.composition = "human-with-machine";
    hybrid.expect_class = CompositionKind::Hybrid;
    hybrid.oracle = true;
    bundle.add_check(hybrid);
    return bundle;
}

ScenarioBundle build_xor_joint(XorVariant variant)
{
    auto line = PhysicalSpace::labeled("bit.line", {"lo", "hi"});
    auto bit = AbstractSpace::bitstring("bit", 1);
    auto read = RepresentationRelation::lookup("bit.read", line, bit, {{label("lo"), bits("0")}, {label("hi"), bits("1")}});
    auto keep = identity_lookup("bit.keep", line);
    auto hold = AbstractDynamics::builtin("bit.hold", bit, Builtin::Identity);
    auto component = [&](const std::string& id) {
        InstantiationProcedure inst{enumerate(line), identity_lookup("bit.set", line)};
        return Theory(id, read, enumerate(line), {Prediction{"hold", hold, keep}}, inst);
    };
    Theory left = component("left-bit");
    Theory right = component("right-bit");

    auto joint_space = PhysicalSpace::tuple("xor.lines", {line, line});
    auto pair = AbstractSpace::tuple("xor.bits", {bit, bit});
    auto mu = RepresentationRelation::tuple_wise("xor.read", joint_space, pair, {read, read});
    AbstractDynamics d;
    CompositionKind expected = CompositionKind::Heterotic;
    switch (variant) {
    case XorVariant::Xor: d = AbstractDynamics::builtin("xor.couple", pair, Builtin::Xor); break;
    case XorVariant::NotLeft: {
        AbstractDynamics::Table t;
        for (const auto& s : enumerate(pair)) {
            const auto& v = s.value.tuple();
            t.emplace(s.value, Value(Value::Tuple{bits(v[0].bits().digits == "1" ? "0" : "1"), v[1]}));
        }
        d = AbstractDynamics::lookup("xor.not-left", pair, std::move(t));
        expected = CompositionKind::Hybrid;
        break;
    }
    case XorVariant::Identity:
        d = AbstractDynamics::builtin("xor.identity", pair, Builtin::Identity);
        expected = CompositionKind::Hybrid;
        break;
    }

    ScenarioBundle bundle;
    bundle.name = variant == XorVariant::Xor       ? "xor-joint"
                  : variant == XorVariant::NotLeft ? "xor-joint-not"
                                                   : "xor-joint-identity";
    bundle.description = "two 1-bit components with a product representation; joint dynamics " + d.id();
    bundle.add_composition(CompositionDecl{"xor", {left, "hold"}, {right, "hold"}, CompositionDecl::Mode::Declared, mu, d});
    bundle.add_composition(
        CompositionDecl{"bits-parallel", {left, "hold"}, {right, "hold"}, CompositionDecl::Mode::Parallel, {}, {}});
    auto c = check("xor-classify", CheckKind::Classify);
    c.composition = "xor";
    c.expect_class = expected;
    c.oracle = true;
    bundle.add_check(c);
    auto p = check("bits-parallel-classify", CheckKind::Classify);
    p.composition = "bits-parallel";
    p.expect_class = CompositionKind::Hybrid;
    p.oracle = true;
    bundle.add_check(p);
    return bundle;
}

std::vector<std::string> builtin_names()
{
    return {"voltage-adder",  "voltage-adder-noisy", "voltage-adder-faulted", "refinement-stack",
            "refinement-stack-misdeclared", "swap-device", "social-machine", "xor-joint",
            "xor-joint-not", "xor-joint-identity"};
}

ScenarioBundle builtin(const std::string& name)
{
    if (name == "voltage-adder") return build_voltage_adder();
    if (name == "voltage-adder-noisy") return build_voltage_adder(0.1);
    if (name == "voltage-adder-faulted") return build_voltage_adder(0.0, AdderFault::StuckAtZeroLowOutput);
    if (name == "refinement-stack") return build_refinement_stack();
    if (name == "refinement-stack-misdeclared") return build_refinement_stack(true);
    if (name == "swap-device") return build_swap_device();
    if (name == "social-machine") return build_social_machine();
    if (name == "xor-joint") return build_xor_joint();
    if (name == "xor-joint-not") return build_xor_joint(XorVariant::NotLeft);
    if (name == "xor-joint-identity") return build_xor_joint(XorVariant::Identity);
    fail(ErrorCode::UnknownReference, "no built-in scenario named '" + name + "'");
}

}  // namespace ar::scenarios
