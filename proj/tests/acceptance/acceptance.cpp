// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include "ar/report.hpp"
#include "ar/scenarios.hpp"

#include "random_systems.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

using namespace ar;

namespace {

// Tolerances and sizes pinned here.
constexpr double kAdderRuntimeBudgetSeconds = 1.0;
constexpr double kNoiseFlip = 0.1;
constexpr double kNoiseAnalytic = 0.9 * 0.9 * 0.9;
constexpr double kNoiseTolerance = 0.03;
constexpr std::size_t kNoiseTrials = 10000;
constexpr std::uint64_t kFixedSeed = 20240611;
constexpr std::size_t kMonotoneScenarios = 100;
constexpr std::size_t kRandomJoints = 200;

struct Verdict {
    bool ok = true;
    std::ostringstream detail;
    void expect(bool cond, const std::string& what)
    {
        if (!cond) {
            if (ok) {
                detail.str("");
            }
            ok = false;
            detail << what << "; ";
        }
    }
};

Theory validated(const Theory& t)
{
    return validate_theory(t, 0.0, Metric::Discrete, 1, 1.0, TrialSeed{}).first;
}

std::vector<Theory> builtin_theories()
{
    std::vector<Theory> out;
    for (const auto& name : scenarios::builtin_names()) {
        auto bundle = scenarios::builtin(name);
        for (const auto& t : bundle.theories()) {
            if (std::none_of(out.begin(), out.end(), [&](const Theory& o) { return o == t; })) {
                out.push_back(t);
            }
        }
    }
    return out;
}

void adder_reproduction(Verdict& o)
{
    auto start = std::chrono::steady_clock::now();
    auto bundle = scenarios::build_voltage_adder(0.0);
    auto [theory, report] = validate_theory(bundle.theory("adder"), 0.0, Metric::Discrete, 1, 1.0, TrialSeed{});
    const auto& e = bundle.embedding("adder.load-operands");
    auto input = embed_problem(e, make_state(e.problem_space(), Value(Value::Tuple{bits("01"), bits("10")})));
    auto result = run_compute_cycle(theory, input, "add", TrialSeed{});
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const auto& sum = result.output.value.tuple()[2].bits();
    o.expect(report.passed_cells == 16 && report.coverage == 16, "validation not 16/16");
    o.expect(bits_to_uint(sum) == 3, "sum register is " + sum.digits);
    o.expect(sum.digits.substr(sum.digits.find('1')) == "11", "significant digits differ from 11");
    o.expect(seconds < kAdderRuntimeBudgetSeconds, "runtime over budget");
    if (o.ok) {
        o.detail << report.passed_cells << "/" << report.coverage << " diagrams at eps=0; 01+10 -> sum register \""
                 << sum.digits << "\" (value 3, digits 11); " << seconds * 1000 << " ms";
    }
}

void refinement_stack(Verdict& o)
{
    auto stack = scenarios::build_refinement_stack().stack("adder-stack");
    auto report = check_stack_to_device(stack);
    o.expect(report.passed, "end-to-end stack check failed");
    auto grounded = stack.with_bottom_theory(validated(stack.bottom().theory));
    auto top = make_state(stack.top_layer().space, Value(Value::Tuple{integer(1), integer(2), integer(0)}));
    auto predicted = predict_through_stack(grounded, top, TrialSeed{});
    o.expect(predicted.value.tuple()[2] == integer(3), "(1,2) predicts " + format_state(predicted));

    auto bad = scenarios::build_refinement_stack(true).stack("adder-stack");
    auto bad_report = check_stack_to_device(bad);
    std::vector<std::string> failed;
    for (const auto& l : bad_report.layers) {
        if (!l.passed) {
            failed.push_back(l.simulation_id);
        }
    }
    o.expect(failed == std::vector<std::string>{"S_AB-misdeclared"}, "misdeclared variant fails other layers");
    o.expect(bad_report.device_passed, "misdeclared variant broke the device checks");
    if (o.ok) {
        o.detail << "stack passes at eps=0; (1,2) -> " << predicted.value.tuple()[2].integer()
                 << "; misdeclared variant fails only " << failed.front();
    }
}

void fault_sensitivity(Verdict& o)
{
    auto count_failures = [&](const Theory& t, std::size_t& low_one_pairs) {
        auto spec = DiagramSpec::for_prediction(t, "add");
        std::size_t failures = 0;
        low_one_pairs = 0;
        for (std::uint64_t a = 0; a < 4; ++a) {
            for (std::uint64_t b = 0; b < 4; ++b) {
                auto p = make_state(t.physical_space(),
                                    scenarios::adder_voltages(uint_to_bits(a, 2).digits, uint_to_bits(b, 2).digits));
                bool passed = check_commutation(spec, p, TrialSeed{}).passed;
                if ((a + b) & 1u) {
                    ++low_one_pairs;
                    failures += passed ? 0 : 1;
                } else {
                    o.expect(passed, "pair without a 1 on the faulted line failed");
                }
            }
        }
        return failures;
    };
    std::size_t affected = 0;
    auto faulted = scenarios::build_voltage_adder(0.0, scenarios::AdderFault::StuckAtZeroLowOutput).theory("adder");
    auto fault_failures = count_failures(faulted, affected);
    o.expect(fault_failures == affected, "some affected pair passed");
    o.expect(validated(faulted).validity() == ValidityStatus::Invalid, "faulted theory not invalid");
    std::size_t unused = 0;
    auto clean_failures = count_failures(scenarios::build_voltage_adder().theory("adder"), unused);
    o.expect(clean_failures == 0, "unfaulted device fails");
    if (o.ok) {
        o.detail << fault_failures << "/" << affected << " affected pairs fail; theory invalid; unfaulted failures "
                 << clean_failures;
    }
}

void stochastic_calibration(Verdict& o)
{
    auto theory = scenarios::build_voltage_adder(kNoiseFlip).theory("adder");
    auto spec = DiagramSpec::for_prediction(theory, "add", 0.0, Metric::Discrete, kNoiseTrials, 0.5);
    auto p = make_state(theory.physical_space(), scenarios::adder_voltages("01", "10"));
    auto first = check_commutation(spec, p, TrialSeed{kFixedSeed});
    auto second = check_commutation(spec, p, TrialSeed{kFixedSeed});
    o.expect(std::abs(first.success_fraction - kNoiseAnalytic) <= kNoiseTolerance, "fraction off");
    o.expect(first.success_fraction == second.success_fraction && first.distances == second.distances,
             "rerun differs");
    o.detail << "success_fraction " << first.success_fraction << " vs analytic " << kNoiseAnalytic << " (tol "
             << kNoiseTolerance << "); rerun bit-exact " << (first.distances == second.distances ? "yes" : "no");
}

void epsilon_monotonicity(Verdict& o)
{
    std::mt19937_64 rng(kFixedSeed);
    std::size_t steps = 0;
    for (std::size_t i = 0; i < kMonotoneScenarios; ++i) {
        auto [theory, size] = testing::random_deterministic_theory(rng, "mono" + std::to_string(i));
        bool passed_before = false;
        for (double eps = 0.0; eps <= static_cast<double>(size); eps += 0.25) {
            bool passed = validate_theory(theory, eps, Metric::AbsoluteDifference, 1, 1.0, TrialSeed{}).second.all_passed;
            o.expect(!(passed_before && !passed), "scenario " + std::to_string(i) + " not monotone");
            steps += passed && !passed_before ? 1 : 0;
            passed_before = passed;
        }
        o.expect(passed_before, "scenario " + std::to_string(i) + " never passes");
    }
    if (o.ok) {
        o.detail << kMonotoneScenarios << " scenarios, each a single fail-to-pass step (" << steps << " steps)";
    }
}

void classifier_vs_oracle(Verdict& o)
{
    std::size_t agree = 0, total = 0;
    for (const auto& table : testing::all_one_bit_tables()) {
        auto j = testing::one_bit_joint(table);
        agree += classify(j).value == brute_force_classify(j).value;
        ++total;
    }
    std::mt19937_64 rng(kFixedSeed);
    for (std::size_t i = 0; i < kRandomJoints; ++i) {
        auto j = testing::random_joint(rng, i);
        agree += classify(j).value == brute_force_classify(j).value;
        ++total;
    }
    o.expect(agree == total, "disagreements");
    o.detail << agree << "/" << total << " agree (256 exhaustive 1-bit maps + " << kRandomJoints << " random)";
}

void worked_classifications(Verdict& o)
{
    auto xor_joint = build_joint(scenarios::build_xor_joint().composition("xor"));
    o.expect(classify(xor_joint).value == CompositionKind::Heterotic, "xor not heterotic");

    auto social = build_joint(scenarios::build_social_machine().composition("social"));
    o.expect(classify(social).value == CompositionKind::Heterotic, "social machine not heterotic");
    o.expect(!factorize_representation(social).has_value(), "social representation factors");

    std::vector<ComponentBinding> components;
    for (const auto& t : builtin_theories()) {
        auto v = validated(t);
        if (v.validated()) {
            for (const auto& p : v.predictions()) {
                components.push_back({v, p.name});
            }
        }
    }
    std::size_t products = 0;
    for (std::size_t i = 0; i < components.size(); ++i) {
        for (std::size_t k = 0; k < components.size(); ++k) {
            if (components[i].theory.id() == components[k].theory.id()) {
                continue;
            }
            for (const auto& j : {compose_parallel(components[i], components[k]),
                                  compose_sequential(components[i], components[k])}) {
                o.expect(classify(j).value == CompositionKind::Hybrid, j.id + " not hybrid");
                ++products;
            }
        }
    }
    if (o.ok) {
        o.detail << "xor Heterotic; social Heterotic, no representation factors; " << products
                 << " parallel/sequential products Hybrid";
    }
}

void compute_soundness(Verdict& o)
{
    std::size_t checked = 0, theories = 0;
    for (const auto& t : builtin_theories()) {
        auto v = validated(t);
        bool deterministic = std::none_of(v.predictions().begin(), v.predictions().end(),
                                          [](const Prediction& p) { return p.physical.stochastic(); });
        if (!v.validated() || !deterministic || !v.instantiation()) {
            continue;
        }
        ++theories;
        for (const auto& p : v.domain()) {
            auto m = represent(v.representation(), p);
            for (const auto& pr : v.predictions()) {
                auto out = run_compute_cycle(v, m, pr.name, TrialSeed{});
                o.expect(out.output == evolve_abstract(pr.abstract, m), v.id() + " mispredicts " + format_state(m));
                ++checked;
            }
        }
    }
    if (o.ok) {
        o.detail << checked << " domain inputs across " << theories << " validated deterministic theories";
    }
}

void round_trips(Verdict& o)
{
    std::size_t instantiated = 0, bundles = 0;
    for (const auto& name : scenarios::builtin_names()) {
        auto bundle = scenarios::builtin(name);
        for (const auto& t : bundle.theories()) {
            if (!t.instantiation()) {
                continue;
            }
            for (const auto& m : enumerate(t.abstract_space())) {
                PhysicalState p;
                try {
                    p = instantiate(t, m);
                } catch (const Error& e) {
                    o.expect(e.code() == ErrorCode::NotInstantiable, "unexpected instantiation error");
                    continue;
                }
                o.expect(represent(t.representation(), p) == m, name + ": represent(instantiate(m)) != m");
                ++instantiated;
            }
        }
        auto text = emit_scenario(bundle);
        o.expect(parse_scenario(text) == bundle, name + ": emit/parse differs");
        auto a = render_json(run_checks(bundle, TrialSeed{kFixedSeed}));
        auto b = render_json(run_checks(bundle, TrialSeed{kFixedSeed}));
        o.expect(a == b, name + ": report not byte-identical");
        o.expect(render_json(report_from_json(Json::parse(a))) == a, name + ": report round trip differs");
        ++bundles;
    }
    if (o.ok) {
        o.detail << instantiated << " instantiable targets; " << bundles
                 << " bundles round-trip; reports byte-identical";
    }
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
        {"adder reproduction", adder_reproduction},
        {"refinement stack", refinement_stack},
        {"fault sensitivity", fault_sensitivity},
        {"stochastic calibration", stochastic_calibration},
        {"epsilon monotonicity", epsilon_monotonicity},
        {"classifier vs oracle", classifier_vs_oracle},
        {"composition classifications", worked_classifications},
        {"compute-cycle soundness", compute_soundness},
        {"round trips", round_trips},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict o;
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail.str("");
            o.detail << "exception: " << e.what();
        }
        failures += o.ok ? 0 : 1;
        std::cout << (o.ok ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << o.detail.str()
                  << "\n";
    }
    std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria pass\n";
    return failures == 0 ? 0 : 1;
}
