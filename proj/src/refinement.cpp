#include "ar/refinement.hpp"

#include <set>

namespace ar {

RefinementLayer RefinementLayer::make(std::string id, AbstractDynamics dynamics)
{
    if (!is_identifier(id)) {
        fail(ErrorCode::InvalidDeclaration, "layer '" + id + "': invalid identifier");
    }
    AbstractSpace space = dynamics.space();
    return RefinementLayer{std::move(id), std::move(space), std::move(dynamics)};
}

SimulationRelation SimulationRelation::make(std::string id, RefinementLayer upper, RefinementLayer lower,
                                            std::map<Value, Value> table)
{
    auto bad = [&](const std::string& what) {
        fail(ErrorCode::InvalidDeclaration, "simulation '" + id + "': " + what);
    };
    if (!is_identifier(id)) {
        bad("invalid identifier");
    }
    if (!upper.space.finite() || !lower.space.finite()) {
        fail(ErrorCode::NotEnumerable, "simulation '" + id + "' needs finite layer spaces");
    }
    for (const auto& [u, l] : table) {
        if (!upper.space.has_member(u)) {
            bad(format_literal(u) + " is not in '" + upper.space.id() + "'");
        }
        if (!lower.space.has_member(l)) {
            bad(format_literal(l) + " is not in '" + lower.space.id() + "'");
        }
    }
    if (table.size() != *upper.space.cardinality()) {
        bad("not total on '" + upper.space.id() + "'");
    }
    return SimulationRelation{std::move(id), std::move(upper), std::move(lower), std::move(table)};
}

AbstractState SimulationRelation::apply(const AbstractState& u) const
{
    if (!contains(upper.space, u)) {
        fail(ErrorCode::OutOfDomain, format_state(u) + " is not in '" + upper.space.id() + "'");
    }
    return AbstractState{lower.space, table.at(u.value)};
}

RefinementStack::RefinementStack(std::string id, std::vector<RefinementLayer> layers,
                                 std::vector<SimulationRelation> simulations, DeviceBinding bottom)
    : id_(std::move(id)), layers_(std::move(layers)), simulations_(std::move(simulations)), bottom_(std::move(bottom))
{
    auto bad = [this](ErrorCode code, const std::string& what) { fail(code, "stack '" + id_ + "': " + what); };
    if (!is_identifier(id_)) {
        bad(ErrorCode::InvalidDeclaration, "invalid identifier");
    }
    if (layers_.empty()) {
        bad(ErrorCode::InvalidDeclaration, "needs at least one layer");
    }
    if (simulations_.size() + 1 != layers_.size()) {
        bad(ErrorCode::InvalidDeclaration, "needs exactly one simulation between each adjacent layer pair");
    }
    for (std::size_t i = 0; i < simulations_.size(); ++i) {
        if (!(simulations_[i].upper == layers_[i]) || !(simulations_[i].lower == layers_[i + 1])) {
            bad(ErrorCode::SpaceMismatch, "simulation '" + simulations_[i].id + "' does not link layers '" +
                                              layers_[i].id + "' and '" + layers_[i + 1].id + "'");
        }
    }
    if (!(bottom_layer().space == bottom_.theory.abstract_space())) {
        bad(ErrorCode::SpaceMismatch, "bottom layer space '" + bottom_layer().space.id() +
                                          "' differs from the representation codomain '" +
                                          bottom_.theory.abstract_space().id() + "'");
    }
    bottom_.theory.prediction(bottom_.program);
}

RefinementStack RefinementStack::with_bottom_theory(Theory theory) const
{
    return RefinementStack(id_, layers_, simulations_, DeviceBinding{std::move(theory), bottom_.program});
}

AbstractState RefinementStack::map_down(const AbstractState& top) const
{
    if (!contains(top_layer().space, top)) {
        fail(ErrorCode::OutOfDomain, format_state(top) + " is not in top layer '" + top_layer().id + "'");
    }
    AbstractState cur = top;
    for (const auto& s : simulations_) {
        cur = s.apply(cur);
    }
    return cur;
}

LayerReport check_layer(const SimulationRelation& s, double epsilon, Metric metric)
{
    LayerReport report;
    report.simulation_id = s.id;
    for (const auto& u : enumerate(s.upper.space)) {
        auto via_upper = s.apply(evolve_abstract(s.upper.dynamics, u));
        auto via_lower = evolve_abstract(s.lower.dynamics, s.apply(u));
        const double d = distance(metric, via_upper, via_lower);
        ++report.checked;
        if (!(d <= epsilon)) {
            report.failures.push_back(LayerFailure{u, std::move(via_upper), std::move(via_lower), d});
        }
    }
    report.passed = report.failures.empty();
    return report;
}

StackReport check_stack_to_device(const RefinementStack& stack, double epsilon, Metric metric,
                                  TrialSeed base_seed, const StackOptions& options)
{
    StackReport report;
    report.stack_id = stack.id();
    report.layers_passed = true;
    for (const auto& s : stack.simulations()) {
        report.layers.push_back(check_layer(s, options.layer_epsilon, metric));
        report.layers_passed = report.layers_passed && report.layers.back().passed;
    }

    Theory theory = stack.bottom().theory;
    bool theory_ok = theory.validated();
    if (!theory_ok) {
        if (options.require_validated || !options.validate_inline) {
            fail(ErrorCode::TheoryNotValidated, "bottom theory '" + theory.id() + "' of stack '" + stack.id() +
                                                    "' is " + std::string(to_string(theory.validity())));
        }
        auto [validated, vr] = validate_theory(theory, epsilon, metric, options.trials, options.required_success,
                                               base_seed);
        theory = std::move(validated);
        theory_ok = vr.all_passed;
        report.inline_validation = std::move(vr);
    }

    // Bottom states reachable from the top, in first-seen enumeration order.
    std::vector<AbstractState> reachable;
    std::set<Value> seen;
    for (const auto& u : enumerate(stack.top_layer().space)) {
        auto m = stack.map_down(u);
        if (seen.insert(m.value).second) {
            reachable.push_back(std::move(m));
        }
    }

    const auto& pr = theory.prediction(stack.bottom().program);
    DiagramSpec spec{theory,  stack.bottom_layer().dynamics, pr.physical, epsilon, metric, options.trials,
                     options.required_success};
    report.device_passed = true;
    for (const auto& m : reachable) {
        report.device_checks.push_back(check_commutation(spec, instantiate(theory, m), base_seed));
        report.device_passed = report.device_passed && report.device_checks.back().passed;
    }
    report.passed = report.layers_passed && report.device_passed && theory_ok;
    return report;
}

AbstractState predict_through_stack(const RefinementStack& stack, const AbstractState& top_input, TrialSeed seed)
{
    const auto& binding = stack.bottom();
    auto result = run_compute_cycle(binding.theory, stack.map_down(top_input), binding.program, seed);
    std::optional<AbstractState> preimage;
    for (const auto& u : enumerate(stack.top_layer().space)) {
        if (stack.map_down(u) == result.output) {
            if (preimage) {
                fail(ErrorCode::OutOfDomain, "device output " + format_state(result.output) +
                                                 " has several top-layer preimages");
            }
            preimage = u;
        }
    }
    if (!preimage) {
        fail(ErrorCode::OutOfDomain,
             "device output " + format_state(result.output) + " has no top-layer preimage");
    }
    return *preimage;
}

}  // namespace ar
