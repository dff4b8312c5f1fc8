#include "ar/verification.hpp"

#include <cmath>

namespace ar {

bool passes(std::size_t successes, std::size_t trials, double required_success)
{
    return trials > 0 &&
           static_cast<double>(successes) / static_cast<double>(trials) >= required_success;
}

DiagramSpec DiagramSpec::for_prediction(const Theory& theory, const std::string& prediction, double epsilon,
                                        Metric metric, std::size_t trials, double required_success)
{
    const auto& pr = theory.prediction(prediction);
    DiagramSpec spec{theory, pr.abstract, pr.physical, epsilon, metric, trials, required_success};
    spec.check();
    return spec;
}

void DiagramSpec::check() const
{
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        fail(ErrorCode::InvalidDeclaration, "epsilon must be a finite non-negative number");
    }
    if (trials < 1) {
        fail(ErrorCode::InvalidDeclaration, "trials must be at least 1");
    }
    if (!(required_success > 0.0 && required_success <= 1.0)) {
        fail(ErrorCode::InvalidDeclaration, "required_success must lie in (0, 1]");
    }
    if (!(abstract_dynamics.space() == theory.abstract_space())) {
        fail(ErrorCode::SpaceMismatch, "abstract dynamics '" + abstract_dynamics.id() + "' is not on '" +
                                           theory.abstract_space().id() + "'");
    }
    if (!(physical_dynamics.space() == theory.physical_space())) {
        fail(ErrorCode::SpaceMismatch, "physical dynamics '" + physical_dynamics.id() + "' is not on '" +
                                           theory.physical_space().id() + "'");
    }
}

CommutationReport check_commutation(const DiagramSpec& spec, const PhysicalState& p, TrialSeed base_seed)
{
    spec.check();
    if (!metric_applies(spec.metric, spec.theory.abstract_space())) {
        fail(ErrorCode::MetricMismatch, std::string(to_string(spec.metric)) + " does not apply to '" +
                                            spec.theory.abstract_space().id() + "'");
    }
    const auto& rep = spec.theory.representation();

    CommutationReport r;
    r.initial_physical = p;
    r.epsilon = spec.epsilon;
    r.required_success = spec.required_success;
    r.metric = spec.metric;
    r.upper_path_result = evolve_abstract(spec.abstract_dynamics, represent(rep, p));

    const bool stochastic = spec.physical_dynamics.stochastic();
    r.lower_path_results.reserve(spec.trials);
    r.distances.reserve(spec.trials);
    for (std::size_t k = 0; k < spec.trials; ++k) {
        if (!stochastic && k > 0) {
            // Noise-free devices ignore the trial seed.
            r.lower_path_results.push_back(r.lower_path_results.front());
            r.distances.push_back(r.distances.front());
        } else {
            auto lower = represent(rep, evolve_physical(spec.physical_dynamics, p, derive_seed(base_seed, k)));
            r.distances.push_back(distance(spec.metric, r.upper_path_result, lower));
            r.lower_path_results.push_back(std::move(lower));
        }
        if (r.distances.back() <= spec.epsilon) {
            ++r.successes;
        }
    }
    r.success_fraction = static_cast<double>(r.successes) / static_cast<double>(spec.trials);
    r.passed = passes(r.successes, spec.trials, spec.required_success);
    return r;
}

HistoryReport check_history(const DiagramSpec& spec, const AbstractState& m, Metric physical_metric,
                            TrialSeed base_seed)
{
    spec.check();
    if (!metric_applies(physical_metric, spec.theory.physical_space())) {
        fail(ErrorCode::MetricMismatch, std::string(to_string(physical_metric)) + " does not apply to '" +
                                            spec.theory.physical_space().id() + "'");
    }
    HistoryReport r;
    r.initial_abstract = m;
    r.epsilon = spec.epsilon;
    r.required_success = spec.required_success;
    r.physical_metric = physical_metric;
    r.prepared = instantiate(spec.theory, m);
    r.evolved_abstract = evolve_abstract(spec.abstract_dynamics, m);
    r.instantiated_target = instantiate(spec.theory, r.evolved_abstract);

    const bool stochastic = spec.physical_dynamics.stochastic();
    for (std::size_t k = 0; k < spec.trials; ++k) {
        if (!stochastic && k > 0) {
            r.evolved_physical.push_back(r.evolved_physical.front());
            r.distances.push_back(r.distances.front());
        } else {
            auto evolved = evolve_physical(spec.physical_dynamics, r.prepared, derive_seed(base_seed, k));
            r.distances.push_back(distance(physical_metric, evolved, r.instantiated_target));
            r.evolved_physical.push_back(std::move(evolved));
        }
        if (r.distances.back() <= spec.epsilon) {
            ++r.successes;
        }
    }
    r.success_fraction = static_cast<double>(r.successes) / static_cast<double>(spec.trials);
    r.passed = passes(r.successes, spec.trials, spec.required_success);
    return r;
}

std::pair<Theory, ValidityReport> validate_theory(const Theory& theory, double epsilon, Metric metric,
                                                  std::size_t trials, double required_success,
                                                  TrialSeed base_seed)
{
    if (theory.domain().empty()) {
        fail(ErrorCode::EmptyDomain, "theory '" + theory.id() + "' declares no domain states");
    }
    if (theory.predictions().empty()) {
        fail(ErrorCode::EmptyDomain, "theory '" + theory.id() + "' declares no predictions");
    }
    ValidityReport report;
    report.theory_id = theory.id();
    for (std::size_t i = 0; i < theory.domain().size(); ++i) {
        for (const auto& pr : theory.predictions()) {
            DiagramSpec spec{theory, pr.abstract, pr.physical, epsilon, metric, trials, required_success};
            ValidityCell cell{i, pr.name, check_commutation(spec, theory.domain()[i], base_seed)};
            report.passed_cells += cell.report.passed ? 1 : 0;
            report.cells.push_back(std::move(cell));
        }
    }
    report.coverage = report.cells.size();
    report.all_passed = report.passed_cells == report.coverage;
    if (auto n = theory.physical_space().cardinality()) {
        report.untested_states = *n - theory.domain().size();
    }

    Theory updated = theory;
    updated.validity_ = report.all_passed ? ValidityStatus::Valid : ValidityStatus::Invalid;
    updated.evidence_ = std::make_shared<const ValidityReport>(report);
    return {std::move(updated), std::move(report)};
}

CommutationReport run_experiment(const Theory& theory, const PhysicalState& p0, const DiagramSpec& spec,
                                 TrialSeed base_seed)
{
    if (!theory.in_domain(p0)) {
        fail(ErrorCode::OutOfDomain,
             format_state(p0) + " is not a declared domain state of theory '" + theory.id() + "'");
    }
    auto r = check_commutation(spec, p0, base_seed);
    r.evidence = true;
    return r;
}

ProblemEmbedding::ProblemEmbedding(std::string id, AbstractSpace problem_space, AbstractSpace machine_space,
                                   std::map<Value, Value> table)
    : id_(std::move(id)), problem_space_(std::move(problem_space)), machine_space_(std::move(machine_space)),
      table_(std::move(table))
{
    auto bad = [this](const std::string& what) {
        fail(ErrorCode::InvalidDeclaration, "embedding '" + id_ + "': " + what);
    };
    if (!is_identifier(id_)) {
        bad("invalid identifier");
    }
    if (!problem_space_.finite()) {
        bad("problem space must be finite");
    }
    for (const auto& [k, v] : table_) {
        if (!problem_space_.has_member(k)) {
            bad(format_literal(k) + " is not in '" + problem_space_.id() + "'");
        }
        if (!machine_space_.has_member(v)) {
            bad(format_literal(v) + " is not in '" + machine_space_.id() + "'");
        }
    }
    if (table_.size() != *problem_space_.cardinality()) {
        bad("not total on '" + problem_space_.id() + "'");
    }
}

AbstractState embed_problem(const ProblemEmbedding& d, const AbstractState& problem_state)
{
    if (!contains(d.problem_space(), problem_state)) {
        fail(ErrorCode::OutOfDomain,
             format_state(problem_state) + " is not in problem space '" + d.problem_space().id() + "'");
    }
    return AbstractState{d.machine_space(), d.table().at(problem_state.value)};
}

ComputeResult run_compute_cycle(const Theory& theory, const AbstractState& input, const std::string& program,
                                const PhysicalDynamics& h, TrialSeed seed)
{
    if (!theory.validated()) {
        fail(ErrorCode::TheoryNotValidated, "theory '" + theory.id() + "' is " +
                                                std::string(to_string(theory.validity())) +
                                                "; a device cannot compute before its theory is validated");
    }
    theory.prediction(program);
    if (!(h.space() == theory.physical_space())) {
        fail(ErrorCode::SpaceMismatch, "dynamics '" + h.id() + "' does not act on '" + theory.physical_space().id() + "'");
    }
    ComputeResult r;
    r.input = input;
    r.prepared = instantiate(theory, input);
    r.final_physical = evolve_physical(h, r.prepared, seed);
    r.output = represent(theory.representation(), r.final_physical);
    r.trace = {{"input", format_state(r.input)},
               {"encode", format_state(r.prepared)},
               {"evolve", format_state(r.final_physical)},
               {"decode", format_state(r.output)}};
    return r;
}

ComputeResult run_compute_cycle(const Theory& theory, const AbstractState& input, const std::string& program,
                                TrialSeed seed)
{
    return run_compute_cycle(theory, input, program, theory.prediction(program).physical, seed);
}

}  // namespace ar
