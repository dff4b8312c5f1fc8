#pragma once

#include "ar/relations.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ar {

/// One commuting square: representation on both ends, abstract dynamics on
/// top, physical dynamics underneath.
struct DiagramSpec {
    Theory theory;
    AbstractDynamics abstract_dynamics;
    PhysicalDynamics physical_dynamics;
    double epsilon = 0.0;
    Metric metric = Metric::Discrete;
    std::size_t trials = 1;
    double required_success = 1.0;

    /// DiagramSpec for a named prediction of the theory.
    static DiagramSpec for_prediction(const Theory& theory, const std::string& prediction, double epsilon = 0.0,
                                      Metric metric = Metric::Discrete, std::size_t trials = 1,
                                      double required_success = 1.0);

    /// InvalidDeclaration / SpaceMismatch when the fields are inconsistent.
    void check() const;
};

struct CommutationReport {
    PhysicalState initial_physical;
    AbstractState upper_path_result;               // C(R(p))
    std::vector<AbstractState> lower_path_results;  // R(H(p)) per trial
    std::vector<double> distances;
    std::size_t successes = 0;
    double success_fraction = 0.0;
    bool passed = false;

    double epsilon = 0.0;
    double required_success = 1.0;
    Metric metric = Metric::Discrete;
    /// Set by run_experiment: the report counts toward the theory's coverage.
    bool evidence = false;
};

/// Downward (history) cycle: instantiate-then-evolve against
/// evolve-then-instantiate, compared on physical states.
struct HistoryReport {
    AbstractState initial_abstract;
    AbstractState evolved_abstract;             // C(m)
    PhysicalState prepared;                     // instantiate(m)
    PhysicalState instantiated_target;          // instantiate(C(m))
    std::vector<PhysicalState> evolved_physical;  // H(instantiate(m)) per trial
    std::vector<double> distances;
    std::size_t successes = 0;
    double success_fraction = 0.0;
    bool passed = false;

    double epsilon = 0.0;
    double required_success = 1.0;
    Metric physical_metric = Metric::Discrete;
};

struct ValidityCell {
    std::size_t state_index = 0;
    std::string prediction;
    CommutationReport report;
};

struct ValidityReport {
    std::string theory_id;
    std::vector<ValidityCell> cells;  // domain order, then prediction order
    bool all_passed = false;
    std::size_t coverage = 0;       // cells checked
    std::size_t passed_cells = 0;
    /// States of the physical space outside the declared domain; never
    /// assumed valid. Absent for continuous spaces.
    std::optional<std::uint64_t> untested_states;
};

/// Success rule shared by every check: trial k succeeds iff distance <= epsilon;
/// the check passes iff successes / trials >= required_success.
bool passes(std::size_t successes, std::size_t trials, double required_success);

CommutationReport check_commutation(const DiagramSpec& spec, const PhysicalState& p, TrialSeed base_seed);

HistoryReport check_history(const DiagramSpec& spec, const AbstractState& m, Metric physical_metric,
                            TrialSeed base_seed);

/// Like check_commutation, but p0 must be one of the theory's declared domain
/// states and the report is marked as evidence.
CommutationReport run_experiment(const Theory& theory, const PhysicalState& p0, const DiagramSpec& spec,
                                 TrialSeed base_seed);

/// Total map from a problem space into a machine's input space.
class ProblemEmbedding {
public:
    ProblemEmbedding() = default;
    ProblemEmbedding(std::string id, AbstractSpace problem_space, AbstractSpace machine_space,
                     std::map<Value, Value> table);

    const std::string& id() const { return id_; }
    const AbstractSpace& problem_space() const { return problem_space_; }
    const AbstractSpace& machine_space() const { return machine_space_; }
    const std::map<Value, Value>& table() const { return table_; }

    friend bool operator==(const ProblemEmbedding&, const ProblemEmbedding&) = default;

private:
    std::string id_;
    AbstractSpace problem_space_;
    AbstractSpace machine_space_;
    std::map<Value, Value> table_;
};

AbstractState embed_problem(const ProblemEmbedding& d, const AbstractState& problem_state);

struct TraceStep {
    std::string stage;    // "input", "encode", "evolve", "decode"
    std::string literal;  // state rendered as a literal
};

struct ComputeResult {
    AbstractState input;
    PhysicalState prepared;
    PhysicalState final_physical;
    AbstractState output;
    std::vector<TraceStep> trace;
};

/// Encode through the instantiation procedure, evolve the device, decode through
/// the representation. The abstract program is never executed; the device
/// predicts it. TheoryNotValidated unless the theory is valid.
ComputeResult run_compute_cycle(const Theory& theory, const AbstractState& input, const std::string& program,
                                const PhysicalDynamics& h, TrialSeed seed);

/// Uses the physical dynamics paired with the program in the theory.
ComputeResult run_compute_cycle(const Theory& theory, const AbstractState& input, const std::string& program,
                                TrialSeed seed);

}  // namespace ar
