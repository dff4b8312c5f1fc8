#pragma once

#include "ar/verification.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ar {

struct RefinementLayer {
    std::string id;
    AbstractSpace space;
    AbstractDynamics dynamics;

    static RefinementLayer make(std::string id, AbstractDynamics dynamics);
    friend bool operator==(const RefinementLayer&, const RefinementLayer&) = default;
};

/// Downward map from an upper layer's states to a lower layer's states.
struct SimulationRelation {
    std::string id;
    RefinementLayer upper;
    RefinementLayer lower;
    std::map<Value, Value> table;

    /// Checks totality on the upper space and that images land in the lower space.
    static SimulationRelation make(std::string id, RefinementLayer upper, RefinementLayer lower,
                                   std::map<Value, Value> table);

    AbstractState apply(const AbstractState& u) const;
    friend bool operator==(const SimulationRelation&, const SimulationRelation&) = default;
};

/// Binds the lowest layer to a device: the theory whose representation lands on
/// the bottom layer's space, and the prediction whose physical dynamics runs it.
struct DeviceBinding {
    Theory theory;
    std::string program;
    friend bool operator==(const DeviceBinding&, const DeviceBinding&) = default;
};

class RefinementStack {
public:
    RefinementStack() = default;
    /// Layers top to bottom; simulations[i] links layers[i] to layers[i+1].
    RefinementStack(std::string id, std::vector<RefinementLayer> layers, std::vector<SimulationRelation> simulations,
                    DeviceBinding bottom);

    const std::string& id() const { return id_; }
    const std::vector<RefinementLayer>& layers() const { return layers_; }
    const std::vector<SimulationRelation>& simulations() const { return simulations_; }
    const DeviceBinding& bottom() const { return bottom_; }
    const RefinementLayer& top_layer() const { return layers_.front(); }
    const RefinementLayer& bottom_layer() const { return layers_.back(); }

    /// Same stack over a different (for instance freshly validated) bottom theory.
    RefinementStack with_bottom_theory(Theory theory) const;

    /// Image of a top-layer state through every simulation map.
    AbstractState map_down(const AbstractState& top) const;

    friend bool operator==(const RefinementStack&, const RefinementStack&) = default;

private:
    std::string id_;
    std::vector<RefinementLayer> layers_;
    std::vector<SimulationRelation> simulations_;
    DeviceBinding bottom_;
};

struct LayerFailure {
    AbstractState upper_state;
    AbstractState via_upper;  // S(C_upper(u))
    AbstractState via_lower;  // C_lower(S(u))
    double distance = 0.0;
};

struct LayerReport {
    std::string simulation_id;
    std::size_t checked = 0;
    std::vector<LayerFailure> failures;
    bool passed = false;
};

/// For every upper state u: distance(S(C_upper(u)), C_lower(S(u))) <= epsilon.
LayerReport check_layer(const SimulationRelation& s, double epsilon = 0.0, Metric metric = Metric::Discrete);

struct StackOptions {
    double layer_epsilon = 0.0;
    std::size_t trials = 1;
    double required_success = 1.0;
    /// Validate an untested bottom theory before the device checks.
    bool validate_inline = true;
    /// Raise TheoryNotValidated instead of validating inline.
    bool require_validated = false;
};

struct StackReport {
    std::string stack_id;
    std::vector<LayerReport> layers;  // top to bottom
    std::optional<ValidityReport> inline_validation;
    std::vector<CommutationReport> device_checks;  // one per reachable bottom state
    bool layers_passed = false;
    bool device_passed = false;
    bool passed = false;
};

/// Every adjacent layer pair, then the bottom layer against the device on each
/// bottom state reachable from the top. Passes iff every sub-check passes.
StackReport check_stack_to_device(const RefinementStack& stack, double epsilon = 0.0,
                                  Metric metric = Metric::Discrete, TrialSeed base_seed = {},
                                  const StackOptions& options = {});

/// Top-level prediction made by the device: map the input down, run the compute
/// cycle, and pull the output back to the unique top state with that image.
AbstractState predict_through_stack(const RefinementStack& stack, const AbstractState& top_input, TrialSeed seed);

}  // namespace ar
