#pragma once

#include "ar/relations.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ar {

/// A computing component: a device theory together with the prediction it runs.
struct ComponentBinding {
    Theory theory;
    std::string prediction;

    const AbstractDynamics& abstract_dynamics() const { return theory.prediction(prediction).abstract; }
    const PhysicalDynamics& physical_dynamics() const { return theory.prediction(prediction).physical; }
    friend bool operator==(const ComponentBinding&, const ComponentBinding&) = default;
};

enum class Provenance { ComposedParallel, ComposedSequential, Declared };
std::string_view to_string(Provenance p);

/// Two components over the ordered product of their physical spaces, with one
/// joint representation and joint abstract dynamics on its codomain.
struct JointSystem {
    std::string id;
    ComponentBinding left;
    ComponentBinding right;
    PhysicalSpace joint_space;
    RepresentationRelation joint_representation;
    AbstractDynamics joint_dynamics;
    Provenance provenance = Provenance::Declared;

    /// Declared joint: the representation's domain must be the product of the
    /// component spaces and the dynamics must act on its codomain.
    static JointSystem declare(std::string id, ComponentBinding left, ComponentBinding right,
                               RepresentationRelation joint_representation, AbstractDynamics joint_dynamics);

    friend bool operator==(const JointSystem&, const JointSystem&) = default;
};

/// Tuple-wise representation and componentwise dynamics. Both components must
/// be validated. Sequential composition is the same product map with
/// sequential provenance: independent runs whose results are combined.
JointSystem compose_parallel(const ComponentBinding& a, const ComponentBinding& b, std::string id = {});
JointSystem compose_sequential(const ComponentBinding& a, const ComponentBinding& b, std::string id = {});

/// A representation factor read off a joint representation, defined on the
/// component physical states the joint system ranges over.
struct RepresentationFactor {
    PhysicalSpace domain;
    AbstractSpace codomain;
    std::map<Value, Value> table;
    friend bool operator==(const RepresentationFactor&, const RepresentationFactor&) = default;
};

struct FactorizationWitness {
    std::optional<std::pair<RepresentationFactor, RepresentationFactor>> representation;
    std::optional<std::pair<AbstractDynamics, AbstractDynamics>> dynamics;
};

enum class CompositionKind { Hybrid, Heterotic };
std::string_view to_string(CompositionKind k);

struct CompositionClass {
    CompositionKind value = CompositionKind::Heterotic;
    FactorizationWitness witness;
    /// The representation factors agree with the component theories.
    bool matches_components = false;
};

/// Component physical states a joint system ranges over: the whole space when
/// it is finite, otherwise the component theory's declared domain.
std::vector<PhysicalState> component_states(const ComponentBinding& c);

/// Factor maps iff the codomain is a pair space and each output coordinate
/// depends only on its own component.
std::optional<std::pair<RepresentationFactor, RepresentationFactor>> factorize_representation(const JointSystem& j);

/// (f, g) with D(a, b) = (f(a), g(b)) when they exist. NotProductSpace for
/// non-pair spaces, NotEnumerable for continuous ones.
std::optional<std::pair<AbstractDynamics, AbstractDynamics>> factorize_dynamics(const AbstractDynamics& d);

CompositionClass classify(const JointSystem& j);

/// Bounds for the exhaustive oracle.
inline constexpr std::uint64_t kOracleMaxAbstractStates = 6;
inline constexpr std::uint64_t kOracleMaxCandidates = std::uint64_t{1} << 22;

/// Independent oracle: enumerates every candidate pair of component
/// representation maps and every pair of component functions (f, g), and
/// reports Hybrid iff some candidate reproduces the joint triple exactly.
/// TooLarge when a component abstract space exceeds kOracleMaxAbstractStates.
CompositionClass brute_force_classify(const JointSystem& j);

}  // namespace ar
