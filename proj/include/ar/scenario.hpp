#pragma once

#include "ar/composition.hpp"
#include "ar/refinement.hpp"
#include "ar/verification.hpp"

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ar {

/// Ordered, id-indexed collection. Iteration follows insertion order.
template <class T>
class Registry {
public:
    /// DuplicateIdentifier when the id is already taken by a different item;
    /// re-adding an identical item is a no-op.
    void add(const std::string& id, T item, const char* section)
    {
        if (auto it = index_.find(id); it != index_.end()) {
            if (items_[it->second] == item) {
                return;
            }
            fail(ErrorCode::DuplicateIdentifier, std::string(section) + " '" + id + "' is declared twice");
        }
        index_.emplace(id, items_.size());
        items_.push_back(std::move(item));
    }

    const T* find(const std::string& id) const
    {
        auto it = index_.find(id);
        return it == index_.end() ? nullptr : &items_[it->second];
    }

    const T& get(const std::string& id, const char* section) const
    {
        if (const T* t = find(id)) {
            return *t;
        }
        fail(ErrorCode::UnknownReference, std::string("unknown ") + section + " '" + id + "'");
    }

    bool contains(const std::string& id) const { return index_.contains(id); }
    const std::vector<T>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }
    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

    friend bool operator==(const Registry& a, const Registry& b) { return a.items_ == b.items_; }

private:
    std::vector<T> items_;
    std::map<std::string, std::size_t> index_;
};

using AnySpace = std::variant<AbstractSpace, PhysicalSpace>;
using AnyDynamics = std::variant<AbstractDynamics, PhysicalDynamics>;

/// A composition as declared in a scenario. Joint systems are built when a
/// check needs them, after the component theories have been validated.
struct CompositionDecl {
    enum class Mode { Parallel, Sequential, Declared };
    std::string id;
    ComponentBinding left;
    ComponentBinding right;
    Mode mode = Mode::Parallel;
    RepresentationRelation joint_representation;  // Declared only
    AbstractDynamics joint_dynamics;              // Declared only

    friend bool operator==(const CompositionDecl&, const CompositionDecl&) = default;
};

std::string_view to_string(CompositionDecl::Mode m);

enum class CheckKind {
    Commutation,
    Experiment,
    History,
    ValidateTheory,
    Compute,
    Instantiate,
    Layer,
    Stack,
    Classify,
};

std::string_view to_string(CheckKind k);
std::optional<CheckKind> check_kind_from_string(std::string_view name);

/// A declared verification step. Which fields matter depends on the kind; the
/// numeric parameters default to the strictest reading (epsilon 0, discrete
/// metric, one trial, full success required).
struct CheckDecl {
    std::string name;
    CheckKind kind = CheckKind::Commutation;
    std::string theory;
    std::string prediction;
    std::string stack;
    std::string simulation;
    std::string composition;
    std::string embedding;
    std::optional<Value> state;   // physical for commutation/experiment, abstract otherwise
    std::optional<Value> expect;  // expected compute output
    std::optional<CompositionKind> expect_class;
    double epsilon = 0.0;
    Metric metric = Metric::Discrete;
    Metric physical_metric = Metric::Discrete;
    std::size_t trials = 1;
    double required_success = 1.0;
    bool oracle = false;

    friend bool operator==(const CheckDecl&, const CheckDecl&) = default;
};

/// Everything needed to run verification without further input.
class ScenarioBundle {
public:
    std::string name;
    std::string description;

    /// The add_* calls register missing dependencies (component spaces, relation
    /// components, chain steps, ...) first, so declaration order is always a
    /// valid emission order.
    void add_space(const AnySpace& s);
    void add_relation(const RepresentationRelation& r);
    void add_dynamics(const AnyDynamics& d);
    void add_theory(const Theory& t);
    void add_embedding(const ProblemEmbedding& e);
    void add_stack(const RefinementStack& s);
    void add_composition(const CompositionDecl& c);
    void add_check(const CheckDecl& c);

    const AbstractSpace& abstract_space(const std::string& id) const;
    const PhysicalSpace& physical_space(const std::string& id) const;
    const AbstractDynamics& abstract_dynamics(const std::string& id) const;
    const PhysicalDynamics& physical_dynamics(const std::string& id) const;
    const RepresentationRelation& relation(const std::string& id) const { return relations_.get(id, "relation"); }
    const Theory& theory(const std::string& id) const { return theories_.get(id, "theory"); }
    const ProblemEmbedding& embedding(const std::string& id) const { return embeddings_.get(id, "embedding"); }
    const RefinementStack& stack(const std::string& id) const { return stacks_.get(id, "stack"); }
    const CompositionDecl& composition(const std::string& id) const
    {
        return compositions_.get(id, "composition");
    }
    const CheckDecl& check(const std::string& name) const { return checks_.get(name, "check"); }

    const Registry<AnySpace>& spaces() const { return spaces_; }
    const Registry<RepresentationRelation>& relations() const { return relations_; }
    const Registry<AnyDynamics>& dynamics() const { return dynamics_; }
    const Registry<Theory>& theories() const { return theories_; }
    const Registry<ProblemEmbedding>& embeddings() const { return embeddings_; }
    const Registry<RefinementStack>& stacks() const { return stacks_; }
    const Registry<CompositionDecl>& compositions() const { return compositions_; }
    const Registry<CheckDecl>& checks() const { return checks_; }

    friend bool operator==(const ScenarioBundle&, const ScenarioBundle&) = default;

private:
    Registry<AnySpace> spaces_;
    Registry<RepresentationRelation> relations_;
    Registry<AnyDynamics> dynamics_;
    Registry<Theory> theories_;
    Registry<ProblemEmbedding> embeddings_;
    Registry<RefinementStack> stacks_;
    Registry<CompositionDecl> compositions_;
    Registry<CheckDecl> checks_;
};

/// Validation parameters used when a check needs a validated theory that the
/// scenario only declares.
struct ValidationSettings {
    double epsilon = 0.0;
    Metric metric = Metric::Discrete;
    std::size_t trials = 1;
    double required_success = 1.0;
};

/// Validates both component theories and builds the joint system.
JointSystem build_joint(const CompositionDecl& decl, const ValidationSettings& settings = {},
                        TrialSeed seed = {});

}  // namespace ar
