#pragma once

#include "ar/dynamics.hpp"
#include "ar/spaces.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ar {

/// Directed map R : P -> M from a physical space to an abstract space.
///
/// Rules:
///   lookup      explicit table over a finite physical space
///   threshold   one bit per real coordinate (value >= theta gives 1); the
///               codomain is bitstring(dim) or a tuple of bitstrings whose
///               widths sum to dim, filled in coordinate order
///   tuple-wise  componentwise over tuple spaces
class RepresentationRelation {
public:
    enum class Rule { Lookup, Threshold, TupleWise };
    using Table = std::map<Value, Value>;

    RepresentationRelation() = default;

    static RepresentationRelation lookup(std::string id, PhysicalSpace domain, AbstractSpace codomain,
                                         Table table);
    static RepresentationRelation threshold(std::string id, PhysicalSpace domain, AbstractSpace codomain,
                                            std::vector<double> thresholds);
    static RepresentationRelation tuple_wise(std::string id, PhysicalSpace domain, AbstractSpace codomain,
                                             std::vector<RepresentationRelation> components);

    bool valid() const { return data_ != nullptr; }
    const std::string& id() const { return data_->id; }
    const PhysicalSpace& domain() const { return data_->domain; }
    const AbstractSpace& codomain() const { return data_->codomain; }
    Rule rule() const { return data_->rule; }
    const Table& table() const { return data_->table; }
    const std::vector<double>& thresholds() const { return data_->thresholds; }
    const std::vector<RepresentationRelation>& components() const { return data_->components; }

    /// Raw application; callers are responsible for membership.
    Value apply(const Value& p) const;

    friend bool operator==(const RepresentationRelation& a, const RepresentationRelation& b);

private:
    struct Data {
        std::string id;
        PhysicalSpace domain;
        AbstractSpace codomain;
        Rule rule = Rule::Lookup;
        Table table;
        std::vector<double> thresholds;
        std::vector<RepresentationRelation> components;
    };
    explicit RepresentationRelation(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
    std::shared_ptr<const Data> data_;
};

AbstractState represent(const RepresentationRelation& relation, const PhysicalState& p);

struct RepresentationalTriple {
    PhysicalState physical;
    RepresentationRelation relation;
    AbstractState abstract;

    friend bool operator==(const RepresentationalTriple&, const RepresentationalTriple&) = default;
};

RepresentationalTriple make_triple(const RepresentationRelation& relation, const PhysicalState& p);

/// Seeded search realizing the reverse use of a representation: candidate
/// seeds are prepared by the engineering dynamics and tried in declaration order.
struct InstantiationProcedure {
    std::vector<PhysicalState> seeds;
    PhysicalDynamics engineering;

    friend bool operator==(const InstantiationProcedure&, const InstantiationProcedure&) = default;
};

/// One predictive claim of a theory: the abstract dynamics the device is
/// expected to track, paired with the device's physical evolution.
struct Prediction {
    std::string name;
    AbstractDynamics abstract;
    PhysicalDynamics physical;

    friend bool operator==(const Prediction&, const Prediction&) = default;
};

enum class ValidityStatus { Untested, Valid, Invalid };
std::string_view to_string(ValidityStatus s);

struct ValidityReport;
class Theory;

std::pair<Theory, ValidityReport> validate_theory(const Theory& theory, double epsilon, Metric metric,
                                                  std::size_t trials, double required_success,
                                                  TrialSeed base_seed);

class Theory {
public:
    Theory() = default;
    Theory(std::string id, RepresentationRelation representation, std::vector<PhysicalState> domain,
           std::vector<Prediction> predictions,
           std::optional<InstantiationProcedure> instantiation = std::nullopt);

    const std::string& id() const { return id_; }
    const RepresentationRelation& representation() const { return representation_; }
    const PhysicalSpace& physical_space() const { return representation_.domain(); }
    const AbstractSpace& abstract_space() const { return representation_.codomain(); }
    const std::vector<PhysicalState>& domain() const { return domain_; }
    const std::vector<Prediction>& predictions() const { return predictions_; }
    const std::optional<InstantiationProcedure>& instantiation() const { return instantiation_; }

    /// UnknownReference when no prediction has this name.
    const Prediction& prediction(const std::string& name) const;
    bool in_domain(const PhysicalState& p) const;

    /// Only validate_theory can move a theory out of Untested.
    ValidityStatus validity() const { return validity_; }
    bool validated() const { return validity_ == ValidityStatus::Valid; }
    const std::shared_ptr<const ValidityReport>& evidence() const { return evidence_; }

    /// Structural equality; ignores attached evidence but not the status.
    friend bool operator==(const Theory& a, const Theory& b);

private:
    friend std::pair<Theory, ValidityReport> validate_theory(const Theory&, double, Metric, std::size_t,
                                                             double, TrialSeed);

    std::string id_;
    RepresentationRelation representation_;
    std::vector<PhysicalState> domain_;
    std::vector<Prediction> predictions_;
    std::optional<InstantiationProcedure> instantiation_;
    ValidityStatus validity_ = ValidityStatus::Untested;
    std::shared_ptr<const ValidityReport> evidence_;
};

/// First seed (declaration order) whose engineered state represents the target.
/// Returns the prepared state. MissingInstantiation when the theory has no
/// procedure; NotInstantiable when no seed works.
PhysicalState instantiate(const Theory& theory, const AbstractState& target);

}  // namespace ar
