#include "ar/relations.hpp"

#include <cmath>
#include <numeric>

namespace ar {

namespace {

[[noreturn]] void bad(const std::string& id, const std::string& what)
{
    fail(ErrorCode::InvalidDeclaration, "relation '" + id + "': " + what);
}

// Widths of the bit groups a threshold representation fills, in order.
std::vector<std::size_t> bit_groups(const AbstractSpace& codomain)
{
    if (codomain.kind() == SpaceKind::Bitstring) {
        return {codomain.width()};
    }
    std::vector<std::size_t> widths;
    if (codomain.kind() == SpaceKind::Tuple) {
        for (const auto& c : codomain.components()) {
            if (c.kind() != SpaceKind::Bitstring) {
                return {};
            }
            widths.push_back(c.width());
        }
    }
    return widths;
}

}  // namespace

std::string_view to_string(ValidityStatus s)
{
    switch (s) {
    case ValidityStatus::Untested: return "untested";
    case ValidityStatus::Valid: return "valid";
    case ValidityStatus::Invalid: return "invalid";
    }
    return "?";
}

RepresentationRelation RepresentationRelation::lookup(std::string id, PhysicalSpace domain,
                                                      AbstractSpace codomain, Table table)
{
    if (!is_identifier(id)) {
        bad(id, "invalid identifier");
    }
    if (!domain.finite()) {
        bad(id, "lookup tables need a finite physical space");
    }
    for (const auto& [p, m] : table) {
        if (!domain.has_member(p)) {
            bad(id, format_literal(p) + " is not in physical space '" + domain.id() + "'");
        }
        if (!codomain.has_member(m)) {
            bad(id, format_literal(m) + " is not in abstract space '" + codomain.id() + "'");
        }
    }
    if (table.size() != *domain.cardinality()) {
        for (const auto& s : enumerate(domain)) {
            if (!table.contains(s.value)) {
                bad(id, "not total, no image for " + format_literal(s.value));
            }
        }
    }
    return RepresentationRelation(std::make_shared<const Data>(
        Data{std::move(id), std::move(domain), std::move(codomain), Rule::Lookup, std::move(table), {}, {}}));
}

RepresentationRelation RepresentationRelation::threshold(std::string id, PhysicalSpace domain,
                                                         AbstractSpace codomain, std::vector<double> thresholds)
{
    if (!is_identifier(id)) {
        bad(id, "invalid identifier");
    }
    if (domain.kind() != SpaceKind::RealVector) {
        bad(id, "threshold rules need a real-vector domain");
    }
    if (thresholds.size() != domain.dimension()) {
        bad(id, "one threshold per coordinate is required");
    }
    for (double t : thresholds) {
        if (!std::isfinite(t)) {
            bad(id, "thresholds must be finite");
        }
    }
    const auto groups = bit_groups(codomain);
    if (groups.empty() || std::accumulate(groups.begin(), groups.end(), std::size_t{0}) != domain.dimension()) {
        bad(id, "codomain must be bitstrings covering exactly " + std::to_string(domain.dimension()) + " bits");
    }
    return RepresentationRelation(std::make_shared<const Data>(Data{
        std::move(id), std::move(domain), std::move(codomain), Rule::Threshold, {}, std::move(thresholds), {}}));
}

RepresentationRelation RepresentationRelation::tuple_wise(std::string id, PhysicalSpace domain,
                                                          AbstractSpace codomain,
                                                          std::vector<RepresentationRelation> components)
{
    if (!is_identifier(id)) {
        bad(id, "invalid identifier");
    }
    if (domain.kind() != SpaceKind::Tuple || codomain.kind() != SpaceKind::Tuple ||
        domain.arity() != components.size() || codomain.arity() != components.size()) {
        bad(id, "tuple-wise rules need tuple spaces with one component per relation");
    }
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (!(components[i].domain() == domain.component(i)) ||
            !(components[i].codomain() == codomain.component(i))) {
            fail(ErrorCode::SpaceMismatch, "relation '" + id + "': component " + std::to_string(i) + " ('" +
                                               components[i].id() + "') does not match the tuple spaces");
        }
    }
    return RepresentationRelation(std::make_shared<const Data>(Data{
        std::move(id), std::move(domain), std::move(codomain), Rule::TupleWise, {}, {}, std::move(components)}));
}

Value RepresentationRelation::apply(const Value& p) const
{
    switch (data_->rule) {
    case Rule::Lookup: return data_->table.at(p);
    case Rule::Threshold: {
        const auto& xs = p.reals();
        std::string all(xs.size(), '0');
        for (std::size_t i = 0; i < xs.size(); ++i) {
            all[i] = xs[i] >= data_->thresholds[i] ? '1' : '0';
        }
        const auto groups = bit_groups(data_->codomain);
        if (data_->codomain.kind() == SpaceKind::Bitstring) {
            return Value(Bits{std::move(all)});
        }
        Value::Tuple parts;
        std::size_t at = 0;
        for (std::size_t w : groups) {
            parts.emplace_back(Bits{all.substr(at, w)});
            at += w;
        }
        return Value(std::move(parts));
    }
    case Rule::TupleWise: {
        Value::Tuple parts;
        for (std::size_t i = 0; i < data_->components.size(); ++i) {
            parts.push_back(data_->components[i].apply(p.tuple()[i]));
        }
        return Value(std::move(parts));
    }
    }
    return p;
}

bool operator==(const RepresentationRelation& a, const RepresentationRelation& b)
{
    if (a.data_ == b.data_) {
        return true;
    }
    if (!a.data_ || !b.data_) {
        return false;
    }
    const auto& x = *a.data_;
    const auto& y = *b.data_;
    return x.id == y.id && x.domain == y.domain && x.codomain == y.codomain && x.rule == y.rule &&
           x.table == y.table && x.thresholds == y.thresholds && x.components == y.components;
}

AbstractState represent(const RepresentationRelation& relation, const PhysicalState& p)
{
    if (!contains(relation.domain(), p)) {
        fail(ErrorCode::OutOfDomain,
             format_state(p) + " is not in the domain '" + relation.domain().id() + "' of relation '" +
                 relation.id() + "'");
    }
    return AbstractState{relation.codomain(), relation.apply(p.value)};
}

RepresentationalTriple make_triple(const RepresentationRelation& relation, const PhysicalState& p)
{
    return RepresentationalTriple{p, relation, represent(relation, p)};
}

Theory::Theory(std::string id, RepresentationRelation representation, std::vector<PhysicalState> domain,
               std::vector<Prediction> predictions, std::optional<InstantiationProcedure> instantiation)
    : id_(std::move(id)), representation_(std::move(representation)), domain_(std::move(domain)),
      predictions_(std::move(predictions)), instantiation_(std::move(instantiation))
{
    auto bad_theory = [this](ErrorCode code, const std::string& what) {
        fail(code, "theory '" + id_ + "': " + what);
    };
    if (!is_identifier(id_)) {
        bad_theory(ErrorCode::InvalidDeclaration, "invalid identifier");
    }
    if (!representation_.valid()) {
        bad_theory(ErrorCode::InvalidDeclaration, "missing representation");
    }
    for (const auto& p : domain_) {
        if (!contains(physical_space(), p)) {
            bad_theory(ErrorCode::OutOfDomain, format_state(p) + " is outside '" + physical_space().id() + "'");
        }
    }
    for (std::size_t i = 0; i < predictions_.size(); ++i) {
        const auto& pr = predictions_[i];
        if (!(pr.abstract.space() == abstract_space())) {
            bad_theory(ErrorCode::SpaceMismatch, "prediction '" + pr.name + "' abstract dynamics '" +
                                                     pr.abstract.id() + "' is not on '" + abstract_space().id() + "'");
        }
        if (!(pr.physical.space() == physical_space())) {
            bad_theory(ErrorCode::SpaceMismatch, "prediction '" + pr.name + "' physical dynamics '" +
                                                     pr.physical.id() + "' is not on '" + physical_space().id() + "'");
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (predictions_[j].name == pr.name) {
                bad_theory(ErrorCode::DuplicateIdentifier, "prediction '" + pr.name + "' declared twice");
            }
        }
    }
    if (instantiation_) {
        if (!(instantiation_->engineering.space() == physical_space())) {
            bad_theory(ErrorCode::SpaceMismatch, "engineering dynamics is not on '" + physical_space().id() + "'");
        }
        if (instantiation_->engineering.stochastic()) {
            bad_theory(ErrorCode::InvalidDeclaration, "engineering dynamics must be deterministic");
        }
        for (const auto& s : instantiation_->seeds) {
            if (!contains(physical_space(), s)) {
                bad_theory(ErrorCode::OutOfDomain, "seed " + format_state(s) + " is outside '" +
                                                       physical_space().id() + "'");
            }
        }
    }
}

const Prediction& Theory::prediction(const std::string& name) const
{
    for (const auto& p : predictions_) {
        if (p.name == name) {
            return p;
        }
    }
    fail(ErrorCode::UnknownReference, "theory '" + id_ + "' has no prediction '" + name + "'");
}

bool Theory::in_domain(const PhysicalState& p) const
{
    for (const auto& d : domain_) {
        if (d == p) {
            return true;
        }
    }
    return false;
}

bool operator==(const Theory& a, const Theory& b)
{
    return a.id_ == b.id_ && a.representation_ == b.representation_ && a.domain_ == b.domain_ &&
           a.predictions_ == b.predictions_ && a.instantiation_ == b.instantiation_ && a.validity_ == b.validity_;
}

PhysicalState instantiate(const Theory& theory, const AbstractState& target)
{
    if (!theory.instantiation()) {
        fail(ErrorCode::MissingInstantiation, "theory '" + theory.id() + "' declares no instantiation procedure");
    }
    if (!contains(theory.abstract_space(), target)) {
        fail(ErrorCode::OutOfDomain, format_state(target) + " is not in '" + theory.abstract_space().id() + "'");
    }
    const auto& proc = *theory.instantiation();
    for (const auto& seed : proc.seeds) {
        PhysicalState prepared = evolve_physical(proc.engineering, seed, TrialSeed{0});
        if (theory.representation().apply(prepared.value) == target.value) {
            return prepared;
        }
    }
    fail(ErrorCode::NotInstantiable,
         "no seed of theory '" + theory.id() + "' prepares " + format_state(target));
}

}  // namespace ar
