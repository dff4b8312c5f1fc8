#include "ar/scenario.hpp"

#include <array>

namespace ar {

namespace {

constexpr std::array<std::pair<CheckKind, std::string_view>, 9> kCheckNames{{
    {CheckKind::Commutation, "commutation"},
    {CheckKind::Experiment, "experiment"},
    {CheckKind::History, "history"},
    {CheckKind::ValidateTheory, "validate-theory"},
    {CheckKind::Compute, "compute"},
    {CheckKind::Instantiate, "instantiate"},
    {CheckKind::Layer, "layer"},
    {CheckKind::Stack, "stack"},
    {CheckKind::Classify, "classify"},
}};

const std::string& space_id(const AnySpace& s)
{
    return std::visit([](const auto& x) -> const std::string& { return x.id(); }, s);
}

const std::string& dynamics_id(const AnyDynamics& d)
{
    return std::visit([](const auto& x) -> const std::string& { return x.id(); }, d);
}

}  // namespace

std::string_view to_string(CheckKind k)
{
    for (const auto& [kind, name] : kCheckNames) {
        if (kind == k) {
            return name;
        }
    }
    return "?";
}

std::optional<CheckKind> check_kind_from_string(std::string_view name)
{
    for (const auto& [kind, n] : kCheckNames) {
        if (n == name) {
            return kind;
        }
    }
    return std::nullopt;
}

std::string_view to_string(CompositionDecl::Mode m)
{
    switch (m) {
    case CompositionDecl::Mode::Parallel: return "parallel";
    case CompositionDecl::Mode::Sequential: return "sequential";
    case CompositionDecl::Mode::Declared: return "declared";
    }
    return "?";
}

void ScenarioBundle::add_space(const AnySpace& s)
{
    std::visit(
        [this](const auto& space) {
            if (space.kind() == SpaceKind::Tuple) {
                for (const auto& c : space.components()) {
                    add_space(c);
                }
            }
        },
        s);
    spaces_.add(space_id(s), s, "space");
}

void ScenarioBundle::add_relation(const RepresentationRelation& r)
{
    add_space(r.domain());
    add_space(r.codomain());
    for (const auto& c : r.components()) {
        add_relation(c);
    }
    relations_.add(r.id(), r, "relation");
}

void ScenarioBundle::add_dynamics(const AnyDynamics& d)
{
    std::visit(
        [this](const auto& dyn) {
            add_space(dyn.space());
            for (const auto& step : dyn.steps()) {
                add_dynamics(step);
            }
        },
        d);
    dynamics_.add(dynamics_id(d), d, "dynamics");
}

void ScenarioBundle::add_theory(const Theory& t)
{
    add_relation(t.representation());
    for (const auto& p : t.predictions()) {
        add_dynamics(p.abstract);
        add_dynamics(p.physical);
    }
    if (t.instantiation()) {
        add_dynamics(t.instantiation()->engineering);
    }
    theories_.add(t.id(), t, "theory");
}

void ScenarioBundle::add_embedding(const ProblemEmbedding& e)
{
    add_space(e.problem_space());
    add_space(e.machine_space());
    embeddings_.add(e.id(), e, "embedding");
}

void ScenarioBundle::add_stack(const RefinementStack& s)
{
    for (const auto& l : s.layers()) {
        add_dynamics(l.dynamics);
    }
    add_theory(s.bottom().theory);
    stacks_.add(s.id(), s, "stack");
}

void ScenarioBundle::add_composition(const CompositionDecl& c)
{
    add_theory(c.left.theory);
    add_theory(c.right.theory);
    if (c.mode == CompositionDecl::Mode::Declared) {
        add_relation(c.joint_representation);
        add_dynamics(c.joint_dynamics);
    }
    compositions_.add(c.id, c, "composition");
}

void ScenarioBundle::add_check(const CheckDecl& c)
{
    if (!is_identifier(c.name)) {
        fail(ErrorCode::InvalidDeclaration, "check name '" + c.name + "' is not an identifier");
    }
    checks_.add(c.name, c, "check");
}

const AbstractSpace& ScenarioBundle::abstract_space(const std::string& id) const
{
    const auto& s = spaces_.get(id, "space");
    if (const auto* a = std::get_if<AbstractSpace>(&s)) {
        return *a;
    }
    fail(ErrorCode::SpaceMismatch, "space '" + id + "' is physical, an abstract space is required");
}

const PhysicalSpace& ScenarioBundle::physical_space(const std::string& id) const
{
    const auto& s = spaces_.get(id, "space");
    if (const auto* p = std::get_if<PhysicalSpace>(&s)) {
        return *p;
    }
    fail(ErrorCode::SpaceMismatch, "space '" + id + "' is abstract, a physical space is required");
}

const AbstractDynamics& ScenarioBundle::abstract_dynamics(const std::string& id) const
{
    const auto& d = dynamics_.get(id, "dynamics");
    if (const auto* a = std::get_if<AbstractDynamics>(&d)) {
        return *a;
    }
    fail(ErrorCode::SpaceMismatch, "dynamics '" + id + "' is physical, abstract dynamics are required");
}

const PhysicalDynamics& ScenarioBundle::physical_dynamics(const std::string& id) const
{
    const auto& d = dynamics_.get(id, "dynamics");
    if (const auto* p = std::get_if<PhysicalDynamics>(&d)) {
        return *p;
    }
    fail(ErrorCode::SpaceMismatch, "dynamics '" + id + "' is abstract, physical dynamics are required");
}

JointSystem build_joint(const CompositionDecl& decl, const ValidationSettings& settings, TrialSeed seed)
{
    auto validated = [&](const ComponentBinding& c) {
        if (c.theory.validated()) {
            return c;
        }
        auto [theory, report] = validate_theory(c.theory, settings.epsilon, settings.metric, settings.trials,
                                                settings.required_success, seed);
        return ComponentBinding{std::move(theory), c.prediction};
    };
    auto left = validated(decl.left);
    auto right = validated(decl.right);
    switch (decl.mode) {
    case CompositionDecl::Mode::Parallel: return compose_parallel(left, right, decl.id);
    case CompositionDecl::Mode::Sequential: return compose_sequential(left, right, decl.id);
    case CompositionDecl::Mode::Declared: break;
    }
    return JointSystem::declare(decl.id, std::move(left), std::move(right), decl.joint_representation,
                                decl.joint_dynamics);
}

}  // namespace ar
