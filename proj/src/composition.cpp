#include "ar/composition.hpp"

namespace ar {

std::string_view to_string(Provenance p)
{
    switch (p) {
    case Provenance::ComposedParallel: return "composed-parallel";
    case Provenance::ComposedSequential: return "composed-sequential";
    case Provenance::Declared: return "declared";
    }
    return "?";
}

std::string_view to_string(CompositionKind k)
{
    return k == CompositionKind::Hybrid ? "Hybrid" : "Heterotic";
}

JointSystem JointSystem::declare(std::string id, ComponentBinding left, ComponentBinding right,
                                 RepresentationRelation joint_representation, AbstractDynamics joint_dynamics)
{
    auto mismatch = [&](const std::string& what) { fail(ErrorCode::SpaceMismatch, "joint '" + id + "': " + what); };
    if (!is_identifier(id)) {
        fail(ErrorCode::InvalidDeclaration, "joint '" + id + "': invalid identifier");
    }
    left.theory.prediction(left.prediction);
    right.theory.prediction(right.prediction);
    const PhysicalSpace& space = joint_representation.domain();
    if (space.kind() != SpaceKind::Tuple || space.arity() != 2) {
        fail(ErrorCode::NotProductSpace, "joint '" + id + "': representation domain '" + space.id() +
                                             "' is not a pair space");
    }
    if (!(space.component(0) == left.theory.physical_space()) ||
        !(space.component(1) == right.theory.physical_space())) {
        mismatch("representation domain is not the ordered product of the component spaces");
    }
    if (!(joint_dynamics.space() == joint_representation.codomain())) {
        mismatch("dynamics '" + joint_dynamics.id() + "' does not act on '" + joint_representation.codomain().id() + "'");
    }
    PhysicalSpace joint_space = space;
    return JointSystem{std::move(id),          std::move(left),           std::move(right),    std::move(joint_space),
                       std::move(joint_representation), std::move(joint_dynamics), Provenance::Declared};
}

namespace {

JointSystem compose(const ComponentBinding& a, const ComponentBinding& b, std::string id, Provenance provenance)
{
    for (const auto* c : {&a, &b}) {
        if (!c->theory.validated()) {
            fail(ErrorCode::TheoryNotValidated,
                 "component theory '" + c->theory.id() + "' must be validated before composition");
        }
    }
    if (id.empty()) {
        id = a.theory.id() + (provenance == Provenance::ComposedParallel ? "-par-" : "-seq-") + b.theory.id();
    }
    auto joint_space = PhysicalSpace::tuple(id + ".phys", {a.theory.physical_space(), b.theory.physical_space()});
    auto codomain = AbstractSpace::tuple(id + ".abs", {a.theory.abstract_space(), b.theory.abstract_space()});
    auto rep = RepresentationRelation::tuple_wise(id + ".rep", joint_space, codomain,
                                                  {a.theory.representation(), b.theory.representation()});
    const auto& ca = a.abstract_dynamics();
    const auto& cb = b.abstract_dynamics();
    AbstractDynamics::Table table;
    for (const auto& m : enumerate(codomain)) {
        const auto& t = m.value.tuple();
        table.emplace(m.value, Value(Value::Tuple{ca.apply(t[0]), cb.apply(t[1])}));
    }
    auto dyn = AbstractDynamics::lookup(id + ".dyn", codomain, std::move(table));
    return JointSystem{std::move(id), a, b, std::move(joint_space), std::move(rep), std::move(dyn), provenance};
}

struct JointSample {
    std::vector<PhysicalState> ps;
    std::vector<PhysicalState> qs;
    std::vector<std::vector<Value>> rep;  // rep[i][j] = R_mu(p_i, q_j)
};

JointSample sample(const JointSystem& j)
{
    JointSample s;
    s.ps = component_states(j.left);
    s.qs = component_states(j.right);
    s.rep.resize(s.ps.size());
    for (std::size_t i = 0; i < s.ps.size(); ++i) {
        for (const auto& q : s.qs) {
            s.rep[i].push_back(j.joint_representation.apply(Value(Value::Tuple{s.ps[i].value, q.value})));
        }
    }
    return s;
}

bool is_pair(const AbstractSpace& s) { return s.kind() == SpaceKind::Tuple && s.arity() == 2; }

// The codomain is exactly the product of the component codomains.
bool product_of_components(const JointSystem& j)
{
    const auto& c = j.joint_representation.codomain();
    return is_pair(c) && c.component(0) == j.left.theory.abstract_space() &&
           c.component(1) == j.right.theory.abstract_space();
}

bool factors_match_components(const JointSystem& j, const std::pair<RepresentationFactor, RepresentationFactor>& f)
{
    if (!product_of_components(j)) {
        return false;
    }
    for (const auto& [p, m] : f.first.table) {
        if (!(j.left.theory.representation().apply(p) == m)) {
            return false;
        }
    }
    for (const auto& [q, m] : f.second.table) {
        if (!(j.right.theory.representation().apply(q) == m)) {
            return false;
        }
    }
    return true;
}

// Mixed-radix counter over all functions from an n-element set into a k-element set.
class FunctionCounter {
public:
    FunctionCounter(std::size_t n, std::size_t k) : digits_(n, 0), k_(k) {}
    const std::vector<std::size_t>& digits() const { return digits_; }
    bool next()
    {
        for (std::size_t i = digits_.size(); i > 0; --i) {
            if (++digits_[i - 1] < k_) {
                return true;
            }
            digits_[i - 1] = 0;
        }
        return false;
    }

private:
    std::vector<std::size_t> digits_;
    std::size_t k_;
};

std::uint64_t power(std::uint64_t base, std::uint64_t exp)
{
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && r > kOracleMaxCandidates / base) {
            return kOracleMaxCandidates + 1;
        }
        r *= base;
    }
    return r;
}

}  // namespace

JointSystem compose_parallel(const ComponentBinding& a, const ComponentBinding& b, std::string id)
{
    return compose(a, b, std::move(id), Provenance::ComposedParallel);
}

JointSystem compose_sequential(const ComponentBinding& a, const ComponentBinding& b, std::string id)
{
    return compose(a, b, std::move(id), Provenance::ComposedSequential);
}

std::vector<PhysicalState> component_states(const ComponentBinding& c)
{
    const auto& space = c.theory.physical_space();
    if (space.finite()) {
        return enumerate(space);
    }
    if (c.theory.domain().empty()) {
        fail(ErrorCode::NotEnumerable, "component '" + c.theory.id() +
                                           "' has a continuous space and no declared domain states");
    }
    return c.theory.domain();
}

std::optional<std::pair<RepresentationFactor, RepresentationFactor>> factorize_representation(const JointSystem& j)
{
    const auto& codomain = j.joint_representation.codomain();
    if (!is_pair(codomain)) {
        return std::nullopt;
    }
    const auto s = sample(j);
    RepresentationFactor left{j.left.theory.physical_space(), codomain.component(0), {}};
    RepresentationFactor right{j.right.theory.physical_space(), codomain.component(1), {}};
    for (std::size_t i = 0; i < s.ps.size(); ++i) {
        for (std::size_t k = 0; k < s.qs.size(); ++k) {
            const auto& out = s.rep[i][k].tuple();
            // First coordinate must not vary with q, second must not vary with p.
            if (!(out[0] == s.rep[i][0].tuple()[0]) || !(out[1] == s.rep[0][k].tuple()[1])) {
                return std::nullopt;
            }
        }
        left.table.emplace(s.ps[i].value, s.rep[i][0].tuple()[0]);
    }
    for (std::size_t k = 0; k < s.qs.size(); ++k) {
        right.table.emplace(s.qs[k].value, s.rep[0][k].tuple()[1]);
    }
    return std::make_pair(std::move(left), std::move(right));
}

std::optional<std::pair<AbstractDynamics, AbstractDynamics>> factorize_dynamics(const AbstractDynamics& d)
{
    const auto& space = d.space();
    if (!is_pair(space)) {
        fail(ErrorCode::NotProductSpace, "dynamics '" + d.id() + "' does not act on a pair space");
    }
    if (!space.finite()) {
        fail(ErrorCode::NotEnumerable, "dynamics '" + d.id() + "' acts on a continuous space");
    }
    const auto as = enumerate(space.component(0));
    const auto bs = enumerate(space.component(1));
    AbstractDynamics::Table f;
    AbstractDynamics::Table g;
    for (std::size_t i = 0; i < as.size(); ++i) {
        for (std::size_t k = 0; k < bs.size(); ++k) {
            const auto out = d.apply(Value(Value::Tuple{as[i].value, bs[k].value}));
            auto [fit, f_new] = f.emplace(as[i].value, out.tuple()[0]);
            auto [git, g_new] = g.emplace(bs[k].value, out.tuple()[1]);
            if ((!f_new && !(fit->second == out.tuple()[0])) || (!g_new && !(git->second == out.tuple()[1]))) {
                return std::nullopt;
            }
        }
    }
    return std::make_pair(AbstractDynamics::lookup(d.id() + ".left", space.component(0), std::move(f)),
                          AbstractDynamics::lookup(d.id() + ".right", space.component(1), std::move(g)));
}

CompositionClass classify(const JointSystem& j)
{
    CompositionClass result;
    result.witness.representation = factorize_representation(j);
    if (is_pair(j.joint_dynamics.space())) {
        result.witness.dynamics = factorize_dynamics(j.joint_dynamics);
    }
    result.matches_components =
        result.witness.representation && factors_match_components(j, *result.witness.representation);
    result.value = result.witness.representation && result.witness.dynamics && result.matches_components
                       ? CompositionKind::Hybrid
                       : CompositionKind::Heterotic;
    return result;
}

CompositionClass brute_force_classify(const JointSystem& j)
{
    const auto& m1_space = j.left.theory.abstract_space();
    const auto& m2_space = j.right.theory.abstract_space();
    for (const auto* m : {&m1_space, &m2_space}) {
        auto n = m->cardinality();
        if (!n || *n > kOracleMaxAbstractStates) {
            fail(ErrorCode::TooLarge, "component abstract space '" + m->id() + "' exceeds the oracle bound of " +
                                          std::to_string(kOracleMaxAbstractStates) + " states");
        }
    }
    const auto m1 = enumerate(m1_space);
    const auto m2 = enumerate(m2_space);
    const auto ps = component_states(j.left);
    const auto qs = component_states(j.right);
    if (power(m1.size(), ps.size()) > kOracleMaxCandidates || power(m2.size(), qs.size()) > kOracleMaxCandidates) {
        fail(ErrorCode::TooLarge, "too many candidate representation maps for joint '" + j.id + "'");
    }

    CompositionClass result;
    const auto& codomain = j.joint_representation.codomain();
    if (!(is_pair(codomain) && codomain.component(0) == m1_space && codomain.component(1) == m2_space)) {
        return result;  // no candidate pair can even have the right type
    }

    // Representation: all (r1, r2) with r1 : P -> M1 and r2 : Q -> M2.
    std::vector<std::vector<Value>> joint(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (const auto& q : qs) {
            joint[i].push_back(j.joint_representation.apply(Value(Value::Tuple{ps[i].value, q.value})));
        }
    }
    auto r1_ok = [&](const std::vector<std::size_t>& r1) {
        for (std::size_t i = 0; i < ps.size(); ++i) {
            if (!(j.left.theory.representation().apply(ps[i].value) == m1[r1[i]].value)) {
                return false;
            }
            for (std::size_t k = 0; k < qs.size(); ++k) {
                if (!(joint[i][k].tuple()[0] == m1[r1[i]].value)) {
                    return false;
                }
            }
        }
        return true;
    };
    std::optional<std::pair<RepresentationFactor, RepresentationFactor>> rep_witness;
    FunctionCounter r1(ps.size(), m1.size());
    do {
        if (!r1_ok(r1.digits())) {
            continue;  // every pair with this r1 fails on the first coordinate
        }
        FunctionCounter r2(qs.size(), m2.size());
        do {
            bool ok = true;
            for (std::size_t i = 0; i < ps.size() && ok; ++i) {
                for (std::size_t k = 0; k < qs.size() && ok; ++k) {
                    const Value candidate(Value::Tuple{m1[r1.digits()[i]].value, m2[r2.digits()[k]].value});
                    ok = joint[i][k] == candidate;
                }
            }
            for (std::size_t k = 0; k < qs.size() && ok; ++k) {
                ok = j.right.theory.representation().apply(qs[k].value) == m2[r2.digits()[k]].value;
            }
            if (ok) {
                RepresentationFactor left{j.left.theory.physical_space(), m1_space, {}};
                RepresentationFactor right{j.right.theory.physical_space(), m2_space, {}};
                for (std::size_t i = 0; i < ps.size(); ++i) {
                    left.table.emplace(ps[i].value, m1[r1.digits()[i]].value);
                }
                for (std::size_t k = 0; k < qs.size(); ++k) {
                    right.table.emplace(qs[k].value, m2[r2.digits()[k]].value);
                }
                rep_witness = std::make_pair(std::move(left), std::move(right));
            }
        } while (!rep_witness && r2.next());
    } while (!rep_witness && r1.next());

    // Dynamics: all (f, g) with f : M1 -> M1 and g : M2 -> M2.
    std::vector<std::vector<Value>> image(m1.size());
    for (std::size_t a = 0; a < m1.size(); ++a) {
        for (const auto& b : m2) {
            image[a].push_back(j.joint_dynamics.apply(Value(Value::Tuple{m1[a].value, b.value})));
        }
    }
    std::optional<std::pair<AbstractDynamics, AbstractDynamics>> dyn_witness;
    FunctionCounter f(m1.size(), m1.size());
    do {
        bool f_ok = true;
        for (std::size_t a = 0; a < m1.size() && f_ok; ++a) {
            for (std::size_t b = 0; b < m2.size() && f_ok; ++b) {
                f_ok = image[a][b].tuple()[0] == m1[f.digits()[a]].value;
            }
        }
        if (!f_ok) {
            continue;
        }
        FunctionCounter g(m2.size(), m2.size());
        do {
            bool ok = true;
            for (std::size_t a = 0; a < m1.size() && ok; ++a) {
                for (std::size_t b = 0; b < m2.size() && ok; ++b) {
                    ok = image[a][b] == Value(Value::Tuple{m1[f.digits()[a]].value, m2[g.digits()[b]].value});
                }
            }
            if (ok) {
                AbstractDynamics::Table ft;
                AbstractDynamics::Table gt;
                for (std::size_t a = 0; a < m1.size(); ++a) {
                    ft.emplace(m1[a].value, m1[f.digits()[a]].value);
                }
                for (std::size_t b = 0; b < m2.size(); ++b) {
                    gt.emplace(m2[b].value, m2[g.digits()[b]].value);
                }
                dyn_witness = std::make_pair(AbstractDynamics::lookup(j.joint_dynamics.id() + ".left", m1_space, ft),
                                             AbstractDynamics::lookup(j.joint_dynamics.id() + ".right", m2_space, gt));
            }
        } while (!dyn_witness && g.next());
    } while (!dyn_witness && f.next());

    result.witness.representation = std::move(rep_witness);
    result.witness.dynamics = std::move(dyn_witness);
    result.matches_components = result.witness.representation.has_value();
    result.value = result.witness.representation && result.witness.dynamics ? CompositionKind::Hybrid
                                                                             : CompositionKind::Heterotic;
    return result;
}

}  // namespace ar
