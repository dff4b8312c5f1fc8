#include "ar/composition.hpp"
#include "ar/scenario.hpp"
#include "ar/scenarios.hpp"

#include "random_systems.hpp"

#include <doctest.h>

using namespace ar;

namespace {

JointSystem joint_of(const ScenarioBundle& b, const std::string& id) { return build_joint(b.composition(id)); }

}  // namespace

TEST_CASE("xor coupling is heterotic, its variants hybrid")
{
    auto x = joint_of(scenarios::build_xor_joint(), "xor");
    auto cls = classify(x);
    CHECK(cls.value == CompositionKind::Heterotic);
    CHECK(cls.witness.representation.has_value());
    CHECK_FALSE(cls.witness.dynamics.has_value());
    CHECK(brute_force_classify(x).value == CompositionKind::Heterotic);

    auto n = joint_of(scenarios::build_xor_joint(scenarios::XorVariant::NotLeft), "xor");
    auto ncls = classify(n);
    CHECK(ncls.value == CompositionKind::Hybrid);
    REQUIRE(ncls.witness.dynamics.has_value());
    CHECK(ncls.witness.dynamics->first.apply(bits("0")) == bits("1"));
    CHECK(ncls.witness.dynamics->second.apply(bits("0")) == bits("0"));

    CHECK(classify(joint_of(scenarios::build_xor_joint(scenarios::XorVariant::Identity), "xor")).value ==
          CompositionKind::Hybrid);
}

TEST_CASE("products are hybrid")
{
    auto bundle = scenarios::build_social_machine();
    for (const auto& c : bundle.compositions()) {
        if (c.mode == CompositionDecl::Mode::Declared) {
            continue;
        }
        auto j = build_joint(c);
        CHECK(classify(j).value == CompositionKind::Hybrid);
        CHECK(classify(j).matches_components);
    }
    auto human = validate_theory(bundle.theory("human"), 0.0, Metric::Discrete, 1, 1.0, TrialSeed{}).first;
    auto machine = validate_theory(bundle.theory("machine"), 0.0, Metric::Discrete, 1, 1.0, TrialSeed{}).first;
    auto par = compose_parallel({human, "classify"}, {machine, "aggregate"});
    auto seq = compose_sequential({human, "classify"}, {machine, "aggregate"});
    CHECK(par.id == "human-par-machine");
    CHECK(seq.provenance == Provenance::ComposedSequential);
    CHECK(classify(par).value == CompositionKind::Hybrid);
    CHECK(classify(seq).value == CompositionKind::Hybrid);
    CHECK(brute_force_classify(par).value == CompositionKind::Hybrid);

    try {
        compose_parallel({bundle.theory("human"), "classify"}, {machine, "aggregate"});
        FAIL("expected TheoryNotValidated");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TheoryNotValidated);
    }
}

TEST_CASE("social machine has no factored representation")
{
    auto j = joint_of(scenarios::build_social_machine(), "social");
    CHECK_FALSE(factorize_representation(j).has_value());
    CHECK(classify(j).value == CompositionKind::Heterotic);
    CHECK(brute_force_classify(j).value == CompositionKind::Heterotic);
}

TEST_CASE("exhaustive 1-bit joint maps agree with the oracle")
{
    std::size_t hybrid = 0;
    for (const auto& table : testing::all_one_bit_tables()) {
        auto j = testing::one_bit_joint(table);
        auto fast = classify(j).value;
        CHECK(fast == brute_force_classify(j).value);
        hybrid += fast == CompositionKind::Hybrid;
    }
    // Exactly the 4 x 4 maps (f(a), g(b)) factor.
    CHECK(hybrid == 16);
}

TEST_CASE("random joint systems agree with the oracle")
{
    std::mt19937_64 rng(20240611);
    std::size_t hybrid = 0;
    const std::size_t n = 200;
    for (std::size_t i = 0; i < n; ++i) {
        auto j = testing::random_joint(rng, i);
        auto fast = classify(j);
        auto slow = brute_force_classify(j);
        CHECK_MESSAGE(fast.value == slow.value, "system " << i);
        hybrid += fast.value == CompositionKind::Hybrid;
    }
    CHECK(hybrid > 10);
    CHECK(hybrid < n - 10);
}

TEST_CASE("classification is invariant under relabeling")
{
    // Renaming abstract values of a component and conjugating the dynamics
    // cannot change the class.
    std::mt19937_64 rng(5);
    for (std::size_t i = 0; i < 60; ++i) {
        auto j = testing::random_joint(rng, i);
        auto m1 = j.left.theory.abstract_space();
        auto renamed_labels = m1.labels();
        std::reverse(renamed_labels.begin(), renamed_labels.end());
        auto rename = [&](const Value& v) {
            const auto& ls = m1.labels();
            auto k = std::find(ls.begin(), ls.end(), v.label().name) - ls.begin();
            return label(renamed_labels[static_cast<std::size_t>(k)]);
        };
        auto rename_pair = [&](const Value& v) { return Value(Value::Tuple{rename(v.tuple()[0]), v.tuple()[1]}); };
        std::map<Value, Value> rep, dyn, comp;
        for (const auto& p : enumerate(j.joint_space)) {
            rep.emplace(p.value, rename_pair(j.joint_representation.apply(p.value)));
        }
        for (const auto& m : enumerate(j.joint_dynamics.space())) {
            dyn.emplace(rename_pair(m.value), rename_pair(j.joint_dynamics.apply(m.value)));
        }
        for (const auto& p : enumerate(j.left.theory.physical_space())) {
            comp.emplace(p.value, rename(j.left.theory.representation().apply(p.value)));
        }
        auto r1 = RepresentationRelation::lookup(j.left.theory.representation().id(), j.left.theory.physical_space(), m1,
                                                 comp);
        const auto& pr = j.left.theory.prediction(j.left.prediction);
        Theory left(j.left.theory.id(), r1, j.left.theory.domain(), {pr});
        left = validate_theory(left, 0.0, Metric::Discrete, 1, 1.0, TrialSeed{}).first;
        auto codomain = j.joint_representation.codomain();
        auto relabeled = JointSystem::declare(
            j.id, {left, j.left.prediction}, j.right,
            RepresentationRelation::lookup("R", j.joint_space, codomain, rep),
            AbstractDynamics::lookup("D", codomain, dyn));
        CHECK(classify(relabeled).value == classify(j).value);
    }
}

TEST_CASE("dynamics factorization errors")
{
    auto n = AbstractSpace::bounded_integer("n", 0, 3);
    try {
        factorize_dynamics(AbstractDynamics::builtin("id", n, Builtin::Identity));
        FAIL("expected NotProductSpace");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotProductSpace);
    }
}
