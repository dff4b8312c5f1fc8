#pragma once
// Seeded random systems shared by the unit and acceptance suites.

#include "ar/composition.hpp"
#include "ar/verification.hpp"

#include <random>
#include <string>
#include <vector>

namespace ar::testing {

inline std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline std::vector<std::string> names(const std::string& prefix, std::size_t n)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(prefix + std::to_string(i));
    }
    return out;
}

template <Domain D, Domain E>
std::map<Value, Value> random_table(std::mt19937_64& rng, const Space<D>& from, const Space<E>& to)
{
    auto targets = enumerate(to);
    std::map<Value, Value> t;
    for (const auto& s : enumerate(from)) {
        t.emplace(s.value, targets[pick(rng, 0, targets.size() - 1)].value);
    }
    return t;
}

/// Deterministic theory over labeled spaces with random tables: physical
/// states p0.., abstract values 0..m-1 (absolute-difference metric applies).
struct RandomTheory {
    Theory theory;
    std::size_t abstract_size = 0;
};

inline RandomTheory random_deterministic_theory(std::mt19937_64& rng, const std::string& id)
{
    auto np = pick(rng, 2, 6);
    auto nm = pick(rng, 2, 5);
    auto p = PhysicalSpace::labeled(id + ".P", names("p", np));
    auto m = AbstractSpace::bounded_integer(id + ".M", 0, static_cast<Integer>(nm) - 1);
    auto r = RepresentationRelation::lookup(id + ".R", p, m, random_table(rng, p, m));
    auto h = PhysicalDynamics::lookup(id + ".H", p, random_table(rng, p, p));
    auto c = AbstractDynamics::lookup(id + ".C", m, random_table(rng, m, m));
    return {Theory(id, r, enumerate(p), {Prediction{"run", c, h}}), nm};
}

/// Validated component with identity dynamics over labeled spaces of the given sizes.
inline ComponentBinding random_component(std::mt19937_64& rng, const std::string& id, std::size_t np, std::size_t nm)
{
    auto p = PhysicalSpace::labeled(id + ".P", names(id + "p", np));
    auto m = AbstractSpace::labeled(id + ".M", names(id + "m", nm));
    auto r = RepresentationRelation::lookup(id + ".R", p, m, random_table(rng, p, m));
    Theory t(id, r, enumerate(p),
             {Prediction{"hold", AbstractDynamics::builtin(id + ".C", m, Builtin::Identity),
                         PhysicalDynamics::identity(id + ".H", p)}});
    auto validated = validate_theory(t, 0.0, Metric::Discrete, 1, 1.0, TrialSeed{}).first;
    return ComponentBinding{validated, "hold"};
}

/// Joint system over random components with |M| <= 4. Representations and
/// dynamics are drawn as exact products, perturbed products, or unconstrained
/// tables, so both classes occur.
inline JointSystem random_joint(std::mt19937_64& rng, std::size_t index)
{
    const std::string tag = "j" + std::to_string(index);
    auto left = random_component(rng, tag + "a", pick(rng, 1, 4), pick(rng, 1, 4));
    auto right = random_component(rng, tag + "b", pick(rng, 1, 4), pick(rng, 1, 4));
    auto joint_p = PhysicalSpace::tuple(tag + ".PQ", {left.theory.physical_space(), right.theory.physical_space()});
    auto m1 = left.theory.abstract_space();
    auto m2 = right.theory.abstract_space();
    auto joint_m = AbstractSpace::tuple(tag + ".MN", {m1, m2});

    RepresentationRelation rep;
    switch (pick(rng, 0, 5)) {
    case 0:  // unconstrained
        rep = RepresentationRelation::lookup(tag + ".R", joint_p, joint_m, random_table(rng, joint_p, joint_m));
        break;
    case 1: {  // product with one perturbed entry
        auto t = std::map<Value, Value>{};
        for (const auto& s : enumerate(joint_p)) {
            t.emplace(s.value, Value(Value::Tuple{left.theory.representation().apply(s.value.tuple()[0]),
                                                  right.theory.representation().apply(s.value.tuple()[1])}));
        }
        auto keys = enumerate(joint_p);
        auto targets = enumerate(joint_m);
        t[keys[pick(rng, 0, keys.size() - 1)].value] = targets[pick(rng, 0, targets.size() - 1)].value;
        rep = RepresentationRelation::lookup(tag + ".R", joint_p, joint_m, std::move(t));
        break;
    }
    default:
        rep = RepresentationRelation::tuple_wise(tag + ".R", joint_p, joint_m,
                                                 {left.theory.representation(), right.theory.representation()});
        break;
    }

    AbstractDynamics dyn;
    auto f = random_table(rng, m1, m1);
    auto g = random_table(rng, m2, m2);
    std::map<Value, Value> product;
    for (const auto& s : enumerate(joint_m)) {
        product.emplace(s.value, Value(Value::Tuple{f.at(s.value.tuple()[0]), g.at(s.value.tuple()[1])}));
    }
    switch (pick(rng, 0, 3)) {
    case 0: dyn = AbstractDynamics::lookup(tag + ".D", joint_m, random_table(rng, joint_m, joint_m)); break;
    case 1: {
        auto keys = enumerate(joint_m);
        product[keys[pick(rng, 0, keys.size() - 1)].value] = keys[pick(rng, 0, keys.size() - 1)].value;
        dyn = AbstractDynamics::lookup(tag + ".D", joint_m, std::move(product));
        break;
    }
    default: dyn = AbstractDynamics::lookup(tag + ".D", joint_m, std::move(product)); break;
    }
    return JointSystem::declare(tag, left, right, rep, dyn);
}

/// Two 1-bit components with a product representation and the given joint table.
inline JointSystem one_bit_joint(const std::map<Value, Value>& table)
{
    auto line = PhysicalSpace::labeled("line", {"lo", "hi"});
    auto bit = AbstractSpace::bitstring("bit", 1);
    auto read = RepresentationRelation::lookup("read", line, bit, {{label("lo"), bits("0")}, {label("hi"), bits("1")}});
    auto component = [&](const std::string& id) {
        Theory t(id, read, enumerate(line),
                 {Prediction{"hold", AbstractDynamics::builtin("hold", bit, Builtin::Identity),
                             PhysicalDynamics::identity("keep", line)}});
        return ComponentBinding{validate_theory(t, 0.0, Metric::Discrete, 1, 1.0, TrialSeed{}).first, "hold"};
    };
    auto pair_p = PhysicalSpace::tuple("lines", {line, line});
    auto pair_m = AbstractSpace::tuple("bits", {bit, bit});
    return JointSystem::declare("joint", component("a"), component("b"),
                                RepresentationRelation::tuple_wise("read2", pair_p, pair_m, {read, read}),
                                AbstractDynamics::lookup("d", pair_m, table));
}

/// All 256 joint maps over two 1-bit components, in lexicographic table order.
inline std::vector<std::map<Value, Value>> all_one_bit_tables()
{
    std::vector<Value> states;
    for (const char* a : {"0", "1"}) {
        for (const char* b : {"0", "1"}) {
            states.push_back(Value(Value::Tuple{bits(a), bits(b)}));
        }
    }
    std::vector<std::map<Value, Value>> out;
    for (std::size_t code = 0; code < 256; ++code) {
        std::map<Value, Value> t;
        for (std::size_t i = 0; i < 4; ++i) {
            t.emplace(states[i], states[(code >> (2 * i)) & 3]);
        }
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace ar::testing
