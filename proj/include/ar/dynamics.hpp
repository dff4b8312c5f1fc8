#pragma once

#include "ar/spaces.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ar {

struct TrialSeed {
    std::uint64_t value = 0;
    friend bool operator==(TrialSeed, TrialSeed) = default;
};

/// Seed for trial k of a batch. A pure function of (base, k), so any single
/// trial can be replayed without running the ones before it.
TrialSeed derive_seed(TrialSeed base, std::uint64_t k);

enum class Builtin { Identity, BitNot, And, Xor, RippleAdd, SwapPair };

std::string_view to_string(Builtin b);
std::optional<Builtin> builtin_from_string(std::string_view name);

/// Abstract evolution C : M -> M.
///
/// Builtins and the spaces they accept:
///   identity              any space
///   bit-not               bitstring(w), complements every bit
///   and, xor              (bits w, bits w) -> (a op b, b)
///   ripple-add(w)         (bits w, bits w, bits w+1) -> (a, b, a + b)
///   swap-pair             (X, X) -> (b, a)
class AbstractDynamics {
public:
    enum class Rule { Lookup, Builtin, Chain };
    using Table = std::map<Value, Value>;

    AbstractDynamics() = default;

    /// The table must be total on the space and map into it.
    static AbstractDynamics lookup(std::string id, AbstractSpace space, Table table);
    static AbstractDynamics builtin(std::string id, AbstractSpace space, Builtin kind);
    /// Components apply left to right and must share one space.
    static AbstractDynamics chain(std::string id, std::vector<AbstractDynamics> steps);

    bool valid() const { return data_ != nullptr; }
    const std::string& id() const { return data_->id; }
    const AbstractSpace& space() const { return data_->space; }
    Rule rule() const { return data_->rule; }
    const Table& table() const { return data_->table; }
    Builtin builtin_kind() const { return data_->builtin; }
    const std::vector<AbstractDynamics>& steps() const { return data_->steps; }

    /// Raw application; callers are responsible for membership.
    Value apply(const Value& v) const;

    friend bool operator==(const AbstractDynamics& a, const AbstractDynamics& b);

private:
    struct Data {
        std::string id;
        AbstractSpace space;
        Rule rule = Rule::Builtin;
        Table table;
        Builtin builtin = Builtin::Identity;
        std::vector<AbstractDynamics> steps;
    };
    explicit AbstractDynamics(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
    std::shared_ptr<const Data> data_;
};

/// Combinational update for real-vector devices. Wires are evaluated in order;
/// each wire reads physical lines (Sense) or earlier wires. Drives then set a
/// line to its upper bound when the wire is true and its lower bound otherwise.
/// Lines that are not driven keep their value.
struct Gate {
    enum class Op { Sense, Not, And, Or, Xor, Majority, Constant };
    Op op = Op::Constant;
    std::vector<std::size_t> inputs;  // earlier wire indices
    std::size_t line = 0;             // Sense only
    double threshold = 0.0;           // Sense only
    bool constant = false;            // Constant only

    friend bool operator==(const Gate&, const Gate&) = default;
};

std::string_view to_string(Gate::Op op);
std::optional<Gate::Op> gate_op_from_string(std::string_view name);

struct Drive {
    std::size_t line = 0;
    std::size_t wire = 0;
    friend bool operator==(const Drive&, const Drive&) = default;
};

struct Netlist {
    std::vector<Gate> wires;
    std::vector<Drive> drives;
    friend bool operator==(const Netlist&, const Netlist&) = default;
};

/// Independent per-coordinate flips. Coordinates are the leaves of the
/// physical space in row-major order (one per real-vector line, one per label).
/// A real coordinate flips across its threshold to the opposite bound; a label
/// flips to its declared partner.
struct Noise {
    std::vector<double> flip_probability;
    std::vector<double> thresholds;  // real coordinates; empty means bound midpoints
    std::map<std::string, std::string> partners;

    bool active() const;
    friend bool operator==(const Noise&, const Noise&) = default;
};

/// Physical evolution H : P -> P.
class PhysicalDynamics {
public:
    enum class Rule { Lookup, CoordinateUpdate, Chain };
    using Table = std::map<Value, Value>;

    PhysicalDynamics() = default;

    static PhysicalDynamics lookup(std::string id, PhysicalSpace space, Table table,
                                   Noise noise = {});
    static PhysicalDynamics coordinate_update(std::string id, PhysicalSpace space, Netlist netlist,
                                              Noise noise = {});
    static PhysicalDynamics chain(std::string id, std::vector<PhysicalDynamics> steps,
                                  Noise noise = {});

    /// Identity preparation, used as the default engineering dynamics.
    static PhysicalDynamics identity(std::string id, PhysicalSpace space);

    bool valid() const { return data_ != nullptr; }
    const std::string& id() const { return data_->id; }
    const PhysicalSpace& space() const { return data_->space; }
    Rule rule() const { return data_->rule; }
    const Table& table() const { return data_->table; }
    const Netlist& netlist() const { return data_->netlist; }
    const std::vector<PhysicalDynamics>& steps() const { return data_->steps; }
    const Noise& noise() const { return data_->noise; }
    bool stochastic() const;

    /// Same dynamics with a different noise declaration.
    PhysicalDynamics with_noise(std::string id, Noise noise) const;

    Value apply(const Value& v, TrialSeed seed) const;

    friend bool operator==(const PhysicalDynamics& a, const PhysicalDynamics& b);

private:
    struct Data {
        std::string id;
        PhysicalSpace space;
        Rule rule = Rule::Lookup;
        Table table;
        Netlist netlist;
        std::vector<PhysicalDynamics> steps;
        Noise noise;
    };
    explicit PhysicalDynamics(std::shared_ptr<const Data> d) : data_(std::move(d)) {}
    static PhysicalDynamics make(Data d);
    std::shared_ptr<const Data> data_;
};

AbstractState evolve_abstract(const AbstractDynamics& c, const AbstractState& m);
PhysicalState evolve_physical(const PhysicalDynamics& h, const PhysicalState& p, TrialSeed t);

/// Chain whose action is second after first. SpaceMismatch if the spaces differ.
AbstractDynamics compose_dynamics(const AbstractDynamics& first, const AbstractDynamics& second,
                                  std::string id = {});

/// Number of noise coordinates of a physical space.
std::size_t leaf_count(const PhysicalSpace& space);

}  // namespace ar
