#pragma once

#include "ar/error.hpp"
#include "ar/value.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ar {

enum class Domain { Abstract, Physical };

enum class SpaceKind { Labeled, Bitstring, BoundedInteger, RealVector, Tuple };

std::string_view to_string(SpaceKind kind);

struct SpaceData;

namespace kinds {
struct Labeled {
    std::vector<std::string> labels;
};
struct Bitstring {
    std::size_t width = 1;
};
struct BoundedInteger {
    Integer lo = 0;
    Integer hi = 0;
};
/// Dimension is lo.size(); every coordinate is bounded.
struct RealVector {
    std::vector<double> lo;
    std::vector<double> hi;
};
struct Tuple {
    std::vector<std::shared_ptr<const SpaceData>> components;
};
}  // namespace kinds

struct SpaceData {
    std::string id;
    Domain domain = Domain::Abstract;
    std::variant<kinds::Labeled, kinds::Bitstring, kinds::BoundedInteger, kinds::RealVector,
                 kinds::Tuple>
        kind;
};

bool structurally_equal(const SpaceData& a, const SpaceData& b);

/// Shared, immutable handle to a declared space. Copies are cheap; equality is
/// structural (id and shape).
template <Domain D>
class Space {
public:
    Space() = default;

    static Space labeled(std::string id, std::vector<std::string> labels);
    static Space bitstring(std::string id, std::size_t width)
        requires(D == Domain::Abstract);
    static Space bounded_integer(std::string id, Integer lo, Integer hi)
        requires(D == Domain::Abstract);
    static Space real_vector(std::string id, std::vector<double> lo, std::vector<double> hi)
        requires(D == Domain::Physical);
    static Space tuple(std::string id, std::vector<Space> components);

    static Space from_data(std::shared_ptr<const SpaceData> data);

    bool valid() const { return data_ != nullptr; }
    const std::string& id() const { return data_->id; }
    SpaceKind kind() const { return static_cast<SpaceKind>(data_->kind.index()); }
    const SpaceData& data() const { return *data_; }
    const std::shared_ptr<const SpaceData>& shared() const { return data_; }

    const std::vector<std::string>& labels() const
    {
        return std::get<kinds::Labeled>(data_->kind).labels;
    }
    std::size_t width() const { return std::get<kinds::Bitstring>(data_->kind).width; }
    Integer lo() const { return std::get<kinds::BoundedInteger>(data_->kind).lo; }
    Integer hi() const { return std::get<kinds::BoundedInteger>(data_->kind).hi; }
    const std::vector<double>& lower_bounds() const
    {
        return std::get<kinds::RealVector>(data_->kind).lo;
    }
    const std::vector<double>& upper_bounds() const
    {
        return std::get<kinds::RealVector>(data_->kind).hi;
    }
    std::size_t dimension() const { return lower_bounds().size(); }
    std::size_t arity() const { return std::get<kinds::Tuple>(data_->kind).components.size(); }
    Space component(std::size_t i) const
    {
        return from_data(std::get<kinds::Tuple>(data_->kind).components.at(i));
    }
    std::vector<Space> components() const;

    /// Number of states, or nullopt for continuous spaces. Saturates at UINT64_MAX.
    std::optional<std::uint64_t> cardinality() const;
    bool finite() const { return cardinality().has_value(); }

    bool has_member(const Value& v) const;

    friend bool operator==(const Space& a, const Space& b)
    {
        if (a.data_ == b.data_) {
            return true;
        }
        if (!a.data_ || !b.data_) {
            return false;
        }
        return structurally_equal(*a.data_, *b.data_);
    }

private:
    explicit Space(std::shared_ptr<const SpaceData> data) : data_(std::move(data)) {}
    std::shared_ptr<const SpaceData> data_;
};

using AbstractSpace = Space<Domain::Abstract>;
using PhysicalSpace = Space<Domain::Physical>;

template <Domain D>
struct State {
    Space<D> space;
    Value value;

    State component(std::size_t i) const { return State{space.component(i), value.tuple().at(i)}; }

    friend bool operator==(const State& a, const State& b)
    {
        return a.value == b.value && a.space == b.space;
    }
};

using AbstractState = State<Domain::Abstract>;
using PhysicalState = State<Domain::Physical>;

/// Builds a state after checking membership; OutOfDomain otherwise.
template <Domain D>
State<D> make_state(const Space<D>& space, Value value);

/// Tuple state from component states; the tuple space is supplied by the caller.
template <Domain D>
State<D> make_tuple_state(const Space<D>& space, const std::vector<State<D>>& parts);

template <Domain D>
bool contains(const Space<D>& space, const State<D>& state);

enum class Metric { Discrete, Hamming, AbsoluteDifference, MaxCoordinate };

std::string_view to_string(Metric metric);
Metric metric_from_string(std::string_view name);

/// True when the metric is defined for states of this space.
template <Domain D>
bool metric_applies(Metric metric, const Space<D>& space);

/// MetricMismatch when the states live in different spaces or the metric does
/// not apply to the space kind. Max-coordinate recurses into tuples using each
/// component's natural metric (hamming for bitstrings, absolute difference for
/// integers and reals, discrete for labels).
template <Domain D>
double distance(Metric metric, const State<D>& a, const State<D>& b);

/// Canonical order: labels in declaration order, bitstrings lexicographic,
/// integers ascending, tuples row-major. NotEnumerable for continuous spaces,
/// TooLarge above kEnumerationLimit states.
template <Domain D>
std::vector<State<D>> enumerate(const Space<D>& space);

inline constexpr std::uint64_t kEnumerationLimit = std::uint64_t{1} << 22;

template <Domain D>
std::string format_state(const State<D>& s)
{
    return format_literal(s.value);
}

}  // namespace ar
