#include "ar/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace ar {

std::string_view to_string(SpaceKind kind)
{
    switch (kind) {
    case SpaceKind::Labeled: return "labeled";
    case SpaceKind::Bitstring: return "bitstring";
    case SpaceKind::BoundedInteger: return "bounded-integer";
    case SpaceKind::RealVector: return "real-vector";
    case SpaceKind::Tuple: return "tuple";
    }
    return "?";
}

std::string_view to_string(Metric metric)
{
    switch (metric) {
    case Metric::Discrete: return "discrete";
    case Metric::Hamming: return "hamming";
    case Metric::AbsoluteDifference: return "absolute-difference";
    case Metric::MaxCoordinate: return "max-coordinate";
    }
    return "?";
}

Metric metric_from_string(std::string_view name)
{
    for (Metric m : {Metric::Discrete, Metric::Hamming, Metric::AbsoluteDifference,
                     Metric::MaxCoordinate}) {
        if (to_string(m) == name) {
            return m;
        }
    }
    fail(ErrorCode::InvalidDeclaration, "unknown metric '" + std::string(name) + "'");
}

bool structurally_equal(const SpaceData& a, const SpaceData& b)
{
    if (a.id != b.id || a.domain != b.domain || a.kind.index() != b.kind.index()) {
        return false;
    }
    return std::visit(
        [&](const auto& ka) -> bool {
            using K = std::decay_t<decltype(ka)>;
            const auto& kb = std::get<K>(b.kind);
            if constexpr (std::is_same_v<K, kinds::Labeled>) {
                return ka.labels == kb.labels;
            } else if constexpr (std::is_same_v<K, kinds::Bitstring>) {
                return ka.width == kb.width;
            } else if constexpr (std::is_same_v<K, kinds::BoundedInteger>) {
                return ka.lo == kb.lo && ka.hi == kb.hi;
            } else if constexpr (std::is_same_v<K, kinds::RealVector>) {
                return ka.lo == kb.lo && ka.hi == kb.hi;
            } else {
                if (ka.components.size() != kb.components.size()) {
                    return false;
                }
                for (std::size_t i = 0; i < ka.components.size(); ++i) {
                    if (ka.components[i] != kb.components[i] &&
                        !structurally_equal(*ka.components[i], *kb.components[i])) {
                        return false;
                    }
                }
                return true;
            }
        },
        a.kind);
}

namespace {

void check_id(const std::string& id)
{
    if (!is_identifier(id)) {
        fail(ErrorCode::InvalidDeclaration, "'" + id + "' is not a valid identifier");
    }
}

bool member(const SpaceData& s, const Value& v)
{
    return std::visit(
        [&](const auto& k) -> bool {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, kinds::Labeled>) {
                return v.is_label() && std::find(k.labels.begin(), k.labels.end(),
                                                 v.label().name) != k.labels.end();
            } else if constexpr (std::is_same_v<K, kinds::Bitstring>) {
                return v.is_bits() && v.bits().digits.size() == k.width &&
                       v.bits().digits.find_first_not_of("01") == std::string::npos;
            } else if constexpr (std::is_same_v<K, kinds::BoundedInteger>) {
                return v.is_integer() && v.integer() >= k.lo && v.integer() <= k.hi;
            } else if constexpr (std::is_same_v<K, kinds::RealVector>) {
                if (!v.is_real_vector() || v.reals().size() != k.lo.size()) {
                    return false;
                }
                for (std::size_t i = 0; i < k.lo.size(); ++i) {
                    const double x = v.reals()[i];
                    if (!std::isfinite(x) || x < k.lo[i] || x > k.hi[i]) {
                        return false;
                    }
                }
                return true;
            } else {
                if (!v.is_tuple() || v.tuple().size() != k.components.size()) {
                    return false;
                }
                for (std::size_t i = 0; i < k.components.size(); ++i) {
                    if (!member(*k.components[i], v.tuple()[i])) {
                        return false;
                    }
                }
                return true;
            }
        },
        s.kind);
}

std::optional<std::uint64_t> count(const SpaceData& s)
{
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    return std::visit(
        [&](const auto& k) -> std::optional<std::uint64_t> {
            using K = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<K, kinds::Labeled>) {
                return k.labels.size();
            } else if constexpr (std::is_same_v<K, kinds::Bitstring>) {
                return k.width >= 64 ? kMax : (std::uint64_t{1} << k.width);
            } else if constexpr (std::is_same_v<K, kinds::BoundedInteger>) {
                const auto span = static_cast<std::uint64_t>(k.hi) - static_cast<std::uint64_t>(k.lo);
                return span == kMax ? kMax : span + 1;
            } else if constexpr (std::is_same_v<K, kinds::RealVector>) {
                return std::nullopt;
            } else {
                std::uint64_t total = 1;
                for (const auto& c : k.components) {
                    auto n = count(*c);
                    if (!n) {
                        return std::nullopt;
                    }
                    if (*n != 0 && total > kMax / *n) {
                        total = kMax;
                    } else {
                        total *= *n;
                    }
                }
                return total;
            }
        },
        s.kind);
}

std::vector<Value> enumerate_values(const SpaceData& s)
{
    return std::visit(
        [&](const auto& k) -> std::vector<Value> {
            using K = std::decay_t<decltype(k)>;
            std::vector<Value> out;
            if constexpr (std::is_same_v<K, kinds::Labeled>) {
                for (const auto& l : k.labels) {
                    out.emplace_back(Label{l});
                }
            } else if constexpr (std::is_same_v<K, kinds::Bitstring>) {
                const std::uint64_t n = std::uint64_t{1} << k.width;
                out.reserve(n);
                for (std::uint64_t i = 0; i < n; ++i) {
                    out.emplace_back(uint_to_bits(i, k.width));
                }
            } else if constexpr (std::is_same_v<K, kinds::BoundedInteger>) {
                for (Integer i = k.lo;; ++i) {
                    out.emplace_back(i);
                    if (i == k.hi) {
                        break;
                    }
                }
            } else if constexpr (std::is_same_v<K, kinds::RealVector>) {
                fail(ErrorCode::NotEnumerable, "real-vector spaces are continuous");
            } else {
                std::vector<std::vector<Value>> parts;
                for (const auto& c : k.components) {
                    parts.push_back(enumerate_values(*c));
                }
                // Row-major: the last component varies fastest.
                std::vector<std::size_t> idx(parts.size(), 0);
                if (std::any_of(parts.begin(), parts.end(), [](auto& p) { return p.empty(); })) {
                    return out;
                }
                for (;;) {
                    Value::Tuple t;
                    t.reserve(parts.size());
                    for (std::size_t i = 0; i < parts.size(); ++i) {
                        t.push_back(parts[i][idx[i]]);
                    }
                    out.emplace_back(std::move(t));
                    std::size_t i = parts.size();
                    while (i > 0) {
                        --i;
                        if (++idx[i] < parts[i].size()) {
                            break;
                        }
                        idx[i] = 0;
                        if (i == 0) {
                            return out;
                        }
                    }
                }
            }
            return out;
        },
        s.kind);
}

bool metric_applies_to(Metric metric, const SpaceData& s)
{
    switch (metric) {
    case Metric::Discrete: return true;
    case Metric::Hamming: return std::holds_alternative<kinds::Bitstring>(s.kind);
    case Metric::AbsoluteDifference: return std::holds_alternative<kinds::BoundedInteger>(s.kind);
    case Metric::MaxCoordinate:
        return std::holds_alternative<kinds::Tuple>(s.kind) ||
               std::holds_alternative<kinds::RealVector>(s.kind);
    }
    return false;
}

double natural_distance(const SpaceData& s, const Value& a, const Value& b);

double max_coordinate(const SpaceData& s, const Value& a, const Value& b)
{
    double d = 0;
    if (const auto* rv = std::get_if<kinds::RealVector>(&s.kind)) {
        for (std::size_t i = 0; i < rv->lo.size(); ++i) {
            d = std::max(d, std::abs(a.reals()[i] - b.reals()[i]));
        }
        return d;
    }
    const auto& comps = std::get<kinds::Tuple>(s.kind).components;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        d = std::max(d, natural_distance(*comps[i], a.tuple()[i], b.tuple()[i]));
    }
    return d;
}

double natural_distance(const SpaceData& s, const Value& a, const Value& b)
{
    switch (s.kind.index()) {
    case 0: return a == b ? 0.0 : 1.0;
    case 1: {
        const auto& x = a.bits().digits;
        const auto& y = b.bits().digits;
        double n = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            n += x[i] != y[i] ? 1.0 : 0.0;
        }
        return n;
    }
    case 2: return std::abs(static_cast<double>(a.integer()) - static_cast<double>(b.integer()));
    default: return max_coordinate(s, a, b);
    }
}

}  // namespace

template <Domain D>
Space<D> Space<D>::labeled(std::string id, std::vector<std::string> labels)
{
    check_id(id);
    if (labels.empty()) {
        fail(ErrorCode::InvalidDeclaration, "labeled space '" + id + "' has no labels");
    }
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (!is_identifier(l)) {
            fail(ErrorCode::InvalidDeclaration, "label '" + l + "' in '" + id + "' is not an identifier");
        }
        if (!seen.insert(l).second) {
            fail(ErrorCode::InvalidDeclaration, "duplicate label '" + l + "' in '" + id + "'");
        }
    }
    return Space(std::make_shared<const SpaceData>(
        SpaceData{std::move(id), D, kinds::Labeled{std::move(labels)}}));
}

template <Domain D>
Space<D> Space<D>::bitstring(std::string id, std::size_t width)
    requires(D == Domain::Abstract)
{
    check_id(id);
    if (width < 1) {
        fail(ErrorCode::InvalidDeclaration, "bitstring space '" + id + "' needs width >= 1");
    }
    return Space(std::make_shared<const SpaceData>(SpaceData{std::move(id), D, kinds::Bitstring{width}}));
}

template <Domain D>
Space<D> Space<D>::bounded_integer(std::string id, Integer lo, Integer hi)
    requires(D == Domain::Abstract)
{
    check_id(id);
    if (lo > hi) {
        fail(ErrorCode::InvalidDeclaration, "bounded-integer space '" + id + "' has lo > hi");
    }
    return Space(
        std::make_shared<const SpaceData>(SpaceData{std::move(id), D, kinds::BoundedInteger{lo, hi}}));
}

template <Domain D>
Space<D> Space<D>::real_vector(std::string id, std::vector<double> lo, std::vector<double> hi)
    requires(D == Domain::Physical)
{
    check_id(id);
    if (lo.empty() || lo.size() != hi.size()) {
        fail(ErrorCode::InvalidDeclaration,
             "real-vector space '" + id + "' needs matching, non-empty bound vectors");
    }
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
            fail(ErrorCode::InvalidDeclaration, "real-vector space '" + id + "' must be bounded");
        }
        if (lo[i] > hi[i]) {
            fail(ErrorCode::InvalidDeclaration,
                 "real-vector space '" + id + "' has lo > hi at coordinate " + std::to_string(i));
        }
    }
    return Space(std::make_shared<const SpaceData>(
        SpaceData{std::move(id), D, kinds::RealVector{std::move(lo), std::move(hi)}}));
}

template <Domain D>
Space<D> Space<D>::tuple(std::string id, std::vector<Space> components)
{
    check_id(id);
    if (components.empty()) {
        fail(ErrorCode::InvalidDeclaration, "tuple space '" + id + "' has no components");
    }
    kinds::Tuple t;
    for (auto& c : components) {
        if (!c.valid()) {
            fail(ErrorCode::InvalidDeclaration, "tuple space '" + id + "' has an empty component");
        }
        t.components.push_back(c.data_);
    }
    return Space(std::make_shared<const SpaceData>(SpaceData{std::move(id), D, std::move(t)}));
}

template <Domain D>
Space<D> Space<D>::from_data(std::shared_ptr<const SpaceData> data)
{
    if (data && data->domain != D) {
        fail(ErrorCode::SpaceMismatch, "space '" + data->id + "' belongs to the other domain");
    }
    return Space(std::move(data));
}

template <Domain D>
std::vector<Space<D>> Space<D>::components() const
{
    std::vector<Space> out;
    for (const auto& c : std::get<kinds::Tuple>(data_->kind).components) {
        out.push_back(from_data(c));
    }
    return out;
}

template <Domain D>
std::optional<std::uint64_t> Space<D>::cardinality() const
{
    return count(*data_);
}

template <Domain D>
bool Space<D>::has_member(const Value& v) const
{
    return member(*data_, v);
}

template <Domain D>
State<D> make_state(const Space<D>& space, Value value)
{
    if (!space.has_member(value)) {
        fail(ErrorCode::OutOfDomain,
             format_literal(value) + " is not a member of space '" + space.id() + "'");
    }
    return State<D>{space, std::move(value)};
}

template <Domain D>
State<D> make_tuple_state(const Space<D>& space, const std::vector<State<D>>& parts)
{
    if (space.kind() != SpaceKind::Tuple || space.arity() != parts.size()) {
        fail(ErrorCode::SpaceMismatch, "space '" + space.id() + "' is not a matching tuple space");
    }
    Value::Tuple items;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (!(parts[i].space == space.component(i))) {
            fail(ErrorCode::SpaceMismatch, "component " + std::to_string(i) + " of '" + space.id() +
                                               "' expects space '" + space.component(i).id() + "'");
        }
        items.push_back(parts[i].value);
    }
    return make_state(space, Value(std::move(items)));
}

template <Domain D>
bool contains(const Space<D>& space, const State<D>& state)
{
    return space.valid() && state.space == space && space.has_member(state.value);
}

template <Domain D>
bool metric_applies(Metric metric, const Space<D>& space)
{
    return metric_applies_to(metric, space.data());
}

template <Domain D>
double distance(Metric metric, const State<D>& a, const State<D>& b)
{
    if (!(a.space == b.space)) {
        fail(ErrorCode::MetricMismatch, "states from different spaces ('" + a.space.id() + "', '" +
                                            b.space.id() + "') cannot be compared");
    }
    if (!metric_applies_to(metric, a.space.data())) {
        fail(ErrorCode::MetricMismatch, std::string(to_string(metric)) + " does not apply to " +
                                            std::string(to_string(a.space.kind())) + " space '" +
                                            a.space.id() + "'");
    }
    if (!a.space.has_member(a.value) || !a.space.has_member(b.value)) {
        fail(ErrorCode::OutOfDomain, "distance between non-members of '" + a.space.id() + "'");
    }
    if (metric == Metric::Discrete) {
        return a.value == b.value ? 0.0 : 1.0;
    }
    if (metric == Metric::MaxCoordinate) {
        return max_coordinate(a.space.data(), a.value, b.value);
    }
    return natural_distance(a.space.data(), a.value, b.value);
}

template <Domain D>
std::vector<State<D>> enumerate(const Space<D>& space)
{
    auto n = space.cardinality();
    if (!n) {
        fail(ErrorCode::NotEnumerable, "space '" + space.id() + "' is continuous");
    }
    if (*n > kEnumerationLimit) {
        fail(ErrorCode::TooLarge, "space '" + space.id() + "' has more than " +
                                      std::to_string(kEnumerationLimit) + " states");
    }
    std::vector<State<D>> out;
    out.reserve(*n);
    for (auto& v : enumerate_values(space.data())) {
        out.push_back(State<D>{space, std::move(v)});
    }
    return out;
}

#define AR_INSTANTIATE_SPACES(D)                                                               \
    template class Space<D>;                                                                   \
    template State<D> make_state(const Space<D>&, Value);                                      \
    template State<D> make_tuple_state(const Space<D>&, const std::vector<State<D>>&);         \
    template bool contains(const Space<D>&, const State<D>&);                                  \
    template bool metric_applies(Metric, const Space<D>&);                                     \
    template double distance(Metric, const State<D>&, const State<D>&);                        \
    template std::vector<State<D>> enumerate(const Space<D>&);

AR_INSTANTIATE_SPACES(Domain::Abstract)
AR_INSTANTIATE_SPACES(Domain::Physical)

#undef AR_INSTANTIATE_SPACES

}  // namespace ar
