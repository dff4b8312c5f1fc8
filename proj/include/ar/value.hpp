#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ar {

struct Label {
    std::string name;
    auto operator<=>(const Label&) const = default;
};

/// A fixed-width bitstring, most significant bit first ("01" is one).
struct Bits {
    std::string digits;
    auto operator<=>(const Bits&) const = default;
};

using Integer = std::int64_t;
using RealVector = std::vector<double>;

/// Raw payload of a state. Whether a payload belongs to a space is decided by
/// the space, never by the payload itself.
struct Value {
    using Tuple = std::vector<Value>;
    std::variant<Label, Bits, Integer, RealVector, Tuple> data;

    Value() : data(Tuple{}) {}
    Value(Label l) : data(std::move(l)) {}
    Value(Bits b) : data(std::move(b)) {}
    Value(Integer i) : data(i) {}
    Value(RealVector v) : data(std::move(v)) {}
    Value(Tuple t) : data(std::move(t)) {}

    bool is_label() const { return std::holds_alternative<Label>(data); }
    bool is_bits() const { return std::holds_alternative<Bits>(data); }
    bool is_integer() const { return std::holds_alternative<Integer>(data); }
    bool is_real_vector() const { return std::holds_alternative<RealVector>(data); }
    bool is_tuple() const { return std::holds_alternative<Tuple>(data); }

    const Label& label() const { return std::get<Label>(data); }
    const Bits& bits() const { return std::get<Bits>(data); }
    Integer integer() const { return std::get<Integer>(data); }
    const RealVector& reals() const { return std::get<RealVector>(data); }
    const Tuple& tuple() const { return std::get<Tuple>(data); }

    friend bool operator==(const Value& a, const Value& b);
    friend bool operator<(const Value& a, const Value& b);
};

inline Value label(std::string name) { return Value(Label{std::move(name)}); }
inline Value bits(std::string digits) { return Value(Bits{std::move(digits)}); }
inline Value integer(Integer i) { return Value(i); }
inline Value reals(RealVector v) { return Value(std::move(v)); }
inline Value tuple(Value::Tuple items) { return Value(std::move(items)); }

/// Literal syntax shared by the CLI and diagnostics: bitstrings quoted ("01"),
/// tuples parenthesized, labels bare, integers in decimal, real vectors in brackets.
std::string format_literal(const Value& v);
Value parse_literal(std::string_view text);

bool is_identifier(std::string_view s);

/// Unsigned value of a bitstring, MSB first.
std::uint64_t bits_to_uint(const Bits& b);
Bits uint_to_bits(std::uint64_t value, std::size_t width);

}  // namespace ar
