#pragma once

#include "ar/scenario.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace ar {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kScenarioFormatVersion = "1.0";

/// JSON encoding of a state, driven by its space: labels and bitstrings as
/// strings, integers as numbers, real vectors and tuples as arrays.
template <Domain D>
Json value_to_json(const Space<D>& space, const Value& v);

/// SyntaxError when the JSON does not fit the space's shape; OutOfDomain when
/// it fits the shape but is not a member.
template <Domain D>
Value value_from_json(const Space<D>& space, const Json& j);

/// Scenario document with every section present, in a stable field order.
Json scenario_to_json(const ScenarioBundle& bundle);
std::string emit_scenario(const ScenarioBundle& bundle);

/// Fully resolved bundle. Failures are ParseError carrying line, column and the
/// offending identifier: SyntaxError, UnknownReference, DuplicateIdentifier,
/// VersionUnsupported, or the construction error of the declared object.
ScenarioBundle parse_scenario(std::string_view text);

}  // namespace ar
