#include "ar/scenario_json.hpp"
#include "ar/scenarios.hpp"

#include <doctest.h>

using namespace ar;

namespace {

const char* kMinimal = R"({
  "format_version": "1.0",
  "spaces": [
    {"id": "p", "domain": "physical", "kind": "labeled", "labels": ["a", "b"]},
    {"id": "m", "domain": "abstract", "kind": "bitstring", "width": 1}
  ],
  "relations": [
    {"id": "r", "domain": "p", "codomain": "m", "rule": "lookup", "table": [["a", "0"], ["b", "1"]]}
  ],
  "dynamics": [
    {"id": "flip", "level": "physical", "space": "p", "rule": "lookup", "table": [["a", "b"], ["b", "a"]]},
    {"id": "not", "level": "abstract", "space": "m", "rule": "builtin", "builtin": "bit-not"}
  ],
  "theories": [
    {"id": "t", "representation": "r", "domain": ["a", "b"],
     "predictions": [{"name": "run", "abstract": "not", "physical": "flip"}]}
  ],
  "checks": [
    {"name": "v", "kind": "validate-theory", "theory": "t"},
    {"name": "c", "kind": "commutation", "theory": "t", "prediction": "run", "state": "a"}
  ]
})";

ParseError parse_failure(const std::string& text)
{
    try {
        parse_scenario(text);
    } catch (const ParseError& e) {
        return e;
    }
    FAIL("expected a parse error");
    throw;
}

std::string replace(std::string text, const std::string& from, const std::string& to)
{
    auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("built-ins survive emit and parse")
{
    for (const auto& name : scenarios::builtin_names()) {
        CAPTURE(name);
        auto bundle = scenarios::builtin(name);
        auto text = emit_scenario(bundle);
        auto parsed = parse_scenario(text);
        CHECK(parsed == bundle);
        CHECK(emit_scenario(parsed) == text);
    }
}

TEST_CASE("defaults are injected at parse time")
{
    auto b = parse_scenario(kMinimal);
    const auto& c = b.check("c");
    CHECK(c.epsilon == 0.0);
    CHECK(c.metric == Metric::Discrete);
    CHECK(c.trials == 1);
    CHECK(c.required_success == 1.0);
    CHECK(c.state == label("a"));
    CHECK(b.theory("t").validity() == ValidityStatus::Untested);
}

TEST_CASE("forward references inside the document resolve")
{
    std::string text = kMinimal;
    // Declare the relation's spaces after their use by swapping the order.
    text = replace(text, R"({"id": "p", "domain": "physical", "kind": "labeled", "labels": ["a", "b"]},
    {"id": "m", "domain": "abstract", "kind": "bitstring", "width": 1})",
                   R"({"id": "m", "domain": "abstract", "kind": "bitstring", "width": 1},
    {"id": "p", "domain": "physical", "kind": "labeled", "labels": ["a", "b"]})");
    CHECK_NOTHROW(parse_scenario(text));
}

TEST_CASE("diagnostics carry a location and the identifier")
{
    auto unknown = parse_failure(replace(kMinimal, R"("physical": "flip")", R"("physical": "flop")"));
    CHECK(unknown.code() == ErrorCode::UnknownReference);
    CHECK(unknown.identifier() == "flop");
    CHECK(unknown.line() == 16);

    auto dup = parse_failure(replace(kMinimal, R"({"id": "m", "domain": "abstract")", R"({"id": "p", "domain": "abstract")"));
    CHECK(dup.code() == ErrorCode::DuplicateIdentifier);
    CHECK(dup.identifier() == "p");
    CHECK(dup.line() == 5);

    auto version = parse_failure(replace(kMinimal, R"("1.0")", R"("9.1")"));
    CHECK(version.code() == ErrorCode::VersionUnsupported);
    CHECK(version.line() == 2);

    auto syntax = parse_failure(replace(kMinimal, R"("width": 1})", R"("width": 1,})"));
    CHECK(syntax.code() == ErrorCode::SyntaxError);
    CHECK(syntax.line() == 5);

    auto bad_state = parse_failure(replace(kMinimal, R"("state": "a")", R"("state": "z")"));
    CHECK(bad_state.code() == ErrorCode::OutOfDomain);
    CHECK(bad_state.identifier() == "c");

    auto missing_theory = parse_failure(replace(kMinimal, R"("theory": "t"})", R"("theory": "ghost"})"));
    CHECK(missing_theory.code() == ErrorCode::UnknownReference);
    CHECK(missing_theory.identifier() == "ghost");

    auto cycle = parse_failure(replace(kMinimal, R"({"id": "m", "domain": "abstract", "kind": "bitstring", "width": 1})",
                                       R"({"id": "m", "domain": "abstract", "kind": "tuple", "components": ["m"]})"));
    CHECK(cycle.code() == ErrorCode::InvalidDeclaration);

    CHECK(parse_failure("[1, 2]").code() == ErrorCode::SyntaxError);
    CHECK(parse_failure(R"({"spaces": []})").code() == ErrorCode::SyntaxError);
}

TEST_CASE("values encode by space")
{
    auto t = AbstractSpace::tuple("t", {AbstractSpace::bitstring("b", 2), AbstractSpace::bounded_integer("n", 0, 9),
                                        AbstractSpace::labeled("l", {"x", "y"})});
    Value v(Value::Tuple{bits("01"), integer(7), label("y")});
    auto j = value_to_json(t, v);
    CHECK(j.dump() == R"(["01",7,"y"])");
    CHECK(value_from_json(t, j) == v);
    CHECK_THROWS_AS(value_from_json(t, Json::parse(R"(["01","7","y"])")), Error);
    auto r = PhysicalSpace::real_vector("r", {0, 0}, {5, 5});
    CHECK(value_from_json(r, Json::parse("[0, 2.5]")) == reals({0.0, 2.5}));
    CHECK(value_to_json(r, reals({0.1, 5.0})).dump() == "[0.1,5.0]");
}
