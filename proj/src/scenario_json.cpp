#include "ar/scenario_json.hpp"

#include <algorithm>
#include <functional>
#include <regex>
#include <set>

namespace ar {

namespace {

constexpr std::array<std::string_view, 8> kSections{"spaces",   "relations", "dynamics",     "theories",
                                                    "embeddings", "stacks",  "compositions", "checks"};

std::string_view to_string(RepresentationRelation::Rule r)
{
    switch (r) {
    case RepresentationRelation::Rule::Lookup: return "lookup";
    case RepresentationRelation::Rule::Threshold: return "threshold";
    case RepresentationRelation::Rule::TupleWise: return "tuple-wise";
    }
    return "?";
}

std::string_view to_string(AbstractDynamics::Rule r)
{
    switch (r) {
    case AbstractDynamics::Rule::Lookup: return "lookup";
    case AbstractDynamics::Rule::Builtin: return "builtin";
    case AbstractDynamics::Rule::Chain: return "chain";
    }
    return "?";
}

std::string_view to_string(PhysicalDynamics::Rule r)
{
    switch (r) {
    case PhysicalDynamics::Rule::Lookup: return "lookup";
    case PhysicalDynamics::Rule::CoordinateUpdate: return "coordinate-update";
    case PhysicalDynamics::Rule::Chain: return "chain";
    }
    return "?";
}

[[noreturn]] void syntax(const std::string& msg) { fail(ErrorCode::SyntaxError, msg); }

template <Domain D>
Json table_to_json(const Space<D>& from, const auto& to, const std::map<Value, Value>& table)
{
    Json out = Json::array();
    for (const auto& [k, v] : table) {
        out.push_back(Json::array({value_to_json(from, k), value_to_json(to, v)}));
    }
    return out;
}

template <Domain D, Domain E>
std::map<Value, Value> table_from_json(const Space<D>& from, const Space<E>& to, const Json& j)
{
    if (!j.is_array()) {
        syntax("a table must be an array of [key, value] pairs");
    }
    std::map<Value, Value> table;
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != 2) {
            syntax("a table row must be a [key, value] pair");
        }
        auto key = value_from_json(from, row[0]);
        if (!table.emplace(key, value_from_json(to, row[1])).second) {
            fail(ErrorCode::InvalidDeclaration, "table key " + format_literal(key) + " appears twice");
        }
    }
    return table;
}

Json noise_to_json(const Noise& n)
{
    Json partners = Json::object();
    for (const auto& [a, b] : n.partners) {
        partners[a] = b;
    }
    return Json{{"flip_probability", n.flip_probability}, {"thresholds", n.thresholds}, {"partners", partners}};
}

Json gate_to_json(const Gate& g)
{
    Json j{{"op", to_string(g.op)}};
    switch (g.op) {
    case Gate::Op::Sense:
        j["line"] = g.line;
        j["threshold"] = g.threshold;
        break;
    case Gate::Op::Constant: j["value"] = g.constant; break;
    default: j["inputs"] = g.inputs; break;
    }
    return j;
}

Json space_to_json(const AnySpace& any)
{
    return std::visit(
        [](const auto& s) {
            Json j{{"id", s.id()},
                   {"domain", s.data().domain == Domain::Abstract ? "abstract" : "physical"},
                   {"kind", to_string(s.kind())}};
            switch (s.kind()) {
            case SpaceKind::Labeled: j["labels"] = s.labels(); break;
            case SpaceKind::Bitstring: j["width"] = s.width(); break;
            case SpaceKind::BoundedInteger:
                j["lo"] = s.lo();
                j["hi"] = s.hi();
                break;
            case SpaceKind::RealVector:
                j["lo"] = s.lower_bounds();
                j["hi"] = s.upper_bounds();
                break;
            case SpaceKind::Tuple: {
                Json ids = Json::array();
                for (const auto& c : s.components()) {
                    ids.push_back(c.id());
                }
                j["components"] = ids;
                break;
            }
            }
            return j;
        },
        any);
}

Json relation_to_json(const RepresentationRelation& r)
{
    Json j{{"id", r.id()}, {"domain", r.domain().id()}, {"codomain", r.codomain().id()}, {"rule", to_string(r.rule())}};
    switch (r.rule()) {
    case RepresentationRelation::Rule::Lookup: j["table"] = table_to_json(r.domain(), r.codomain(), r.table()); break;
    case RepresentationRelation::Rule::Threshold: j["thresholds"] = r.thresholds(); break;
    case RepresentationRelation::Rule::TupleWise: {
        Json ids = Json::array();
        for (const auto& c : r.components()) {
            ids.push_back(c.id());
        }
        j["components"] = ids;
        break;
    }
    }
    return j;
}

Json dynamics_to_json(const AnyDynamics& any)
{
    if (const auto* a = std::get_if<AbstractDynamics>(&any)) {
        Json j{{"id", a->id()}, {"level", "abstract"}, {"space", a->space().id()}, {"rule", to_string(a->rule())}};
        switch (a->rule()) {
        case AbstractDynamics::Rule::Lookup: j["table"] = table_to_json(a->space(), a->space(), a->table()); break;
        case AbstractDynamics::Rule::Builtin: j["builtin"] = to_string(a->builtin_kind()); break;
        case AbstractDynamics::Rule::Chain: {
            Json ids = Json::array();
            for (const auto& s : a->steps()) {
                ids.push_back(s.id());
            }
            j["steps"] = ids;
            break;
        }
        }
        return j;
    }
    const auto& p = std::get<PhysicalDynamics>(any);
    Json j{{"id", p.id()}, {"level", "physical"}, {"space", p.space().id()}, {"rule", to_string(p.rule())}};
    switch (p.rule()) {
    case PhysicalDynamics::Rule::Lookup: j["table"] = table_to_json(p.space(), p.space(), p.table()); break;
    case PhysicalDynamics::Rule::CoordinateUpdate: {
        Json wires = Json::array();
        for (const auto& g : p.netlist().wires) {
            wires.push_back(gate_to_json(g));
        }
        Json drives = Json::array();
        for (const auto& d : p.netlist().drives) {
            drives.push_back(Json{{"line", d.line}, {"wire", d.wire}});
        }
        j["netlist"] = Json{{"wires", wires}, {"drives", drives}};
        break;
    }
    case PhysicalDynamics::Rule::Chain: {
        Json ids = Json::array();
        for (const auto& s : p.steps()) {
            ids.push_back(s.id());
        }
        j["steps"] = ids;
        break;
    }
    }
    if (!(p.noise() == Noise{})) {
        j["noise"] = noise_to_json(p.noise());
    }
    return j;
}

Json theory_to_json(const Theory& t)
{
    Json domain = Json::array();
    for (const auto& p : t.domain()) {
        domain.push_back(value_to_json(t.physical_space(), p.value));
    }
    Json predictions = Json::array();
    for (const auto& p : t.predictions()) {
        predictions.push_back(Json{{"name", p.name}, {"abstract", p.abstract.id()}, {"physical", p.physical.id()}});
    }
    Json j{{"id", t.id()}, {"representation", t.representation().id()}, {"domain", domain}, {"predictions", predictions}};
    if (t.instantiation()) {
        Json seeds = Json::array();
        for (const auto& s : t.instantiation()->seeds) {
            seeds.push_back(value_to_json(t.physical_space(), s.value));
        }
        j["instantiation"] = Json{{"engineering", t.instantiation()->engineering.id()}, {"seeds", seeds}};
    }
    return j;
}

Json stack_to_json(const RefinementStack& s)
{
    Json layers = Json::array();
    for (const auto& l : s.layers()) {
        layers.push_back(Json{{"id", l.id}, {"dynamics", l.dynamics.id()}});
    }
    Json sims = Json::array();
    for (const auto& r : s.simulations()) {
        sims.push_back(Json{{"id", r.id}, {"table", table_to_json(r.upper.space, r.lower.space, r.table)}});
    }
    return Json{{"id", s.id()},
                {"layers", layers},
                {"simulations", sims},
                {"bottom", Json{{"theory", s.bottom().theory.id()}, {"program", s.bottom().program}}}};
}

Json composition_to_json(const CompositionDecl& c)
{
    Json j{{"id", c.id},
           {"mode", to_string(c.mode)},
           {"left", Json{{"theory", c.left.theory.id()}, {"prediction", c.left.prediction}}},
           {"right", Json{{"theory", c.right.theory.id()}, {"prediction", c.right.prediction}}}};
    if (c.mode == CompositionDecl::Mode::Declared) {
        j["representation"] = c.joint_representation.id();
        j["dynamics"] = c.joint_dynamics.id();
    }
    return j;
}

// Space a check's state literal lives in; nullopt when the kind takes no state.
std::optional<AnySpace> check_state_space(const ScenarioBundle& b, const CheckDecl& c)
{
    switch (c.kind) {
    case CheckKind::Commutation:
    case CheckKind::Experiment: return AnySpace(b.theory(c.theory).physical_space());
    case CheckKind::History:
    case CheckKind::Instantiate: return AnySpace(b.theory(c.theory).abstract_space());
    case CheckKind::Compute:
        if (!c.embedding.empty()) {
            return AnySpace(b.embedding(c.embedding).problem_space());
        }
        return AnySpace(b.theory(c.theory).abstract_space());
    case CheckKind::Stack: return AnySpace(b.stack(c.stack).top_layer().space);
    default: return std::nullopt;
    }
}

std::optional<AnySpace> check_expect_space(const ScenarioBundle& b, const CheckDecl& c)
{
    switch (c.kind) {
    case CheckKind::Compute: return AnySpace(b.theory(c.theory).abstract_space());
    case CheckKind::Stack: return AnySpace(b.stack(c.stack).top_layer().space);
    default: return std::nullopt;
    }
}

Json any_value_to_json(const AnySpace& s, const Value& v)
{
    return std::visit([&](const auto& space) { return value_to_json(space, v); }, s);
}

Value any_value_from_json(const AnySpace& s, const Json& j)
{
    return std::visit([&](const auto& space) { return value_from_json(space, j); }, s);
}

Json check_to_json(const ScenarioBundle& b, const CheckDecl& c)
{
    Json j{{"name", c.name}, {"kind", to_string(c.kind)}};
    for (const auto& [key, field] : {std::pair{"theory", &c.theory},
                                     {"prediction", &c.prediction},
                                     {"stack", &c.stack},
                                     {"simulation", &c.simulation},
                                     {"composition", &c.composition},
                                     {"embedding", &c.embedding}}) {
        if (!field->empty()) {
            j[key] = *field;
        }
    }
    if (c.state) {
        auto s = check_state_space(b, c);
        if (!s) {
            fail(ErrorCode::InvalidDeclaration, "check '" + c.name + "' of this kind takes no state");
        }
        j["state"] = any_value_to_json(*s, *c.state);
    }
    if (c.expect) {
        auto s = check_expect_space(b, c);
        if (!s) {
            fail(ErrorCode::InvalidDeclaration, "check '" + c.name + "' of this kind takes no expected output");
        }
        j["expect"] = any_value_to_json(*s, *c.expect);
    }
    if (c.expect_class) {
        j["expect_class"] = to_string(*c.expect_class);
    }
    j["epsilon"] = c.epsilon;
    j["metric"] = to_string(c.metric);
    j["physical_metric"] = to_string(c.physical_metric);
    j["trials"] = c.trials;
    j["required_success"] = c.required_success;
    j["oracle"] = c.oracle;
    return j;
}

// ---------------------------------------------------------------------------
// Parsing

struct Location {
    std::size_t line = 1;
    std::size_t column = 1;
};

Location location_at(std::string_view text, std::size_t offset)
{
    offset = std::min(offset, text.size());
    Location loc;
    for (std::size_t i = 0; i < offset; ++i) {
        if (text[i] == '\n') {
            ++loc.line;
            loc.column = 1;
        } else {
            ++loc.column;
        }
    }
    return loc;
}

// Error text without the leading "<code>: " prefix.
std::string bare_message(const Error& e)
{
    std::string msg = e.what();
    auto prefix = std::string(to_string(e.code())) + ": ";
    return msg.starts_with(prefix) ? msg.substr(prefix.size()) : msg;
}

std::string quoted(const std::string& id)
{
    return Json(id).dump();
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    ScenarioBundle run()
    {
        try {
            doc_ = Json::parse(text_.begin(), text_.end());
        } catch (const nlohmann::json::parse_error& e) {
            auto loc = location_at(text_, e.byte == 0 ? 0 : e.byte - 1);
            throw ParseError(ErrorCode::SyntaxError, "malformed JSON: " + std::string(e.what()), loc.line, loc.column);
        }
        if (!doc_.is_object()) {
            throw ParseError(ErrorCode::SyntaxError, "a scenario document must be a JSON object", 1, 1);
        }
        read_header();
        index_sections();

        for (const auto& [id, entry] : ordered_index("spaces")) {
            space(id);
        }
        for (const auto& [id, entry] : ordered_index("relations")) {
            relation(id);
        }
        for (const auto& [id, entry] : ordered_index("dynamics")) {
            dynamics(id);
        }
        for (const auto& [id, entry] : ordered_index("theories")) {
            theory(id);
        }
        for (const auto& [id, entry] : ordered_index("embeddings")) {
            at_entry("embeddings", id, [&] { bundle_.add_embedding(make_embedding(*entry)); });
        }
        for (const auto& [id, entry] : ordered_index("stacks")) {
            at_entry("stacks", id, [&] { bundle_.add_stack(make_stack(*entry)); });
        }
        for (const auto& [id, entry] : ordered_index("compositions")) {
            at_entry("compositions", id, [&] { bundle_.add_composition(make_composition(*entry)); });
        }
        for (const auto& [id, entry] : ordered_index("checks")) {
            at_entry("checks", id, [&] { bundle_.add_check(make_check(*entry)); });
        }
        return std::move(bundle_);
    }

private:
    std::string_view text_;
    Json doc_;
    ScenarioBundle bundle_;
    std::map<std::string, std::vector<std::pair<std::string, const Json*>>> order_;
    std::map<std::string, std::map<std::string, const Json*>> index_;
    std::map<std::string, AnySpace> spaces_;
    std::map<std::string, RepresentationRelation> relations_;
    std::map<std::string, AnyDynamics> dynamics_;
    std::map<std::string, Theory> theories_;
    std::set<std::pair<std::string, std::string>> resolving_;

    [[noreturn]] void error_at(ErrorCode code, const std::string& msg, std::size_t offset, const std::string& id)
    {
        auto loc = location_at(text_, offset);
        throw ParseError(code, msg, loc.line, loc.column, id);
    }

    // Offset of the n-th declaration `"<key>": "<id>"` (0-based n).
    std::size_t declaration_offset(const std::string& key, const std::string& id, std::size_t n = 0) const
    {
        std::regex pattern("\"" + key + "\"\\s*:\\s*" + std::regex_replace(quoted(id), std::regex(R"([.^$|()\[\]{}*+?\\])"), R"(\$&)"));
        std::size_t seen = 0;
        for (auto it = std::cregex_iterator(text_.data(), text_.data() + text_.size(), pattern);
             it != std::cregex_iterator(); ++it) {
            if (seen++ == n) {
                return static_cast<std::size_t>(it->position());
            }
        }
        return reference_offset(id);
    }

    std::size_t reference_offset(const std::string& id) const
    {
        auto pos = text_.find(quoted(id));
        return pos == std::string_view::npos ? 0 : pos;
    }

    static std::string key_of(const std::string& section) { return section == "checks" ? "name" : "id"; }

    void read_header()
    {
        static const std::set<std::string> allowed{"format_version", "name", "description", "spaces",
                                                   "relations", "dynamics", "theories", "embeddings",
                                                   "stacks", "compositions", "checks"};
        for (const auto& [key, value] : doc_.items()) {
            if (!allowed.contains(key)) {
                error_at(ErrorCode::SyntaxError, "unknown top-level field '" + key + "'", reference_offset(key), key);
            }
        }
        auto version = doc_.find("format_version");
        if (version == doc_.end() || !version->is_string()) {
            throw ParseError(ErrorCode::SyntaxError, "missing string field 'format_version'", 1, 1);
        }
        if (version->get<std::string>() != kScenarioFormatVersion) {
            auto v = version->get<std::string>();
            error_at(ErrorCode::VersionUnsupported,
                     "format_version '" + v + "' is not supported (expected " + std::string(kScenarioFormatVersion) + ")",
                     reference_offset("format_version"), v);
        }
        bundle_.name = doc_.value("name", std::string{});
        bundle_.description = doc_.value("description", std::string{});
    }

    void index_sections()
    {
        for (auto section : kSections) {
            std::string name(section);
            auto& order = order_[name];
            auto& index = index_[name];
            auto it = doc_.find(name);
            if (it == doc_.end()) {
                continue;
            }
            if (!it->is_array()) {
                error_at(ErrorCode::SyntaxError, "section '" + name + "' must be an array", reference_offset(name), name);
            }
            const std::string key = key_of(name);
            std::map<std::string, std::size_t> seen;
            for (const auto& entry : *it) {
                if (!entry.is_object() || !entry.contains(key) || !entry[key].is_string()) {
                    error_at(ErrorCode::SyntaxError,
                             "every entry of '" + name + "' must be an object with a string '" + key + "'",
                             reference_offset(name), name);
                }
                auto id = entry[key].get<std::string>();
                auto n = seen[id]++;
                if (n > 0) {
                    error_at(ErrorCode::DuplicateIdentifier, "'" + id + "' is declared twice in " + name,
                             declaration_offset(key, id, n), id);
                }
                order.emplace_back(id, &entry);
                index.emplace(id, &entry);
            }
        }
        // Spaces and dynamics share one namespace across domains/levels by construction;
        // nothing further to check here.
    }

    const std::vector<std::pair<std::string, const Json*>>& ordered_index(const std::string& section)
    {
        return order_[section];
    }

    // Runs f, turning library errors into located diagnostics at the entry.
    template <class F>
    std::invoke_result_t<F> at_entry(const std::string& section, const std::string& id, F&& f)
    {
        try {
            return f();
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            error_at(e.code(), std::string(section) + " '" + id + "': " + bare_message(e),
                     declaration_offset(key_of(section), id), id);
        } catch (const nlohmann::json::exception& e) {
            error_at(ErrorCode::SyntaxError, std::string(section) + " '" + id + "': " + e.what(),
                     declaration_offset(key_of(section), id), id);
        }
    }

    const Json& lookup(const std::string& section, const std::string& id, const char* what)
    {
        auto& index = index_[section];
        auto it = index.find(id);
        if (it == index.end()) {
            error_at(ErrorCode::UnknownReference, std::string("unknown ") + what + " '" + id + "'", reference_offset(id),
                     id);
        }
        if (!resolving_.emplace(section, id).second) {
            error_at(ErrorCode::InvalidDeclaration, std::string(what) + " '" + id + "' refers to itself",
                     declaration_offset(key_of(section), id), id);
        }
        return *it->second;
    }

    void done(const std::string& section, const std::string& id) { resolving_.erase({section, id}); }

    static std::string str(const Json& j, const char* key) { return j.at(key).get<std::string>(); }

    // -- spaces

    const AnySpace& space(const std::string& id)
    {
        if (auto it = spaces_.find(id); it != spaces_.end()) {
            return it->second;
        }
        const Json& j = lookup("spaces", id, "space");
        auto s = at_entry("spaces", id, [&]() -> AnySpace {
            auto domain = str(j, "domain");
            if (domain == "abstract") {
                return make_space<Domain::Abstract>(j, id);
            }
            if (domain == "physical") {
                return make_space<Domain::Physical>(j, id);
            }
            syntax("domain must be 'abstract' or 'physical'");
        });
        done("spaces", id);
        bundle_.add_space(s);
        return spaces_.emplace(id, s).first->second;
    }

    template <Domain D>
    Space<D> typed_space(const std::string& id)
    {
        const auto& s = space(id);
        if (const auto* t = std::get_if<Space<D>>(&s)) {
            return *t;
        }
        fail(ErrorCode::SpaceMismatch, "space '" + id + "' is " +
                                           (D == Domain::Abstract ? "physical, expected abstract"
                                                                  : "abstract, expected physical"));
    }

    template <Domain D>
    Space<D> make_space(const Json& j, const std::string& id)
    {
        auto kind = str(j, "kind");
        if (kind == "labeled") {
            return Space<D>::labeled(id, j.at("labels").get<std::vector<std::string>>());
        }
        if (kind == "tuple") {
            std::vector<Space<D>> parts;
            for (const auto& c : j.at("components")) {
                parts.push_back(typed_space<D>(c.get<std::string>()));
            }
            return Space<D>::tuple(id, std::move(parts));
        }
        if constexpr (D == Domain::Abstract) {
            if (kind == "bitstring") {
                return Space<D>::bitstring(id, j.at("width").get<std::size_t>());
            }
            if (kind == "bounded-integer") {
                return Space<D>::bounded_integer(id, j.at("lo").get<Integer>(), j.at("hi").get<Integer>());
            }
        } else {
            if (kind == "real-vector") {
                return Space<D>::real_vector(id, j.at("lo").get<std::vector<double>>(),
                                             j.at("hi").get<std::vector<double>>());
            }
        }
        syntax("space kind '" + kind + "' is not available in this domain");
    }

    // -- relations

    const RepresentationRelation& relation(const std::string& id)
    {
        if (auto it = relations_.find(id); it != relations_.end()) {
            return it->second;
        }
        const Json& j = lookup("relations", id, "relation");
        auto r = at_entry("relations", id, [&] {
            auto domain = typed_space<Domain::Physical>(str(j, "domain"));
            auto codomain = typed_space<Domain::Abstract>(str(j, "codomain"));
            auto rule = str(j, "rule");
            if (rule == "lookup") {
                return RepresentationRelation::lookup(id, domain, codomain, table_from_json(domain, codomain, j.at("table")));
            }
            if (rule == "threshold") {
                return RepresentationRelation::threshold(id, domain, codomain,
                                                         j.at("thresholds").get<std::vector<double>>());
            }
            if (rule == "tuple-wise") {
                std::vector<RepresentationRelation> parts;
                for (const auto& c : j.at("components")) {
                    parts.push_back(relation(c.get<std::string>()));
                }
                return RepresentationRelation::tuple_wise(id, domain, codomain, std::move(parts));
            }
            syntax("unknown relation rule '" + rule + "'");
        });
        done("relations", id);
        bundle_.add_relation(r);
        return relations_.emplace(id, r).first->second;
    }

    // -- dynamics

    const AnyDynamics& dynamics(const std::string& id)
    {
        if (auto it = dynamics_.find(id); it != dynamics_.end()) {
            return it->second;
        }
        const Json& j = lookup("dynamics", id, "dynamics");
        auto d = at_entry("dynamics", id, [&]() -> AnyDynamics {
            auto level = str(j, "level");
            if (level == "abstract") {
                return make_abstract_dynamics(j, id);
            }
            if (level == "physical") {
                return make_physical_dynamics(j, id);
            }
            syntax("level must be 'abstract' or 'physical'");
        });
        done("dynamics", id);
        bundle_.add_dynamics(d);
        return dynamics_.emplace(id, d).first->second;
    }

    AbstractDynamics abstract_dynamics(const std::string& id)
    {
        const auto& d = dynamics(id);
        if (const auto* a = std::get_if<AbstractDynamics>(&d)) {
            return *a;
        }
        fail(ErrorCode::SpaceMismatch, "dynamics '" + id + "' is physical, expected abstract");
    }

    PhysicalDynamics physical_dynamics(const std::string& id)
    {
        const auto& d = dynamics(id);
        if (const auto* p = std::get_if<PhysicalDynamics>(&d)) {
            return *p;
        }
        fail(ErrorCode::SpaceMismatch, "dynamics '" + id + "' is abstract, expected physical");
    }

    AbstractDynamics make_abstract_dynamics(const Json& j, const std::string& id)
    {
        auto rule = str(j, "rule");
        if (rule == "chain") {
            std::vector<AbstractDynamics> steps;
            for (const auto& s : j.at("steps")) {
                steps.push_back(abstract_dynamics(s.get<std::string>()));
            }
            return AbstractDynamics::chain(id, std::move(steps));
        }
        auto space = typed_space<Domain::Abstract>(str(j, "space"));
        if (rule == "lookup") {
            return AbstractDynamics::lookup(id, space, table_from_json(space, space, j.at("table")));
        }
        if (rule == "builtin") {
            auto name = str(j, "builtin");
            auto kind = builtin_from_string(name);
            if (!kind) {
                syntax("unknown builtin '" + name + "'");
            }
            return AbstractDynamics::builtin(id, space, *kind);
        }
        syntax("unknown abstract dynamics rule '" + rule + "'");
    }

    static Noise make_noise(const Json& j)
    {
        Noise n;
        n.flip_probability = j.value("flip_probability", std::vector<double>{});
        n.thresholds = j.value("thresholds", std::vector<double>{});
        n.partners = j.value("partners", std::map<std::string, std::string>{});
        return n;
    }

    static Gate make_gate(const Json& j)
    {
        auto name = str(j, "op");
        auto op = gate_op_from_string(name);
        if (!op) {
            syntax("unknown gate op '" + name + "'");
        }
        Gate g;
        g.op = *op;
        switch (g.op) {
        case Gate::Op::Sense:
            g.line = j.at("line").get<std::size_t>();
            g.threshold = j.at("threshold").get<double>();
            break;
        case Gate::Op::Constant: g.constant = j.at("value").get<bool>(); break;
        default: g.inputs = j.at("inputs").get<std::vector<std::size_t>>(); break;
        }
        return g;
    }

    PhysicalDynamics make_physical_dynamics(const Json& j, const std::string& id)
    {
        auto rule = str(j, "rule");
        Noise noise = j.contains("noise") ? make_noise(j.at("noise")) : Noise{};
        if (rule == "chain") {
            std::vector<PhysicalDynamics> steps;
            for (const auto& s : j.at("steps")) {
                steps.push_back(physical_dynamics(s.get<std::string>()));
            }
            return PhysicalDynamics::chain(id, std::move(steps), std::move(noise));
        }
        auto space = typed_space<Domain::Physical>(str(j, "space"));
        if (rule == "lookup") {
            return PhysicalDynamics::lookup(id, space, table_from_json(space, space, j.at("table")), std::move(noise));
        }
        if (rule == "coordinate-update") {
            const auto& n = j.at("netlist");
            Netlist net;
            for (const auto& w : n.at("wires")) {
                net.wires.push_back(make_gate(w));
            }
            for (const auto& d : n.at("drives")) {
                net.drives.push_back(Drive{d.at("line").get<std::size_t>(), d.at("wire").get<std::size_t>()});
            }
            return PhysicalDynamics::coordinate_update(id, space, std::move(net), std::move(noise));
        }
        syntax("unknown physical dynamics rule '" + rule + "'");
    }

    // -- theories

    const Theory& theory(const std::string& id)
    {
        if (auto it = theories_.find(id); it != theories_.end()) {
            return it->second;
        }
        const Json& j = lookup("theories", id, "theory");
        auto t = at_entry("theories", id, [&] {
            auto rep = relation(str(j, "representation"));
            std::vector<PhysicalState> domain;
            for (const auto& v : j.at("domain")) {
                domain.push_back(make_state(rep.domain(), value_from_json(rep.domain(), v)));
            }
            std::vector<Prediction> predictions;
            for (const auto& p : j.at("predictions")) {
                predictions.push_back(Prediction{str(p, "name"), abstract_dynamics(str(p, "abstract")),
                                                 physical_dynamics(str(p, "physical"))});
            }
            std::optional<InstantiationProcedure> inst;
            if (j.contains("instantiation") && !j.at("instantiation").is_null()) {
                const auto& i = j.at("instantiation");
                InstantiationProcedure proc;
                proc.engineering = physical_dynamics(str(i, "engineering"));
                for (const auto& v : i.at("seeds")) {
                    proc.seeds.push_back(make_state(rep.domain(), value_from_json(rep.domain(), v)));
                }
                inst = std::move(proc);
            }
            return Theory(id, rep, std::move(domain), std::move(predictions), std::move(inst));
        });
        done("theories", id);
        bundle_.add_theory(t);
        return theories_.emplace(id, t).first->second;
    }

    ProblemEmbedding make_embedding(const Json& j)
    {
        auto id = str(j, "id");
        auto problem = typed_space<Domain::Abstract>(str(j, "problem_space"));
        auto machine = typed_space<Domain::Abstract>(str(j, "machine_space"));
        return ProblemEmbedding(id, problem, machine, table_from_json(problem, machine, j.at("table")));
    }

    RefinementStack make_stack(const Json& j)
    {
        auto id = str(j, "id");
        std::vector<RefinementLayer> layers;
        for (const auto& l : j.at("layers")) {
            layers.push_back(RefinementLayer::make(str(l, "id"), abstract_dynamics(str(l, "dynamics"))));
        }
        const auto& sims = j.at("simulations");
        if (!sims.is_array() || sims.size() + 1 != layers.size()) {
            fail(ErrorCode::InvalidDeclaration, "a stack needs exactly one simulation per adjacent layer pair");
        }
        std::vector<SimulationRelation> simulations;
        for (std::size_t i = 0; i < sims.size(); ++i) {
            const auto& upper = layers[i];
            const auto& lower = layers[i + 1];
            simulations.push_back(SimulationRelation::make(str(sims[i], "id"), upper, lower,
                                                           table_from_json(upper.space, lower.space, sims[i].at("table"))));
        }
        const auto& bottom = j.at("bottom");
        return RefinementStack(id, std::move(layers), std::move(simulations),
                               DeviceBinding{theory(str(bottom, "theory")), str(bottom, "program")});
    }

    ComponentBinding binding(const Json& j)
    {
        ComponentBinding b{theory(str(j, "theory")), str(j, "prediction")};
        b.theory.prediction(b.prediction);
        return b;
    }

    CompositionDecl make_composition(const Json& j)
    {
        CompositionDecl c;
        c.id = str(j, "id");
        c.left = binding(j.at("left"));
        c.right = binding(j.at("right"));
        auto mode = str(j, "mode");
        if (mode == "parallel") {
            c.mode = CompositionDecl::Mode::Parallel;
        } else if (mode == "sequential") {
            c.mode = CompositionDecl::Mode::Sequential;
        } else if (mode == "declared") {
            c.mode = CompositionDecl::Mode::Declared;
            c.joint_representation = relation(str(j, "representation"));
            c.joint_dynamics = abstract_dynamics(str(j, "dynamics"));
        } else {
            syntax("unknown composition mode '" + mode + "'");
        }
        return c;
    }

    // Resolves a name in the bundle, reporting the reference location when missing.
    template <class F>
    void require(const std::string& id, F&& resolve)
    {
        try {
            resolve();
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::UnknownReference) {
                throw;
            }
            error_at(ErrorCode::UnknownReference, e.what(), reference_offset(id), id);
        }
    }

    CheckDecl make_check(const Json& j)
    {
        CheckDecl c;
        c.name = str(j, "name");
        auto kind_name = str(j, "kind");
        auto kind = check_kind_from_string(kind_name);
        if (!kind) {
            syntax("unknown check kind '" + kind_name + "'");
        }
        c.kind = *kind;
        c.theory = j.value("theory", std::string{});
        c.prediction = j.value("prediction", std::string{});
        c.stack = j.value("stack", std::string{});
        c.simulation = j.value("simulation", std::string{});
        c.composition = j.value("composition", std::string{});
        c.embedding = j.value("embedding", std::string{});
        if (!c.theory.empty()) {
            require(c.theory, [&] { theory(c.theory); });
            if (!c.prediction.empty()) {
                require(c.prediction, [&] { bundle_.theory(c.theory).prediction(c.prediction); });
            }
        }
        if (!c.stack.empty()) {
            require(c.stack, [&] { bundle_.stack(c.stack); });
            if (!c.simulation.empty()) {
                require(c.simulation, [&] {
                    const auto& sims = bundle_.stack(c.stack).simulations();
                    if (std::none_of(sims.begin(), sims.end(), [&](const auto& s) { return s.id == c.simulation; })) {
                        fail(ErrorCode::UnknownReference, "unknown simulation '" + c.simulation + "'");
                    }
                });
            }
        }
        if (!c.composition.empty()) {
            require(c.composition, [&] { bundle_.composition(c.composition); });
        }
        if (!c.embedding.empty()) {
            require(c.embedding, [&] { bundle_.embedding(c.embedding); });
        }
        if (j.contains("state")) {
            auto s = check_state_space(bundle_, c);
            if (!s) {
                syntax("checks of kind '" + kind_name + "' take no state");
            }
            c.state = any_value_from_json(*s, j.at("state"));
        }
        if (j.contains("expect")) {
            auto s = check_expect_space(bundle_, c);
            if (!s) {
                syntax("checks of kind '" + kind_name + "' take no expected output");
            }
            c.expect = any_value_from_json(*s, j.at("expect"));
        }
        if (j.contains("expect_class")) {
            auto v = str(j, "expect_class");
            if (v == to_string(CompositionKind::Hybrid)) {
                c.expect_class = CompositionKind::Hybrid;
            } else if (v == to_string(CompositionKind::Heterotic)) {
                c.expect_class = CompositionKind::Heterotic;
            } else {
                syntax("expect_class must be 'Hybrid' or 'Heterotic'");
            }
        }
        c.epsilon = j.value("epsilon", 0.0);
        c.metric = metric_from_string(j.value("metric", std::string("discrete")));
        c.physical_metric = metric_from_string(j.value("physical_metric", std::string("discrete")));
        c.trials = j.value("trials", std::size_t{1});
        c.required_success = j.value("required_success", 1.0);
        c.oracle = j.value("oracle", false);
        if (!(c.epsilon >= 0.0)) {
            fail(ErrorCode::InvalidDeclaration, "epsilon must be non-negative");
        }
        if (c.trials == 0) {
            fail(ErrorCode::InvalidDeclaration, "trials must be positive");
        }
        if (!(c.required_success > 0.0 && c.required_success <= 1.0)) {
            fail(ErrorCode::InvalidDeclaration, "required_success must lie in (0, 1]");
        }
        return c;
    }
};

}  // namespace

template <Domain D>
Json value_to_json(const Space<D>& space, const Value& v)
{
    switch (space.kind()) {
    case SpaceKind::Labeled: return v.label().name;
    case SpaceKind::Bitstring: return v.bits().digits;
    case SpaceKind::BoundedInteger: return v.integer();
    case SpaceKind::RealVector: return v.reals();
    case SpaceKind::Tuple: {
        Json out = Json::array();
        for (std::size_t i = 0; i < space.arity(); ++i) {
            out.push_back(value_to_json(space.component(i), v.tuple().at(i)));
        }
        return out;
    }
    }
    return nullptr;
}

template <Domain D>
Value value_from_json(const Space<D>& space, const Json& j)
{
    auto shape = [&](const char* what) {
        syntax("expected " + std::string(what) + " for a state of space '" + space.id() + "', got " + j.dump());
    };
    Value v;
    switch (space.kind()) {
    case SpaceKind::Labeled:
        if (!j.is_string()) {
            shape("a label string");
        }
        v = label(j.get<std::string>());
        break;
    case SpaceKind::Bitstring:
        if (!j.is_string()) {
            shape("a bitstring");
        }
        v = bits(j.get<std::string>());
        break;
    case SpaceKind::BoundedInteger:
        if (!j.is_number_integer()) {
            shape("an integer");
        }
        v = integer(j.get<Integer>());
        break;
    case SpaceKind::RealVector: {
        if (!j.is_array() || !std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_number(); })) {
            shape("an array of numbers");
        }
        v = reals(j.get<RealVector>());
        break;
    }
    case SpaceKind::Tuple: {
        if (!j.is_array() || j.size() != space.arity()) {
            shape("an array with one entry per component");
        }
        Value::Tuple parts;
        for (std::size_t i = 0; i < space.arity(); ++i) {
            parts.push_back(value_from_json(space.component(i), j[i]));
        }
        v = Value(std::move(parts));
        break;
    }
    }
    if (!space.has_member(v)) {
        fail(ErrorCode::OutOfDomain, format_literal(v) + " is not a state of space '" + space.id() + "'");
    }
    return v;
}

template Json value_to_json(const AbstractSpace&, const Value&);
template Json value_to_json(const PhysicalSpace&, const Value&);
template Value value_from_json(const AbstractSpace&, const Json&);
template Value value_from_json(const PhysicalSpace&, const Json&);

Json scenario_to_json(const ScenarioBundle& b)
{
    Json doc{{"format_version", kScenarioFormatVersion}, {"name", b.name}, {"description", b.description}};
    Json spaces = Json::array();
    for (const auto& s : b.spaces()) {
        spaces.push_back(space_to_json(s));
    }
    Json relations = Json::array();
    for (const auto& r : b.relations()) {
        relations.push_back(relation_to_json(r));
    }
    Json dynamics = Json::array();
    for (const auto& d : b.dynamics()) {
        dynamics.push_back(dynamics_to_json(d));
    }
    Json theories = Json::array();
    for (const auto& t : b.theories()) {
        theories.push_back(theory_to_json(t));
    }
    Json embeddings = Json::array();
    for (const auto& e : b.embeddings()) {
        embeddings.push_back(Json{{"id", e.id()},
                                  {"problem_space", e.problem_space().id()},
                                  {"machine_space", e.machine_space().id()},
                                  {"table", table_to_json(e.problem_space(), e.machine_space(), e.table())}});
    }
    Json stacks = Json::array();
    for (const auto& s : b.stacks()) {
        stacks.push_back(stack_to_json(s));
    }
    Json compositions = Json::array();
    for (const auto& c : b.compositions()) {
        compositions.push_back(composition_to_json(c));
    }
    Json checks = Json::array();
    for (const auto& c : b.checks()) {
        checks.push_back(check_to_json(b, c));
    }
    doc["spaces"] = spaces;
    doc["relations"] = relations;
    doc["dynamics"] = dynamics;
    doc["theories"] = theories;
    doc["embeddings"] = embeddings;
    doc["stacks"] = stacks;
    doc["compositions"] = compositions;
    doc["checks"] = checks;
    return doc;
}

std::string emit_scenario(const ScenarioBundle& bundle)
{
    return scenario_to_json(bundle).dump(2) + "\n";
}

ScenarioBundle parse_scenario(std::string_view text)
{
    return Parser(text).run();
}

}  // namespace ar
