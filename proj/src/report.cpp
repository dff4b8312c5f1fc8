#include "ar/report.hpp"

#include <algorithm>
#include <sstream>

namespace ar {

namespace {

// Distinct results with their counts, in first-seen order.
template <class T>
Json tally(const std::vector<T>& items, auto&& render)
{
    std::vector<std::pair<std::string, std::size_t>> seen;
    for (const auto& item : items) {
        auto key = render(item);
        auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& p) { return p.first == key; });
        if (it == seen.end()) {
            seen.emplace_back(std::move(key), 1);
        } else {
            ++it->second;
        }
    }
    Json out = Json::array();
    for (const auto& [k, n] : seen) {
        out.push_back(Json::array({k, n}));
    }
    return out;
}

Json distance_counts(const std::vector<double>& distances)
{
    std::map<double, std::size_t> counts;
    for (double d : distances) {
        ++counts[d];
    }
    Json out = Json::array();
    for (const auto& [d, n] : counts) {
        out.push_back(Json::array({d, n}));
    }
    return out;
}

Json commutation_details(const CommutationReport& r)
{
    return Json{{"initial", format_state(r.initial_physical)},
                {"upper_path", format_state(r.upper_path_result)},
                {"lower_paths", tally(r.lower_path_results, [](const auto& s) { return format_state(s); })},
                {"distances", distance_counts(r.distances)},
                {"trials", r.distances.size()},
                {"successes", r.successes},
                {"success_fraction", r.success_fraction},
                {"epsilon", r.epsilon},
                {"required_success", r.required_success},
                {"metric", to_string(r.metric)},
                {"evidence", r.evidence}};
}

Json validity_details(const ValidityReport& r)
{
    Json failing = Json::array();
    for (const auto& c : r.cells) {
        if (!c.report.passed) {
            failing.push_back(Json{{"state", format_state(c.report.initial_physical)},
                                   {"prediction", c.prediction},
                                   {"upper_path", format_state(c.report.upper_path_result)},
                                   {"lower_path", format_state(c.report.lower_path_results.front())},
                                   {"success_fraction", c.report.success_fraction}});
        }
    }
    Json j{{"theory", r.theory_id}, {"coverage", r.coverage}, {"passed_cells", r.passed_cells}};
    j["untested_states"] = r.untested_states ? Json(*r.untested_states) : Json(nullptr);
    j["failing_cells"] = failing;
    return j;
}

Json table_witness(const std::map<Value, Value>& table)
{
    Json out = Json::array();
    for (const auto& [k, v] : table) {
        out.push_back(Json::array({format_literal(k), format_literal(v)}));
    }
    return out;
}

Json dynamics_witness(const AbstractDynamics& d)
{
    std::map<Value, Value> table;
    for (const auto& s : enumerate(d.space())) {
        table.emplace(s.value, d.apply(s.value));
    }
    return table_witness(table);
}

Json class_details(const CompositionClass& c)
{
    Json j{{"class", to_string(c.value)}, {"matches_components", c.matches_components}};
    if (c.witness.representation) {
        j["representation_factors"] = Json::array({table_witness(c.witness.representation->first.table),
                                                   table_witness(c.witness.representation->second.table)});
    } else {
        j["representation_factors"] = nullptr;
    }
    if (c.witness.dynamics) {
        j["dynamics_factors"] = Json::array({dynamics_witness(c.witness.dynamics->first),
                                             dynamics_witness(c.witness.dynamics->second)});
    } else {
        j["dynamics_factors"] = nullptr;
    }
    return j;
}

std::pair<Theory, ValidityReport> validate_for(const Theory& t, const CheckDecl& c, TrialSeed seed)
{
    return validate_theory(t, c.epsilon, c.metric, c.trials, c.required_success, seed);
}

void require_fields(const CheckDecl& c, std::initializer_list<std::pair<const char*, const std::string*>> fields)
{
    for (const auto& [name, value] : fields) {
        if (value->empty()) {
            fail(ErrorCode::InvalidDeclaration, std::string("check of kind '") + std::string(to_string(c.kind)) +
                                                    "' needs a '" + name + "'");
        }
    }
}

const Value& require_state(const CheckDecl& c)
{
    if (!c.state) {
        fail(ErrorCode::InvalidDeclaration,
             std::string("check of kind '") + std::string(to_string(c.kind)) + "' needs a 'state'");
    }
    return *c.state;
}

void run_commutation(const ScenarioBundle& b, const CheckDecl& c, TrialSeed seed, CheckResult& out)
{
    require_fields(c, {{"theory", &c.theory}, {"prediction", &c.prediction}});
    const auto& theory = b.theory(c.theory);
    auto spec = DiagramSpec::for_prediction(theory, c.prediction, c.epsilon, c.metric, c.trials, c.required_success);
    auto p = make_state(theory.physical_space(), require_state(c));
    auto r = c.kind == CheckKind::Experiment ? run_experiment(theory, p, spec, seed) : check_commutation(spec, p, seed);
    out.outcome = r.passed ? Outcome::Pass : Outcome::Fail;
    std::ostringstream msg;
    msg << r.successes << "/" << r.distances.size() << " trials within epsilon " << r.epsilon;
    out.message = msg.str();
    out.details = commutation_details(r);
}

void run_history(const ScenarioBundle& b, const CheckDecl& c, TrialSeed seed, CheckResult& out)
{
    require_fields(c, {{"theory", &c.theory}, {"prediction", &c.prediction}});
    const auto& theory = b.theory(c.theory);
    auto spec = DiagramSpec::for_prediction(theory, c.prediction, c.epsilon, c.metric, c.trials, c.required_success);
    auto m = make_state(theory.abstract_space(), require_state(c));
    auto r = check_history(spec, m, c.physical_metric, seed);
    out.outcome = r.passed ? Outcome::Pass : Outcome::Fail;
    std::ostringstream msg;
    msg << r.successes << "/" << r.distances.size() << " trials within epsilon " << r.epsilon;
    out.message = msg.str();
    out.details = Json{{"initial", format_state(r.initial_abstract)},
                       {"evolved_abstract", format_state(r.evolved_abstract)},
                       {"prepared", format_state(r.prepared)},
                       {"instantiated_target", format_state(r.instantiated_target)},
                       {"evolved_physical", tally(r.evolved_physical, [](const auto& s) { return format_state(s); })},
                       {"distances", distance_counts(r.distances)},
                       {"successes", r.successes},
                       {"success_fraction", r.success_fraction},
                       {"epsilon", r.epsilon},
                       {"physical_metric", to_string(r.physical_metric)}};
}

void run_validate(const ScenarioBundle& b, const CheckDecl& c, TrialSeed seed, CheckResult& out)
{
    require_fields(c, {{"theory", &c.theory}});
    auto [theory, r] = validate_for(b.theory(c.theory), c, seed);
    out.outcome = r.all_passed ? Outcome::Pass : Outcome::Fail;
    out.message = std::to_string(r.passed_cells) + "/" + std::to_string(r.coverage) + " diagrams commute; theory " +
                  std::string(to_string(theory.validity()));
    out.details = validity_details(r);
    out.details["validity"] = to_string(theory.validity());
}

void run_compute(const ScenarioBundle& b, const CheckDecl& c, TrialSeed seed, CheckResult& out)
{
    require_fields(c, {{"theory", &c.theory}, {"prediction", &c.prediction}});
    auto [theory, validation] = validate_for(b.theory(c.theory), c, seed);
    if (!theory.validated()) {
        out.outcome = Outcome::Fail;
        out.message = "theory '" + theory.id() + "' is invalid; the device cannot be used to compute";
        out.details = Json{{"validation", validity_details(validation)}};
        return;
    }
    AbstractState input;
    Json embedded = nullptr;
    if (!c.embedding.empty()) {
        const auto& e = b.embedding(c.embedding);
        input = embed_problem(e, make_state(e.problem_space(), require_state(c)));
        embedded = format_state(input);
    } else {
        input = make_state(theory.abstract_space(), require_state(c));
    }
    auto r = run_compute_cycle(theory, input, c.prediction, seed);
    Json trace = Json::array();
    for (const auto& t : r.trace) {
        trace.push_back(Json{{"stage", t.stage}, {"state", t.literal}});
    }
    out.details = Json{{"input", format_literal(*c.state)}, {"embedded", embedded}, {"output", format_state(r.output)}};
    out.details["expected"] = c.expect ? Json(format_literal(*c.expect)) : Json(nullptr);
    out.details["trace"] = trace;
    bool ok = !c.expect || r.output.value == *c.expect;
    out.outcome = ok ? Outcome::Pass : Outcome::Fail;
    out.message = "output " + format_state(r.output);
    if (c.expect && !ok) {
        out.message += ", expected " + format_literal(*c.expect);
    }
}

void run_instantiate(const ScenarioBundle& b, const CheckDecl& c, TrialSeed, CheckResult& out)
{
    require_fields(c, {{"theory", &c.theory}});
    const auto& theory = b.theory(c.theory);
    auto m = make_state(theory.abstract_space(), require_state(c));
    auto p = instantiate(theory, m);
    auto back = represent(theory.representation(), p);
    out.outcome = back == m ? Outcome::Pass : Outcome::Fail;
    out.message = format_state(m) + " instantiated as " + format_state(p);
    out.details = Json{{"target", format_state(m)}, {"prepared", format_state(p)}, {"represented", format_state(back)}};
}

Json layer_details(const LayerReport& r)
{
    Json failures = Json::array();
    for (const auto& f : r.failures) {
        failures.push_back(Json{{"upper_state", format_state(f.upper_state)},
                                {"via_upper", format_state(f.via_upper)},
                                {"via_lower", format_state(f.via_lower)},
                                {"distance", f.distance}});
    }
    return Json{{"simulation", r.simulation_id}, {"checked", r.checked}, {"failed", r.failures.size()},
                {"failures", failures}};
}

void run_layer(const ScenarioBundle& b, const CheckDecl& c, TrialSeed, CheckResult& out)
{
    require_fields(c, {{"stack", &c.stack}, {"simulation", &c.simulation}});
    const auto& sims = b.stack(c.stack).simulations();
    auto it = std::find_if(sims.begin(), sims.end(), [&](const auto& s) { return s.id == c.simulation; });
    if (it == sims.end()) {
        fail(ErrorCode::UnknownReference, "unknown simulation '" + c.simulation + "' in stack '" + c.stack + "'");
    }
    auto r = check_layer(*it, c.epsilon, c.metric);
    out.outcome = r.passed ? Outcome::Pass : Outcome::Fail;
    out.message = std::to_string(r.checked - r.failures.size()) + "/" + std::to_string(r.checked) +
                  " upper states commute through " + r.simulation_id;
    out.details = layer_details(r);
}

void run_stack(const ScenarioBundle& b, const CheckDecl& c, TrialSeed seed, CheckResult& out)
{
    require_fields(c, {{"stack", &c.stack}});
    const auto& stack = b.stack(c.stack);
    StackOptions options;
    options.layer_epsilon = c.epsilon;
    options.trials = c.trials;
    options.required_success = c.required_success;
    auto r = check_stack_to_device(stack, c.epsilon, c.metric, seed, options);
    Json layers = Json::array();
    for (const auto& l : r.layers) {
        layers.push_back(layer_details(l));
    }
    std::size_t device_passed = std::count_if(r.device_checks.begin(), r.device_checks.end(),
                                              [](const auto& d) { return d.passed; });
    out.details = Json{{"layers", layers},
                       {"layers_passed", r.layers_passed},
                       {"device_checks", r.device_checks.size()},
                       {"device_checks_passed", device_passed},
                       {"device_passed", r.device_passed}};
    out.details["inline_validation"] =
        r.inline_validation ? validity_details(*r.inline_validation) : Json(nullptr);
    bool ok = r.passed;
    out.message = std::string(r.layers_passed ? "layers commute" : "layer check failed") + "; " +
                  std::to_string(device_passed) + "/" + std::to_string(r.device_checks.size()) +
                  " device diagrams commute";
    if (c.state) {
        auto top = make_state(stack.top_layer().space, *c.state);
        Json prediction = nullptr;
        if (ok) {
            auto [theory, validation] = validate_for(stack.bottom().theory, c, seed);
            auto predicted = predict_through_stack(stack.with_bottom_theory(theory), top, seed);
            prediction = format_state(predicted);
            out.message += "; " + format_state(top) + " predicts " + format_state(predicted);
            if (c.expect && !(predicted.value == *c.expect)) {
                ok = false;
                out.message += ", expected " + format_literal(*c.expect);
            }
        }
        out.details["input"] = format_state(top);
        out.details["prediction"] = prediction;
        out.details["expected"] = c.expect ? Json(format_literal(*c.expect)) : Json(nullptr);
    }
    out.outcome = ok ? Outcome::Pass : Outcome::Fail;
}

void run_classify(const ScenarioBundle& b, const CheckDecl& c, TrialSeed seed, CheckResult& out)
{
    require_fields(c, {{"composition", &c.composition}});
    ValidationSettings settings{c.epsilon, c.metric, c.trials, c.required_success};
    auto joint = build_joint(b.composition(c.composition), settings, seed);
    auto cls = classify(joint);
    out.details = class_details(cls);
    out.details["provenance"] = to_string(joint.provenance);
    bool ok = true;
    // Hybrid/heterotic here is relative to componentwise triple composition only.
    out.message = joint.id + " is representational " + std::string(to_string(cls.value));
    if (c.expect_class) {
        out.details["expected"] = to_string(*c.expect_class);
        if (cls.value != *c.expect_class) {
            ok = false;
            out.message += ", expected " + std::string(to_string(*c.expect_class));
        }
    }
    if (c.oracle) {
        auto brute = brute_force_classify(joint);
        out.details["oracle"] = to_string(brute.value);
        if (brute.value != cls.value) {
            ok = false;
            out.message += "; oracle disagrees (" + std::string(to_string(brute.value)) + ")";
        } else {
            out.message += "; oracle agrees";
        }
    }
    out.outcome = ok ? Outcome::Pass : Outcome::Fail;
}

std::string outcome_label(Outcome o)
{
    switch (o) {
    case Outcome::Pass: return "PASS ";
    case Outcome::Fail: return "FAIL ";
    case Outcome::Error: return "ERROR";
    }
    return "?";
}

}  // namespace

std::string_view to_string(Outcome o)
{
    switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Error: return "error";
    }
    return "?";
}

Outcome outcome_from_string(std::string_view s)
{
    if (s == "pass") {
        return Outcome::Pass;
    }
    if (s == "fail") {
        return Outcome::Fail;
    }
    if (s == "error") {
        return Outcome::Error;
    }
    fail(ErrorCode::SyntaxError, "unknown outcome '" + std::string(s) + "'");
}

std::size_t RunReport::count(Outcome o) const
{
    return static_cast<std::size_t>(
        std::count_if(results.begin(), results.end(), [o](const auto& r) { return r.outcome == o; }));
}

int RunReport::exit_code() const
{
    if (count(Outcome::Error) > 0) {
        return 2;
    }
    return count(Outcome::Fail) > 0 ? 1 : 0;
}

bool matches_filter(std::string_view pattern, std::string_view name)
{
    // Iterative glob match with single-star backtracking.
    std::size_t p = 0, n = 0, star = std::string_view::npos, mark = 0;
    while (n < name.size()) {
        if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
            ++p;
            ++n;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = n;
        } else if (star != std::string_view::npos) {
            p = star + 1;
            n = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') {
        ++p;
    }
    return p == pattern.size();
}

CheckResult run_check(const ScenarioBundle& bundle, const CheckDecl& check, TrialSeed seed)
{
    CheckResult out;
    out.name = check.name;
    out.kind = std::string(to_string(check.kind));
    try {
        switch (check.kind) {
        case CheckKind::Commutation:
        case CheckKind::Experiment: run_commutation(bundle, check, seed, out); break;
        case CheckKind::History: run_history(bundle, check, seed, out); break;
        case CheckKind::ValidateTheory: run_validate(bundle, check, seed, out); break;
        case CheckKind::Compute: run_compute(bundle, check, seed, out); break;
        case CheckKind::Instantiate: run_instantiate(bundle, check, seed, out); break;
        case CheckKind::Layer: run_layer(bundle, check, seed, out); break;
        case CheckKind::Stack: run_stack(bundle, check, seed, out); break;
        case CheckKind::Classify: run_classify(bundle, check, seed, out); break;
        }
    } catch (const Error& e) {
        out.outcome = Outcome::Error;
        out.message = e.what();
        out.details = Json{{"error", to_string(e.code())}};
    }
    return out;
}

RunReport run_checks(const ScenarioBundle& bundle, TrialSeed seed, const std::optional<std::string>& filter,
                     const RunOverrides& overrides)
{
    RunReport report;
    report.scenario = bundle.name;
    report.seed = seed.value;
    report.filter = filter;
    for (auto check : bundle.checks()) {
        if (filter && !matches_filter(*filter, check.name)) {
            continue;
        }
        if (overrides.epsilon) {
            check.epsilon = *overrides.epsilon;
        }
        if (overrides.trials) {
            check.trials = *overrides.trials;
        }
        report.results.push_back(run_check(bundle, check, seed));
    }
    return report;
}

Json report_to_json(const RunReport& r)
{
    Json results = Json::array();
    for (const auto& c : r.results) {
        results.push_back(Json{{"name", c.name},
                               {"kind", c.kind},
                               {"outcome", to_string(c.outcome)},
                               {"message", c.message},
                               {"details", c.details}});
    }
    Json j{{"scenario", r.scenario}, {"seed", r.seed}};
    j["filter"] = r.filter ? Json(*r.filter) : Json(nullptr);
    j["summary"] = Json{{"checks", r.results.size()},
                        {"passed", r.count(Outcome::Pass)},
                        {"failed", r.count(Outcome::Fail)},
                        {"errors", r.count(Outcome::Error)},
                        {"overall", r.passed() ? "pass" : "fail"},
                        {"exit_code", r.exit_code()}};
    j["results"] = results;
    return j;
}

RunReport report_from_json(const Json& j)
{
    try {
        RunReport r;
        r.scenario = j.at("scenario").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        if (!j.at("filter").is_null()) {
            r.filter = j.at("filter").get<std::string>();
        }
        for (const auto& c : j.at("results")) {
            CheckResult out;
            out.name = c.at("name").get<std::string>();
            out.kind = c.at("kind").get<std::string>();
            out.outcome = outcome_from_string(c.at("outcome").get<std::string>());
            out.message = c.at("message").get<std::string>();
            out.details = c.at("details");
            r.results.push_back(std::move(out));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::SyntaxError, std::string("malformed report: ") + e.what());
    }
}

std::string render_json(const RunReport& report)
{
    return report_to_json(report).dump(2) + "\n";
}

std::string render_text(const RunReport& report)
{
    std::ostringstream out;
    out << "scenario " << (report.scenario.empty() ? "(unnamed)" : report.scenario) << ", seed " << report.seed;
    if (report.filter) {
        out << ", filter " << *report.filter;
    }
    out << "\n";
    for (const auto& c : report.results) {
        out << outcome_label(c.outcome) << " " << c.name << " [" << c.kind << "] " << c.message << "\n";
    }
    out << report.count(Outcome::Pass) << " passed, " << report.count(Outcome::Fail) << " failed, "
        << report.count(Outcome::Error) << " errors\n";
    return out.str();
}

}  // namespace ar
