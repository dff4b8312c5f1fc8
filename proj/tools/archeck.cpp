// archeck: batch verification driver for scenario files.
#include "ar/report.hpp"
#include "ar/scenarios.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

struct RunFlags {
    std::uint64_t seed = 0;
    std::optional<double> epsilon;
    std::optional<std::size_t> trials;
    std::optional<std::string> filter;
    std::string format = "text";
    std::string output;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ar::Error(ar::ErrorCode::UnknownReference, "cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& text, const std::string& path)
{
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
}

int emit(const ar::RunReport& report, const RunFlags& flags)
{
    write_output(flags.format == "json" ? ar::render_json(report) : ar::render_text(report), flags.output);
    return report.exit_code();
}

void add_run_flags(CLI::App* cmd, RunFlags& flags)
{
    cmd->add_option("--seed", flags.seed, "Base trial seed")->default_val(0);
    cmd->add_option("--epsilon", flags.epsilon, "Tolerance override for every check");
    cmd->add_option("--trials", flags.trials, "Trial-count override for every check")->check(CLI::PositiveNumber);
    cmd->add_option("--format", flags.format, "Report format")->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("--output,-o", flags.output, "Write the report here instead of stdout");
}

// Runs one ad hoc check through the same driver as `check`.
int run_single(const ar::ScenarioBundle& bundle, ar::CheckDecl decl, const RunFlags& flags)
{
    if (flags.epsilon) {
        decl.epsilon = *flags.epsilon;
    }
    if (flags.trials) {
        decl.trials = *flags.trials;
    }
    ar::RunReport report;
    report.scenario = bundle.name;
    report.seed = flags.seed;
    report.results.push_back(ar::run_check(bundle, decl, ar::TrialSeed{flags.seed}));
    return emit(report, flags);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Check representational theories, refinement stacks and compositions declared in scenario files"};
    app.require_subcommand(1);

    RunFlags flags;
    std::string file;
    std::string theory, stack, joint, input, program, embedding, builtin_name;
    bool oracle = false;

    auto* check = app.add_subcommand("check", "Run every declared check");
    check->add_option("file", file, "Scenario file")->required();
    check->add_option("--filter", flags.filter, "Only checks whose name matches this glob");
    add_run_flags(check, flags);

    auto* validate = app.add_subcommand("validate-theory", "Validate a theory over its declared domain");
    validate->add_option("file", file, "Scenario file")->required();
    validate->add_option("--theory", theory, "Theory id")->required();
    add_run_flags(validate, flags);

    auto* compute = app.add_subcommand("compute", "Run the encode, evolve, decode cycle on one input");
    compute->add_option("file", file, "Scenario file")->required();
    compute->add_option("--theory", theory, "Theory id")->required();
    compute->add_option("--input", input, "Abstract input state literal, e.g. (\"01\",\"10\",\"000\")")->required();
    compute->add_option("--program", program, "Prediction to run (default: the theory's first)");
    compute->add_option("--embedding", embedding, "Problem embedding applied to the input");
    add_run_flags(compute, flags);

    auto* check_stack = app.add_subcommand("check-stack", "Check a refinement stack down to its device");
    check_stack->add_option("file", file, "Scenario file")->required();
    check_stack->add_option("--stack", stack, "Stack id")->required();
    add_run_flags(check_stack, flags);

    auto* classify = app.add_subcommand("classify", "Classify a joint system as hybrid or heterotic");
    classify->add_option("file", file, "Scenario file")->required();
    classify->add_option("--joint", joint, "Composition id")->required();
    classify->add_flag("--oracle", oracle, "Cross-check with the exhaustive oracle");
    add_run_flags(classify, flags);

    auto* scenarios = app.add_subcommand("scenarios", "Built-in scenarios");
    scenarios->require_subcommand(1);
    auto* emit_cmd = scenarios->add_subcommand("emit", "Print a built-in scenario as a scenario file");
    emit_cmd->add_option("name", builtin_name, "Built-in name")->required();
    emit_cmd->add_option("--output,-o", flags.output, "Write here instead of stdout");
    auto* list_cmd = scenarios->add_subcommand("list", "List built-in scenario names");

    auto* report = app.add_subcommand("report", "Re-render a JSON report");
    report->add_option("file", file, "JSON report")->required();
    report->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    report->add_option("--output,-o", flags.output, "Write here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*list_cmd) {
            for (const auto& n : ar::scenarios::builtin_names()) {
                std::cout << n << "\n";
            }
            return 0;
        }
        if (*emit_cmd) {
            write_output(ar::emit_scenario(ar::scenarios::builtin(builtin_name)), flags.output);
            return 0;
        }
        if (*report) {
            auto r = ar::report_from_json(ar::Json::parse(read_file(file)));
            return emit(r, flags);
        }

        auto bundle = ar::parse_scenario(read_file(file));
        if (*check) {
            auto r = ar::run_checks(bundle, ar::TrialSeed{flags.seed}, flags.filter, {flags.epsilon, flags.trials});
            return emit(r, flags);
        }

        ar::CheckDecl decl;
        if (*validate) {
            decl.name = "validate-" + theory;
            decl.kind = ar::CheckKind::ValidateTheory;
            decl.theory = theory;
        } else if (*compute) {
            decl.name = "compute-" + theory;
            decl.kind = ar::CheckKind::Compute;
            decl.theory = theory;
            const auto& t = bundle.theory(theory);
            decl.prediction = program.empty() && !t.predictions().empty() ? t.predictions().front().name : program;
            decl.embedding = embedding;
            decl.state = ar::parse_literal(input);
        } else if (*check_stack) {
            decl.name = "stack-" + stack;
            decl.kind = ar::CheckKind::Stack;
            decl.stack = stack;
        } else if (*classify) {
            decl.name = "classify-" + joint;
            decl.kind = ar::CheckKind::Classify;
            decl.composition = joint;
            decl.oracle = oracle;
        }
        return run_single(bundle, decl, flags);
    } catch (const ar::Error& e) {
        std::cerr << "archeck: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "archeck: " << e.what() << "\n";
        return 2;
    }
}
