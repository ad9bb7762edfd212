// twistorcm command line: batch verification of CM twistor-fibre arithmetic.
#include "twistorcm/errors.hpp"
#include "twistorcm/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

namespace {

using twistorcm::scenario::RunConfig;
using twistorcm::scenario::ScenarioSpec;

int default_precision_cap() {
    if (const char* env = std::getenv("TWISTORCM_PRECISION_CAP")) {
        try {
            return std::max(64, std::stoi(env));
        } catch (...) {
        }
    }
    return 0;  // 0 = use the scenario's own cap
}

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw twistorcm::InvalidInput("cannot open output file: " + out_path);
    out << text;
}

void apply_check_names(ScenarioSpec& spec, const std::vector<std::string>& checks) {
    spec.checks.clear();
    for (const auto& name : checks) {
        if (name == "all") {
            spec.checks = {twistorcm::scenario::Check::Cm, twistorcm::scenario::Check::Picard,
                           twistorcm::scenario::Check::Equator, twistorcm::scenario::Check::Period};
            return;
        }
        if (name == "cm") spec.checks.insert(twistorcm::scenario::Check::Cm);
        else if (name == "picard") spec.checks.insert(twistorcm::scenario::Check::Picard);
        else if (name == "equator") spec.checks.insert(twistorcm::scenario::Check::Equator);
        else if (name == "period") spec.checks.insert(twistorcm::scenario::Check::Period);
        else throw twistorcm::InvalidInput("unknown check: " + name);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification of complex multiplication in twistor families"};
    app.require_subcommand(1);

    std::string scenario_path, format_name = "json", out_path, preset_name;
    long height_override = -1;
    int workers = 1, precision_cap = 0;
    uint64_t seed = 0;
    bool timings = false;
    std::vector<std::string> checks;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", scenario_path, "scenario file (JSON)")->required();
        cmd->add_option("--height", height_override, "override the class height bound");
        cmd->add_option("--workers", workers, "parallel workers")->check(CLI::PositiveNumber);
        cmd->add_option("--precision-cap", precision_cap,
                        "interval refinement cap in bits (overrides scenario and environment)");
        cmd->add_option("--seed", seed, "seed echoed into the report");
    };

    CLI::App* survey = app.add_subcommand("survey", "analyze the classes of a scenario");
    add_common(survey);
    survey->add_option("--check", checks, "checks to run: all, cm, picard, equator, period");
    survey->add_option("--format", format_name, "output format: json, text, csv")
        ->check(CLI::IsMember({"json", "text", "csv"}));
    survey->add_option("--out", out_path, "output path (default stdout)");
    survey->add_flag("--timings", timings, "include per-class timings in JSON output");

    CLI::App* verify = app.add_subcommand("verify", "run the full check battery; exit 1 on alarms");
    add_common(verify);

    CLI::App* fields = app.add_subcommand("fields", "print data about a preset field");
    fields->add_option("--preset", preset_name, "preset name")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (fields->parsed()) {
            std::cout << twistorcm::scenario::describe_preset(preset_name);
            return 0;
        }

        ScenarioSpec spec = twistorcm::scenario::load_scenario(scenario_path);
        if (height_override >= 1) spec.height = height_override;
        if (survey->count("--seed") || verify->count("--seed")) spec.seed = seed;
        if (verify->parsed())
            apply_check_names(spec, {"all"});
        if (!checks.empty()) apply_check_names(spec, checks);

        RunConfig config;
        config.workers = workers;
        config.seed = spec.seed;
        config.timings = timings;
        if (precision_cap > 0) config.precision_cap_override = precision_cap;
        else if (int env_cap = default_precision_cap(); env_cap > 0)
            config.precision_cap_override = env_cap;

        const auto result = twistorcm::scenario::run_survey(spec, config);
        const auto format = verify->parsed() ? twistorcm::scenario::ReportFormat::Text
                                             : twistorcm::scenario::parse_format(format_name);
        write_output(twistorcm::scenario::emit_report(result, format, config), out_path);
        return result.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
