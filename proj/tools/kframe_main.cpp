// kframe: batch verification front-end.
//
//   kframe verify --config <path> [--properties l4,t1,...] [--trials N] [--seed S]
//                 [--report <path>] [--format json|text]
//   kframe fixtures --name W1|W1p
//
// Exit codes: 0 all selected properties pass, 1 some property fails,
// 2 usage or configuration error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kframe/cli/report.hpp"
#include "kframe/cli/scenario.hpp"
#include "kframe/cli/suite.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

} // namespace

int main(int argc, char** argv) {
    using namespace kframe::cli;

    CLI::App app{"Continuous K-frame duality verifier"};
    app.require_subcommand(1);

    std::string config_path;
    std::string properties_csv;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::string report_path;
    std::string format_name = "json";

    CLI::App* verify = app.add_subcommand("verify", "Run property suites for a scenario");
    verify->add_option("--config", config_path, "Scenario config (JSON)")->required();
    verify->add_option("--properties", properties_csv, "Comma-separated property ids");
    verify->add_option("--trials", trials, "Override the scenario trial count");
    verify->add_option("--seed", seed, "Override the scenario seed");
    verify->add_option("--report", report_path, "Write the report here instead of stdout");
    verify->add_option("--format", format_name, "Report format: json or text");

    std::string fixture_name;
    CLI::App* fixtures = app.add_subcommand("fixtures", "Print a built-in fixture scenario");
    fixtures->add_option("--name", fixture_name, "W1 or W1p")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*fixtures) {
            std::cout << scenario_to_json(fixture_scenario(fixture_name)).dump(2) << '\n';
            return kExitPass;
        }

        const ReportFormat format = parse_format(format_name);
        Scenario scenario = load_scenario(config_path);
        if (trials) {
            scenario.trials = *trials;
        }
        if (seed) {
            scenario.seed = *seed;
        }
        const std::vector<std::string> selected = parse_property_list(properties_csv);
        const SuiteReport report = run_suite(scenario, selected);
        if (report_path.empty()) {
            std::cout << render_report(report, format);
        } else {
            emit_report(report, report_path, format);
            std::cerr << (report.all_pass() ? "all properties passed" : "some properties failed")
                      << "; report written to " << report_path << '\n';
        }
        return report.all_pass() ? kExitPass : kExitFail;
    } catch (const ConfigError& e) {
        std::cerr << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}
