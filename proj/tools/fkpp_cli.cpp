// Command-line driver: fkpp <command> --config FILE [--out DIR] [--seed N] [--jobs N] [--strict]
//
// Exit codes: 0 success, 2 configuration or usage error, 3 numerical failure,
// 4 acceptance failure. Errors go to stderr as one JSON object. No file is
// written unless the command completes.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fkpp/commands.hpp"
#include "fkpp/config.hpp"
#include "fkpp/error.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitAcceptance = 4;

int report_error(int code, const std::string& kind, const std::string& message,
                 const std::vector<std::string>& details = {}, const std::optional<double>& time = {}) {
    nlohmann::ordered_json j{{"error", kind}, {"message", message}};
    if (!details.empty()) j["details"] = details;
    if (time) j["time"] = *time;
    j["exit_code"] = code;
    std::cerr << j.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace fkpp::app;

    CLI::App app{"Semiclassical asymptotics of the nonlocal Fisher-KPP equation"};
    std::string command, config_path, out_dir;
    std::uint64_t seed = 20261016;
    int jobs = 1;
    bool strict = false;
    std::vector<int> criteria;

    std::string names;
    for (const auto& n : command_names()) names += (names.empty() ? "" : ", ") + n;
    app.add_option("command", command, "One of: " + names)->required();
    app.add_option("--config", config_path, "YAML experiment file (defaults apply when omitted)");
    app.add_option("--out", out_dir, "Output directory (overrides output.dir)");
    app.add_option("--seed", seed, "Seed for randomized checks");
    app.add_option("--jobs", jobs, "Concurrent tasks for sweeps")->check(CLI::Range(1, 256));
    app.add_flag("--strict", strict, "Treat warnings as numerical failures");
    app.add_option("--criteria", criteria, "acceptance: criterion ids to run (default all)")
        ->check(CLI::Range(1, 11));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report_error(kExitConfig, "usage", e.what());
    }

    const auto cmd = parse_command(command);
    if (!cmd) return report_error(kExitConfig, "usage", "unknown command '" + command + "' (" + names + ")");

    ExperimentConfig cfg;
    try {
        cfg = config_path.empty() ? parse_config("{}") : load_config(config_path);
    } catch (const ConfigError& e) {
        return report_error(kExitConfig, "config", e.what(), e.issues());
    } catch (const fkpp::Error& e) {
        return report_error(kExitConfig, "config", e.what());
    }

    RunOptions ro;
    ro.seed = seed;
    ro.jobs = jobs;
    ro.criteria = criteria;
    try {
        auto report = run_command(*cmd, cfg, ro, out_dir);
        if (strict && !report.warnings.empty()) {
            return report_error(kExitNumeric, "strict", "warnings promoted to errors", report.warnings);
        }
        report.artifacts.commit();
        for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
        for (const auto& l : report.lines) std::cout << l << '\n';
        std::cout << "wrote " << report.artifacts.files().size() << " files to " << report.artifacts.dir() << '\n';
        return report.acceptance_failed ? kExitAcceptance : 0;
    } catch (const fkpp::Error& e) {
        const bool cfg_like = e.kind() == fkpp::ErrorKind::Config || e.kind() == fkpp::ErrorKind::InvalidArgument;
        return report_error(cfg_like ? kExitConfig : kExitNumeric, fkpp::to_string(e.kind()), e.what(), {}, e.time());
    } catch (const std::filesystem::filesystem_error& e) {
        return report_error(kExitNumeric, "io", e.what());
    } catch (const std::exception& e) {
        return report_error(kExitNumeric, "internal", e.what());
    }
}
