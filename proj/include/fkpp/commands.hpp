#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fkpp/config.hpp"
#include "fkpp/csv.hpp"

namespace fkpp::app {

enum class Command { EE, Germ, Coherent, Residual, Direct, LargeTime, Compare, Acceptance };

std::optional<Command> parse_command(const std::string& name);
const char* command_name(Command c);
std::vector<std::string> command_names();

struct RunOptions {
    std::uint64_t seed = 20261016;
    int jobs = 1;
    /// Acceptance criterion ids; empty runs all.
    std::vector<int> criteria;
};

struct RunReport {
    Artifacts artifacts;
    /// Lines for stdout.
    std::vector<std::string> lines;
    /// Conditions that --strict turns into failures.
    std::vector<std::string> warnings;
    bool acceptance_failed = false;
};

/// Computes everything in memory. Output is written by the caller through
/// report.artifacts.commit(), so failures leave the output directory alone.
/// `out_dir` overrides config.output.dir when non-empty.
RunReport run_command(Command cmd, const ExperimentConfig& config, const RunOptions& opts,
                      const std::string& out_dir = {});

}  // namespace fkpp::app
