#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "adaptctl/config.hpp"
#include "adaptctl/kyp.hpp"

namespace adaptctl::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kInfeasible = 3, kNumerical = 4 };

struct Artifact {
  std::filesystem::path name;  // relative to the output directory
  std::string content;
};

// Commands compute everything in memory; files are written only after the
// whole command succeeded.
struct CommandResult {
  int exit_code = kOk;
  std::string report;
  std::vector<Artifact> files;
};

struct Resolved {
  LinearErrorSystem sys;
  NominalCertificate cert;
  std::optional<kyp::KypVerdict> verdict;
};

// Builds the certificate from P, Q, or the kyp search. Throws InfeasibleError
// when the search finds no P.
Resolved resolve(const config::ExperimentConfig& cfg, std::uint64_t seed);

CommandResult cmd_analyze(const config::ExperimentConfig& cfg, std::uint64_t seed);
CommandResult cmd_kyp(const config::ExperimentConfig& cfg, std::uint64_t seed);
CommandResult cmd_simulate(const config::ExperimentConfig& cfg, std::uint64_t seed);
CommandResult cmd_bode(const config::ExperimentConfig& cfg, std::uint64_t seed);
CommandResult cmd_reproduce(int figure, std::uint64_t seed);

// Built-in settings of the reproduce command.
config::ExperimentConfig figure_config(int figure);

void write_artifacts(const CommandResult& result, const std::filesystem::path& out_dir);

// Full command line handling; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace adaptctl::cli
