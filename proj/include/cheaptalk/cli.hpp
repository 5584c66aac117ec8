#ifndef CHEAPTALK_CLI_HPP_
#define CHEAPTALK_CLI_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cheaptalk/game_io.hpp"
#include "cheaptalk/protocol.hpp"

namespace cheaptalk {

// Exit codes of the command-line tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

struct CommandResult {
  int exit_code = kExitPass;
  Json report;
  std::optional<Json> artifact;
};

CommandResult cmd_verify(const std::string& game_path, int precision);

struct DecomposeOptions {
  int precision = kDefaultPrecision;
  std::uint64_t seed = 0;
  int refinements = 0;
  std::uint64_t max_denominator = 64;
};

CommandResult cmd_decompose(const std::string& game_path, const DecomposeOptions& options);

struct SimulateOptions {
  ProtocolConfig config;
  std::size_t trials = 1000;
  double alpha = 0.001;
  bool debug_dump = false;
  bool skip_verify = false;
  std::size_t sample = 8;
  bool artifact = false;
};

// Runs the protocol and audits the run. Exit 1 when the target fails
// verification or the audit fails.
CommandResult cmd_simulate(const std::string& game_path, const SimulateOptions& options);
CommandResult cmd_simulate_bayes(const std::string& game_path, const SimulateOptions& options);

CommandResult cmd_audit(const std::string& artifact_path, double alpha);

// Entry point shared by the executable and the tests.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cheaptalk

#endif  // CHEAPTALK_CLI_HPP_
