#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace pact {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitValidation = 2, kExitVerification = 3 };

struct RunConfig {
  /// project, abstract, plan, verify or gen-network.
  std::string command;
  /// Domain file; optional for verify and gen-network.
  std::string input;
  std::string action;
  std::string query;
  std::string method;
  /// Groups separated by ';', labels within a group by ','.
  std::string grouping;
  std::string root;
  /// human or json.
  std::string format = "human";
  int precision = 6;
  std::uint64_t seed = 1;
  int cases = 1000;
  /// Comma-separated method names, or "all".
  std::string methods = "all";
  bool trace = false;
  bool timing = false;
  int n = 2;
  int p = 2;
  int k = 2;
  bool engineered = false;
};

/// Runs one command. Output goes to `out`, diagnostics to `err`; the return
/// value is an ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace pact
