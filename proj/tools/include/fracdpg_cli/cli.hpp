#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracdpg::cli {

struct RunConfig {
  int example = 0;
  double alpha = 0.0;
  double lambda = 0.6;
  int p = 0;
  int q = 0;
  int m = 2;
  int n = 2;
  double theta = 1.0;
  int n0 = 2;
  int max_steps = 8;
  int dof_budget = 30000;
  int tail = 4;
  bool serial = false;
  std::string output = "fracdpg_out";

  bool operator==(const RunConfig&) const = default;
};

// Usage errors (bad flags, out-of-range values, unknown config keys).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Default alpha of an example when none is given.
double default_alpha(int example);

// Parses command-line arguments (argv[0] is the program name). A --config
// file of `key = value` lines is read first; flags override it.
// Returns std::nullopt when --help was requested (help text goes to out).
std::optional<RunConfig> parse_config(const std::vector<std::string>& args, std::ostream& out);

// Range checks shared by the parser and run().
void validate(const RunConfig& config);

// `key = value` text accepted by --config.
std::string emit_config(const RunConfig& config);

// Runs the experiment and writes convergence.csv, mesh_<k>.csv,
// summary.txt and config.txt into config.output. Returns the process exit code:
// 0 success, 1 usage error, 2 numerical failure.
int run(const RunConfig& config, std::ostream& log, std::ostream& err);

// Full entry point: parse, run, map exceptions to exit codes.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracdpg::cli
