#pragma once

#include "specbound/bounds.hpp"
#include "specbound/cli/config.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace specbound::cli {

// A certificate named with --require did not hold.
class InfeasibleRequirement : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitInfeasible = 3;

struct CommandOptions {
  bool oracle = false;
  int example = 1;
  std::vector<std::string> require;
};

// Each command writes its artifacts under config.output and returns their paths.
std::vector<std::string> cmd_estimate(const ExperimentConfig& config, const CommandOptions& options);
std::vector<std::string> cmd_certify(const ExperimentConfig& config, const CommandOptions& options);
std::vector<std::string> cmd_reproduce(const ExperimentConfig& config, const CommandOptions& options);
std::vector<std::string> cmd_verify_concentration(const ExperimentConfig& config, const CommandOptions& options);
std::vector<std::string> cmd_simulate(const ExperimentConfig& config, const CommandOptions& options);

// The certificate rows cmd_certify tabulates, in output order.
std::vector<Certificate> certificate_table(const ExperimentConfig& config);

// Dispatches by name and maps failures to exit codes; diagnostics go to `err`.
int run_command(const std::string& name, const ExperimentConfig& config, const CommandOptions& options,
                std::ostream& out, std::ostream& err);

}  // namespace specbound::cli
