#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "schlab/greens.hpp"
#include "schlab/solver.hpp"

namespace schlab {

enum class Command {
  simulate,
  rates_space,
  rates_time,
  kernel_errors,
  holder,
  density,
  malliavin,
  validate,
};

const char* command_name(Command c);

struct StudySettings {
  std::vector<int> levels{4, 8, 16, 32};
  int reference = 64;
  int samples = 400;
  double moment_p = 2.0;
  double eval_x = kPi / 2.0;
  // Gap ladders for the increment studies (time in steps, space in cells).
  std::vector<int> time_gaps{1, 2, 4, 8, 16, 32};
  std::vector<int> space_gaps{4, 8, 16};
  // Tangent-table run dimensions and the negative-moment exponent.
  int hnorm_n = 16;
  int hnorm_m = 32;
  int hnorm_samples = 500;
  double rho = 0.5;

  bool operator==(const StudySettings&) const = default;
};

struct KernelSettings {
  std::vector<int> levels{8, 16, 32};
  double horizon = 0.5;
  std::vector<double> x_points{kPi / 4.0, kPi / 2.0, 3.0 * kPi / 4.0};
  KernelConfig quadrature;

  bool operator==(const KernelSettings&) const = default;
};

// Effective configuration of one CLI run. Every field has a documented
// default; a minimal file (or none) is valid.
struct RunConfig {
  SolverConfig problem;
  std::uint64_t seed = 0;
  StudySettings study;
  KernelSettings kernel;
  std::string output_dir = "out";

  bool operator==(const RunConfig&) const = default;
};

// Command-specific defaults for the study ladder (applied before parsing).
RunConfig default_config(Command command);

// Parse `path`, starting from default_config(command). Unknown keys,
// duplicate keys, and malformed values are errors carrying the line number.
RunConfig parse_config_file(const std::string& path, Command command);
RunConfig parse_config_text(const std::string& text, const std::string& origin, Command command);

// Re-parseable dump of the effective configuration.
std::string emit_config(const RunConfig& config);

}  // namespace schlab
