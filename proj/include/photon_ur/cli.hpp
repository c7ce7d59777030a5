#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "photon_ur/momentum_space.hpp"

namespace photon_ur {

/// Version string embedded in every report.
const char *version();

enum class Command { gamma, spectrum, baseline_ho, synthesize, verify, residual };
enum class OutputFormat { json, csv };
enum class SpectrumKind { angular, radial, gamma_table };
enum class FieldSource { synthesis, closed_form };

/// Everything a single invocation needs. Unset optionals take per-command
/// defaults (see `resolved_grid`).
struct RunConfig {
  Command command = Command::gamma;

  // Amplitude: a built-in family, or expressions for f_+ and/or f_-.
  std::string family = "sat-z";
  double a = 1.0;
  std::optional<std::string> f_plus;
  std::optional<std::string> f_minus;

  std::optional<int> n_k, n_theta, n_phi;
  std::optional<double> k_scale;
  std::optional<RadialRule> radial_rule;

  // spectrum
  SpectrumKind spectrum = SpectrumKind::gamma_table;
  int lambda = 1;
  int m = 0;
  int count = 4;
  int j = 1;
  int n_r = 0;
  double z = 1.0;
  int max_n = 3;

  // baseline-ho
  int level = 0;

  // synthesize
  std::optional<double> side; // defaults to 4a
  int points = 5;
  double t = 0.0;
  FieldSource source = FieldSource::synthesis;

  // residual
  double gamma = 4.0;

  std::optional<std::string> out;
  std::optional<OutputFormat> format;
};

/// Supported resolution range for each grid direction.
inline constexpr int kMinResolution = 4;
inline constexpr int kMaxResolution = 1024;

/// Grid for the command: (64, 48, 32) rational by default, and
/// (64, 96, 96) truncated for `synthesize`; k_scale defaults to 1/a.
MomentumGrid resolved_grid(const RunConfig &config);

/// Checks ranges and parses expressions. Throws `Error` on failure.
void validate(const RunConfig &config);

/// Executes the command, writing the report to `--out` (atomically) or to
/// `out`. Errors are reported as JSON on `err`. Returns the exit status:
/// 0 ok, 2 configuration, 3 numeric or convergence, 4 evaluation.
int run(const RunConfig &config, std::ostream &out, std::ostream &err);

/// Parses argv (flags override `--config` file entries) and runs.
int run_command_line(int argc, const char *const *argv, std::ostream &out,
                     std::ostream &err);

/// Exit status for an error kind.
int exit_code(ErrorKind kind);

} // namespace photon_ur
