#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "abshift/abkernel.hpp"
#include "abshift/evolution.hpp"
#include "abshift/superosc.hpp"

namespace abshift {

/// Configuration could not be parsed or failed validation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/*!
 * Everything one CLI run needs. Parsed from a JSON document:
 *
 *   physics:    {M, hbar, t, xi}
 *   superosc:   {a, n: [..], g: [coeffs], h: [coeffs]}
 *   targets:    [{r, phi}, ...]           (at least one)
 *   truncation: {N, tail_tol, n_theta, n_u, u_max, tol, M_max}
 *   evolve:     {a: x | [re, im], b: x | [re, im]}
 *   kernel:     {rho: [..], theta: [..]}
 *   bounds:     {samples}
 */
struct ExperimentConfig {
  PhysicsConfig physics{};
  SuperoscSpec superosc{};
  std::vector<int> n_list{4, 8, 16, 24};
  std::vector<PolarPoint> targets;
  TruncationSpec truncation{};
  Complex evolve_a{1.2, 0.0};
  Complex evolve_b{0.5, 0.0};
  std::vector<double> kernel_rho{0.5, 1.0, 2.0, 4.0};
  std::vector<double> kernel_theta{0.0, 0.25 * kPi, 0.5 * kPi, 0.75 * kPi,
                                   kPi, 1.25 * kPi, 1.5 * kPi, 1.75 * kPi};
  int bound_samples = 200;
};

/// Parse and validate; throws ConfigError with a readable message.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/*!
 * One output row. The fields experiment..flags are the fixed schema; absent
 * values serialize as explicit nulls. `params` carries experiment-specific
 * coordinates and `message` a diagnostic for failed rows.
 */
struct Record {
  std::string experiment;
  int point = 0;
  std::optional<double> r, phi, t, xi, a;
  std::optional<int> n;
  std::optional<double> re, im, error, kappa;
  std::map<std::string, bool> flags;
  std::map<std::string, double> params;
  std::optional<std::string> message;
};

std::string to_jsonl(const Record& rec);
/// CSV header for a record set (params columns are the union, sorted).
std::string csv_header(const std::vector<Record>& records);
std::string to_csv_row(const Record& rec, const std::vector<Record>& records);

struct RunOptions {
  std::optional<double> tol;
  std::uint64_t seed = 0x5eedULL;
};

struct RunResult {
  std::vector<Record> records;
  // 0 success, 3 numerical tolerance failure (partial results flagged).
  int exit_code = 0;
};

/// Known subcommands: superosc, kernel, evolve, supershift, verify-bounds.
const std::vector<std::string>& experiment_names();

/// Run one experiment; records come back sorted by (experiment, point, n).
RunResult run_experiment(const std::string& name, const ExperimentConfig& cfg,
                         const RunOptions& opts = {});

/// Diagnostic record for a configuration failure.
Record config_error_record(const std::string& experiment, const std::string& message);

}  // namespace abshift
