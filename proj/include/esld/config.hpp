#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "esld/dither.hpp"
#include "esld/objective.hpp"
#include "esld/ode.hpp"

namespace esld {

/// Unknown key, malformed value or inconsistent setting.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One experiment. Text form is flat `key = value` lines with dotted keys;
/// lists are comma separated and `#` starts a comment.
struct ExperimentConfig {
  std::string objective = "f1";  // f1 | f2 | f3 | constant
  std::size_t objective_dim = 1;  // constant only
  double objective_value = 1.0;   // constant only
  F2Params f2;

  std::string fields = "example";  // example | unit | sincos
  double fields_a = 5.0;

  DitherKind dither_kind = DitherKind::trig;
  std::vector<double> periods{0.01};
  std::size_t needles = 0;  // 0: limit form
  AmplitudeLaw amplitude = AmplitudeLaw::sqrt_omega_scaled;
  double u1_offset = 0.0;
  double u2_offset = 0.0;

  Vec x0{1.8};
  std::size_t run_periods = 100;
  double run_horizon = 0.0;  // > 0 overrides run_periods

  IntegratorConfig integrator;

  std::string output_path;
  std::size_t trajectory_stride = 100;  // 0: no trajectory file

  double landscape_x_min = -2.0;
  double landscape_x_max = 2.0;
  std::size_t landscape_points = 81;

  double report_time = 0.0;  // 0: last common time
  double agree_tol = 0.1;

  bool operator==(const ExperimentConfig&) const = default;

  std::size_t dim() const;
  /// Periods (or sequential blocks) run for dither period T.
  std::size_t periods_for(double period) const;
};

/// Sets one key from its text value.
void set_value(ExperimentConfig& cfg, std::string_view key, std::string_view value);
/// "key=value" as given on the command line.
void apply_override(ExperimentConfig& cfg, std::string_view assignment);

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_text(std::string_view text);
ExperimentConfig load_config(const std::string& path);

void write_config(std::ostream& out, const ExperimentConfig& cfg);
std::string config_text(const ExperimentConfig& cfg);

/// Throws ConfigError when names do not resolve or values are out of range.
void validate(const ExperimentConfig& cfg);

Objective build_objective(const ExperimentConfig& cfg);
VectorFieldPair build_fields(const ExperimentConfig& cfg);
DitherPair build_dither(const ExperimentConfig& cfg, double period);

DitherKind parse_dither_kind(std::string_view s);
AmplitudeLaw parse_amplitude_law(std::string_view s);
Method parse_method(std::string_view s);

/// Shortest text that parses back to the same double.
std::string format_double(double v);

}  // namespace esld
