#include "esld/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace esld {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  throw ConfigError(std::string(key) + ": expected " + expected + ", got '" + std::string(value) +
                    "'");
}

double to_double(std::string_view key, std::string_view value) {
  value = trim(value);
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(out)) {
    bad_value(key, value, "a finite number");
  }
  return out;
}

std::size_t to_count(std::string_view key, std::string_view value) {
  value = trim(value);
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    bad_value(key, value, "a non-negative integer");
  }
  return out;
}

Vec to_list(std::string_view key, std::string_view value) {
  Vec out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const auto comma = value.find(',', pos);
    const auto item = value.substr(pos, comma == std::string_view::npos ? value.npos : comma - pos);
    out.push_back(to_double(key, item));
    if (comma == std::string_view::npos) {
      break;
    }
    pos = comma + 1;
  }
  return out;
}

std::string join(const Vec& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ec == std::errc() ? ptr : buf);
}

DitherKind parse_dither_kind(std::string_view s) {
  if (s == "trig") return DitherKind::trig;
  if (s == "square") return DitherKind::square;
  if (s == "sawtooth") return DitherKind::sawtooth;
  bad_value("dither.kind", s, "trig|square|sawtooth");
}

AmplitudeLaw parse_amplitude_law(std::string_view s) {
  if (s == "sqrt_omega") return AmplitudeLaw::sqrt_omega_scaled;
  if (s == "unit") return AmplitudeLaw::unit;
  bad_value("dither.amplitude", s, "sqrt_omega|unit");
}

Method parse_method(std::string_view s) {
  if (s == "rk4") return Method::rk4;
  if (s == "euler") return Method::euler;
  bad_value("integrator.method", s, "rk4|euler");
}

std::size_t ExperimentConfig::dim() const {
  if (objective == "constant") return objective_dim;
  if (objective == "f3") return 2;
  return 1;
}

std::size_t ExperimentConfig::periods_for(double period) const {
  if (run_horizon <= 0.0) {
    return run_periods;
  }
  const double q = run_horizon / period;
  const double n = std::round(q);
  if (n < 1.0 || std::abs(q - n) > 1e-9 * n) {
    throw ConfigError("run.horizon " + format_double(run_horizon) +
                      " is not a whole number of periods of " + format_double(period));
  }
  return static_cast<std::size_t>(n);
}

void set_value(ExperimentConfig& cfg, std::string_view key, std::string_view raw) {
  const std::string_view value = trim(raw);
  if (key == "objective.name") {
    cfg.objective = std::string(value);
  } else if (key == "objective.dim") {
    cfg.objective_dim = to_count(key, value);
  } else if (key == "objective.value") {
    cfg.objective_value = to_double(key, value);
  } else if (key == "objective.f2.beta") {
    cfg.f2.beta = to_double(key, value);
  } else if (key == "objective.f2.center") {
    cfg.f2.center = to_double(key, value);
  } else if (key == "objective.f2.width") {
    cfg.f2.width = to_double(key, value);
  } else if (key == "fields.name") {
    cfg.fields = std::string(value);
  } else if (key == "fields.a") {
    cfg.fields_a = to_double(key, value);
  } else if (key == "dither.kind") {
    cfg.dither_kind = parse_dither_kind(value);
  } else if (key == "dither.period") {
    cfg.periods = to_list(key, value);
  } else if (key == "dither.needles") {
    cfg.needles = to_count(key, value);
  } else if (key == "dither.amplitude") {
    cfg.amplitude = parse_amplitude_law(value);
  } else if (key == "dither.u1_offset") {
    cfg.u1_offset = to_double(key, value);
  } else if (key == "dither.u2_offset") {
    cfg.u2_offset = to_double(key, value);
  } else if (key == "x0") {
    cfg.x0 = to_list(key, value);
  } else if (key == "run.periods") {
    cfg.run_periods = to_count(key, value);
  } else if (key == "run.horizon") {
    cfg.run_horizon = to_double(key, value);
  } else if (key == "integrator.steps_per_period") {
    cfg.integrator.steps_per_period = to_count(key, value);
  } else if (key == "integrator.method") {
    cfg.integrator.method = parse_method(value);
  } else if (key == "output.path") {
    cfg.output_path = std::string(value);
  } else if (key == "output.trajectory_stride") {
    cfg.trajectory_stride = to_count(key, value);
  } else if (key == "landscape.x_min") {
    cfg.landscape_x_min = to_double(key, value);
  } else if (key == "landscape.x_max") {
    cfg.landscape_x_max = to_double(key, value);
  } else if (key == "landscape.points") {
    cfg.landscape_points = to_count(key, value);
  } else if (key == "compare.report_time") {
    cfg.report_time = to_double(key, value);
  } else if (key == "compare.agree_tol") {
    cfg.agree_tol = to_double(key, value);
  } else {
    throw ConfigError("unknown key '" + std::string(key) + "'");
  }
}

void apply_override(ExperimentConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  }
  set_value(cfg, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    view = trim(view);
    if (view.empty()) {
      continue;
    }
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(number) + ": expected key = value");
    }
    try {
      set_value(cfg, trim(view.substr(0, eq)), view.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig parse_config_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config '" + path + "'");
  }
  return parse_config(in);
}

void write_config(std::ostream& out, const ExperimentConfig& cfg) {
  out << "objective.name = " << cfg.objective << '\n'
      << "objective.dim = " << cfg.objective_dim << '\n'
      << "objective.value = " << format_double(cfg.objective_value) << '\n'
      << "objective.f2.beta = " << format_double(cfg.f2.beta) << '\n'
      << "objective.f2.center = " << format_double(cfg.f2.center) << '\n'
      << "objective.f2.width = " << format_double(cfg.f2.width) << '\n'
      << "fields.name = " << cfg.fields << '\n'
      << "fields.a = " << format_double(cfg.fields_a) << '\n'
      << "dither.kind = " << to_string(cfg.dither_kind) << '\n'
      << "dither.period = " << join(cfg.periods) << '\n'
      << "dither.needles = " << cfg.needles << '\n'
      << "dither.amplitude = " << to_string(cfg.amplitude) << '\n'
      << "dither.u1_offset = " << format_double(cfg.u1_offset) << '\n'
      << "dither.u2_offset = " << format_double(cfg.u2_offset) << '\n'
      << "x0 = " << join(cfg.x0) << '\n'
      << "run.periods = " << cfg.run_periods << '\n'
      << "run.horizon = " << format_double(cfg.run_horizon) << '\n'
      << "integrator.steps_per_period = " << cfg.integrator.steps_per_period << '\n'
      << "integrator.method = " << to_string(cfg.integrator.method) << '\n'
      << "output.path = " << cfg.output_path << '\n'
      << "output.trajectory_stride = " << cfg.trajectory_stride << '\n'
      << "landscape.x_min = " << format_double(cfg.landscape_x_min) << '\n'
      << "landscape.x_max = " << format_double(cfg.landscape_x_max) << '\n'
      << "landscape.points = " << cfg.landscape_points << '\n'
      << "compare.report_time = " << format_double(cfg.report_time) << '\n'
      << "compare.agree_tol = " << format_double(cfg.agree_tol) << '\n';
}

std::string config_text(const ExperimentConfig& cfg) {
  std::ostringstream out;
  write_config(out, cfg);
  return out.str();
}

void validate(const ExperimentConfig& cfg) {
  static const char* const objectives[] = {"f1", "f2", "f3", "constant"};
  if (std::find(std::begin(objectives), std::end(objectives), cfg.objective) ==
      std::end(objectives)) {
    throw ConfigError("objective.name: unknown objective '" + cfg.objective + "'");
  }
  if (cfg.fields != "example" && cfg.fields != "unit" && cfg.fields != "sincos") {
    throw ConfigError("fields.name: unknown field pair '" + cfg.fields + "'");
  }
  if (cfg.dim() == 0) {
    throw ConfigError("objective.dim must be positive");
  }
  if (cfg.x0.size() != cfg.dim()) {
    throw ConfigError("x0 has " + std::to_string(cfg.x0.size()) + " components, objective needs " +
                      std::to_string(cfg.dim()));
  }
  if (cfg.periods.empty()) {
    throw ConfigError("dither.period: at least one period required");
  }
  for (double t : cfg.periods) {
    if (!(t > 0.0)) {
      throw ConfigError("dither.period: periods must be positive");
    }
  }
  if (cfg.run_horizon < 0.0) {
    throw ConfigError("run.horizon must be non-negative");
  }
  if (cfg.run_horizon == 0.0 && cfg.run_periods < 1) {
    throw ConfigError("run.periods must be at least 1");
  }
  for (double t : cfg.periods) {
    cfg.periods_for(t);
  }
  const std::size_t m = cfg.integrator.steps_per_period;
  if (m < 4 || m % 4 != 0) {
    throw ConfigError("integrator.steps_per_period must be a positive multiple of 4");
  }
  if (cfg.f2.width <= 0.0) {
    throw ConfigError("objective.f2.width must be positive");
  }
  if (cfg.landscape_points < 2) {
    throw ConfigError("landscape.points must be at least 2");
  }
  if (!(cfg.landscape_x_max > cfg.landscape_x_min)) {
    throw ConfigError("landscape.x_max must exceed landscape.x_min");
  }
  if (cfg.report_time < 0.0 || cfg.agree_tol < 0.0) {
    throw ConfigError("compare settings must be non-negative");
  }
}

Objective build_objective(const ExperimentConfig& cfg) {
  if (cfg.objective == "f1") return make_f1();
  if (cfg.objective == "f2") return make_f2(cfg.f2);
  if (cfg.objective == "f3") return make_f3();
  if (cfg.objective == "constant") return make_constant(cfg.objective_dim, cfg.objective_value);
  throw ConfigError("objective.name: unknown objective '" + cfg.objective + "'");
}

VectorFieldPair build_fields(const ExperimentConfig& cfg) {
  if (cfg.fields == "example") return make_example_fields(cfg.fields_a);
  if (cfg.fields == "unit") return make_unit_fields();
  if (cfg.fields == "sincos") return make_sincos_fields();
  throw ConfigError("fields.name: unknown field pair '" + cfg.fields + "'");
}

DitherPair build_dither(const ExperimentConfig& cfg, double period) {
  DitherPair d = make_dither(cfg.dither_kind, period, cfg.amplitude);
  if (cfg.u1_offset != 0.0 || cfg.u2_offset != 0.0) {
    return d.with_offsets(cfg.u1_offset, cfg.u2_offset);
  }
  return d;
}

}  // namespace esld
