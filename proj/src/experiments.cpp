#include "esld/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace esld {

namespace {

std::vector<std::string> numbered(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) {
    out.push_back(prefix + std::to_string(i));
  }
  return out;
}

void append(std::vector<std::string>& row, std::span<const double> values) {
  for (double v : values) {
    row.push_back(format_double(v));
  }
}

void append(std::vector<std::string>& header, const std::vector<std::string>& names) {
  header.insert(header.end(), names.begin(), names.end());
}

struct Setup {
  Objective obj;
  VectorFieldPair vf;
  LieBracketField g0;
};

Setup prepare(const ExperimentConfig& cfg) {
  validate(cfg);
  Setup s{build_objective(cfg), build_fields(cfg), {}};
  s.g0 = make_lie_bracket(s.vf);
  return s;
}

// ES trajectory over `periods` periods (or blocks) of T.
Trajectory simulate_for(const Setup& s, const ExperimentConfig& cfg, const DitherPair& d,
                        std::size_t periods) {
  const double horizon = static_cast<double>(periods) * d.period();
  if (cfg.dim() == 1) {
    return simulate_es(s.obj, s.vf, d, cfg.x0, horizon, cfg.integrator);
  }
  return simulate_es(s.obj, s.vf, make_sequential(d, cfg.dim()), cfg.x0, horizon, cfg.integrator);
}

LearningRun simulated_ld(const Trajectory& traj, const ExperimentConfig& cfg, const DitherPair& d) {
  if (cfg.dim() == 1) {
    return extract_simulated_ld(traj, d);
  }
  return extract_simulated_ld(traj, make_sequential(d, cfg.dim()), true);
}

LearningRun recursion_for(const Setup& s, const ExperimentConfig& cfg, const DitherPair& d,
                          std::size_t periods) {
  if (cfg.dim() == 1) {
    std::optional<std::size_t> needles;
    if (cfg.needles > 0) {
      needles = cfg.needles;
    }
    return run_recursion(s.obj, s.vf, s.g0, d, cfg.x0[0], periods, cfg.integrator, needles);
  }
  return run_recursion(s.obj, s.vf, s.g0, make_sequential(d, cfg.dim()), cfg.x0, periods,
                       cfg.integrator);
}

double norm(std::span<const double> x) {
  double sq = 0.0;
  for (double v : x) sq += v * v;
  return std::sqrt(sq);
}

std::string verdict(bool pass) { return pass ? "pass" : "fail"; }

}  // namespace

void CsvReport::add(std::vector<std::string> row) {
  if (row.size() != header.size()) {
    throw std::logic_error("CsvReport: row width " + std::to_string(row.size()) +
                           " does not match header width " + std::to_string(header.size()));
  }
  rows.push_back(std::move(row));
}

void CsvReport::add(double period, std::span<const double> values) {
  std::vector<std::string> row{format_double(period)};
  append(row, values);
  add(std::move(row));
}

void CsvReport::add_diverged(double period) {
  std::vector<std::string> row(header.size(), "diverged");
  row[0] = format_double(period);
  add(std::move(row));
}

void CsvReport::write(std::ostream& out) const {
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out << (i ? "," : "") << cells[i];
    }
    out << '\n';
  };
  line(header);
  for (const auto& row : rows) {
    line(row);
  }
}

void CsvReport::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write '" + path + "'");
  }
  write(out);
}

CsvReport parse_csv(std::istream& in) {
  CsvReport report;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cells.push_back(cell);
    }
    if (first) {
      report.header = std::move(cells);
      first = false;
    } else {
      report.add(std::move(cells));
    }
  }
  return report;
}

const CsvReport& CommandResult::extra(const std::string& suffix) const {
  for (const auto& [name, report] : extras) {
    if (name == suffix) return report;
  }
  throw std::out_of_range("no side table '" + suffix + "'");
}

std::string sibling_path(const std::string& path, const std::string& suffix) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + "." + suffix + ".csv";
  }
  return path.substr(0, dot) + "." + suffix + path.substr(dot);
}

void save_result(const CommandResult& result, const std::string& path) {
  result.main.save(path);
  for (const auto& [suffix, report] : result.extras) {
    report.save(sibling_path(path, suffix));
  }
}

CommandResult cmd_simulate(const ExperimentConfig& cfg) {
  const Setup s = prepare(cfg);
  const std::size_t n = cfg.dim();
  CommandResult out;
  out.main.header = {"T", "k", "t"};
  append(out.main.header, numbered("x", n));
  CsvReport trajectory;
  trajectory.header = {"T", "t"};
  append(trajectory.header, numbered("x", n));

  for (double period : cfg.periods) {
    const DitherPair d = build_dither(cfg, period);
    try {
      const Trajectory traj = simulate_for(s, cfg, d, cfg.periods_for(period));
      const LearningRun ld = simulated_ld(traj, cfg, d);
      for (std::size_t k = 0; k < ld.size(); ++k) {
        std::vector<std::string> row{format_double(period), std::to_string(k),
                                     format_double(ld.time(k))};
        append(row, ld.states[k]);
        out.main.add(std::move(row));
      }
      if (cfg.trajectory_stride > 0) {
        for (std::size_t k = 0; k < traj.size(); k += cfg.trajectory_stride) {
          std::vector<std::string> row{format_double(period), format_double(traj.time(k))};
          append(row, traj.state(k));
          trajectory.add(std::move(row));
        }
      }
    } catch (const DivergenceError&) {
      out.diverged = true;
      out.main.add_diverged(period);
      if (cfg.trajectory_stride > 0) trajectory.add_diverged(period);
    }
  }
  if (cfg.trajectory_stride > 0) {
    out.extras.emplace_back("trajectory", std::move(trajectory));
  }
  return out;
}

CommandResult cmd_compare(const ExperimentConfig& cfg) {
  const Setup s = prepare(cfg);
  const std::size_t n = cfg.dim();
  CommandResult out;
  out.main.header = {"T", "k", "t"};
  append(out.main.header, numbered("x_sim_", n));
  append(out.main.header, numbered("x_rec_", n));
  append(out.main.header, numbered("grad_", n));
  out.main.header.push_back("error");

  CsvReport summary;
  summary.header = {"T",        "report_time",   "error_at_report", "final_sim_norm",
                    "final_rec_norm", "final_error", "agree"};
  CsvReport ratios;
  ratios.header = {"T_coarse", "T_fine", "error_coarse", "error_fine", "ratio", "difference"};

  std::vector<std::optional<double>> report_errors;
  for (double period : cfg.periods) {
    const DitherPair d = build_dither(cfg, period);
    const std::size_t periods = cfg.periods_for(period);
    std::optional<LearningRun> sim;
    try {
      sim = simulated_ld(simulate_for(s, cfg, d, periods), cfg, d);
    } catch (const DivergenceError&) {
    }
    const LearningRun rec = recursion_for(s, cfg, d, periods);
    if (!sim || rec.diverged) {
      out.diverged = true;
    }
    const std::size_t common = sim ? std::min(sim->size(), rec.size()) : 0;
    Vec errors;
    if (sim) {
      LearningRun a = *sim;
      LearningRun b = rec;
      a.states.resize(common);
      b.states.resize(common);
      errors = compare_runs(a, b);
    }
    for (std::size_t k = 0; k < common; ++k) {
      std::vector<std::string> row{format_double(period), std::to_string(k),
                                   format_double(static_cast<double>(k) * period)};
      append(row, sim->states[k]);
      append(row, rec.states[k]);
      const Vec zero(n, 0.0);
      append(row, k == 0 ? std::span<const double>(zero)
                         : std::span<const double>(rec.gradients[k - 1].value));
      row.push_back(format_double(errors[k]));
      out.main.add(std::move(row));
    }
    if (common < periods + 1) {
      out.main.add_diverged(period);
      summary.add_diverged(period);
      report_errors.emplace_back();
      continue;
    }

    std::size_t k_report = common - 1;
    if (cfg.report_time > 0.0) {
      const double q = cfg.report_time / period;
      k_report = static_cast<std::size_t>(std::llround(q));
      if (std::abs(q - std::round(q)) > 1e-9 * std::max(1.0, q) || k_report >= common) {
        throw ConfigError("compare.report_time " + format_double(cfg.report_time) +
                          " is not a period boundary inside the run for T=" +
                          format_double(period));
      }
    }
    const double final_error = errors.back();
    const double row[] = {static_cast<double>(k_report) * period,
                          errors[k_report],
                          norm(sim->states.back()),
                          norm(rec.states.back()),
                          final_error,
                          final_error <= cfg.agree_tol ? 1.0 : 0.0};
    summary.add(period, row);
    report_errors.push_back(errors[k_report]);
  }

  for (std::size_t i = 0; i + 1 < cfg.periods.size(); ++i) {
    if (!report_errors[i] || !report_errors[i + 1]) {
      ratios.add_diverged(cfg.periods[i]);
      continue;
    }
    const double coarse = *report_errors[i];
    const double fine = *report_errors[i + 1];
    const double ratio = fine > 0.0 ? coarse / fine : (coarse == 0.0 ? 1.0 : INFINITY);
    const double row[] = {cfg.periods[i + 1], coarse, fine, ratio, coarse - fine};
    ratios.add(cfg.periods[i], row);
  }
  out.extras.emplace_back("summary", std::move(summary));
  out.extras.emplace_back("ratios", std::move(ratios));
  return out;
}

CommandResult cmd_landscape(const ExperimentConfig& cfg) {
  const Setup s = prepare(cfg);
  if (cfg.dim() != 1) {
    throw ConfigError("landscape needs a one-dimensional objective");
  }
  Vec grid(cfg.landscape_points);
  const double dx = (cfg.landscape_x_max - cfg.landscape_x_min) /
                    static_cast<double>(cfg.landscape_points - 1);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = cfg.landscape_x_min + static_cast<double>(i) * dx;
  }

  CommandResult out;
  out.main.header = {"T", "x", "L", "gradient"};
  CsvReport minima;
  minima.header = {"T", "local_minima", "argmin"};
  for (double period : cfg.periods) {
    const DitherPair d = build_dither(cfg, period);
    try {
      const Landscape l = reconstruct_landscape(s.obj, s.vf, s.g0, d, grid, cfg.integrator);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const double row[] = {l.grid[i], l.values[i], l.gradients[i]};
        out.main.add(period, row);
      }
      const auto lowest = std::min_element(l.values.begin(), l.values.end());
      const double row[] = {static_cast<double>(l.local_minima()),
                            l.grid[static_cast<std::size_t>(lowest - l.values.begin())]};
      minima.add(period, row);
    } catch (const DivergenceError&) {
      out.diverged = true;
      out.main.add_diverged(period);
      minima.add_diverged(period);
    }
  }
  out.extras.emplace_back("minima", std::move(minima));
  return out;
}

NeedleStudy needle_order_study(const Objective& obj, const VectorFieldPair& vf,
                               const DitherPair& d, double x0, double tbar, double alpha,
                               std::span<const double> epsilons, const IntegratorConfig& cfg) {
  const double start[] = {x0};
  const double height[] = {alpha};
  const Excitation base(d);
  const Trajectory nominal = simulate_nominal(obj, vf, base, start, d.period(), cfg);
  NeedleStudy study;
  for (double eps : epsilons) {
    const Excitation needle = with_needle(nominal_of(base), tbar, eps, {alpha});
    const Trajectory perturbed = simulate_es(obj, vf, needle, start, d.period(), cfg);
    const Trajectory v = simulate_variational(obj, vf, base, nominal, tbar, height, eps, cfg);
    const std::size_t offset = nominal.size() - v.size();
    double r = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      const double predicted = nominal(offset + k, 0) + eps * v(k, 0);
      r = std::max(r, std::abs(perturbed(offset + k, 0) - predicted));
    }
    study.epsilons.push_back(eps);
    study.residuals.push_back(r);
  }
  for (std::size_t i = 0; i + 1 < study.residuals.size(); ++i) {
    study.ratios.push_back(study.residuals[i] / study.residuals[i + 1]);
  }
  return study;
}

double stm_semigroup_error(const StmTable& stm, std::size_t triples, std::uint64_t seed) {
  const double t_begin = stm.nominal().t0();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pick(t_begin, t_begin + stm.period());
  double worst = 0.0;
  for (std::size_t i = 0; i < triples; ++i) {
    const double t = pick(rng);
    const double t1 = pick(rng);
    const double t0 = pick(rng);
    const double direct = stm.phi_at(t, t0);
    const double chained = stm.phi_at(t, t1) * stm.phi_at(t1, t0);
    worst = std::max(worst, std::abs(direct - chained) / std::abs(direct));
  }
  return worst;
}

double palindrome_error(const Trajectory& nominal, std::size_t steps_per_period) {
  if (nominal.size() < steps_per_period + 1) {
    throw std::invalid_argument("palindrome_error: nominal shorter than one period");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k <= steps_per_period; ++k) {
    for (std::size_t i = 0; i < nominal.dim(); ++i) {
      worst = std::max(worst, std::abs(nominal(k, i) - nominal(steps_per_period - k, i)));
    }
  }
  return worst;
}

CommandResult cmd_verify(const ExperimentConfig& cfg) {
  const Setup s = prepare(cfg);
  CommandResult out;
  out.main.header = {"T", "check", "measured", "threshold", "pass"};
  auto check = [&out](double period, const std::string& name, double measured,
                      const std::string& threshold, bool pass) {
    out.main.add({format_double(period), name, format_double(measured), threshold, verdict(pass)});
  };

  for (double period : cfg.periods) {
    const DitherPair d = build_dither(cfg, period);
    const AssumptionReport a = verify_assumptions(d);
    check(period, "a1_bound", std::max(a.bound_u1, a.bound_u2), "finite", a.a1);
    check(period, "a2_violation", a.a2_violation, "1e-09", a.a2);
    check(period, "a3_violation", a.a3_violation, "1e-09", a.a3);
    if (cfg.dim() != 1) {
      continue;
    }
    try {
      const Trajectory nominal =
          simulate_nominal(s.obj, s.vf, d, cfg.x0, period, cfg.integrator);
      const StmTable stm = build_stm(s.obj, s.vf, d, nominal);
      const double semigroup = stm_semigroup_error(stm, 1000, 20240611);
      check(period, "stm_semigroup", semigroup, "1e-10", semigroup <= 1e-10);
      const SymmetryReport sym = check_stm_symmetry(stm);
      const double rel = sym.max_phi > 0.0 ? sym.max_violation / sym.max_phi : 0.0;
      check(period, "stm_symmetry", rel, "1e-08", sym.passed);
      const double pal = palindrome_error(nominal, cfg.integrator.steps_per_period);
      check(period, "palindrome", pal, "1e-07", pal <= 1e-7);

      IntegratorConfig fine = cfg.integrator;
      fine.steps_per_period = 8000;
      const double fractions[] = {1e-2, 5e-3, 2.5e-3, 1.25e-3};
      Vec eps;
      for (double f : fractions) eps.push_back(f * period);
      const NeedleStudy study = needle_order_study(s.obj, s.vf, d, cfg.x0[0], 0.1 * period,
                                                   d.amplitude(), eps, fine);
      for (std::size_t i = 0; i < study.ratios.size(); ++i) {
        const double r = study.ratios[i];
        check(period, "needle_order_" + std::to_string(i + 1), r, "[3.5;4.5]",
              r >= 3.5 && r <= 4.5);
      }

      const double limit =
          recovered_gradient(s.obj, s.vf, s.g0, d, cfg.x0[0], cfg.integrator).value[0];
      auto gap = [&](std::size_t needles) {
        return std::abs(recovered_gradient_finite_n(s.obj, s.vf, s.g0, d, cfg.x0[0], needles,
                                                    cfg.integrator)
                            .value[0] -
                        limit);
      };
      const double coarse = gap(10);
      const double fine_gap = gap(640);
      check(period, "riemann_640_vs_10", fine_gap, format_double(coarse / 10.0),
            fine_gap <= coarse / 10.0);
    } catch (const DivergenceError& e) {
      out.diverged = true;
      check(period, "nominal_divergence", e.time(), "none", false);
    }
  }
  return out;
}

}  // namespace esld
