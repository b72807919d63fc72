#include "esld/learning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "esld/quadrature.hpp"
#include "esld/variational.hpp"

namespace esld {

namespace {

void require_nested_grid(const IntegratorConfig& cfg) {
  if (cfg.steps_per_period == 0 || cfg.steps_per_period % 4 != 0) {
    throw std::invalid_argument(
        "steps_per_period must be a positive multiple of 4 (odd node count on [0, T/2])");
  }
}

void require_scalar(const Objective& obj) {
  if (obj.dim != 1) {
    throw std::invalid_argument("scalar learning dynamics need a 1-D objective");
  }
}

// h(tau) = dF/dx_c(x*) Phi(start, tau) u1(tau) g0(F(x*)) on the first half
// period of a block nominal.
GridSamples half_period_integrand(const Objective& obj, const LieBracketField& g0,
                                  const DitherPair& d, const StmTable& stm) {
  const Trajectory& nominal = stm.nominal();
  const std::size_t half = stm.steps_per_period() / 2;
  const auto cumulative = stm.cumulative();
  GridSamples h(half + 1);
  std::vector<double> grad(nominal.dim());
  for (std::size_t k = 0; k <= half; ++k) {
    const auto x = nominal.state(k);
    obj.grad(x, grad);
    const double weight =
        grad[stm.component()] * std::exp(cumulative[0] - cumulative[k]) * g0(obj(x));
    const double tau = static_cast<double>(k) * nominal.dt();
    h.right[k] = d.u1(tau, Side::right) * weight;
    h.point[k] = d.u1(tau, Side::point) * weight;
    h.left[k] = d.u1(tau, Side::left) * weight;
  }
  return h;
}

double nested_limit(const GridSamples& h, const DitherPair& d, double dt) {
  const std::size_t half = h.size() - 1;
  // Both limits j and half - j share parity, so the difference of the parity
  // running integrals is composite Simpson over [j, half - j], oriented.
  const std::vector<double> running = parity_cumulative(h, dt);
  GridSamples outer(half + 1);
  for (std::size_t j = 0; j <= half; ++j) {
    const double inner = running[half - j] - running[j];
    const double t = static_cast<double>(j) * dt;
    outer.right[j] = d.u2(t, Side::right) * inner;
    outer.point[j] = d.u2(t, Side::point) * inner;
    outer.left[j] = d.u2(t, Side::left) * inner;
  }
  return simpson(outer, 0, half, dt);
}

double needle_sum(const GridSamples& h, const DitherPair& d, double dt, std::size_t needles) {
  const auto half = static_cast<double>(h.size() - 1);
  const std::vector<double> running = cumulative_simpson(h, dt);
  const double eps = d.period() / static_cast<double>(2 * needles);
  double sum = 0.0;
  for (std::size_t i = 1; i <= needles; ++i) {
    const double t = static_cast<double>(i) * eps;
    const double lower = t / dt;
    const double inner = interpolate_cumulative(running, h, dt, half - lower) -
                         interpolate_cumulative(running, h, dt, lower);
    sum += d.u2(t) * inner;
  }
  return eps * sum;
}

// Recovered step of coordinate `component` over one block whose nominal path
// (one period, dither active in `component`) is given.
double block_step(const Objective& obj, const VectorFieldPair& vf, const LieBracketField& g0,
                  const DitherPair& d, const Trajectory& block, std::size_t component,
                  std::optional<std::size_t> needles) {
  const StmTable stm = build_stm(obj, vf, d, block, component);
  if (stm.size() != stm.steps_per_period() + 1) {
    throw std::invalid_argument("block nominal must span exactly one period");
  }
  const GridSamples h = half_period_integrand(obj, g0, d, stm);
  if (needles) {
    if (*needles == 0) {
      throw std::invalid_argument("needle count must be positive");
    }
    return needle_sum(h, d, block.dt(), *needles);
  }
  return nested_limit(h, d, block.dt());
}

RecoveredGradient scalar_step(const Objective& obj, const VectorFieldPair& vf,
                              const LieBracketField& g0, const DitherPair& d, double x_k,
                              const IntegratorConfig& cfg, std::optional<std::size_t> needles) {
  require_scalar(obj);
  require_nested_grid(cfg);
  const double x0[] = {x_k};
  const Trajectory nominal = simulate_nominal(obj, vf, d, x0, d.period(), cfg);
  RecoveredGradient g;
  g.value = {block_step(obj, vf, g0, d, nominal, 0, needles)};
  g.residual_order = d.period() * d.period();
  g.needles = needles;
  return g;
}

bool finite_state(const Vec& x) {
  return std::all_of(x.begin(), x.end(),
                     [](double v) { return std::isfinite(v) && std::abs(v) <= kOverflowGuard; });
}

LearningRun sample_every(const Trajectory& traj, double interval) {
  const std::size_t stride = whole_steps(interval, traj.dt(), "LD sampling interval");
  if ((traj.size() - 1) % stride != 0) {
    throw std::invalid_argument("trajectory horizon is not a multiple of the sampling period");
  }
  LearningRun run;
  run.mode = RunMode::simulated;
  run.step_time = interval;
  for (std::size_t k = 0; k < traj.size(); k += stride) {
    const auto x = traj.state(k);
    run.states.emplace_back(x.begin(), x.end());
  }
  return run;
}

}  // namespace

std::size_t Landscape::local_minima() const {
  std::size_t count = 0;
  int last = 0;
  for (double g : gradients) {
    const int s = (g > 0.0) - (g < 0.0);
    if (s == 0) {
      continue;
    }
    if (last > 0 && s < 0) {
      ++count;
    }
    last = s;
  }
  return count;
}

RecoveredGradient recovered_gradient_finite_n(const Objective& obj, const VectorFieldPair& vf,
                                              const LieBracketField& g0, const DitherPair& d,
                                              double x_k, std::size_t needles,
                                              const IntegratorConfig& cfg) {
  return scalar_step(obj, vf, g0, d, x_k, cfg, needles);
}

RecoveredGradient recovered_gradient(const Objective& obj, const VectorFieldPair& vf,
                                     const LieBracketField& g0, const DitherPair& d, double x_k,
                                     const IntegratorConfig& cfg) {
  return scalar_step(obj, vf, g0, d, x_k, cfg, std::nullopt);
}

LearningRun run_recursion(const Objective& obj, const VectorFieldPair& vf,
                          const LieBracketField& g0, const DitherPair& d, double x0,
                          std::size_t periods, const IntegratorConfig& cfg,
                          std::optional<std::size_t> needles) {
  LearningRun run;
  run.mode = RunMode::recursion;
  run.step_time = d.period();
  run.states.push_back({x0});
  for (std::size_t k = 0; k < periods; ++k) {
    const double x = run.states.back()[0];
    RecoveredGradient g;
    try {
      g = scalar_step(obj, vf, g0, d, x, cfg, needles);
    } catch (const DivergenceError& e) {
      run.diverged = true;
      run.error = e.what();
      break;
    }
    Vec next = {x + g.value[0]};
    run.gradients.push_back(std::move(g));
    if (!finite_state(next)) {
      run.diverged = true;
      run.error = "recursion left the overflow guard";
      break;
    }
    run.states.push_back(std::move(next));
  }
  return run;
}

LearningRun run_recursion(const Objective& obj, const VectorFieldPair& vf,
                          const LieBracketField& g0, const SequentialDither& sd,
                          std::span<const double> x0, std::size_t blocks,
                          const IntegratorConfig& cfg) {
  require_nested_grid(cfg);
  if (x0.size() != sd.dim() || obj.dim != sd.dim()) {
    throw std::invalid_argument("run_recursion: dimension mismatch");
  }
  const double period = sd.period();
  LearningRun run;
  run.mode = RunMode::recursion;
  run.step_time = period;
  run.states.emplace_back(x0.begin(), x0.end());
  for (std::size_t k = 0; k < blocks; ++k) {
    const std::size_t active = k % sd.dim();
    const Vec x = run.states.back();
    RecoveredGradient g;
    g.value.assign(sd.dim(), 0.0);
    g.residual_order = period * period;
    try {
      const Trajectory nominal = simulate_nominal(obj, vf, sd, x, period, cfg,
                                                  static_cast<double>(active) * period);
      g.value[active] = block_step(obj, vf, g0, sd.base(), nominal, active, std::nullopt);
    } catch (const DivergenceError& e) {
      run.diverged = true;
      run.error = e.what();
      break;
    }
    Vec next = x;
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] += g.value[i];
    }
    run.gradients.push_back(std::move(g));
    if (!finite_state(next)) {
      run.diverged = true;
      run.error = "recursion left the overflow guard";
      break;
    }
    run.states.push_back(std::move(next));
  }
  return run;
}

LearningRun extract_simulated_ld(const Trajectory& traj, const DitherPair& d) {
  return sample_every(traj, d.period());
}

LearningRun extract_simulated_ld(const Trajectory& traj, const SequentialDither& d,
                                 bool per_block) {
  return sample_every(traj, per_block ? d.period() : d.cycle());
}

Landscape reconstruct_landscape(const Objective& obj, const VectorFieldPair& vf,
                                const LieBracketField& g0, const DitherPair& d,
                                std::span<const double> grid, const IntegratorConfig& cfg) {
  if (grid.size() < 2) {
    throw std::invalid_argument("reconstruct_landscape: grid needs at least two points");
  }
  const double dx = grid[1] - grid[0];
  if (!(dx > 0.0)) {
    throw std::invalid_argument("reconstruct_landscape: grid must be ascending");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs((grid[i] - grid[i - 1]) - dx) > 1e-9 * std::max(1.0, std::abs(dx))) {
      throw std::invalid_argument("reconstruct_landscape: grid must be uniform");
    }
  }

  Landscape out;
  out.grid.assign(grid.begin(), grid.end());
  out.omega = d.omega();
  out.gradients.reserve(grid.size());
  for (double x : grid) {
    out.gradients.push_back(recovered_gradient(obj, vf, g0, d, x, cfg).value[0]);
  }
  out.values.assign(grid.size(), 0.0);
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    out.values[i + 1] = out.values[i] - out.gradients[i] * dx;
  }
  const auto [lo, hi] = std::minmax_element(out.values.begin(), out.values.end());
  const double low = *lo;
  const double range = *hi - *lo;
  for (double& v : out.values) {
    v = range > 0.0 ? (v - low) / range : 0.0;
  }
  return out;
}

RecoveredGradient recovered_gradient_multidim(const Objective& obj, const VectorFieldPair& vf,
                                              const LieBracketField& g0,
                                              const SequentialDither& sd,
                                              std::span<const double> x_k, std::size_t ell,
                                              const IntegratorConfig& cfg) {
  require_nested_grid(cfg);
  if (ell == 0 || ell > sd.dim()) {
    throw std::invalid_argument("recovered_gradient_multidim: ell must be in 1..n");
  }
  if (x_k.size() != sd.dim() || obj.dim != sd.dim()) {
    throw std::invalid_argument("recovered_gradient_multidim: dimension mismatch");
  }
  const double period = sd.period();
  const Trajectory nominal =
      simulate_nominal(obj, vf, sd, x_k, static_cast<double>(ell) * period, cfg);
  const std::size_t m = cfg.steps_per_period;
  RecoveredGradient g;
  g.value.assign(sd.dim(), 0.0);
  for (std::size_t i = 0; i < ell; ++i) {
    g.value[i] = block_step(obj, vf, g0, sd.base(), nominal.slice(i * m, (i + 1) * m), i,
                            std::nullopt);
  }
  const double span = static_cast<double>(ell) * period;
  g.residual_order = span * span;
  return g;
}

Vec compare_runs(const LearningRun& a, const LearningRun& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("compare_runs: runs differ in length");
  }
  Vec out;
  out.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a.states[k].size() != b.states[k].size()) {
      throw std::invalid_argument("compare_runs: runs differ in dimension");
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < a.states[k].size(); ++i) {
      const double e = a.states[k][i] - b.states[k][i];
      sq += e * e;
    }
    out.push_back(std::sqrt(sq));
  }
  return out;
}

}  // namespace esld
