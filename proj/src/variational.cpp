#include "esld/variational.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace esld {

StmTable::StmTable(Trajectory nominal, GridSamples a, std::vector<double> cumulative, double period,
                   std::size_t steps_per_period, std::size_t component)
    : nominal_(std::move(nominal)),
      a_(std::move(a)),
      cumulative_(std::move(cumulative)),
      period_(period),
      steps_per_period_(steps_per_period),
      component_(component) {}

double StmTable::phi(std::size_t k, std::size_t k0) const {
  return std::exp(cumulative_.at(k) - cumulative_.at(k0));
}

double StmTable::position(double t) const { return (t - nominal_.t0()) / nominal_.dt(); }

double StmTable::phi_at(double t, double t0) const {
  const double dt = nominal_.dt();
  return std::exp(interpolate_cumulative(cumulative_, a_, dt, position(t)) -
                  interpolate_cumulative(cumulative_, a_, dt, position(t0)));
}

StmTable build_stm(const Objective& obj, const VectorFieldPair& vf, const DitherPair& d,
                   const Trajectory& nominal, std::size_t component) {
  if (component >= nominal.dim() || obj.dim != nominal.dim()) {
    throw std::invalid_argument("build_stm: component or dimension mismatch");
  }
  const std::size_t per_period = whole_steps(d.period(), nominal.dt(), "build_stm grid");

  const std::size_t n = nominal.size();
  GridSamples a(n);
  std::vector<double> grad(nominal.dim());
  for (std::size_t k = 0; k < n; ++k) {
    const auto x = nominal.state(k);
    obj.grad(x, grad);
    const double weight = vf.dg1dF(obj(x)) * grad[component];
    const double t = nominal.time(k);
    a.right[k] = d.u1(t, Side::right) * weight;
    a.point[k] = d.u1(t, Side::point) * weight;
    a.left[k] = d.u1(t, Side::left) * weight;
  }
  std::vector<double> cumulative = cumulative_simpson(a, nominal.dt());
  return StmTable(nominal, std::move(a), std::move(cumulative), d.period(), per_period, component);
}

SymmetryReport check_stm_symmetry(const StmTable& stm, std::size_t samples_per_axis) {
  const std::size_t m = stm.steps_per_period();
  if (stm.size() < m + 1) {
    throw std::invalid_argument("check_stm_symmetry: table shorter than one period");
  }
  const std::size_t stride = std::max<std::size_t>(1, m / std::max<std::size_t>(1, samples_per_axis - 1));
  SymmetryReport r;
  for (std::size_t k = 0; k <= m; k += stride) {
    for (std::size_t k0 = 0; k0 <= m; k0 += stride) {
      const double direct = stm.phi(k, k0);
      const double mirrored = stm.phi(m - k, m - k0);
      r.max_violation = std::max(r.max_violation, std::abs(direct - mirrored));
      r.max_phi = std::max({r.max_phi, std::abs(direct), std::abs(mirrored)});
      ++r.pairs;
    }
  }
  r.passed = std::isfinite(r.max_violation) && r.max_violation <= r.tolerance * r.max_phi;
  return r;
}

}  // namespace esld
