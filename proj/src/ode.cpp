#include "esld/ode.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace esld {

namespace {

constexpr double kGridTol = 1e-9;

bool in_window(double t, double begin, double end, Side side, double tol) {
  if (side == Side::left) {
    return t > begin + tol && t <= end + tol;
  }
  return t >= begin - tol && t < end - tol;
}

void check_state(std::span<const double> x, double t) {
  for (double v : x) {
    if (!std::isfinite(v) || std::abs(v) > kOverflowGuard) {
      throw DivergenceError(t);
    }
  }
}

}  // namespace

std::string to_string(Method method) { return method == Method::rk4 ? "rk4" : "euler"; }

Trajectory::Trajectory(double t0, double dt, std::size_t dim) : t0_(t0), dt_(dt), dim_(dim) {
  if (!(dt > 0.0) || dim == 0) {
    throw std::invalid_argument("trajectory needs dt > 0 and dim > 0");
  }
}

void Trajectory::push_back(std::span<const double> x) {
  if (x.size() != dim_) {
    throw std::invalid_argument("trajectory: state dimension mismatch");
  }
  data_.insert(data_.end(), x.begin(), x.end());
}

Trajectory Trajectory::slice(std::size_t first, std::size_t last) const {
  if (first > last || last >= size()) {
    throw std::out_of_range("trajectory slice out of range");
  }
  Trajectory out(time(first), dt_, dim_);
  out.data_.assign(data_.begin() + static_cast<std::ptrdiff_t>(first * dim_),
                   data_.begin() + static_cast<std::ptrdiff_t>((last + 1) * dim_));
  return out;
}

DivergenceError::DivergenceError(double time)
    : std::runtime_error([time] {
        std::ostringstream os;
        os << "state diverged (overflow guard " << kOverflowGuard << ") at t=" << time;
        return os.str();
      }()),
      time_(time) {}

Excitation::Excitation(std::size_t dim, double period, Channel u1, Channel u2)
    : dim(dim), period(period), u1(std::move(u1)), u2(std::move(u2)) {}

Excitation::Excitation(const DitherPair& d)
    : dim(1),
      period(d.period()),
      u1([d](std::size_t, double t, Side s) { return d.u1(t, s); }),
      u2([d](std::size_t, double t, Side s) { return d.u2(t, s); }) {}

Excitation::Excitation(const SequentialDither& d)
    : dim(d.dim()),
      period(d.period()),
      u1([d](std::size_t i, double t, Side s) { return d.u1(i, t, s); }),
      u2([d](std::size_t i, double t, Side s) { return d.u2(i, t, s); }) {}

Excitation::Excitation(const SampledDither& d)
    : dim(1),
      period(d.base().period()),
      u1([d](std::size_t, double t, Side s) { return d.base().u1(t, s); }),
      u2([d](std::size_t, double t, Side s) { return d.value(t, s); }) {}

Excitation nominal_of(const Excitation& e) {
  return Excitation(e.dim, e.period, e.u1, [](std::size_t, double, Side) { return 0.0; });
}

Excitation with_needle(const Excitation& e, double begin, double width, std::vector<double> alpha) {
  if (alpha.size() != e.dim) {
    throw std::invalid_argument("with_needle: alpha dimension mismatch");
  }
  if (!(width > 0.0)) {
    throw std::invalid_argument("with_needle: width must be positive");
  }
  const double tol = kGridTol * e.period;
  return Excitation(e.dim, e.period, e.u1,
                    [base = e.u2, alpha = std::move(alpha), begin, end = begin + width, tol](
                        std::size_t i, double t, Side s) {
                      return in_window(t, begin, end, s, tol) ? alpha[i] : base(i, t, s);
                    });
}

std::size_t whole_steps(double span, double dt, const char* what) {
  const double q = span / dt;
  const double n = std::round(q);
  if (!(n >= 1.0) || std::abs(q - n) > kGridTol * std::max(1.0, n)) {
    std::ostringstream os;
    os << what << ": " << span << " is not a positive multiple of the step " << dt;
    throw std::invalid_argument(os.str());
  }
  return static_cast<std::size_t>(n);
}

Trajectory integrate(const Rhs& rhs, std::span<const double> x0, double t0, double dt,
                     std::size_t steps, Method method) {
  const std::size_t n = x0.size();
  Trajectory traj(t0, dt, n);
  std::vector<double> x(x0.begin(), x0.end());
  check_state(x, t0);
  traj.push_back(x);

  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    const double t_next = t0 + static_cast<double>(k + 1) * dt;
    if (method == Method::euler) {
      rhs(t, Side::right, x, k1);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += dt * k1[i];
      }
    } else {
      const double mid = 0.5 * (t + t_next);
      rhs(t, Side::right, x, k1);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
      rhs(mid, Side::point, tmp, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
      rhs(mid, Side::point, tmp, k3);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
      rhs(t_next, Side::left, tmp, k4);
      for (std::size_t i = 0; i < n; ++i) {
        x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      }
    }
    check_state(x, t_next);
    traj.push_back(x);
  }
  return traj;
}

Trajectory simulate_es(const Objective& obj, const VectorFieldPair& vf, const Excitation& d,
                       std::span<const double> x0, double horizon, const IntegratorConfig& cfg,
                       double t0) {
  if (x0.size() != d.dim || obj.dim != d.dim) {
    throw std::invalid_argument("simulate_es: x0, objective and dither dimensions differ");
  }
  if (cfg.steps_per_period == 0) {
    throw std::invalid_argument("simulate_es: steps_per_period must be positive");
  }
  const double dt = d.period / static_cast<double>(cfg.steps_per_period);
  const std::size_t steps = whole_steps(horizon, dt, "simulate_es horizon");
  const std::size_t n = d.dim;
  Rhs rhs = [&](double t, Side side, std::span<const double> x, std::span<double> dx) {
    const double f = obj(x);
    const double a = vf.g1(f);
    const double b = vf.g2(f);
    for (std::size_t i = 0; i < n; ++i) {
      dx[i] = a * d.u1(i, t, side) + b * d.u2(i, t, side);
    }
  };
  return integrate(rhs, x0, t0, dt, steps, cfg.method);
}

Trajectory simulate_nominal(const Objective& obj, const VectorFieldPair& vf, const Excitation& d,
                            std::span<const double> x0, double horizon,
                            const IntegratorConfig& cfg, double t0) {
  return simulate_es(obj, vf, nominal_of(d), x0, horizon, cfg, t0);
}

Trajectory simulate_variational(const Objective& obj, const VectorFieldPair& vf,
                                const Excitation& d, const Trajectory& nominal, double tbar,
                                std::span<const double> alpha, double epsilon,
                                const IntegratorConfig& cfg) {
  const std::size_t n = nominal.dim();
  if (alpha.size() != n || d.dim != n) {
    throw std::invalid_argument("simulate_variational: dimension mismatch");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("simulate_variational: epsilon must be positive");
  }
  const std::size_t start =
      whole_steps(tbar + epsilon - nominal.t0(), nominal.dt(), "simulate_variational start");
  if (start >= nominal.size()) {
    throw std::invalid_argument("simulate_variational: tbar + epsilon beyond the nominal horizon");
  }

  // Augmented state (x*, v); the x* half repeats the nominal computation exactly.
  std::vector<double> z(2 * n);
  const auto xs = nominal.state(start);
  const double g2_start = vf.g2(obj(xs));
  for (std::size_t i = 0; i < n; ++i) {
    z[i] = xs[i];
    z[n + i] = g2_start * alpha[i];
  }
  std::vector<double> grad(n);
  Rhs rhs = [&](double t, Side side, std::span<const double> s, std::span<double> ds) {
    const auto x = s.first(n);
    const auto v = s.subspan(n);
    const double f = obj(x);
    obj.grad(x, grad);
    const double a = vf.g1(f);
    double gv = 0.0;
    for (std::size_t i = 0; i < n; ++i) gv += grad[i] * v[i];
    const double coupling = vf.dg1dF(f) * gv;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = d.u1(i, t, side);
      ds[i] = a * u;
      ds[n + i] = u * coupling;
    }
  };
  const std::size_t steps = nominal.size() - 1 - start;
  const Trajectory joint = integrate(rhs, z, nominal.time(start), nominal.dt(), steps, cfg.method);

  Trajectory v(joint.t0(), joint.dt(), n);
  for (std::size_t k = 0; k < joint.size(); ++k) {
    v.push_back(joint.state(k).subspan(n));
  }
  return v;
}

}  // namespace esld
