#include "esld/dither.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace esld {

namespace {

// Instants closer than this (in units of the period or needle width) to a
// boundary are treated as lying on it.
constexpr double kSnap = 1e-9;

double reduce_phase(double t, double period, Side side) {
  const double q = t / period;
  const double p = q - std::floor(q);
  if (p < kSnap || p > 1.0 - kSnap) {
    return side == Side::left ? 1.0 : 0.0;
  }
  return p;
}

// Value of a signal that jumps from `before` to `after` at a breakpoint.
double jump_value(double before, double after, Side side) {
  switch (side) {
    case Side::left:
      return before;
    case Side::right:
      return after;
    case Side::point:
      break;
  }
  return 0.5 * (before + after);
}

bool near(double p, double b) { return std::abs(p - b) < kSnap; }

double square_sin(double p, Side side) {
  if (p == 0.0 || p == 1.0) {
    return jump_value(-1.0, 1.0, side);
  }
  if (near(p, 0.5)) {
    return jump_value(1.0, -1.0, side);
  }
  return p < 0.5 ? 1.0 : -1.0;
}

double square_cos(double p, Side side) {
  if (near(p, 0.25)) {
    return jump_value(1.0, -1.0, side);
  }
  if (near(p, 0.75)) {
    return jump_value(-1.0, 1.0, side);
  }
  return (p < 0.25 || p > 0.75) ? 1.0 : -1.0;
}

double sawtooth_odd(double p, Side side) {
  if (p == 0.0 || p == 1.0) {
    return jump_value(-1.0, 1.0, side);
  }
  return 1.0 - 2.0 * p;
}

double sawtooth_half_antisymmetric(double p, Side) {
  return p <= 0.5 ? 1.0 - 4.0 * p : 4.0 * p - 3.0;
}

std::size_t wrap(long long index, std::size_t count) {
  const auto n = static_cast<long long>(count);
  return static_cast<std::size_t>(((index % n) + n) % n);
}

}  // namespace

DitherPair::DitherPair(double period, AmplitudeLaw law, Shape shape1, Shape shape2,
                       std::string name)
    : period_(period),
      law_(law),
      shape1_(std::move(shape1)),
      shape2_(std::move(shape2)),
      name_(std::move(name)) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw std::invalid_argument("dither period must be positive");
  }
}

double DitherPair::omega() const { return 2.0 * std::numbers::pi / period_; }

double DitherPair::amplitude() const {
  return law_ == AmplitudeLaw::sqrt_omega_scaled ? std::sqrt(omega()) : 1.0;
}

double DitherPair::eval(const Shape& shape, double offset, double t, Side side) const {
  return amplitude() * shape(reduce_phase(t, period_, side), side) + offset;
}

double DitherPair::u1(double t, Side side) const { return eval(shape1_, offset1_, t, side); }

double DitherPair::u2(double t, Side side) const { return eval(shape2_, offset2_, t, side); }

DitherPair DitherPair::with_offsets(double u1_offset, double u2_offset) const {
  DitherPair out = *this;
  out.offset1_ += u1_offset;
  out.offset2_ += u2_offset;
  if (u1_offset != 0.0 || u2_offset != 0.0) {
    out.name_ += "+offset";
  }
  return out;
}

DitherPair make_trig_dither(double period, AmplitudeLaw law) {
  return DitherPair(
      period, law, [](double p, Side) { return std::sin(2.0 * std::numbers::pi * p); },
      [](double p, Side) { return std::cos(2.0 * std::numbers::pi * p); }, "trig");
}

DitherPair make_square_sawtooth_dither(double period, DitherKind kind, AmplitudeLaw law) {
  switch (kind) {
    case DitherKind::square:
      return DitherPair(period, law, square_sin, square_cos, "square");
    case DitherKind::sawtooth:
      return DitherPair(period, law, sawtooth_odd, sawtooth_half_antisymmetric, "sawtooth");
    case DitherKind::trig:
      break;
  }
  throw std::invalid_argument("make_square_sawtooth_dither: kind must be square or sawtooth");
}

DitherPair make_dither(DitherKind kind, double period, AmplitudeLaw law) {
  if (kind == DitherKind::trig) {
    return make_trig_dither(period, law);
  }
  return make_square_sawtooth_dither(period, kind, law);
}

AssumptionReport verify_assumptions(const DitherPair& d, std::size_t grid_points,
                                    double tol_sym) {
  if (grid_points < 100) {
    throw std::invalid_argument("verify_assumptions: need at least 100 grid points");
  }
  const double period = d.period();
  const auto grid = static_cast<double>(grid_points);
  auto at = [&](std::size_t j) { return static_cast<double>(j) * period / grid; };

  AssumptionReport r;
  bool finite = true;
  double sum1 = 0.0;
  double sum2 = 0.0;
  for (std::size_t j = 0; j <= grid_points; ++j) {
    const double t = at(j);
    const double v1 = d.u1(t);
    const double v2 = d.u2(t);
    finite = finite && std::isfinite(v1) && std::isfinite(v2);
    r.bound_u1 = std::max(r.bound_u1, std::abs(v1));
    r.bound_u2 = std::max(r.bound_u2, std::abs(v2));
    const double w = (j == 0 || j == grid_points) ? 0.5 : 1.0;
    sum1 += w * v1;
    sum2 += w * v2;

    r.a2_violation = std::max(r.a2_violation, std::abs(v1 + d.u1(at(grid_points - j))));
    if (2 * j <= grid_points) {
      const double shifted =
          grid_points % 2 == 0 ? at(j + grid_points / 2) : t + 0.5 * period;
      r.a3_violation = std::max(r.a3_violation, std::abs(v2 + d.u2(shifted)));
    }
  }
  r.mean_u1 = sum1 / grid;
  r.mean_u2 = sum2 / grid;
  r.a1 = finite;
  r.a2 = finite && r.a2_violation <= tol_sym;
  r.a3 = finite && r.a3_violation <= tol_sym;
  return r;
}

SampledDither::SampledDither(DitherPair base, std::size_t needles)
    : base_(std::move(base)), needles_(needles), epsilon_(0.0) {
  if (needles == 0) {
    throw std::invalid_argument("sample_needles: N must be positive");
  }
  epsilon_ = base_.period() / static_cast<double>(2 * needles);
  values_.reserve(2 * needles);
  for (std::size_t i = 1; i <= 2 * needles; ++i) {
    values_.push_back(base_.u2(static_cast<double>(i) * epsilon_));
  }
}

double SampledDither::value(double t, Side side) const {
  const double q = t / epsilon_;
  const double m = std::round(q);
  long long index = 0;
  if (std::abs(q - m) < kSnap) {
    index = static_cast<long long>(m) - (side == Side::left ? 1 : 0);
  } else {
    index = static_cast<long long>(std::floor(q));
  }
  return values_[wrap(index, values_.size())];
}

SampledDither sample_needles(const DitherPair& d, std::size_t needles) {
  return SampledDither(d, needles);
}

SequentialDither::SequentialDither(DitherPair base, std::size_t dim)
    : base_(std::move(base)), dim_(dim) {
  if (dim == 0) {
    throw std::invalid_argument("make_sequential: dimension must be positive");
  }
}

std::size_t SequentialDither::active(double t, Side side) const {
  const double q = t / base_.period();
  const double m = std::round(q);
  if (std::abs(q - m) < kSnap) {
    const auto boundary = static_cast<long long>(m);
    return wrap(side == Side::left ? boundary - 1 : boundary, dim_);
  }
  return wrap(static_cast<long long>(std::floor(q)), dim_);
}

// The base pair is T-periodic, so it is evaluated at global time.
double SequentialDither::u1(std::size_t i, double t, Side side) const {
  return active(t, side) == i ? base_.u1(t, side) : 0.0;
}

double SequentialDither::u2(std::size_t i, double t, Side side) const {
  return active(t, side) == i ? base_.u2(t, side) : 0.0;
}

SequentialDither make_sequential(const DitherPair& d, std::size_t dim) {
  return SequentialDither(d, dim);
}

std::string to_string(DitherKind kind) {
  switch (kind) {
    case DitherKind::trig:
      return "trig";
    case DitherKind::square:
      return "square";
    case DitherKind::sawtooth:
      return "sawtooth";
  }
  return "unknown";
}

std::string to_string(AmplitudeLaw law) {
  return law == AmplitudeLaw::sqrt_omega_scaled ? "sqrt_omega" : "unit";
}

}  // namespace esld
