#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace esld {

/// Which value to take at a jump: the point value, the limit from the
/// right (value on [t, t+)) or the limit from the left (value on (t-, t]).
/// Continuous signals ignore it. The integrators use one-sided limits so a
/// step never sees the far side of a grid-aligned discontinuity.
enum class Side { point, right, left };

enum class AmplitudeLaw { sqrt_omega_scaled, unit };

enum class DitherKind { trig, square, sawtooth };

/// Waveform on normalized phase p in [0, 1]. p = 0 and p = 1 are the same
/// instant of a periodic signal, seen from the right and from the left.
using Shape = std::function<double(double phase, Side side)>;

/// T-periodic dither pair u1(t) = A * shape1(t/T) + offset1, likewise u2,
/// with A = sqrt(omega) or 1 depending on the amplitude law.
class DitherPair {
 public:
  DitherPair(double period, AmplitudeLaw law, Shape shape1, Shape shape2, std::string name);

  double period() const { return period_; }
  double omega() const;
  double amplitude() const;
  AmplitudeLaw law() const { return law_; }
  const std::string& name() const { return name_; }

  double u1(double t, Side side = Side::point) const;
  double u2(double t, Side side = Side::point) const;

  /// Copy with constant offsets added to u1 and u2. Used to build dithers that
  /// deliberately break A2/A3.
  DitherPair with_offsets(double u1_offset, double u2_offset) const;

 private:
  double eval(const Shape& shape, double offset, double t, Side side) const;

  double period_;
  AmplitudeLaw law_;
  Shape shape1_;
  Shape shape2_;
  std::string name_;
  double offset1_ = 0.0;
  double offset2_ = 0.0;
};

/// u1 = A sin(wt), u2 = A cos(wt).
DitherPair make_trig_dither(double period, AmplitudeLaw law = AmplitudeLaw::sqrt_omega_scaled);

/// Square: u1 = sign(sin(wt)), u2 = sign(cos(wt)), zero at the jumps.
/// Sawtooth: u1 = 1 - 2t/T (odd about T/2), u2 = the half-wave antisymmetric
/// ramp 1 - 4t/T on [0, T/2] continued by u2(t + T/2) = -u2(t).
DitherPair make_square_sawtooth_dither(double period, DitherKind kind,
                                       AmplitudeLaw law = AmplitudeLaw::unit);

DitherPair make_dither(DitherKind kind, double period, AmplitudeLaw law);

struct AssumptionReport {
  bool a1 = false;  // bounded (and finite) on the grid
  bool a2 = false;  // u1(t) = -u1(T - t)
  bool a3 = false;  // u2(t) = -u2(T/2 + t)
  double bound_u1 = 0.0;
  double bound_u2 = 0.0;
  double a2_violation = 0.0;
  double a3_violation = 0.0;
  double mean_u1 = 0.0;
  double mean_u2 = 0.0;

  bool passed() const { return a1 && a2 && a3; }
};

AssumptionReport verify_assumptions(const DitherPair& d, std::size_t grid_points = 10000,
                                    double tol_sym = 1e-9);

/// u2 replaced by 2N needles of width eps = T/(2N); needle i (1-based) covers
/// [(i-1) eps, i eps) at height u2(i eps). values[i-1] holds needle i.
class SampledDither {
 public:
  SampledDither(DitherPair base, std::size_t needles);

  const DitherPair& base() const { return base_; }
  std::size_t needles() const { return needles_; }
  double epsilon() const { return epsilon_; }
  const std::vector<double>& values() const { return values_; }

  /// Piecewise-constant sampled u2 at time t (periodic).
  double value(double t, Side side = Side::point) const;

 private:
  DitherPair base_;
  std::size_t needles_;
  double epsilon_;
  std::vector<double> values_;
};

SampledDither sample_needles(const DitherPair& d, std::size_t needles);

/// The scalar pair applied in one coordinate per block of length T:
/// u_ji(t) = u_j(t - (i-1)T) on [(i-1)T, iT), zero elsewhere; nT-periodic.
/// Coordinates are 0-based here.
class SequentialDither {
 public:
  SequentialDither(DitherPair base, std::size_t dim);

  const DitherPair& base() const { return base_; }
  std::size_t dim() const { return dim_; }
  double period() const { return base_.period(); }
  double cycle() const { return static_cast<double>(dim_) * base_.period(); }

  /// Index of the coordinate dithered at time t.
  std::size_t active(double t, Side side = Side::point) const;
  double u1(std::size_t i, double t, Side side = Side::point) const;
  double u2(std::size_t i, double t, Side side = Side::point) const;

 private:
  DitherPair base_;
  std::size_t dim_;
};

SequentialDither make_sequential(const DitherPair& d, std::size_t dim);

std::string to_string(DitherKind kind);
std::string to_string(AmplitudeLaw law);

}  // namespace esld
