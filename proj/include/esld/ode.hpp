#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "esld/dither.hpp"
#include "esld/objective.hpp"

namespace esld {

enum class Method { rk4, euler };

struct IntegratorConfig {
  std::size_t steps_per_period = 2000;
  Method method = Method::rk4;

  bool operator==(const IntegratorConfig&) const = default;
};

std::string to_string(Method method);

/// Uniformly sampled solution path, t_k = t0 + k dt, states stored row-major.
class Trajectory {
 public:
  Trajectory(double t0, double dt, std::size_t dim);

  double t0() const { return t0_; }
  double dt() const { return dt_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return data_.size() / dim_; }
  double time(std::size_t k) const { return t0_ + static_cast<double>(k) * dt_; }
  double end_time() const { return time(size() - 1); }

  std::span<const double> state(std::size_t k) const { return {data_.data() + k * dim_, dim_}; }
  std::span<const double> back() const { return state(size() - 1); }
  double operator()(std::size_t k, std::size_t i) const { return data_[k * dim_ + i]; }

  void push_back(std::span<const double> x);
  /// Nodes first..last inclusive, as a trajectory starting at time(first).
  Trajectory slice(std::size_t first, std::size_t last) const;

  bool operator==(const Trajectory&) const = default;

 private:
  double t0_;
  double dt_;
  std::size_t dim_;
  std::vector<double> data_;
};

/// Raised when a state leaves the overflow guard (|x_i| > 1e12 or non-finite).
class DivergenceError : public std::runtime_error {
 public:
  explicit DivergenceError(double time);
  double time() const { return time_; }

 private:
  double time_;
};

inline constexpr double kOverflowGuard = 1e12;

/// Vector-valued excitation (u1, u2) in R^dim. `period` fixes the step size:
/// dt = period / steps_per_period. Converts from every dither type.
struct Excitation {
  using Channel = std::function<double(std::size_t i, double t, Side side)>;

  std::size_t dim = 1;
  double period = 1.0;
  Channel u1;
  Channel u2;

  Excitation(std::size_t dim, double period, Channel u1, Channel u2);
  Excitation(const DitherPair& d);           // NOLINT(google-explicit-constructor)
  Excitation(const SequentialDither& d);     // NOLINT(google-explicit-constructor)
  Excitation(const SampledDither& d);        // NOLINT(google-explicit-constructor)
};

/// Same u1, u2 == 0.
Excitation nominal_of(const Excitation& e);

/// u2 replaced by the constant vector alpha on [begin, begin + width).
Excitation with_needle(const Excitation& e, double begin, double width, std::vector<double> alpha);

using Rhs = std::function<void(double t, Side side, std::span<const double> x, std::span<double> dxdt)>;

/// Fixed-step integration. Stage times at step boundaries are evaluated as
/// one-sided limits from inside the step.
Trajectory integrate(const Rhs& rhs, std::span<const double> x0, double t0, double dt,
                     std::size_t steps, Method method);

/// x' = g1(F(x)) u1(t) + g2(F(x)) u2(t), componentwise for vector excitations.
Trajectory simulate_es(const Objective& obj, const VectorFieldPair& vf, const Excitation& d,
                       std::span<const double> x0, double horizon, const IntegratorConfig& cfg,
                       double t0 = 0.0);

/// The same system with u2 == 0: the nominal solution x*.
Trajectory simulate_nominal(const Objective& obj, const VectorFieldPair& vf, const Excitation& d,
                            std::span<const double> x0, double horizon,
                            const IntegratorConfig& cfg, double t0 = 0.0);

/// Variational variable v(t) for a needle of height alpha on [tbar, tbar + epsilon]
/// applied to the nominal solution: v' = u1(t) dg1/dF(F(x*)) grad F(x*)^T v,
/// v(tbar + epsilon) = g2(F(x*(tbar + epsilon))) alpha. tbar + epsilon is snapped
/// to the nominal grid; the returned trajectory starts there and ends with the nominal.
Trajectory simulate_variational(const Objective& obj, const VectorFieldPair& vf,
                                const Excitation& d, const Trajectory& nominal, double tbar,
                                std::span<const double> alpha, double epsilon,
                                const IntegratorConfig& cfg);

/// Number of whole steps of size dt in `span`; throws unless span is a positive multiple.
std::size_t whole_steps(double span, double dt, const char* what);

}  // namespace esld
