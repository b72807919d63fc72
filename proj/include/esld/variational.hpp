#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "esld/dither.hpp"
#include "esld/objective.hpp"
#include "esld/ode.hpp"
#include "esld/quadrature.hpp"

namespace esld {

/// Scalar state-transition function of v' = A(t) v along a nominal path,
/// A(t) = u1(t) dg1/dF(F(x*(t))) dF/dx_i(x*(t)), stored as the running
/// integral of A so that Phi(t, t0) = exp(cum(t) - cum(t0)).
///
/// For vector states with the sequential dither only the active coordinate's
/// scalar STM is needed; `component` selects it.
class StmTable {
 public:
  const Trajectory& nominal() const { return nominal_; }
  std::size_t size() const { return cumulative_.size(); }
  std::size_t component() const { return component_; }
  double period() const { return period_; }
  std::size_t steps_per_period() const { return steps_per_period_; }

  /// A at the grid nodes (point values).
  std::span<const double> a_values() const { return a_.point; }
  const GridSamples& a_samples() const { return a_; }
  std::span<const double> cumulative() const { return cumulative_; }

  /// Phi(t_k, t_k0) for grid indices.
  double phi(std::size_t k, std::size_t k0) const;
  /// Phi(t, t0) for arbitrary times inside the table (Hermite interpolation
  /// of the running integral between nodes).
  double phi_at(double t, double t0) const;

 private:
  friend StmTable build_stm(const Objective&, const VectorFieldPair&, const DitherPair&,
                            const Trajectory&, std::size_t);

  StmTable(Trajectory nominal, GridSamples a, std::vector<double> cumulative, double period,
           std::size_t steps_per_period, std::size_t component);

  double position(double t) const;

  Trajectory nominal_;
  GridSamples a_;
  std::vector<double> cumulative_;
  double period_;
  std::size_t steps_per_period_;
  std::size_t component_;
};

/// Builds the STM table along `nominal` (generated by simulate_nominal with
/// the same objective, fields and dither). The dither is scalar; for vector
/// nominals pass the block of the sequential run in which `component` is active.
/// Throws if the nominal step does not divide the dither period.
StmTable build_stm(const Objective& obj, const VectorFieldPair& vf, const DitherPair& d,
                   const Trajectory& nominal, std::size_t component = 0);

struct SymmetryReport {
  double max_violation = 0.0;
  double max_phi = 0.0;
  double tolerance = 1e-8;  // relative to max_phi
  std::size_t pairs = 0;
  bool passed = false;
};

/// Checks Phi(t, t0) = Phi(T - t, T - t0) over sampled grid pairs in the
/// first period of the table.
SymmetryReport check_stm_symmetry(const StmTable& stm, std::size_t samples_per_axis = 201);

}  // namespace esld
