#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "esld/dither.hpp"
#include "esld/objective.hpp"
#include "esld/ode.hpp"

namespace esld {

/// Per-period step of the learning dynamics, x(T) - x(0) up to the O(T^2) remainder.
struct RecoveredGradient {
  Vec value;
  /// T^2 (or (ell T)^2): scale of the neglected remainder. Diagnostic only, not a bound.
  double residual_order = 0.0;
  /// Needle count of the Riemann form; empty for the N -> infinity limit.
  std::optional<std::size_t> needles;
};

enum class RunMode { simulated, recursion };

struct LearningRun {
  RunMode mode = RunMode::recursion;
  double step_time = 0.0;  // time between consecutive states
  std::vector<Vec> states;
  std::vector<RecoveredGradient> gradients;  // recursion mode only, one per step
  bool diverged = false;
  std::string error;

  std::size_t size() const { return states.size(); }
  double time(std::size_t k) const { return static_cast<double>(k) * step_time; }
};

/// Reconstructed effective objective on a grid, affinely normalized to [0, 1].
struct Landscape {
  Vec grid;
  Vec values;
  Vec gradients;  // recovered step at each grid point
  double omega = 0.0;

  /// Interior minima of the reconstructed profile: sign changes of the step
  /// from positive to negative (exact zeros skipped).
  std::size_t local_minima() const;
};

/// eps * sum_{i=1}^{N} u2(i eps) * int_{i eps}^{T/2 - i eps} h(tau) dtau with
/// h = dF/dx(x*) Phi(0, tau) u1(tau) g0(F(x*)), eps = T / (2N).
RecoveredGradient recovered_gradient_finite_n(const Objective& obj, const VectorFieldPair& vf,
                                              const LieBracketField& g0, const DitherPair& d,
                                              double x_k, std::size_t needles,
                                              const IntegratorConfig& cfg);

/// int_0^{T/2} u2(t) int_t^{T/2 - t} h(tau) dtau dt by nested composite Simpson
/// on the integration grid. Inner integrals are oriented: for t > T/4 the upper
/// limit is below the lower one and the contribution changes sign.
RecoveredGradient recovered_gradient(const Objective& obj, const VectorFieldPair& vf,
                                     const LieBracketField& g0, const DitherPair& d, double x_k,
                                     const IntegratorConfig& cfg);

/// x_k = x_{k-1} + recovered step, re-solving the nominal path from each new
/// state. With `needles` set the finite-N step is used. A blow-up stops the
/// run and returns what was computed with `diverged` set.
LearningRun run_recursion(const Objective& obj, const VectorFieldPair& vf,
                          const LieBracketField& g0, const DitherPair& d, double x0,
                          std::size_t periods, const IntegratorConfig& cfg,
                          std::optional<std::size_t> needles = std::nullopt);

/// Sequential multidimensional recursion, one step per block of length T:
/// in block k only coordinate k mod n moves, by the block formula evaluated
/// from the current state.
LearningRun run_recursion(const Objective& obj, const VectorFieldPair& vf,
                          const LieBracketField& g0, const SequentialDither& sd,
                          std::span<const double> x0, std::size_t blocks,
                          const IntegratorConfig& cfg);

/// States of a simulated trajectory at multiples of T.
LearningRun extract_simulated_ld(const Trajectory& traj, const DitherPair& d);

/// States at multiples of nT (one full sweep), or of T when `per_block`.
LearningRun extract_simulated_ld(const Trajectory& traj, const SequentialDither& d,
                                 bool per_block = false);

/// Reconstructs L on an ascending uniform grid: L_{i+1} = L_i - g_i dx, then
/// shifted and scaled to [0, 1]. The recursion adds +grad L as its step, so
/// a descent step g carries the sign of -dL/dx.
Landscape reconstruct_landscape(const Objective& obj, const VectorFieldPair& vf,
                                const LieBracketField& g0, const DitherPair& d,
                                std::span<const double> grid, const IntegratorConfig& cfg);

/// Components 1..ell (1-based) of the recovered step over ell blocks of the
/// sequential dither started at x_k; component i uses the nominal path and
/// scalar STM of block i. Components beyond ell are exactly zero.
RecoveredGradient recovered_gradient_multidim(const Objective& obj, const VectorFieldPair& vf,
                                              const LieBracketField& g0,
                                              const SequentialDither& sd,
                                              std::span<const double> x_k, std::size_t ell,
                                              const IntegratorConfig& cfg);

/// |a_k - b_k| (Euclidean) for every k.
Vec compare_runs(const LearningRun& a, const LearningRun& b);

}  // namespace esld
