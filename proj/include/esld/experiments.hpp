#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "esld/config.hpp"
#include "esld/learning.hpp"
#include "esld/variational.hpp"

namespace esld {

/// Rectangular table; every row has as many cells as the header.
struct CsvReport {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
  void add(double period, std::span<const double> values);
  /// Row of the form T, diverged, diverged, ...
  void add_diverged(double period);

  void write(std::ostream& out) const;
  void save(const std::string& path) const;
};

CsvReport parse_csv(std::istream& in);

/// Main table plus side tables written next to it as <stem>.<suffix>.csv.
struct CommandResult {
  CsvReport main;
  std::vector<std::pair<std::string, CsvReport>> extras;
  bool diverged = false;

  const CsvReport& extra(const std::string& suffix) const;
};

/// "runs/out.csv" + "summary" -> "runs/out.summary.csv".
std::string sibling_path(const std::string& path, const std::string& suffix);
void save_result(const CommandResult& result, const std::string& path);

/// Simulated LD per period (per block for n > 1): T,k,t,x1..xn.
/// Side table "trajectory": T,t,x1..xn every output.trajectory_stride steps.
CommandResult cmd_simulate(const ExperimentConfig& cfg);

/// Simulation vs recursion: T,k,t,x_sim_*,x_rec_*,grad_*,error.
/// Side tables "summary" (one row per T) and "ratios" (consecutive T pairs).
CommandResult cmd_compare(const ExperimentConfig& cfg);

/// T,x,L,gradient. Side table "minima": T,local_minima,argmin.
CommandResult cmd_landscape(const ExperimentConfig& cfg);

/// T,check,measured,threshold,pass. Failed checks are report content.
CommandResult cmd_verify(const ExperimentConfig& cfg);

/// Residuals r(eps) = max_t |x_eps(t) - x*(t) - eps v(t)| of a single needle
/// of height alpha starting at tbar, and ratios r(eps_i) / r(eps_{i+1}).
struct NeedleStudy {
  Vec epsilons;
  Vec residuals;
  Vec ratios;
};

NeedleStudy needle_order_study(const Objective& obj, const VectorFieldPair& vf,
                               const DitherPair& d, double x0, double tbar, double alpha,
                               std::span<const double> epsilons, const IntegratorConfig& cfg);

/// Largest relative semigroup defect over random (t, t1, t0) in the first period.
double stm_semigroup_error(const StmTable& stm, std::size_t triples, std::uint64_t seed);

/// max_k |x*(t_k) - x*(T - t_k)| over the first period of a nominal path.
double palindrome_error(const Trajectory& nominal, std::size_t steps_per_period);

}  // namespace esld
