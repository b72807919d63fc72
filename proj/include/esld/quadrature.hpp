#pragma once

#include <cstddef>
#include <vector>

namespace esld {

/// Samples of an integrand on a uniform grid with one-sided values at each
/// node, so that panels ending on a jump use the limit from inside the panel.
/// For continuous integrands the three arrays coincide.
struct GridSamples {
  std::vector<double> right;
  std::vector<double> point;
  std::vector<double> left;

  explicit GridSamples(std::size_t n) : right(n), point(n), left(n) {}
  std::size_t size() const { return point.size(); }
};

/// Composite Simpson over nodes [first, last]; (last - first) must be even.
double simpson(const GridSamples& f, std::size_t first, std::size_t last, double h);

/// Running integral from node 0 to every node. Even nodes get composite
/// Simpson; odd nodes add a three-point partial panel to the previous even node.
std::vector<double> cumulative_simpson(const GridSamples& f, double h);

/// Running integrals that are exact composite Simpson between any two nodes
/// of the same parity: even nodes accumulate from node 0, odd nodes from node 1
/// (so the value at node 1 is 0).
std::vector<double> parity_cumulative(const GridSamples& f, double h);

/// Cubic Hermite interpolation of a running integral at fractional node
/// position s, using the integrand samples as the derivative.
double interpolate_cumulative(const std::vector<double>& cumulative, const GridSamples& f,
                              double h, double s);

}  // namespace esld
