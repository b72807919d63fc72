#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace esld {

using Vec = std::vector<double>;

/// Scalar objective F: R^dim -> R together with its analytic gradient.
///
/// Extremum seeking never looks at the gradient; it is carried for the
/// recovered-gradient integrand and for validation.
struct Objective {
  std::string name;
  std::size_t dim = 1;
  std::function<double(std::span<const double>)> eval;
  std::function<void(std::span<const double>, std::span<double>)> grad;

  double operator()(std::span<const double> x) const { return eval(x); }
  Vec gradient(std::span<const double> x) const;
};

/// Vector fields g1, g2 acting on the objective value, with their derivatives in F.
struct VectorFieldPair {
  std::string name;
  std::function<double(double)> g1;
  std::function<double(double)> g2;
  std::function<double(double)> dg1dF;
  std::function<double(double)> dg2dF;
};

/// g0(F) = dg1/dF * g2 - dg2/dF * g1, the negated Lie bracket of (g1, g2).
struct LieBracketField {
  std::function<double(double)> g0;

  double operator()(double f) const { return g0(f); }
};

LieBracketField make_lie_bracket(const VectorFieldPair& vf);

struct F2Params {
  double beta = 0.25;   // bump depth
  double center = 1.5;  // bump location
  double width = 0.04;  // bump standard deviation

  bool operator==(const F2Params&) const = default;
};

Objective make_f1();
Objective make_f2(const F2Params& params = {});
Objective make_f3();
Objective make_constant(std::size_t dim, double value);

/// F1 (x^2/2), F2 (quadratic with a sharp Gaussian dent), F3 (|x|^2/2 in 2-D).
std::vector<Objective> builtin_objectives();

/// g1 = F, g2 = -a. Lie bracket field g0 = -a.
VectorFieldPair make_example_fields(double a);
/// g1 = F, g2 = 1.
VectorFieldPair make_unit_fields();
/// g1 = sin(F), g2 = cos(F).
VectorFieldPair make_sincos_fields();

/// Largest deviation |grad - central FD| / (1 + |grad|) over the components at x.
double gradient_fd_error(const Objective& obj, std::span<const double> x, double step = 1e-6);

/// Largest relative deviation of dg1dF, dg2dF from central differences at f.
double field_fd_error(const VectorFieldPair& vf, double f, double step = 1e-6);

}  // namespace esld
