#include "esld/objective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace esld {

Vec Objective::gradient(std::span<const double> x) const {
  Vec g(dim);
  grad(x, g);
  return g;
}

LieBracketField make_lie_bracket(const VectorFieldPair& vf) {
  return {[g1 = vf.g1, g2 = vf.g2, d1 = vf.dg1dF, d2 = vf.dg2dF](double f) {
    return d1(f) * g2(f) - d2(f) * g1(f);
  }};
}

Objective make_f1() {
  return {"f1", 1, [](std::span<const double> x) { return 0.5 * x[0] * x[0]; },
          [](std::span<const double> x, std::span<double> g) { g[0] = x[0]; }};
}

Objective make_f2(const F2Params& p) {
  if (!(p.width > 0.0)) {
    throw std::invalid_argument("f2: bump width must be positive");
  }
  const double inv2s2 = 1.0 / (2.0 * p.width * p.width);
  auto bump = [=](double x) { return std::exp(-(x - p.center) * (x - p.center) * inv2s2); };
  return {"f2", 1,
          [=](std::span<const double> x) { return 0.5 * x[0] * x[0] - p.beta * bump(x[0]); },
          [=](std::span<const double> x, std::span<double> g) {
            g[0] = x[0] + p.beta * (x[0] - p.center) * 2.0 * inv2s2 * bump(x[0]);
          }};
}

Objective make_f3() {
  return {"f3", 2,
          [](std::span<const double> x) { return 0.5 * (x[0] * x[0] + x[1] * x[1]); },
          [](std::span<const double> x, std::span<double> g) {
            g[0] = x[0];
            g[1] = x[1];
          }};
}

Objective make_constant(std::size_t dim, double value) {
  if (dim == 0) {
    throw std::invalid_argument("constant objective: dim must be positive");
  }
  return {"constant", dim, [value](std::span<const double>) { return value; },
          [](std::span<const double>, std::span<double> g) { std::fill(g.begin(), g.end(), 0.0); }};
}

std::vector<Objective> builtin_objectives() { return {make_f1(), make_f2(), make_f3()}; }

VectorFieldPair make_example_fields(double a) {
  return {"example", [](double f) { return f; }, [a](double) { return -a; },
          [](double) { return 1.0; }, [](double) { return 0.0; }};
}

VectorFieldPair make_unit_fields() {
  return {"unit", [](double f) { return f; }, [](double) { return 1.0; },
          [](double) { return 1.0; }, [](double) { return 0.0; }};
}

VectorFieldPair make_sincos_fields() {
  return {"sincos", [](double f) { return std::sin(f); }, [](double f) { return std::cos(f); },
          [](double f) { return std::cos(f); }, [](double f) { return -std::sin(f); }};
}

double gradient_fd_error(const Objective& obj, std::span<const double> x, double step) {
  const Vec g = obj.gradient(x);
  Vec probe(x.begin(), x.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < obj.dim; ++i) {
    const double h = step * std::max(1.0, std::abs(x[i]));
    probe[i] = x[i] + h;
    const double up = obj(probe);
    probe[i] = x[i] - h;
    const double down = obj(probe);
    probe[i] = x[i];
    const double fd = (up - down) / (2.0 * h);
    worst = std::max(worst, std::abs(g[i] - fd) / (1.0 + std::abs(g[i])));
  }
  return worst;
}

double field_fd_error(const VectorFieldPair& vf, double f, double step) {
  const double h = step * std::max(1.0, std::abs(f));
  const double fd1 = (vf.g1(f + h) - vf.g1(f - h)) / (2.0 * h);
  const double fd2 = (vf.g2(f + h) - vf.g2(f - h)) / (2.0 * h);
  const double d1 = vf.dg1dF(f);
  const double d2 = vf.dg2dF(f);
  return std::max(std::abs(d1 - fd1) / (1.0 + std::abs(d1)),
                  std::abs(d2 - fd2) / (1.0 + std::abs(d2)));
}

}  // namespace esld
