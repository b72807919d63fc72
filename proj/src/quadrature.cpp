#include "esld/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace esld {

namespace {

double panel(const GridSamples& f, std::size_t a, double h) {
  return h / 3.0 * (f.right[a] + 4.0 * f.point[a + 1] + f.left[a + 2]);
}

}  // namespace

double simpson(const GridSamples& f, std::size_t first, std::size_t last, double h) {
  if (last < first || (last - first) % 2 != 0 || last >= f.size()) {
    throw std::invalid_argument("simpson: need an even number of intervals inside the grid");
  }
  double sum = 0.0;
  for (std::size_t a = first; a < last; a += 2) {
    sum += panel(f, a, h);
  }
  return sum;
}

std::vector<double> cumulative_simpson(const GridSamples& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> c(n, 0.0);
  if (n < 2) {
    return c;
  }
  if (n == 2) {
    c[1] = 0.5 * h * (f.right[0] + f.left[1]);
    return c;
  }
  for (std::size_t k = 2; k < n; k += 2) {
    c[k] = c[k - 2] + panel(f, k - 2, h);
  }
  for (std::size_t k = 1; k < n; k += 2) {
    if (k + 1 < n) {
      c[k] = c[k - 1] + h / 12.0 * (5.0 * f.right[k - 1] + 8.0 * f.point[k] - f.left[k + 1]);
    } else {
      c[k] = c[k - 1] + h / 12.0 * (-f.right[k - 2] + 8.0 * f.point[k - 1] + 5.0 * f.left[k]);
    }
  }
  return c;
}

std::vector<double> parity_cumulative(const GridSamples& f, double h) {
  const std::size_t n = f.size();
  std::vector<double> c(n, 0.0);
  for (std::size_t k = 2; k < n; ++k) {
    c[k] = c[k - 2] + panel(f, k - 2, h);
  }
  return c;
}

double interpolate_cumulative(const std::vector<double>& cumulative, const GridSamples& f,
                              double h, double s) {
  const auto last = static_cast<double>(cumulative.size() - 1);
  if (s < -1e-9 || s > last + 1e-9) {
    throw std::out_of_range("interpolate_cumulative: position outside the grid");
  }
  const double nearest = std::round(s);
  if (std::abs(s - nearest) < 1e-9) {
    return cumulative[static_cast<std::size_t>(nearest)];
  }
  const auto k = static_cast<std::size_t>(std::floor(s));
  const double u = s - static_cast<double>(k);
  const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
  const double h10 = u * (1.0 - u) * (1.0 - u);
  const double h01 = u * u * (3.0 - 2.0 * u);
  const double h11 = u * u * (u - 1.0);
  return h00 * cumulative[k] + h10 * h * f.right[k] + h01 * cumulative[k + 1] +
         h11 * h * f.left[k + 1];
}

}  // namespace esld
