#include "ising/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ising {

LinearFit fit_linear(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("fit_linear: size mismatch");
  size_t n = x.size();
  if (n < 2) throw std::invalid_argument("fit_linear: need >= 2 points");
  double sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LinearFit f;
  f.points = n;
  if (sxx == 0) throw std::invalid_argument("fit_linear: degenerate x");
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = syy == 0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

LinearFit fit_log_linear(std::span<const double> x, std::span<const double> y,
                         double floor, double ceiling) {
  if (x.size() != y.size())
    throw std::invalid_argument("fit_log_linear: size mismatch");
  std::vector<double> xf, yf;
  for (size_t i = 0; i < x.size(); ++i) {
    if (y[i] > floor && y[i] < ceiling) {
      xf.push_back(x[i]);
      yf.push_back(std::log(y[i]));
    }
  }
  return fit_linear(xf, yf);
}

}  // namespace ising
