#pragma once

#include <cstddef>
#include <span>

namespace ising {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  size_t points = 0;
};

// Ordinary least squares y ~ slope*x + intercept.
LinearFit fit_linear(std::span<const double> x, std::span<const double> y);

// Fit log(y) ~ -lambda * x + c over the entries with y in (floor, ceiling);
// returns slope = -lambda. Used for decay-rate estimates of residual or gap
// sequences where the head is transient and the tail sits at the fp floor.
LinearFit fit_log_linear(std::span<const double> x, std::span<const double> y,
                         double floor = 1e-13, double ceiling = 1e300);

}  // namespace ising
