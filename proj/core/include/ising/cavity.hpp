#pragma once

#include <cstdint>
#include <vector>

#include "ising/core.hpp"
#include "ising/degree.hpp"

namespace ising {

// Sample-pool representation of the law of the cavity field h^(t).
struct Population {
  std::vector<double> samples;
  int generation = 0;

  double mean() const;
  double stddev() const;
  double quantile(double q) const;  // sorted-sample quantile, q in [0,1]
};

// N zeros at generation 0; N >= 1000.
Population population_init(int n);

// One density-evolution step: each new sample is B + sum_{i<K-1} xi(beta, h_Ji)
// with K ~ rho and J_i uniform with replacement. Randomness is keyed by
// (seed, sample index) and, unless common_random_numbers is set, by the
// generation, so runs sharing a seed can be coupled sample-by-sample.
Population population_step(const Population& pop, const DegreeDistribution& p,
                           const IsingParams& params, uint64_t seed,
                           bool common_random_numbers = false);

struct DEResult {
  Population population;
  int steps = 0;
  std::vector<double> w1_history;  // W1 between consecutive generations
  bool converged = false;
  bool zero_field_warning = false;  // B = 0: no fixed-point guarantee
};

// Iterates population_step until the W1 distance between consecutive
// generations stays at or below tol for 10 consecutive steps.
DEResult population_fixed_point(const DegreeDistribution& p,
                                const IsingParams& params, int n, uint64_t seed,
                                double tol, int max_steps,
                                bool common_random_numbers = false);

struct PhiEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// Monte Carlo evaluation of the Bethe free entropy functional
//   (P/2) log cosh b - (P/2) E log[1 + u th(h1) th(h2)]
//   + E log{ e^B prod_{i<=L}(1 + u th(h_i)) + e^-B prod_{i<=L}(1 - u th(h_i)) }
// with L ~ P and h_i drawn uniformly from the (converged) population.
// mc_samples >= 10^4.
PhiEstimate bethe_phi(const DegreeDistribution& p, const Population& pop,
                      const IsingParams& params, int mc_samples, uint64_t seed);

// Deterministic k-regular evaluation: solves h = B + (k-1) xi(beta, h) to
// 1e-14 and plugs the point mass into the functional. Requires B > 0.
double bethe_phi_regular(int k, const IsingParams& params);
// The scalar fixed point itself.
double regular_cavity_fixed_point(int k, const IsingParams& params);

// (P/2) E[(u + X1 X2)/(1 + u X1 X2)], X = tanh(h).
PhiEstimate energy_density(const DegreeDistribution& p, const Population& pop,
                           const IsingParams& params, int mc_samples,
                           uint64_t seed);
double energy_density_regular(int k, const IsingParams& params);

// Exact W1 between the two empirical laws: mean |sortA_i - sortB_i| for equal
// sizes, merged-quantile coupling otherwise.
double w1_distance(const Population& a, const Population& b);
double w1_distance(std::vector<double> a, std::vector<double> b);

}  // namespace ising
