#pragma once

#include <cstdint>
#include <vector>

#include "ising/core.hpp"
#include "ising/degree.hpp"
#include "ising/numerics.hpp"

namespace ising {

// Plus/free root-magnetization gap on GW trees, averaged over `trees`
// replicates, with each replicate truncated at every depth 1..max_depth so
// the per-depth values are coupled (and the gap samplewise nonincreasing).
struct GapCurve {
  std::vector<int> depth;
  std::vector<double> mean;
  std::vector<double> std_error;
  LinearFit fit;  // log(mean gap) ~ -lambda * depth
};
GapCurve tree_gap_curve(const DegreeDistribution& p, const IsingParams& params,
                        int max_depth, int trees, uint64_t seed);

// E[ sum_{i at depth r} <x_root; x_i> ] on trees truncated at r, for
// r = 1..max_depth; the summed root-to-boundary susceptibility.
struct DecayCurve {
  std::vector<int> radius;
  std::vector<double> mean;
  std::vector<double> std_error;
  LinearFit fit;
};
DecayCurve tree_correlation_decay(const DegreeDistribution& p,
                                  const IsingParams& params, int max_depth,
                                  int trees, uint64_t seed);

// One-sided check of the generalized Simon inequality
//   <x_o;x_k> <= cosh^2(2 beta + B_i) <x_o;x_i>^{(t)} <x_j;x_k>_j
// over every (k, t) pair of every sampled tree with at most max_nodes nodes,
// all three factors computed exactly. slack = rhs - lhs.
struct SimonStats {
  int64_t trees_used = 0;
  int64_t checks = 0;
  int64_t violations = 0;  // slack < -tol
  double min_slack = kInf;
  std::vector<int> t_values;  // per-t aggregation, aligned vectors
  std::vector<int64_t> t_checks;
  std::vector<double> t_min_slack;
};
SimonStats simon_inequality_sweep(const DegreeDistribution& p,
                                  const IsingParams& params, int trees,
                                  int max_nodes, uint64_t seed,
                                  double tol = 1e-10);

}  // namespace ising
