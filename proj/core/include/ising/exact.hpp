#pragma once

#include <vector>

#include "ising/core.hpp"
#include "ising/graph.hpp"
#include "ising/marginal.hpp"

namespace ising {

// Brute-force enumeration over all 2^n spin configurations, n <= 24.
// Accumulation is in log space with per-block max shifts and a fixed block
// order, so results do not depend on the worker count. Vertices with field
// +inf are conditioned to +1 (violating configurations are excluded and the
// pinned spin carries no field factor).
struct ExactSolution {
  double log_partition = 0.0;
  std::vector<double> magnetization;     // <x_i> per vertex
  std::vector<double> edge_correlation;  // <x_i x_j> per edge index
};

ExactSolution enumerate_exact(const Graph& g, const IsingParams& params);

// Exact marginal of the vertex subset U (summing out the rest); |U| <= 20.
// U is reported in ascending vertex order.
SpinMarginal marginal_on_subset(const Graph& g, const IsingParams& params,
                                std::vector<int> subset);

// (1/n) log Z_n.
double exact_phi_n(const Graph& g, const IsingParams& params);

}  // namespace ising
