#pragma once

#include <cstdint>

#include "ising/degree.hpp"
#include "ising/graph.hpp"

namespace ising {

// Uniform simple k-regular graph on n vertices: configuration-model pairing,
// restarted from scratch on any self-loop or parallel edge (up to 10^4
// restarts), which makes the accepted pairing exactly uniform.
Graph gen_random_regular(int n, int k, uint64_t seed);

// Uniform simple graph with exactly m = floor(n*gamma) distinct edges.
Graph gen_erdos_renyi(int n, double gamma, uint64_t seed);

// Graph with floor(n*P_k) vertices of degree k (k >= 1). Leftover vertices
// get the most probable degree; one extra degree-1 vertex fixes an odd degree
// sum. Stubs are matched uniformly; by default self-loops are dropped and
// parallel edges collapsed, otherwise parallel edges are kept.
Graph gen_configuration(int n, const DegreeDistribution& p, uint64_t seed,
                        bool keep_multigraph = false);

}  // namespace ising
