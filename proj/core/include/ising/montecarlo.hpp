#pragma once

#include <cstdint>
#include <vector>

#include "ising/core.hpp"
#include "ising/graph.hpp"
#include "ising/rng.hpp"

namespace ising {

// Spin configuration with incrementally maintained neighbor sums and total
// edge sum, so heat-bath updates are O(degree).
struct SpinState {
  std::vector<int8_t> spins;
  std::vector<int32_t> nbr_sum;  // sum_{j in di} x_j per vertex
  int64_t edge_sum = 0;          // sum over edges of x_i x_j

  static SpinState uniform(const Graph& g, int8_t value);
  double energy_per_vertex(const Graph& g) const {
    return static_cast<double>(edge_sum) / g.num_vertices();
  }
};

// One sweep = n heat-bath updates at uniformly random sites:
// x_i <- +1 with prob (1 + tanh(beta * sum_j x_j + B_i))/2. The (site, u)
// draws are consumed unconditionally, so two chains driven by identically
// seeded generators share randomness and stay coordinatewise ordered.
void glauber_sweep(const Graph& g, const IsingParams& params, SpinState& state,
                   CounterRng& rng);

struct EnergyEstimate {
  double value = 0.0;      // time average of (1/n) sum_(ij) x_i x_j
  double std_error = 0.0;  // batch means, 20 batches
  int burn_in_used = 0;
};

struct MCConfig {
  int burn_in_sweeps = -1;     // <0: coupled-chain coalescence, capped at 10 ln n
  int measure_sweeps = 2000;
  double coalesce_tol = 1e-3;
  int batches = 20;
};

EnergyEstimate estimate_energy(const Graph& g, const IsingParams& params,
                               int burn_in, int measure, uint64_t seed);
EnergyEstimate estimate_energy(const Graph& g, const IsingParams& params,
                               const MCConfig& cfg, uint64_t seed);

struct TIResult {
  std::vector<double> beta;
  std::vector<double> phi;
  std::vector<double> std_error;
  std::vector<double> energy;           // grid-point energy estimates
  std::vector<double> energy_std_error;
};

// Thermodynamic integration phi_n(beta) = log(2 cosh B) + int_0^beta e(b) db,
// composite Simpson with midpoint energy estimates per grid interval; the
// grid must start at 0 with spacing <= 0.1.
TIResult thermo_integrate(const Graph& g, double field,
                          const std::vector<double>& beta_grid,
                          const MCConfig& cfg, uint64_t seed);

}  // namespace ising
