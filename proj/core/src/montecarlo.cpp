#include "ising/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ising {

namespace {

using detail::tanh_ext;

void check_fields(const Graph& g, const IsingParams& params) {
  if (params.has_per_vertex() &&
      static_cast<int>(params.per_vertex().size()) != g.num_vertices())
    throw std::invalid_argument("per-vertex field size mismatch");
}

}  // namespace

SpinState SpinState::uniform(const Graph& g, int8_t value) {
  SpinState s;
  int n = g.num_vertices();
  s.spins.assign(static_cast<size_t>(n), value);
  s.nbr_sum.assign(static_cast<size_t>(n), 0);
  for (int v = 0; v < n; ++v)
    s.nbr_sum[static_cast<size_t>(v)] = static_cast<int32_t>(g.degree(v)) * value;
  s.edge_sum = static_cast<int64_t>(g.num_edges());  // value^2 = 1 per edge
  return s;
}

void glauber_sweep(const Graph& g, const IsingParams& params, SpinState& state,
                   CounterRng& rng) {
  check_fields(g, params);
  int n = g.num_vertices();
  double beta = params.beta();
  for (int step = 0; step < n; ++step) {
    int i = static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
    double u = rng.next_double();
    double bi = params.field_at(i).value();
    double local = bi == kInf
                       ? kInf
                       : beta * state.nbr_sum[static_cast<size_t>(i)] + bi;
    double p_plus = 0.5 * (1.0 + tanh_ext(local));
    int8_t next = u < p_plus ? int8_t{1} : int8_t{-1};
    int8_t old = state.spins[static_cast<size_t>(i)];
    if (next == old) continue;
    state.spins[static_cast<size_t>(i)] = next;
    state.edge_sum +=
        static_cast<int64_t>(next - old) * state.nbr_sum[static_cast<size_t>(i)];
    for (const Adj& a : g.neighbors(i))
      state.nbr_sum[static_cast<size_t>(a.to)] += next - old;
  }
}

namespace {

// Coupled burn-in: all-minus and all-plus chains driven by the same (site, u)
// draws stay ordered; stop when their energies agree to tol or at the sweep
// cap. Returns the upper chain's state.
SpinState coupled_burn_in(const Graph& g, const IsingParams& params,
                          double coalesce_tol, uint64_t seed, int* used) {
  int n = g.num_vertices();
  int cap = std::max(10, static_cast<int>(10.0 * std::log(std::max(2, n))));
  SpinState lo = SpinState::uniform(g, -1);
  SpinState hi = SpinState::uniform(g, 1);
  CounterRng rng_lo(seed, streams::kGlauber);
  CounterRng rng_hi(seed, streams::kGlauber);
  int sweeps = 0;
  for (; sweeps < cap; ++sweeps) {
    glauber_sweep(g, params, lo, rng_lo);
    glauber_sweep(g, params, hi, rng_hi);
    if (std::fabs(lo.energy_per_vertex(g) - hi.energy_per_vertex(g)) <=
        coalesce_tol)
      break;
  }
  if (used) *used = sweeps;
  return hi;
}

}  // namespace

EnergyEstimate estimate_energy(const Graph& g, const IsingParams& params,
                               const MCConfig& cfg, uint64_t seed) {
  check_fields(g, params);
  if (cfg.measure_sweeps < 100)
    throw std::invalid_argument("estimate_energy: measure >= 100 required");
  if (cfg.batches < 2) throw std::invalid_argument("estimate_energy: batches >= 2");

  SpinState state;
  CounterRng rng(seed, streams::kGlauber);
  int burn_used = 0;
  if (cfg.burn_in_sweeps < 0) {
    state = coupled_burn_in(g, params, cfg.coalesce_tol, seed, &burn_used);
    // Measure the surviving chain on a fresh stream.
    rng = CounterRng(seed, streams::kGlauber + 1);
  } else {
    state = SpinState::uniform(g, 1);
    for (int s = 0; s < cfg.burn_in_sweeps; ++s) glauber_sweep(g, params, state, rng);
    burn_used = cfg.burn_in_sweeps;
  }

  int per_batch = std::max(1, cfg.measure_sweeps / cfg.batches);
  std::vector<double> batch_mean(static_cast<size_t>(cfg.batches), 0.0);
  for (int b = 0; b < cfg.batches; ++b) {
    double acc = 0.0;
    for (int s = 0; s < per_batch; ++s) {
      glauber_sweep(g, params, state, rng);
      acc += state.energy_per_vertex(g);
    }
    batch_mean[static_cast<size_t>(b)] = acc / per_batch;
  }
  double mean = 0.0;
  for (double x : batch_mean) mean += x;
  mean /= cfg.batches;
  double var = 0.0;
  for (double x : batch_mean) var += (x - mean) * (x - mean);
  var /= (cfg.batches - 1);
  EnergyEstimate e;
  e.value = mean;
  e.std_error = std::sqrt(var / cfg.batches);
  e.burn_in_used = burn_used;
  return e;
}

EnergyEstimate estimate_energy(const Graph& g, const IsingParams& params,
                               int burn_in, int measure, uint64_t seed) {
  MCConfig cfg;
  cfg.burn_in_sweeps = burn_in;
  cfg.measure_sweeps = measure;
  return estimate_energy(g, params, cfg, seed);
}

TIResult thermo_integrate(const Graph& g, double field,
                          const std::vector<double>& beta_grid,
                          const MCConfig& cfg, uint64_t seed) {
  if (beta_grid.empty() || beta_grid.front() != 0.0)
    throw std::invalid_argument("thermo_integrate: grid must start at 0");
  for (size_t i = 1; i < beta_grid.size(); ++i) {
    double h = beta_grid[i] - beta_grid[i - 1];
    if (!(h > 0.0) || h > 0.1 + 1e-12)
      throw std::invalid_argument("thermo_integrate: grid spacing in (0, 0.1]");
  }

  // Energy estimate at every grid point and interval midpoint, each on its
  // own substream.
  size_t np = beta_grid.size();
  std::vector<double> e_grid(np), se_grid(np), e_mid(np - 1), se_mid(np - 1);
  auto measure_at = [&](double beta, uint64_t point) {
    IsingParams p(beta, field);
    return estimate_energy(g, p, cfg, seed + 0x9e3779b97f4a7c15ull * point);
  };
  for (size_t i = 0; i < np; ++i) {
    EnergyEstimate e = measure_at(beta_grid[i], i);
    e_grid[i] = e.value;
    se_grid[i] = e.std_error;
  }
  for (size_t i = 0; i + 1 < np; ++i) {
    EnergyEstimate e = measure_at(0.5 * (beta_grid[i] + beta_grid[i + 1]), np + i);
    e_mid[i] = e.value;
    se_mid[i] = e.std_error;
  }

  TIResult out;
  out.beta = beta_grid;
  out.phi.resize(np);
  out.std_error.resize(np);
  out.energy = e_grid;
  out.energy_std_error = se_grid;
  double anchor = log2cosh(field);
  out.phi[0] = anchor;
  out.std_error[0] = 0.0;
  // Cumulative Simpson; accumulate each measurement's total weight so shared
  // endpoints propagate their error once.
  std::vector<double> w_grid(np, 0.0), w_mid(np - 1, 0.0);
  double integral = 0.0;
  for (size_t i = 0; i + 1 < np; ++i) {
    double h = beta_grid[i + 1] - beta_grid[i];
    integral += h / 6.0 * (e_grid[i] + 4.0 * e_mid[i] + e_grid[i + 1]);
    w_grid[i] += h / 6.0;
    w_mid[i] += 4.0 * h / 6.0;
    w_grid[i + 1] += h / 6.0;
    out.phi[i + 1] = anchor + integral;
    double var = 0.0;
    for (size_t k = 0; k <= i + 1; ++k) var += w_grid[k] * w_grid[k] * se_grid[k] * se_grid[k];
    for (size_t k = 0; k <= i; ++k) var += w_mid[k] * w_mid[k] * se_mid[k] * se_mid[k];
    out.std_error[i + 1] = std::sqrt(var);
  }
  return out;
}

}  // namespace ising
