#include <doctest.h>

#include <cmath>

#include "ising/exact.hpp"
#include "ising/generators.hpp"
#include "ising/montecarlo.hpp"
#include "oracles.hpp"

using namespace ising;

TEST_CASE("heat bath at beta = 0 samples independent spins") {
  Graph g = gen_random_regular(200, 3, 4);
  IsingParams p(0.0, 0.35);
  SpinState s = SpinState::uniform(g, -1);
  CounterRng rng(9, streams::kGlauber);
  int sweeps = 500;
  double mag = 0.0;
  for (int t = 0; t < 50; ++t) glauber_sweep(g, p, s, rng);  // burn-in
  for (int t = 0; t < sweeps; ++t) {
    glauber_sweep(g, p, s, rng);
    for (int8_t x : s.spins) mag += x;
  }
  mag /= sweeps * 200.0;
  // sd of the estimate ~ 1/sqrt(200 * sweeps), generous 3 sigma
  CHECK(std::fabs(mag - std::tanh(0.35)) <= 3.0 / std::sqrt(200.0 * sweeps) + 0.01);
}

TEST_CASE("plus-infinity fields absorb") {
  Graph g = oracle::cycle_graph(6);
  std::vector<ExtField> f(6, ExtField::plus_inf());
  IsingParams p(0.5, 0.2, f);
  SpinState s = SpinState::uniform(g, -1);
  CounterRng rng(2, streams::kGlauber);
  for (int t = 0; t < 5; ++t) glauber_sweep(g, p, s, rng);
  for (int8_t x : s.spins) CHECK(x == 1);
  CHECK(s.edge_sum == 6);
}

TEST_CASE("cached sums stay consistent with the spins") {
  Graph g = gen_erdos_renyi(50, 1.5, 8);
  IsingParams p(0.7, 0.1);
  SpinState s = SpinState::uniform(g, 1);
  CounterRng rng(5, streams::kGlauber);
  for (int t = 0; t < 20; ++t) glauber_sweep(g, p, s, rng);
  int64_t edges = 0;
  for (int e = 0; e < g.num_edges(); ++e) {
    auto [i, j] = g.edge(e);
    edges += s.spins[static_cast<size_t>(i)] * s.spins[static_cast<size_t>(j)];
  }
  CHECK(edges == s.edge_sum);
  for (int v = 0; v < g.num_vertices(); ++v) {
    int32_t acc = 0;
    for (const Adj& a : g.neighbors(v)) acc += s.spins[static_cast<size_t>(a.to)];
    CHECK(acc == s.nbr_sum[static_cast<size_t>(v)]);
  }
}

TEST_CASE("single edge empirical law matches the Boltzmann distribution") {
  Graph g = Graph::from_edges(2, {{0, 1}});
  IsingParams p(0.6, 0.25);
  SpinState s = SpinState::uniform(g, 1);
  CounterRng rng(12, streams::kGlauber);
  // 10^6 single-site updates = 5*10^5 sweeps of n = 2.
  int sweeps = 500000;
  std::vector<double> counts(4, 0.0);
  for (int t = 0; t < 200; ++t) glauber_sweep(g, p, s, rng);
  for (int t = 0; t < sweeps; ++t) {
    glauber_sweep(g, p, s, rng);
    int idx = (s.spins[0] > 0 ? 1 : 0) | (s.spins[1] > 0 ? 2 : 0);
    counts[static_cast<size_t>(idx)] += 1.0;
  }
  SpinMarginal emp{{0, 1}, {}};
  emp.prob.resize(4);
  for (size_t i = 0; i < 4; ++i) emp.prob[i] = counts[i] / sweeps;
  SpinMarginal exact = marginal_on_subset(g, p, {0, 1});
  CHECK(tv_distance(emp, exact) <= 0.01);

  // empirical <x0 x1> within 3 sigma of enumeration
  double corr_emp = emp.prob[0] + emp.prob[3] - emp.prob[1] - emp.prob[2];
  double corr = enumerate_exact(g, p).edge_correlation[0];
  CHECK(std::fabs(corr_emp - corr) <= 0.01);
}

TEST_CASE("shared randomness preserves the coordinatewise order") {
  Graph g = gen_random_regular(60, 3, 13);
  IsingParams p(0.9, 0.2);
  SpinState lo = SpinState::uniform(g, -1);
  SpinState hi = SpinState::uniform(g, 1);
  CounterRng ra(99, streams::kGlauber), rb(99, streams::kGlauber);
  for (int t = 0; t < 80; ++t) {
    glauber_sweep(g, p, lo, ra);
    glauber_sweep(g, p, hi, rb);
    for (int v = 0; v < 60; ++v)
      CHECK(lo.spins[static_cast<size_t>(v)] <= hi.spins[static_cast<size_t>(v)]);
  }
}

TEST_CASE("energy estimator sanity") {
  // beta = 0: E[(1/n) sum x_i x_j] = (m/n) tanh^2 B.
  Graph g = gen_random_regular(400, 3, 3);
  IsingParams p0(0.0, 0.4);
  EnergyEstimate e0 = estimate_energy(g, p0, 50, 2000, 17);
  double expect = 1.5 * std::tanh(0.4) * std::tanh(0.4);
  CHECK(std::fabs(e0.value - expect) <= 3 * e0.std_error + 0.005);

  // small graph: against enumeration.
  Graph c = oracle::cycle_graph(12);
  IsingParams p(0.7, 0.3);
  ExactSolution ref = enumerate_exact(c, p);
  double ref_energy = 0.0;
  for (double x : ref.edge_correlation) ref_energy += x;
  ref_energy /= 12.0;
  EnergyEstimate e = estimate_energy(c, p, 200, 20000, 23);
  CHECK(std::fabs(e.value - ref_energy) <= 3 * e.std_error + 0.01);

  // saturation: B large -> m/n.
  IsingParams pb(0.4, 8.0);
  EnergyEstimate eb = estimate_energy(g, pb, 20, 500, 5);
  CHECK(std::fabs(eb.value - 1.5) <= 0.01);

  CHECK_THROWS_AS(estimate_energy(g, p0, 10, 50, 1), std::invalid_argument);
}

TEST_CASE("auto burn-in reports coalescence") {
  Graph g = gen_random_regular(200, 3, 31);
  IsingParams p(0.4, 0.5);
  MCConfig cfg;
  cfg.measure_sweeps = 400;
  EnergyEstimate e = estimate_energy(g, p, cfg, 3);
  CHECK(e.burn_in_used >= 1);
  CHECK(e.burn_in_used <= static_cast<int>(10 * std::log(200.0)) + 1);
}

TEST_CASE("thermodynamic integration hits the exact cycle value") {
  Graph c = oracle::cycle_graph(18);
  std::vector<double> grid;
  for (int i = 0; i <= 8; ++i) grid.push_back(0.1 * i);
  MCConfig cfg;
  cfg.measure_sweeps = 3000;
  TIResult ti = thermo_integrate(c, 0.3, grid, cfg, 19);
  CHECK(ti.phi[0] == log2cosh(0.3));
  CHECK(ti.std_error[0] == 0.0);
  for (size_t i = 0; i < grid.size(); ++i) {
    double exact = exact_phi_n(c, IsingParams(grid[i], 0.3));
    CHECK(std::fabs(ti.phi[i] - exact) <= std::max(3 * ti.std_error[i], 2e-3));
  }
  CHECK_THROWS_AS(thermo_integrate(c, 0.3, {0.1, 0.2}, cfg, 1), std::invalid_argument);
  CHECK_THROWS_AS(thermo_integrate(c, 0.3, {0.0, 0.3}, cfg, 1), std::invalid_argument);
}

TEST_CASE("energy is nondecreasing in beta (Griffiths at sampler level)") {
  Graph g = gen_random_regular(500, 3, 41);
  MCConfig cfg;
  cfg.measure_sweeps = 1500;
  double prev = -1.0;
  for (double beta : {0.0, 0.25, 0.5, 0.75}) {
    EnergyEstimate e = estimate_energy(g, IsingParams(beta, 0.2), cfg, 7);
    CHECK(e.value >= prev - 3 * e.std_error - 0.01);
    prev = e.value;
  }
}
