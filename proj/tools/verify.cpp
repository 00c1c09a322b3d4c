#include "verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ising/bp.hpp"
#include "ising/cavity.hpp"
#include "ising/exact.hpp"
#include "ising/generators.hpp"
#include "ising/montecarlo.hpp"
#include "ising/tree.hpp"

namespace cli {

namespace {

using namespace ising;

bool check_xi_properties() {
  CounterRng rng(1, 0);
  for (int i = 0; i < 500; ++i) {
    double beta = 5.0 * rng.next_double();
    double h = 5.0 * rng.next_double();
    double v = xi(beta, ExtField(h));
    if (xi(beta, ExtField(-h)) != -v) return false;
    if (v < 0.0 || v > std::min(beta, h)) return false;
    if (std::fabs(v - std::atanh(std::tanh(beta) * std::tanh(h))) > 1e-12)
      return false;
  }
  return xi(1.25, ExtField::plus_inf()) == 1.25;
}

bool check_tree_sandwich() {
  DegreeDistribution pois = DegreeDistribution::poisson(3.0);
  IsingParams p(0.8, 0.3);
  for (uint64_t seed : {101ull, 102ull}) {
    RootedTree t = sample_tree(pois, 5, seed);
    double prev_f = -1.0, prev_p = 2.0;
    for (int l = 1; l <= 5; ++l) {
      RootedTree tl = t.truncated_at(l);
      double mf = root_magnetization(tl, p, BoundaryCondition::Free);
      double mp = root_magnetization(tl, p, BoundaryCondition::Plus);
      if (mf > mp + 1e-12) return false;
      if (mf < prev_f - 1e-12 || mp > prev_p + 1e-12) return false;
      prev_f = mf;
      prev_p = mp;
    }
  }
  return true;
}

bool check_bp_tree_exactness() {
  CounterRng rng(77, 0xdead);
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < 12; ++v)
    edges.emplace_back(static_cast<int>(rng.next_below(static_cast<uint64_t>(v))), v);
  Graph t = Graph::from_edges(12, std::move(edges));
  IsingParams p(0.9, 0.35);
  BPResult r = bp_fixed_point(t, p, init_messages(t, BPInit::Free), 1e-14, 100);
  if (!r.converged || r.residuals.back() != 0.0) return false;
  ExactSolution ref = enumerate_exact(t, p);
  for (int v = 0; v < 12; ++v)
    if (std::fabs(vertex_marginal(t, p, r.messages, v) -
                  ref.magnetization[static_cast<size_t>(v)]) > 1e-10)
      return false;
  return true;
}

bool check_computation_tree_identity() {
  Graph tri = Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  IsingParams p(0.9, 0.25);
  MessageSet m = init_messages(tri, BPInit::Free);
  for (int t = 0; t <= 4; ++t) {
    RootedTree ct = computation_tree(tri, 0, 1, t);
    double want = root_magnetization(ct, p, BoundaryCondition::Free);
    double got = std::tanh(m.h[static_cast<size_t>(tri.directed_index_pair(0, 1))].value());
    if (std::fabs(want - got) > 1e-10) return false;
    m = bp_sweep(tri, p, m).first;
  }
  return true;
}

bool check_cavity_monotone() {
  DegreeDistribution pois = DegreeDistribution::poisson(3.0);
  IsingParams p(0.7, 0.25);
  Population pop = population_init(2000);
  for (int t = 0; t < 8; ++t) {
    Population next = population_step(pop, pois, p, 5, /*crn=*/true);
    for (size_t j = 0; j < next.samples.size(); ++j)
      if (next.samples[j] < pop.samples[j] - 1e-12) return false;
    pop = std::move(next);
  }
  return true;
}

bool check_regular_collapse() {
  DegreeDistribution reg3 = DegreeDistribution::from_table({{3, 1.0}});
  IsingParams p(1.0, 0.1);
  DEResult r = population_fixed_point(reg3, p, 1000, 5, 1e-9, 2000);
  if (!r.converged || r.population.stddev() > 1e-12) return false;
  double h = regular_cavity_fixed_point(3, p);
  return std::fabs(r.population.mean() - h) < 1e-8;
}

bool check_exact_symmetry() {
  Graph g = gen_erdos_renyi(10, 1.3, 5);
  for (double beta : {0.0, 0.6}) {
    double d = exact_phi_n(g, IsingParams(beta, 0.45)) -
               exact_phi_n(g, IsingParams(beta, -0.45));
    if (std::fabs(d) > 1e-12) return false;
  }
  return true;
}

bool check_glauber_order() {
  Graph g = gen_random_regular(50, 3, 13);
  IsingParams p(0.9, 0.2);
  SpinState lo = SpinState::uniform(g, -1), hi = SpinState::uniform(g, 1);
  CounterRng ra(99, streams::kGlauber), rb(99, streams::kGlauber);
  for (int t = 0; t < 30; ++t) {
    glauber_sweep(g, p, lo, ra);
    glauber_sweep(g, p, hi, rb);
    for (int v = 0; v < 50; ++v)
      if (lo.spins[static_cast<size_t>(v)] > hi.spins[static_cast<size_t>(v)])
        return false;
  }
  return true;
}

bool check_griffiths_edge_monotone() {
  IsingParams p(0.5, 0.2);
  Graph path = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
  Graph cycle = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
  ExactSolution a = enumerate_exact(path, p), b = enumerate_exact(cycle, p);
  for (int v = 0; v < 4; ++v)
    if (b.magnetization[static_cast<size_t>(v)] <
        a.magnetization[static_cast<size_t>(v)] - 1e-12)
      return false;
  return true;
}

}  // namespace

int run_verify(bool quick) {
  (void)quick;
  struct Check {
    const char* name;
    std::function<bool()> fn;
  };
  std::vector<Check> checks = {
      {"xi oddness, bounds, closed-form consistency", check_xi_properties},
      {"tree plus/free sandwich monotone in depth", check_tree_sandwich},
      {"bp exact on trees within diameter sweeps", check_bp_tree_exactness},
      {"computation-tree identity", check_computation_tree_identity},
      {"density evolution stochastic monotonicity (CRN)", check_cavity_monotone},
      {"regular population collapses to scalar fixed point", check_regular_collapse},
      {"exact phi_n symmetric in B", check_exact_symmetry},
      {"glauber monotone coupling preserves order", check_glauber_order},
      {"griffiths monotone under edge addition", check_griffiths_edge_monotone},
  };
  int failures = 0;
  for (const Check& c : checks) {
    bool ok = false;
    try {
      ok = c.fn();
    } catch (const std::exception& e) {
      std::fprintf(stderr, "verify: %s threw: %s\n", c.name, e.what());
    }
    std::printf("%s  %s\n", ok ? "PASS" : "FAIL", c.name);
    if (!ok) ++failures;
  }
  return failures;
}

}  // namespace cli
