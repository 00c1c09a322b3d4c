#include <doctest.h>

#include <cmath>

#include "ising/exact.hpp"
#include "ising/generators.hpp"
#include "oracles.hpp"

using namespace ising;

TEST_CASE("single vertex and single edge against hand enumeration") {
  Graph v1 = Graph::from_edges(1, {});
  ExactSolution s = enumerate_exact(v1, IsingParams(0.9, 0.7));
  CHECK(s.log_partition == doctest::Approx(log2cosh(0.7)).epsilon(1e-14));
  CHECK(s.magnetization[0] == doctest::Approx(std::tanh(0.7)).epsilon(1e-14));

  Graph e1 = Graph::from_edges(2, {{0, 1}});
  ExactSolution se = enumerate_exact(e1, IsingParams(0.5, 0.2));
  // Z = 2 e^b cosh(2B) + 2 e^-b, evaluated independently.
  CHECK(se.log_partition == doctest::Approx(1.5639875880038339).epsilon(1e-13));
  CHECK(se.magnetization[0] == doctest::Approx(0.28348239197103636).epsilon(1e-13));
  CHECK(se.magnetization[1] == doctest::Approx(se.magnetization[0]).epsilon(1e-13));
  CHECK(se.edge_correlation[0] == doctest::Approx(0.4922130082335189).epsilon(1e-13));
  CHECK(exact_phi_n(e1, IsingParams(0.5, 0.2)) ==
        doctest::Approx(0.7819937940019169).epsilon(1e-13));
}

TEST_CASE("beta = 0 factorizes") {
  Graph g = oracle::petersen_graph();
  IsingParams p(0.0, 0.37);
  ExactSolution s = enumerate_exact(g, p);
  CHECK(s.log_partition == doctest::Approx(10 * log2cosh(0.37)).epsilon(1e-12));
  for (double m : s.magnetization)
    CHECK(m == doctest::Approx(std::tanh(0.37)).epsilon(1e-12));
  for (double c : s.edge_correlation)
    CHECK(c == doctest::Approx(std::tanh(0.37) * std::tanh(0.37)).epsilon(1e-12));
}

TEST_CASE("agrees with the naive oracle on random small graphs") {
  for (uint64_t seed : {1ull, 2ull, 3ull}) {
    Graph g = gen_erdos_renyi(9, 1.4, seed);
    IsingParams p(0.6, 0.25);
    ExactSolution s = enumerate_exact(g, p);
    std::vector<double> fields(9, 0.25);
    oracle::NaiveExact ref = oracle::naive_enumerate(9, g.edges(), 0.6, fields);
    CHECK(s.log_partition == doctest::Approx(ref.log_z).epsilon(1e-12));
    for (int v = 0; v < 9; ++v)
      CHECK(s.magnetization[static_cast<size_t>(v)] ==
            doctest::Approx(ref.magnetization[static_cast<size_t>(v)]).epsilon(1e-11));
    for (int e = 0; e < g.num_edges(); ++e)
      CHECK(s.edge_correlation[static_cast<size_t>(e)] ==
            doctest::Approx(ref.edge_correlation[static_cast<size_t>(e)]).epsilon(1e-11));
  }
}

TEST_CASE("cycle free entropy equals the transfer matrix trace") {
  Graph c18 = oracle::cycle_graph(18);
  double phi = exact_phi_n(c18, IsingParams(0.8, 0.3));
  CHECK(phi == doctest::Approx(oracle::cycle_phi(18, 0.8, 0.3)).epsilon(1e-11));
}

TEST_CASE("phi_n is symmetric in B") {
  Graph g = gen_erdos_renyi(10, 1.3, 5);
  for (double beta : {0.0, 0.4, 1.1}) {
    double plus = exact_phi_n(g, IsingParams(beta, 0.6));
    double minus = exact_phi_n(g, IsingParams(beta, -0.6));
    CHECK(plus == doctest::Approx(minus).epsilon(1e-12));
  }
}

TEST_CASE("conditioning with +inf fields matches manual filtering") {
  Graph g = oracle::cycle_graph(5);
  std::vector<ExtField> f(5, ExtField(0.3));
  f[2] = ExtField::plus_inf();
  ExactSolution cond = enumerate_exact(g, IsingParams(0.7, 0.3, f));
  CHECK(cond.magnetization[2] == 1.0);

  // Oracle: drop vertex 2's field, sum only over configurations with x_2 = +1.
  double z = 0.0, m0 = 0.0;
  for (uint64_t c = 0; c < 32; ++c) {
    if (!((c >> 2) & 1)) continue;
    double e = 0.0;
    for (auto [i, j] : g.edges()) {
      int si = (c >> i) & 1 ? 1 : -1, sj = (c >> j) & 1 ? 1 : -1;
      e += 0.7 * si * sj;
    }
    for (int v = 0; v < 5; ++v)
      if (v != 2) e += 0.3 * (((c >> v) & 1) ? 1 : -1);
    double w = std::exp(e);
    z += w;
    m0 += (((c >> 0) & 1) ? 1 : -1) * w;
  }
  CHECK(cond.log_partition == doctest::Approx(std::log(z)).epsilon(1e-13));
  CHECK(cond.magnetization[0] == doctest::Approx(m0 / z).epsilon(1e-13));
}

TEST_CASE("marginal_on_subset") {
  Graph e1 = Graph::from_edges(2, {{0, 1}});
  IsingParams p(0.5, 0.2);
  SpinMarginal full = marginal_on_subset(e1, p, {0, 1});
  // Hand enumeration: the four Boltzmann weights normalized.
  double z = 4.777835348657865;
  CHECK(full.prob[3] == doctest::Approx(std::exp(0.5 + 0.4) / z).epsilon(1e-12));
  CHECK(full.prob[0] == doctest::Approx(std::exp(0.5 - 0.4) / z).epsilon(1e-12));
  CHECK(full.prob[1] == doctest::Approx(std::exp(-0.5) / z).epsilon(1e-12));
  CHECK(full.prob[2] == doctest::Approx(std::exp(-0.5) / z).epsilon(1e-12));

  ExactSolution s = enumerate_exact(e1, p);
  SpinMarginal one = marginal_on_subset(e1, p, {1});
  CHECK(one.prob[1] == doctest::Approx(0.5 * (1 + s.magnetization[1])).epsilon(1e-12));

  // beta = 0: product of site marginals.
  Graph c6 = oracle::cycle_graph(6);
  IsingParams p0(0.0, 0.4);
  SpinMarginal m = marginal_on_subset(c6, p0, {1, 4, 5});
  double q = 0.5 * (1 + std::tanh(0.4));
  CHECK(m.prob[7] == doctest::Approx(q * q * q).epsilon(1e-12));
  CHECK(m.prob[0] == doctest::Approx((1 - q) * (1 - q) * (1 - q)).epsilon(1e-12));
  double total = 0.0;
  for (double pr : m.prob) total += pr;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tv_distance") {
  SpinMarginal p{{0}, {0.6, 0.4}}, q{{0}, {0.5, 0.5}};
  CHECK(tv_distance(p, q) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(tv_distance(p, p) == 0.0);
  SpinMarginal a{{0}, {1.0, 0.0}}, b{{0}, {0.0, 1.0}};
  CHECK(tv_distance(a, b) == 1.0);
  SpinMarginal other{{1}, {0.5, 0.5}};
  CHECK_THROWS_AS(tv_distance(p, other), std::invalid_argument);
  SpinMarginal unnorm{{0}, {0.9, 0.0}};
  CHECK_THROWS_AS(tv_distance(p, unnorm), std::invalid_argument);
}

TEST_CASE("enumeration is bit-stable across worker counts") {
  Graph g = oracle::cycle_graph(18);
  IsingParams p(0.8, 0.3);
  setenv("ISING_THREADS", "1", 1);
  ExactSolution a = enumerate_exact(g, p);
  setenv("ISING_THREADS", "4", 1);
  ExactSolution b = enumerate_exact(g, p);
  setenv("ISING_THREADS", "1", 1);
  CHECK(a.log_partition == b.log_partition);
  CHECK(a.magnetization == b.magnetization);
  CHECK(a.edge_correlation == b.edge_correlation);
}

TEST_CASE("capacity limits") {
  Graph big = oracle::cycle_graph(25);
  CHECK_THROWS_AS(enumerate_exact(big, IsingParams(0.1, 0.1)), std::length_error);
  Graph ok = oracle::cycle_graph(21);
  std::vector<int> all;
  for (int v = 0; v < 21; ++v) all.push_back(v);
  CHECK_THROWS_AS(marginal_on_subset(ok, IsingParams(0.1, 0.1), all),
                  std::length_error);
}
