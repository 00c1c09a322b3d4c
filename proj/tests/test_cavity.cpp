#include <doctest.h>

#include <cmath>

#include "ising/cavity.hpp"
#include "oracles.hpp"

using namespace ising;

namespace {

// Independent scalar oracle: bisection on h - B - (k-1) xi(beta, h) = 0.
double regular_root_bisect(int k, double beta, double b) {
  auto f = [&](double h) {
    return h - b - (k - 1) * std::atanh(std::tanh(beta) * std::tanh(h));
  };
  double lo = b, hi = b + (k - 1) * beta;
  if (f(hi) < 0) return hi;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("population init") {
  Population p = population_init(1000);
  CHECK(p.samples.size() == 1000);
  CHECK(p.generation == 0);
  CHECK(p.mean() == 0.0);
  CHECK_THROWS_AS(population_init(999), std::invalid_argument);
}

TEST_CASE("population step: regular law is the scalar map") {
  DegreeDistribution reg3 = DegreeDistribution::from_table({{3, 1.0}});
  IsingParams p(1.0, 0.1);
  Population pop = population_init(1000);
  double h = 0.0;
  for (int t = 0; t < 5; ++t) {
    pop = population_step(pop, reg3, p, 7);
    h = 0.1 + 2.0 * xi(1.0, ExtField(h));
    CHECK(pop.generation == t + 1);
    for (double s : pop.samples) CHECK(s == doctest::Approx(h).epsilon(1e-14));
  }
}

TEST_CASE("population step: beta = 0 collapses to B") {
  DegreeDistribution pois = DegreeDistribution::poisson(3.0);
  Population pop = population_init(2000);
  pop = population_step(pop, pois, IsingParams(0.0, 0.2), 3);
  for (double s : pop.samples) CHECK(s == 0.2);
}

TEST_CASE("population step: stepping the all-B pool gives B + m xi(beta,B), m ~ rho-1") {
  DegreeDistribution pois = DegreeDistribution::poisson(3.0);
  IsingParams p(0.5, 0.2);
  int n = 100000;
  Population pop = population_init(n);
  // From zeros the first step lands every sample exactly on B.
  pop = population_step(pop, pois, p, 11);
  for (double s : pop.samples) CHECK(s == 0.2);
  pop = population_step(pop, pois, p, 11);
  double step = xi(0.5, ExtField(0.2));
  // bucket the sample counts m = (s - B)/xi and chi-square against Poisson(3)
  std::vector<int> hist(30, 0);
  for (double s : pop.samples) {
    int m = static_cast<int>(std::lround((s - 0.2) / step));
    REQUIRE(m >= 0);
    CHECK(std::fabs(0.2 + m * step - s) < 1e-9);
    if (m < 30) hist[static_cast<size_t>(m)]++;
  }
  DegreeDistribution ref = DegreeDistribution::poisson(3.0);
  double chi2 = 0.0;
  int dof = 0;
  for (int m = 0; m < 12; ++m) {
    double expect = n * ref.pmf(m);
    if (expect < 10) continue;
    double diff = hist[static_cast<size_t>(m)] - expect;
    chi2 += diff * diff / expect;
    ++dof;
  }
  // 1% critical value for ~11 dof is about 24.7
  CHECK(chi2 < 24.7 + 6.0);
}

TEST_CASE("population fixed point: regular collapses to the bisection root") {
  DegreeDistribution reg3 = DegreeDistribution::from_table({{3, 1.0}});
  IsingParams p(1.0, 0.1);
  DEResult r = population_fixed_point(reg3, p, 1000, 5, 1e-9, 2000);
  CHECK(r.converged);
  CHECK(r.population.stddev() <= 1e-12);
  double root = regular_root_bisect(3, 1.0, 0.1);
  CHECK(std::fabs(r.population.mean() - root) <= 1e-6);
  CHECK(w1_distance(r.population, Population{std::vector<double>(1000, root), 0}) <= 1e-6);
  // matches the library's own scalar solver too
  CHECK(regular_cavity_fixed_point(3, p) == doctest::Approx(root).epsilon(1e-10));
}

TEST_CASE("population fixed point: beta = 0 is a point mass at B") {
  DegreeDistribution pois = DegreeDistribution::poisson(3.0);
  DEResult r = population_fixed_point(pois, IsingParams(0.0, 0.4), 1000, 3, 1e-12, 50);
  CHECK(r.converged);
  for (double s : r.population.samples) CHECK(s == 0.4);  // exactly B
  CHECK(r.population.stddev() <= 1e-14);
}

TEST_CASE("subcritical field stays small") {
  DegreeDistribution pois = DegreeDistribution::poisson(3.0);
  double beta_sub = critical_beta(3.0).value - 0.2;
  IsingParams p(beta_sub, 1e-3);
  DEResult r = population_fixed_point(pois, p, 10000, 9, 2e-4, 500);
  CHECK(r.population.mean() <= 0.05);
}

TEST_CASE("stochastic monotonicity under common random numbers") {
  DegreeDistribution pois = DegreeDistribution::poisson(3.0);
  IsingParams p(0.7, 0.25);
  Population pop = population_init(5000);
  Population prev = pop;
  for (int t = 0; t < 12; ++t) {
    Population next = population_step(pop, pois, p, 21, /*crn=*/true);
    // same (K, index) draws each generation couple the chains samplewise
    for (size_t j = 0; j < next.samples.size(); ++j)
      CHECK(next.samples[j] >= pop.samples[j] - 1e-12);
    prev = std::move(pop);
    pop = std::move(next);
  }
  // support bound: B + beta * (K_max - 1)
  for (double s : pop.samples) {
    CHECK(s >= 0.0);
    CHECK(s <= 0.25 + 0.7 * 40);
  }
}

TEST_CASE("bethe_phi at beta = 0 is exact") {
  DegreeDistribution pois = DegreeDistribution::poisson(3.0);
  Population pop = population_init(1000);
  PhiEstimate phi = bethe_phi(pois, pop, IsingParams(0.0, 0.3), 10000, 4);
  CHECK(phi.value == doctest::Approx(log2cosh(0.3)).epsilon(1e-12));
  CHECK(phi.std_error <= 1e-12);
}

TEST_CASE("bethe_phi saturates to (P/2) beta + B for large B") {
  DegreeDistribution reg3 = DegreeDistribution::from_table({{3, 1.0}});
  IsingParams p(0.5, 10.0);
  DEResult r = population_fixed_point(reg3, p, 1000, 6, 1e-10, 500);
  PhiEstimate phi = bethe_phi(reg3, r.population, p, 10000, 5);
  CHECK(std::fabs(phi.value - (1.5 * 0.5 + 10.0)) <= 1e-3);
}

TEST_CASE("bethe_phi matches the regular closed form within 3 sigma") {
  DegreeDistribution reg3 = DegreeDistribution::from_table({{3, 1.0}});
  IsingParams p(0.5, 0.2);
  DEResult r = population_fixed_point(reg3, p, 1000, 8, 1e-10, 1000);
  PhiEstimate phi = bethe_phi(reg3, r.population, p, 100000, 6);
  double ref = bethe_phi_regular(3, p);
  CHECK(std::fabs(phi.value - ref) <= 3.0 * std::max(phi.std_error, 1e-12) + 1e-10);
}

TEST_CASE("bethe_phi_regular") {
  // beta = 0.
  CHECK(bethe_phi_regular(3, IsingParams(0.0, 0.3)) ==
        doctest::Approx(log2cosh(0.3)).epsilon(1e-13));
  // k = 2 equals the 1D transfer-matrix free entropy.
  for (double beta : {0.2, 0.5, 0.8, 1.1, 1.4}) {
    for (double b : {0.1, 0.5}) {
      CHECK(bethe_phi_regular(2, IsingParams(beta, b)) ==
            doctest::Approx(std::log(oracle::transfer_lambda_max(beta, b)))
                .epsilon(1e-9));
    }
  }
  CHECK_THROWS_AS(bethe_phi_regular(1, IsingParams(0.5, 0.2)), std::invalid_argument);
  CHECK_THROWS_AS(bethe_phi_regular(3, IsingParams(0.5, 0.0)), std::invalid_argument);
}

TEST_CASE("energy density") {
  DegreeDistribution pois = DegreeDistribution::poisson(3.0);
  // beta = 0: (P/2) tanh^2 B, population is a point mass at B.
  IsingParams p0(0.0, 0.4);
  DEResult r0 = population_fixed_point(pois, p0, 1000, 2, 1e-12, 50);
  PhiEstimate e0 = energy_density(pois, r0.population, p0, 10000, 3);
  CHECK(e0.value == doctest::Approx(1.5 * std::tanh(0.4) * std::tanh(0.4)).epsilon(1e-12));

  // large B: (P/2).
  DegreeDistribution reg3 = DegreeDistribution::from_table({{3, 1.0}});
  IsingParams pb(0.5, 12.0);
  DEResult rb = population_fixed_point(reg3, pb, 1000, 2, 1e-10, 200);
  PhiEstimate eb = energy_density(reg3, rb.population, pb, 10000, 4);
  CHECK(std::fabs(eb.value - 1.5) <= 1e-3);

  // central difference of the deterministic regular phi
  for (double beta : {0.3, 0.5, 0.9}) {
    IsingParams p(beta, 0.2);
    double eps = 1e-3;
    double fd = (bethe_phi_regular(3, p.with_beta(beta + eps)) -
                 bethe_phi_regular(3, p.with_beta(beta - eps))) /
                (2 * eps);
    CHECK(std::fabs(fd - energy_density_regular(3, p)) <= 1e-4);
  }
}

TEST_CASE("w1 distance") {
  Population a{std::vector<double>(1000, 0.0), 0};
  Population b = a;
  CHECK(w1_distance(a, b) == 0.0);
  for (auto& s : b.samples) s += 0.7;
  CHECK(w1_distance(a, b) == doctest::Approx(0.7).epsilon(1e-14));
  // two-point masses {0,1} vs {1/2,1/2}
  CHECK(w1_distance(std::vector<double>{0.0, 1.0}, std::vector<double>{0.5, 0.5}) ==
        doctest::Approx(0.5).epsilon(1e-14));
  // unequal sizes, exact quantile coupling: {0,1} vs {0,0,1,1} are equal laws
  CHECK(w1_distance(std::vector<double>{0.0, 1.0},
                    std::vector<double>{0.0, 0.0, 1.0, 1.0}) ==
        doctest::Approx(0.0).epsilon(1e-14));
  CHECK(w1_distance(std::vector<double>{0.0},
                    std::vector<double>{0.25, 0.75}) ==
        doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("population step is independent of the worker count") {
  DegreeDistribution pois = DegreeDistribution::poisson(3.0);
  IsingParams p(0.7, 0.25);
  Population pop = population_init(5000);
  pop = population_step(pop, pois, p, 3);
  setenv("ISING_THREADS", "1", 1);
  Population a = population_step(pop, pois, p, 4);
  setenv("ISING_THREADS", "4", 1);
  Population b = population_step(pop, pois, p, 4);
  setenv("ISING_THREADS", "1", 1);
  CHECK(a.samples == b.samples);
}

TEST_CASE("zero start and large start converge to the same law") {
  DegreeDistribution pois = DegreeDistribution::poisson(3.0);
  IsingParams p(0.8, 0.3);
  int n = 20000;
  // Per-step W1 at equilibrium is O(sd/sqrt(N)); the detection tol must sit
  // above that noise floor.
  DEResult zero = population_fixed_point(pois, p, n, 31, 0.04, 400);
  CHECK(zero.converged);
  // "plus-like" start, same seed: the shared draws couple the two runs, so
  // forgetting the initial condition shows up as a collapsing W1.
  Population big;
  big.samples.assign(static_cast<size_t>(n), 50.0);
  big.generation = 0;
  for (int t = 0; t < zero.steps; ++t) big = population_step(big, pois, p, 31);
  CHECK(w1_distance(zero.population, big) <= 5.0 / std::sqrt(static_cast<double>(n)));
}
