#include "ising/cavity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ising/parallel.hpp"
#include "ising/rng.hpp"

namespace ising {

namespace {

using detail::xi_unchecked;

constexpr int kMinPopulation = 1000;
constexpr int kMinMcSamples = 10000;
constexpr int kStabilityWindow = 10;

void check_population(const Population& pop) {
  if (static_cast<int>(pop.samples.size()) < kMinPopulation)
    throw std::invalid_argument("population: N >= 1000 required");
}

}  // namespace

double Population::mean() const {
  double s = 0.0;
  for (double x : samples) s += x;
  return s / static_cast<double>(samples.size());
}

double Population::stddev() const {
  double m = mean(), s = 0.0;
  for (double x : samples) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(samples.size()));
}

double Population::quantile(double q) const {
  if (samples.empty()) throw std::invalid_argument("quantile: empty population");
  std::vector<double> sorted = samples;
  std::sort(sorted.begin(), sorted.end());
  double pos = q * static_cast<double>(sorted.size() - 1);
  size_t lo = static_cast<size_t>(pos);
  size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

Population population_init(int n) {
  if (n < kMinPopulation)
    throw std::invalid_argument("population_init: N >= 1000 required");
  Population p;
  p.samples.assign(static_cast<size_t>(n), 0.0);
  p.generation = 0;
  return p;
}

Population population_step(const Population& pop, const DegreeDistribution& p,
                           const IsingParams& params, uint64_t seed,
                           bool common_random_numbers) {
  check_population(pop);
  double beta = params.beta();
  double b = params.field();
  size_t n = pop.samples.size();
  uint64_t gen_stream =
      common_random_numbers
          ? streams::kPopulationStep
          : streams::kPopulationStep +
                (static_cast<uint64_t>(pop.generation) + 1) * 0x100000000ull;
  Population next;
  next.samples.resize(n);
  next.generation = pop.generation + 1;
  parallel_for_blocks(static_cast<int64_t>(n), 4096, [&](int64_t lo, int64_t hi) {
    for (int64_t j = lo; j < hi; ++j) {
      CounterRng rng(seed, gen_stream + static_cast<uint64_t>(j));
      int k = p.sample_size_biased(rng);
      double h = b;
      for (int i = 0; i < k - 1; ++i)
        h += xi_unchecked(beta, pop.samples[rng.next_below(n)]);
      next.samples[static_cast<size_t>(j)] = h;
    }
  });
  return next;
}

DEResult population_fixed_point(const DegreeDistribution& p,
                                const IsingParams& params, int n, uint64_t seed,
                                double tol, int max_steps,
                                bool common_random_numbers) {
  if (!(tol > 0.0)) throw std::invalid_argument("population_fixed_point: tol > 0");
  DEResult r;
  r.population = population_init(n);
  r.zero_field_warning = params.field() == 0.0;
  int streak = 0;
  for (int s = 0; s < max_steps; ++s) {
    Population next =
        population_step(r.population, p, params, seed, common_random_numbers);
    double w1 = w1_distance(r.population, next);
    r.w1_history.push_back(w1);
    r.population = std::move(next);
    r.steps = s + 1;
    streak = w1 <= tol ? streak + 1 : 0;
    if (streak >= kStabilityWindow) {
      r.converged = true;
      break;
    }
  }
  return r;
}

PhiEstimate bethe_phi(const DegreeDistribution& p, const Population& pop,
                      const IsingParams& params, int mc_samples,
                      uint64_t seed) {
  check_population(pop);
  if (mc_samples < kMinMcSamples)
    throw std::invalid_argument("bethe_phi: mc_samples >= 10^4 required");
  // Only B > 0 is exposed; the B = 0 value is a limit, reachable through the
  // CLI extrapolation helper.
  if (!(params.field() > 0.0))
    throw std::invalid_argument("bethe_phi: B > 0 required");
  double beta = params.beta(), b = params.field();
  double u = std::tanh(beta);
  double pbar = p.mean_degree();
  size_t n = pop.samples.size();
  CounterRng rng(seed, streams::kBethePhi);

  // Edge term E log(1 + u t1 t2) and vertex term, sampled independently.
  double se_sum = 0.0, se_sq = 0.0;
  for (int s = 0; s < mc_samples; ++s) {
    double t1 = std::tanh(pop.samples[rng.next_below(n)]);
    double t2 = std::tanh(pop.samples[rng.next_below(n)]);
    double x = std::log1p(u * t1 * t2);
    se_sum += x;
    se_sq += x * x;
  }
  double sv_sum = 0.0, sv_sq = 0.0;
  for (int s = 0; s < mc_samples; ++s) {
    int l = p.sample(rng);
    double lp = b, lm = -b;
    for (int i = 0; i < l; ++i) {
      double t = std::tanh(pop.samples[rng.next_below(n)]);
      lp += std::log1p(u * t);
      lm += std::log1p(-u * t);
    }
    double v = logaddexp(lp, lm);
    sv_sum += v;
    sv_sq += v * v;
  }
  double m = static_cast<double>(mc_samples);
  double mean_e = se_sum / m, mean_v = sv_sum / m;
  double var_e = std::max(0.0, se_sq / m - mean_e * mean_e) / m;
  double var_v = std::max(0.0, sv_sq / m - mean_v * mean_v) / m;
  PhiEstimate out;
  out.value = 0.5 * pbar * std::log(std::cosh(beta)) - 0.5 * pbar * mean_e + mean_v;
  out.std_error = std::sqrt(0.25 * pbar * pbar * var_e + var_v);
  return out;
}

double regular_cavity_fixed_point(int k, const IsingParams& params) {
  if (k < 2) throw std::invalid_argument("regular cavity: k >= 2 required");
  if (!(params.field() > 0.0))
    throw std::invalid_argument("regular cavity: B > 0 required");
  double beta = params.beta(), b = params.field();
  double h = b;
  // Monotone iteration from h = B; Aitken extrapolation covers the
  // near-critical crawl where the plain map contracts slowly.
  for (int it = 0; it < 200000; ++it) {
    double h1 = b + (k - 1) * xi_unchecked(beta, h);
    double h2 = b + (k - 1) * xi_unchecked(beta, h1);
    double denom = h2 - 2.0 * h1 + h;
    double next = denom != 0.0 ? h - (h1 - h) * (h1 - h) / denom : h2;
    if (!(next >= 0.0) || !std::isfinite(next)) next = h2;
    if (std::fabs(next - h) < 1e-15 * (1.0 + std::fabs(next))) {
      h = next;
      break;
    }
    h = next;
  }
  // Settle onto the evaluated map's own fixed point.
  for (int it = 0; it < 64; ++it) {
    double next = b + (k - 1) * xi_unchecked(beta, h);
    if (next == h) break;
    h = next;
  }
  return h;
}

namespace {

double phi_point_mass(int k, double beta, double b, double h) {
  double u = std::tanh(beta);
  double t = std::tanh(h);
  return 0.5 * k * std::log(std::cosh(beta)) - 0.5 * k * std::log1p(u * t * t) +
         logaddexp(b + k * std::log1p(u * t), -b + k * std::log1p(-u * t));
}

}  // namespace

double bethe_phi_regular(int k, const IsingParams& params) {
  double h = regular_cavity_fixed_point(k, params);
  return phi_point_mass(k, params.beta(), params.field(), h);
}

PhiEstimate energy_density(const DegreeDistribution& p, const Population& pop,
                           const IsingParams& params, int mc_samples,
                           uint64_t seed) {
  check_population(pop);
  if (mc_samples < kMinMcSamples)
    throw std::invalid_argument("energy_density: mc_samples >= 10^4 required");
  double u = std::tanh(params.beta());
  double pbar = p.mean_degree();
  size_t n = pop.samples.size();
  CounterRng rng(seed, streams::kEnergyDensity);
  double sum = 0.0, sq = 0.0;
  for (int s = 0; s < mc_samples; ++s) {
    double x1 = std::tanh(pop.samples[rng.next_below(n)]);
    double x2 = std::tanh(pop.samples[rng.next_below(n)]);
    double e = (u + x1 * x2) / (1.0 + u * x1 * x2);
    sum += e;
    sq += e * e;
  }
  double m = static_cast<double>(mc_samples);
  double mean = sum / m;
  double var = std::max(0.0, sq / m - mean * mean) / m;
  PhiEstimate out;
  out.value = 0.5 * pbar * mean;
  out.std_error = 0.5 * pbar * std::sqrt(var);
  return out;
}

double energy_density_regular(int k, const IsingParams& params) {
  double u = std::tanh(params.beta());
  double t = std::tanh(regular_cavity_fixed_point(k, params));
  return 0.5 * k * (u + t * t) / (1.0 + u * t * t);
}

double w1_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("w1: empty input");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a.size() == b.size()) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
    return s / static_cast<double>(a.size());
  }
  // Unequal sizes: integrate |F_a^{-1}(q) - F_b^{-1}(q)| over the merged
  // quantile grid, which is the exact W1 between the empirical laws.
  size_t na = a.size(), nb = b.size();
  size_t ia = 0, ib = 0;
  double q = 0.0, s = 0.0;
  while (ia < na && ib < nb) {
    double qa = static_cast<double>(ia + 1) / static_cast<double>(na);
    double qb = static_cast<double>(ib + 1) / static_cast<double>(nb);
    double qn = std::min(qa, qb);
    s += (qn - q) * std::fabs(a[ia] - b[ib]);
    q = qn;
    if (qa <= qn) ++ia;
    if (qb <= qn) ++ib;
  }
  return s;
}

double w1_distance(const Population& a, const Population& b) {
  return w1_distance(a.samples, b.samples);
}

}  // namespace ising
