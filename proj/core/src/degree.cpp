#include "ising/degree.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ising {

AliasTable::AliasTable(const std::vector<double>& weights) {
  size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("AliasTable: empty");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("AliasTable: negative weight");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("AliasTable: zero total");
  prob_.resize(n);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  for (size_t i = 0; i < n; ++i) scaled[i] = weights[i] * n / total;
  std::vector<int> small, large;
  for (size_t i = 0; i < n; ++i)
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<int>(i));
  while (!small.empty() && !large.empty()) {
    int s = small.back(), l = large.back();
    small.pop_back();
    large.pop_back();
    prob_[static_cast<size_t>(s)] = scaled[static_cast<size_t>(s)];
    alias_[static_cast<size_t>(s)] = l;
    scaled[static_cast<size_t>(l)] -= 1.0 - scaled[static_cast<size_t>(s)];
    (scaled[static_cast<size_t>(l)] < 1.0 ? small : large).push_back(l);
  }
  for (int i : small) prob_[static_cast<size_t>(i)] = 1.0;
  for (int i : large) prob_[static_cast<size_t>(i)] = 1.0;
}

int AliasTable::sample(CounterRng& rng) const {
  size_t i = static_cast<size_t>(rng.next_below(prob_.size()));
  return rng.next_double() < prob_[i] ? static_cast<int>(i) : alias_[i];
}

namespace {
constexpr double kSumTol = 1e-9;
constexpr double kPoissonTailMass = 1e-12;
}  // namespace

DegreeDistribution DegreeDistribution::from_table(
    std::vector<std::pair<int, double>> pmf) {
  if (pmf.empty()) throw std::invalid_argument("degree table: empty");
  std::sort(pmf.begin(), pmf.end());
  double sum = 0.0;
  for (size_t i = 0; i < pmf.size(); ++i) {
    auto [k, p] = pmf[i];
    if (k < 0) throw std::invalid_argument("degree table: negative k");
    if (i > 0 && pmf[i - 1].first == k)
      throw std::invalid_argument("degree table: duplicate k");
    if (!(p >= 0.0)) throw std::invalid_argument("degree table: negative p");
    sum += p;
  }
  if (std::fabs(sum - 1.0) > kSumTol)
    throw std::invalid_argument("degree table: probabilities must sum to 1");
  DegreeDistribution d;
  d.table_ = std::move(pmf);
  d.finish_table();
  return d;
}

DegreeDistribution DegreeDistribution::poisson(double mean) {
  if (!(mean > 0.0) || !std::isfinite(mean))
    throw std::invalid_argument("poisson degree: mean must be finite and > 0");
  DegreeDistribution d;
  d.poisson_mean_ = mean;
  // Truncated table for contexts that need finite support.
  double p = std::exp(-mean);
  double cum = p;
  int k = 0;
  d.table_.emplace_back(0, p);
  while (cum < 1.0 - kPoissonTailMass) {
    ++k;
    p *= mean / k;
    d.table_.emplace_back(k, p);
    cum += p;
    if (k > 10000) throw std::runtime_error("poisson degree: truncation failed");
  }
  d.finish_table();
  // Exact moments, not the truncated-table ones.
  d.mean_degree_ = mean;
  d.mean_branching_ = mean;
  return d;
}

void DegreeDistribution::finish_table() {
  double mean = 0.0, second = 0.0;
  for (auto [k, p] : table_) {
    mean += k * p;
    second += static_cast<double>(k) * k * p;
  }
  if (!(mean > 0.0))
    throw std::invalid_argument("degree law: mean degree must be > 0");
  mean_degree_ = mean;
  mean_branching_ = (second - mean) / mean;  // E[K(K-1)]/E[K]

  std::vector<double> wp, wrho;
  for (auto [k, p] : table_) {
    support_.push_back(k);
    wp.push_back(p);
    if (k >= 1) {
      rho_support_.push_back(k);
      wrho.push_back(k * p);
    }
  }
  alias_p_ = AliasTable(wp);
  if (wrho.empty())
    throw std::invalid_argument("degree law: no mass on k >= 1");
  alias_rho_ = AliasTable(wrho);
}

double DegreeDistribution::pmf(int k) const {
  if (k < 0) return 0.0;
  if (is_poisson()) {
    double lg = -poisson_mean_ + k * std::log(poisson_mean_) -
                std::lgamma(static_cast<double>(k) + 1.0);
    return std::exp(lg);
  }
  auto it = std::lower_bound(table_.begin(), table_.end(),
                             std::make_pair(k, -1.0));
  return (it != table_.end() && it->first == k) ? it->second : 0.0;
}

double DegreeDistribution::rho_pmf(int k) const {
  if (k < 1) return 0.0;
  return k * pmf(k) / mean_degree_;
}

std::vector<std::pair<int, double>> DegreeDistribution::size_biased_table()
    const {
  std::vector<std::pair<int, double>> rho;
  for (auto [k, p] : table_)
    if (k >= 1) rho.emplace_back(k, k * p / mean_degree_);
  return rho;
}

int DegreeDistribution::sample(CounterRng& rng) const {
  if (is_poisson()) {
    // Direct inversion; the table's cumulative is truncated at mass 1e-12.
    double u = rng.next_double();
    double cum = 0.0;
    for (auto [k, p] : table_) {
      cum += p;
      if (u < cum) return k;
    }
    return table_.back().first;
  }
  return support_[static_cast<size_t>(alias_p_.sample(rng))];
}

int DegreeDistribution::sample_size_biased(CounterRng& rng) const {
  if (is_poisson()) {
    // K ~ rho is 1 + Poisson(mean); reuse inversion on the Poisson table.
    double u = rng.next_double();
    double cum = 0.0;
    for (auto [k, p] : table_) {
      cum += p;
      if (u < cum) return k + 1;
    }
    return table_.back().first + 1;
  }
  return rho_support_[static_cast<size_t>(alias_rho_.sample(rng))];
}

DegreeDistribution DegreeDistribution::parse(std::istream& in) {
  std::string line;
  std::vector<std::pair<int, double>> pmf;
  while (std::getline(in, line)) {
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first == "poisson") {
      double mean;
      if (!(ls >> mean)) throw std::runtime_error("degree file: bad poisson line");
      return poisson(mean);
    }
    int k = std::stoi(first);
    double p;
    if (!(ls >> p)) throw std::runtime_error("degree file: bad table line");
    pmf.emplace_back(k, p);
  }
  return from_table(std::move(pmf));
}

DegreeDistribution DegreeDistribution::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open degree file: " + path);
  return parse(in);
}

DegreeDistribution DegreeDistribution::parse_spec(const std::string& spec) {
  if (spec.rfind("poisson:", 0) == 0)
    return poisson(std::stod(spec.substr(8)));
  if (spec.rfind("table:", 0) == 0) {
    std::vector<std::pair<int, double>> pmf;
    std::istringstream ss(spec.substr(6));
    std::string item;
    while (std::getline(ss, item, ',')) {
      size_t colon = item.find(':');
      if (colon == std::string::npos)
        throw std::invalid_argument("degree spec: expected k:p");
      pmf.emplace_back(std::stoi(item.substr(0, colon)),
                       std::stod(item.substr(colon + 1)));
    }
    return from_table(std::move(pmf));
  }
  return parse_file(spec);
}

void write_degree(std::ostream& out, const DegreeDistribution& d) {
  if (d.is_poisson()) {
    out << "poisson " << d.poisson_mean() << '\n';
    return;
  }
  for (auto [k, p] : d.table()) out << k << ' ' << p << '\n';
}

}  // namespace ising
