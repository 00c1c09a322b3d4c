#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "ising/rng.hpp"

namespace ising {

// Walker alias table for sampling from a finite discrete law in O(1).
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(const std::vector<double>& weights);
  int sample(CounterRng& rng) const;
  bool empty() const noexcept { return prob_.empty(); }

 private:
  std::vector<double> prob_;
  std::vector<int> alias_;
};

// Degree law P over nonnegative integers, either a finite table or
// Poisson(mean), with its size-biased version rho_k = k P_k / sum_l l P_l.
// For Poisson(c) the size-biased offspring count K-1 is again Poisson(c),
// so mean degree and mean branching are both c.
class DegreeDistribution {
 public:
  static DegreeDistribution from_table(std::vector<std::pair<int, double>> pmf);
  static DegreeDistribution poisson(double mean);
  // "poisson <mean>" or lines "k p_k"; '#' lines ignored.
  static DegreeDistribution parse(std::istream& in);
  static DegreeDistribution parse_file(const std::string& path);
  // "poisson:<mean>" or "table:k:p[,k:p...]" or a file path.
  static DegreeDistribution parse_spec(const std::string& spec);

  bool is_poisson() const noexcept { return poisson_mean_ > 0.0; }
  double poisson_mean() const noexcept { return poisson_mean_; }
  double pmf(int k) const;
  double rho_pmf(int k) const;
  double mean_degree() const noexcept { return mean_degree_; }       // P-bar
  double mean_branching() const noexcept { return mean_branching_; } // rho-bar

  // Finite table view; Poisson laws are truncated where the tail mass drops
  // below 1e-12 (the leftover mass is not renormalized).
  const std::vector<std::pair<int, double>>& table() const noexcept {
    return table_;
  }
  std::vector<std::pair<int, double>> size_biased_table() const;

  int sample(CounterRng& rng) const;              // K ~ P
  int sample_size_biased(CounterRng& rng) const;  // K ~ rho

 private:
  DegreeDistribution() = default;
  void finish_table();

  double poisson_mean_ = 0.0;  // > 0 iff Poisson
  std::vector<std::pair<int, double>> table_;
  double mean_degree_ = 0.0;
  double mean_branching_ = 0.0;
  AliasTable alias_p_;
  AliasTable alias_rho_;
  std::vector<int> support_;      // table_ k values, aligned with alias draws
  std::vector<int> rho_support_;
};

void write_degree(std::ostream& out, const DegreeDistribution& d);

}  // namespace ising
