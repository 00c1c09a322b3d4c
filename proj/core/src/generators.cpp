#include "ising/generators.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "ising/rng.hpp"

namespace ising {

namespace {

constexpr int kMaxRestarts = 10000;

void fisher_yates(std::vector<int>& v, CounterRng& rng) {
  for (size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[static_cast<size_t>(rng.next_below(i))]);
}

uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
}

// Pair consecutive stubs; returns false on self-loop / parallel edge when a
// simple graph is required.
bool match_stubs(const std::vector<int>& stubs, bool require_simple,
                 bool drop_bad, std::vector<std::pair<int, int>>& edges) {
  edges.clear();
  std::unordered_set<uint64_t> seen;
  for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
    int a = stubs[i], b = stubs[i + 1];
    if (a == b) {
      if (require_simple) return false;
      if (drop_bad) continue;
    }
    if (a != b && (require_simple || drop_bad) &&
        !seen.insert(edge_key(a, b)).second) {
      if (require_simple) return false;
      continue;  // collapse parallel edge
    }
    if (a != b) edges.emplace_back(a, b);
  }
  return true;
}

}  // namespace

Graph gen_random_regular(int n, int k, uint64_t seed) {
  if (k < 1 || n <= k) throw std::invalid_argument("gen_random_regular: need 1 <= k < n");
  if ((static_cast<int64_t>(n) * k) % 2 != 0)
    throw std::invalid_argument("gen_random_regular: n*k must be even");
  std::vector<int> stubs(static_cast<size_t>(n) * static_cast<size_t>(k));
  CounterRng rng(seed, streams::kRegularPairing);
  std::vector<std::pair<int, int>> edges;
  for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
    for (int v = 0; v < n; ++v)
      for (int j = 0; j < k; ++j)
        stubs[static_cast<size_t>(v) * k + j] = v;
    fisher_yates(stubs, rng);
    if (match_stubs(stubs, /*require_simple=*/true, /*drop_bad=*/false, edges))
      return Graph::from_edges(n, std::move(edges));
  }
  throw std::runtime_error("gen_random_regular: pairing failed after max restarts");
}

Graph gen_erdos_renyi(int n, double gamma, uint64_t seed) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gen_erdos_renyi: gamma must be > 0");
  if (n < 2) throw std::invalid_argument("gen_erdos_renyi: need n >= 2");
  int64_t m = static_cast<int64_t>(n * gamma);
  int64_t max_edges = static_cast<int64_t>(n) * (n - 1) / 2;
  if (m > max_edges)
    throw std::invalid_argument("gen_erdos_renyi: m exceeds n(n-1)/2");
  CounterRng rng(seed, streams::kErdosRenyi);
  std::unordered_set<uint64_t> seen;
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<size_t>(m));
  while (static_cast<int64_t>(edges.size()) < m) {
    int a = static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
    int b = static_cast<int>(rng.next_below(static_cast<uint64_t>(n)));
    if (a == b) continue;
    if (!seen.insert(edge_key(a, b)).second) continue;
    edges.emplace_back(a, b);
  }
  return Graph::from_edges(n, std::move(edges));
}

Graph gen_configuration(int n, const DegreeDistribution& p, uint64_t seed,
                        bool keep_multigraph) {
  if (n < 1) throw std::invalid_argument("gen_configuration: need n >= 1");

  // floor(n P_k) vertices of degree k >= 1, in increasing k; Poisson laws
  // come in through their truncated table.
  std::vector<int> degrees;
  degrees.reserve(static_cast<size_t>(n));
  int most_probable = 0;
  double best_p = -1.0;
  for (auto [k, pk] : p.table()) {
    if (pk > best_p) {
      best_p = pk;
      most_probable = k;
    }
    if (k < 1) continue;
    auto count = static_cast<int64_t>(n * pk);
    for (int64_t c = 0; c < count && static_cast<int>(degrees.size()) < n; ++c)
      degrees.push_back(k);
  }
  // Rounding residue: assign the most probable degree.
  while (static_cast<int>(degrees.size()) < n) degrees.push_back(most_probable);
  int64_t total = 0;
  for (int d : degrees) total += d;
  if (total == 0) throw std::invalid_argument("gen_configuration: empty degree sequence");
  if (total % 2 != 0) {
    // One extra degree-1 vertex; if none is spare, bump the first vertex.
    bool fixed = false;
    for (int& d : degrees)
      if (d == 0) {
        d = 1;
        fixed = true;
        break;
      }
    if (!fixed) degrees[0] += 1;
    ++total;
  }

  std::vector<int> stubs;
  stubs.reserve(static_cast<size_t>(total));
  for (int v = 0; v < n; ++v)
    for (int j = 0; j < degrees[static_cast<size_t>(v)]; ++j) stubs.push_back(v);
  CounterRng rng(seed, streams::kConfigModel);
  fisher_yates(stubs, rng);
  std::vector<std::pair<int, int>> edges;
  if (keep_multigraph) {
    // Keep parallel edges, drop self-loops (Graph forbids loops).
    for (size_t i = 0; i + 1 < stubs.size(); i += 2)
      if (stubs[i] != stubs[i + 1]) edges.emplace_back(stubs[i], stubs[i + 1]);
    return Graph::from_edges(n, std::move(edges), /*allow_multi=*/true);
  }
  match_stubs(stubs, /*require_simple=*/false, /*drop_bad=*/true, edges);
  return Graph::from_edges(n, std::move(edges));
}

}  // namespace ising
