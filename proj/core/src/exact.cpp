#include "ising/exact.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "ising/parallel.hpp"

namespace ising {

namespace {

constexpr int kMaxVertices = 24;
constexpr int64_t kBlock = 1 << 16;

struct Partition {
  std::vector<int> free_vertices;   // finite-field vertices, enumerated
  std::vector<uint8_t> fixed;       // 1 where pinned to +1
  std::vector<double> finite_field; // b_i for finite-field vertices, 0 elsewhere
  bool uniform;                     // all finite fields equal params.field()
};

Partition split_vertices(const Graph& g, const IsingParams& params) {
  int n = g.num_vertices();
  if (n < 1) throw std::invalid_argument("enumerate: empty graph");
  if (n > kMaxVertices) throw std::length_error("enumerate: n > 24");
  if (params.has_per_vertex() &&
      static_cast<int>(params.per_vertex().size()) != n)
    throw std::invalid_argument("enumerate: per-vertex field size mismatch");
  Partition p;
  p.fixed.assign(static_cast<size_t>(n), 0);
  p.finite_field.assign(static_cast<size_t>(n), 0.0);
  p.uniform = !params.has_per_vertex();
  for (int v = 0; v < n; ++v) {
    ExtField f = params.field_at(v);
    if (f.is_plus_inf()) {
      p.fixed[static_cast<size_t>(v)] = 1;
    } else {
      p.free_vertices.push_back(v);
      p.finite_field[static_cast<size_t>(v)] = f.value();
    }
  }
  return p;
}

// State of the Gray-code walk over the free vertices.
struct Walker {
  const Graph* g;
  const Partition* part;
  double beta, uniform_field;
  std::vector<int8_t> spin;
  int64_t edge_sum;  // sum over edges of x_i x_j, exact integer
  int spin_sum;      // sum over non-pinned spins

  void init(int64_t config) {
    int n = g->num_vertices();
    spin.assign(static_cast<size_t>(n), 1);
    uint64_t gray = static_cast<uint64_t>(config) ^
                    (static_cast<uint64_t>(config) >> 1);
    for (size_t b = 0; b < part->free_vertices.size(); ++b)
      if (!((gray >> b) & 1))
        spin[static_cast<size_t>(part->free_vertices[b])] = -1;
    edge_sum = 0;
    for (int e = 0; e < g->num_edges(); ++e) {
      auto [i, j] = g->edge(e);
      edge_sum += spin[static_cast<size_t>(i)] * spin[static_cast<size_t>(j)];
    }
    spin_sum = 0;
    for (int v : part->free_vertices) spin_sum += spin[static_cast<size_t>(v)];
  }

  // Flip the b-th free vertex.
  void flip(int b) {
    int v = part->free_vertices[static_cast<size_t>(b)];
    int8_t old = spin[static_cast<size_t>(v)];
    int nb_sum = 0;
    for (const Adj& a : g->neighbors(v)) nb_sum += spin[static_cast<size_t>(a.to)];
    edge_sum -= 2 * old * nb_sum;
    spin[static_cast<size_t>(v)] = static_cast<int8_t>(-old);
    spin_sum -= 2 * old;
  }

  double exponent() const {
    double field_term;
    if (part->uniform) {
      field_term = uniform_field * spin_sum;
    } else {
      field_term = 0.0;
      for (int v : part->free_vertices)
        field_term += part->finite_field[static_cast<size_t>(v)] *
                      spin[static_cast<size_t>(v)];
    }
    return beta * static_cast<double>(edge_sum) + field_term;
  }
};

struct BlockAccum {
  double max_e = -kInf;
  double z = 0.0;
  std::vector<double> vplus;  // per vertex: sum of weights with x_i = +1
  std::vector<double> eplus;  // per edge: sum of weights with x_i x_j = +1

  void rescale(double new_max) {
    double f = std::exp(max_e - new_max);
    z *= f;
    for (double& x : vplus) x *= f;
    for (double& x : eplus) x *= f;
    max_e = new_max;
  }
};

}  // namespace

ExactSolution enumerate_exact(const Graph& g, const IsingParams& params) {
  Partition part = split_vertices(g, params);
  int n = g.num_vertices(), m = g.num_edges();
  int nf = static_cast<int>(part.free_vertices.size());
  int64_t total = int64_t{1} << nf;
  int64_t blocks = (total + kBlock - 1) / kBlock;

  std::vector<BlockAccum> acc(static_cast<size_t>(blocks));
  parallel_for_blocks(total, kBlock, [&](int64_t lo, int64_t hi) {
    BlockAccum& a = acc[static_cast<size_t>(lo / kBlock)];
    a.vplus.assign(static_cast<size_t>(n), 0.0);
    a.eplus.assign(static_cast<size_t>(m), 0.0);
    Walker w{&g, &part, params.beta(), params.field(), {}, 0, 0};
    w.init(lo);
    for (int64_t c = lo; c < hi; ++c) {
      if (c != lo) w.flip(std::countr_zero(static_cast<uint64_t>(c)));
      double e = w.exponent();
      if (e > a.max_e) a.rescale(e);
      double weight = std::exp(e - a.max_e);
      a.z += weight;
      // TODO: a log-Z-only path could skip these accumulators; at n = 24 they
      // dominate the per-configuration cost.
      for (int v = 0; v < n; ++v)
        if (w.spin[static_cast<size_t>(v)] > 0) a.vplus[static_cast<size_t>(v)] += weight;
      for (int ei = 0; ei < m; ++ei) {
        auto [i, j] = g.edge(ei);
        if (w.spin[static_cast<size_t>(i)] == w.spin[static_cast<size_t>(j)])
          a.eplus[static_cast<size_t>(ei)] += weight;
      }
    }
  });

  // Deterministic merge in block order.
  BlockAccum tot;
  tot.vplus.assign(static_cast<size_t>(n), 0.0);
  tot.eplus.assign(static_cast<size_t>(m), 0.0);
  for (BlockAccum& a : acc) {
    if (a.z == 0.0) continue;
    if (a.max_e > tot.max_e) tot.rescale(a.max_e);
    double f = std::exp(a.max_e - tot.max_e);
    tot.z += a.z * f;
    for (int v = 0; v < n; ++v) tot.vplus[static_cast<size_t>(v)] += a.vplus[static_cast<size_t>(v)] * f;
    for (int e = 0; e < m; ++e) tot.eplus[static_cast<size_t>(e)] += a.eplus[static_cast<size_t>(e)] * f;
  }

  ExactSolution sol;
  sol.log_partition = tot.max_e + std::log(tot.z);
  sol.magnetization.resize(static_cast<size_t>(n));
  sol.edge_correlation.resize(static_cast<size_t>(m));
  for (int v = 0; v < n; ++v)
    sol.magnetization[static_cast<size_t>(v)] = 2.0 * tot.vplus[static_cast<size_t>(v)] / tot.z - 1.0;
  for (int e = 0; e < m; ++e)
    sol.edge_correlation[static_cast<size_t>(e)] = 2.0 * tot.eplus[static_cast<size_t>(e)] / tot.z - 1.0;
  return sol;
}

SpinMarginal marginal_on_subset(const Graph& g, const IsingParams& params,
                                std::vector<int> subset) {
  Partition part = split_vertices(g, params);
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  if (subset.empty()) throw std::invalid_argument("marginal: empty subset");
  if (subset.size() > 20) throw std::length_error("marginal: |U| > 20");
  for (int v : subset)
    if (v < 0 || v >= g.num_vertices())
      throw std::invalid_argument("marginal: vertex out of range");

  // bit position within the bucket index per vertex, -1 if outside U.
  std::vector<int> upos(static_cast<size_t>(g.num_vertices()), -1);
  for (size_t k = 0; k < subset.size(); ++k)
    upos[static_cast<size_t>(subset[k])] = static_cast<int>(k);

  size_t nbuckets = size_t{1} << subset.size();
  std::vector<double> bmax(nbuckets, -kInf), bsum(nbuckets, 0.0);

  int nf = static_cast<int>(part.free_vertices.size());
  int64_t total = int64_t{1} << nf;
  Walker w{&g, &part, params.beta(), params.field(), {}, 0, 0};
  w.init(0);
  uint32_t bucket0 = 0;
  for (int v : subset)
    if (w.spin[static_cast<size_t>(v)] > 0)
      bucket0 |= uint32_t{1} << upos[static_cast<size_t>(v)];
  uint32_t bucket = bucket0;
  for (int64_t c = 0; c < total; ++c) {
    if (c != 0) {
      int b = std::countr_zero(static_cast<uint64_t>(c));
      int v = part.free_vertices[static_cast<size_t>(b)];
      w.flip(b);
      if (upos[static_cast<size_t>(v)] >= 0)
        bucket ^= uint32_t{1} << upos[static_cast<size_t>(v)];
    }
    double e = w.exponent();
    double& mx = bmax[bucket];
    double& s = bsum[bucket];
    if (e > mx) {
      s = s * std::exp(mx - e) + 1.0;
      mx = e;
    } else {
      s += std::exp(e - mx);
    }
  }

  double log_z = -kInf;
  for (size_t b = 0; b < nbuckets; ++b)
    if (bsum[b] > 0.0) log_z = logaddexp(log_z, bmax[b] + std::log(bsum[b]));
  SpinMarginal out;
  out.vertices = std::move(subset);
  out.prob.resize(nbuckets, 0.0);
  for (size_t b = 0; b < nbuckets; ++b)
    if (bsum[b] > 0.0)
      out.prob[b] = std::exp(bmax[b] + std::log(bsum[b]) - log_z);
  return out;
}

double exact_phi_n(const Graph& g, const IsingParams& params) {
  return enumerate_exact(g, params).log_partition / g.num_vertices();
}

}  // namespace ising
