#include "ising/bp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ising/parallel.hpp"

namespace ising {

namespace {

using detail::tanh_ext;
using detail::xi_unchecked;

void check_host(const Graph& g, const MessageSet& msgs) {
  if (msgs.host != &g || static_cast<int>(msgs.h.size()) != 2 * g.num_edges())
    throw std::invalid_argument("messages not hosted on this graph");
}

void check_fields(const Graph& g, const IsingParams& params) {
  if (params.has_per_vertex() &&
      static_cast<int>(params.per_vertex().size()) != g.num_vertices())
    throw std::invalid_argument("per-vertex field size mismatch");
}

}  // namespace

MessageSet init_messages(const Graph& g, BPInit kind) {
  MessageSet m;
  m.host = &g;
  m.h.assign(static_cast<size_t>(2 * g.num_edges()),
             kind == BPInit::Plus ? ExtField::plus_inf() : ExtField(0.0));
  return m;
}

MessageSet init_messages(const Graph& g, double constant) {
  if (!(constant >= 0.0))
    throw std::invalid_argument("init_messages: constant must be >= 0");
  MessageSet m;
  m.host = &g;
  m.h.assign(static_cast<size_t>(2 * g.num_edges()), ExtField(constant));
  return m;
}

std::pair<MessageSet, double> bp_sweep(const Graph& g, const IsingParams& params,
                                       const MessageSet& msgs) {
  check_host(g, msgs);
  check_fields(g, params);
  double beta = params.beta();
  int n = g.num_vertices();

  MessageSet out;
  out.host = &g;
  out.h.resize(msgs.h.size());
  std::vector<double> change(static_cast<size_t>(n), 0.0);

  parallel_for_blocks(n, 256, [&](int64_t lo, int64_t hi) {
    std::vector<double> pre;  // prefix sums of xi over incoming messages
    for (int64_t iv = lo; iv < hi; ++iv) {
      int i = static_cast<int>(iv);
      const auto& nbrs = g.neighbors(i);
      size_t d = nbrs.size();
      double bi = params.field_at(i).value();
      pre.assign(d + 1, 0.0);
      for (size_t k = 0; k < d; ++k)
        pre[k + 1] = pre[k] +
                     xi_unchecked(beta, msgs.h[static_cast<size_t>(
                                            g.directed_index(nbrs[k].edge, nbrs[k].to))]
                                            .value());
      double suf = 0.0;
      double worst = 0.0;
      // Walk neighbors right-to-left so prefix + suffix excludes position k
      // without any subtraction.
      for (size_t k = d; k-- > 0;) {
        int slot = g.directed_index(nbrs[k].edge, i);
        double hv = bi == kInf ? kInf : bi + pre[k] + suf;
        out.h[static_cast<size_t>(slot)] = ExtField(hv);
        worst = std::max(worst, std::fabs(tanh_ext(hv) -
                                          tanh_ext(msgs.h[static_cast<size_t>(slot)].value())));
        suf += xi_unchecked(beta, msgs.h[static_cast<size_t>(
                                      g.directed_index(nbrs[k].edge, nbrs[k].to))]
                                      .value());
      }
      change[static_cast<size_t>(i)] = worst;
    }
  });
  double max_change = 0.0;
  for (double c : change) max_change = std::max(max_change, c);
  return {std::move(out), max_change};
}

BPResult bp_fixed_point(const Graph& g, const IsingParams& params,
                        const MessageSet& init, double tol, int max_sweeps,
                        double damping) {
  if (!(tol > 0.0)) throw std::invalid_argument("bp_fixed_point: tol must be > 0");
  if (max_sweeps < 1) throw std::invalid_argument("bp_fixed_point: max_sweeps >= 1");
  if (!(damping >= 0.0) || damping >= 1.0)
    throw std::invalid_argument("bp_fixed_point: damping in [0,1)");
  BPResult r;
  r.messages = init;
  r.messages.host = init.host;
  check_host(g, r.messages);
  r.zero_field_warning = !params.has_per_vertex() && params.field() == 0.0;
  for (int s = 0; s < max_sweeps; ++s) {
    auto [next, change] = bp_sweep(g, params, r.messages);
    if (damping > 0.0) {
      change = 0.0;
      for (size_t i = 0; i < next.h.size(); ++i) {
        double t_old = tanh_ext(r.messages.h[i].value());
        double t_new = tanh_ext(next.h[i].value());
        double blended = damping * t_old + (1.0 - damping) * t_new;
        next.h[i] = atanh_clamped(blended);
        change = std::max(change, std::fabs(blended - t_old));
      }
    }
    r.messages = std::move(next);
    r.residuals.push_back(change);
    r.sweeps = s + 1;
    if (change <= tol) {
      r.converged = true;
      break;
    }
  }
  return r;
}

double vertex_marginal(const Graph& g, const IsingParams& params,
                       const MessageSet& msgs, int i) {
  check_host(g, msgs);
  check_fields(g, params);
  double bi = params.field_at(i).value();
  if (bi == kInf) return 1.0;
  double s = bi;
  for (const Adj& a : g.neighbors(i))
    s += xi_unchecked(params.beta(),
                      msgs.h[static_cast<size_t>(g.directed_index(a.edge, a.to))].value());
  return std::tanh(s);
}

std::vector<double> all_vertex_marginals(const Graph& g,
                                         const IsingParams& params,
                                         const MessageSet& msgs) {
  std::vector<double> m(static_cast<size_t>(g.num_vertices()));
  for (int i = 0; i < g.num_vertices(); ++i)
    m[static_cast<size_t>(i)] = vertex_marginal(g, params, msgs, i);
  return m;
}

double edge_correlation(const Graph& g, const IsingParams& params,
                        const MessageSet& msgs, int e) {
  check_host(g, msgs);
  auto [i, j] = g.edge(e);
  double u = std::tanh(params.beta());
  double ti = tanh_ext(msgs.h[static_cast<size_t>(g.directed_index(e, i))].value());
  double tj = tanh_ext(msgs.h[static_cast<size_t>(g.directed_index(e, j))].value());
  double c = (u + ti * tj) / (1.0 + u * ti * tj);
  return std::clamp(c, -1.0, 1.0);
}

SpinMarginal local_marginal_nu_u(const Graph& g, const IsingParams& params,
                                 const MessageSet& msgs, int i_star, int r) {
  check_host(g, msgs);
  check_fields(g, params);
  if (r == 0) {
    double m = vertex_marginal(g, params, msgs, i_star);
    SpinMarginal out;
    out.vertices = {i_star};
    out.prob = {0.5 * (1.0 - m), 0.5 * (1.0 + m)};
    return out;
  }
  Ball u = ball(g, i_star, r);
  size_t usz = u.vertices.size();
  if (usz > 20) throw std::length_error("local_marginal_nu_u: |U| > 20");

  // Ascending vertex order, as marginal_on_subset reports.
  std::vector<int> order(usz);
  for (size_t k = 0; k < usz; ++k) order[k] = static_cast<int>(k);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return u.vertices[static_cast<size_t>(a)] < u.vertices[static_cast<size_t>(b)]; });
  std::vector<int> host_of(usz), bit_of_local(usz);
  for (size_t k = 0; k < usz; ++k) {
    host_of[k] = u.vertices[static_cast<size_t>(order[k])];
    bit_of_local[static_cast<size_t>(order[k])] = static_cast<int>(k);
  }

  // Per-bit field term: B_i on the interior, atanh of the boundary message
  // nu*_{i->j(i)} on the border (its own B_i is already inside the message).
  std::vector<double> site_field(usz);
  std::vector<uint8_t> on_boundary(usz, 0);
  for (int b : u.boundary) on_boundary[static_cast<size_t>(bit_of_local[static_cast<size_t>(u.local_index(b))])] = 1;
  for (size_t k = 0; k < usz; ++k) {
    int i = host_of[k];
    if (!on_boundary[k]) {
      site_field[k] = params.field_at(i).value();
      continue;
    }
    // j(i): lowest-index neighbor of i inside U.
    int best = -1, best_e = -1;
    for (const Adj& a : g.neighbors(i)) {
      if (u.local_index(a.to) >= 0 && (best < 0 || a.to < best)) {
        best = a.to;
        best_e = a.edge;
      }
    }
    if (best < 0) throw std::logic_error("boundary vertex with no neighbor in U");
    site_field[k] = msgs.h[static_cast<size_t>(g.directed_index(best_e, i))].value();
  }

  // Edges of U in bit space.
  std::vector<std::pair<int, int>> edges;
  for (int e = 0; e < u.subgraph.num_edges(); ++e) {
    auto [a, b] = u.subgraph.edge(e);
    edges.emplace_back(bit_of_local[static_cast<size_t>(a)], bit_of_local[static_cast<size_t>(b)]);
  }

  double beta = params.beta();
  size_t nconf = size_t{1} << usz;
  std::vector<double> logw(nconf);
  double max_e = -kInf;
  for (size_t c = 0; c < nconf; ++c) {
    double e = 0.0;
    for (auto [a, b] : edges) {
      bool sa = (c >> a) & 1, sb = (c >> b) & 1;
      e += (sa == sb) ? beta : -beta;
    }
    for (size_t k = 0; k < usz; ++k) {
      bool up = (c >> k) & 1;
      double f = site_field[k];
      if (f == kInf) {
        if (!up) e = -kInf;
      } else {
        e += up ? f : -f;
      }
      if (e == -kInf) break;
    }
    logw[c] = e;
    max_e = std::max(max_e, e);
  }
  double z = 0.0;
  for (double e : logw) z += std::exp(e - max_e);
  SpinMarginal out;
  out.vertices = host_of;
  out.prob.resize(nconf);
  for (size_t c = 0; c < nconf; ++c)
    out.prob[c] = std::exp(logw[c] - max_e) / z;
  return out;
}

double bethe_free_entropy_graph(const Graph& g, const IsingParams& params,
                                const MessageSet& msgs) {
  check_host(g, msgs);
  check_fields(g, params);
  int n = g.num_vertices(), m = g.num_edges();
  if (n == 0) throw std::invalid_argument("bethe_free_entropy_graph: empty graph");
  double beta = params.beta();
  double u = std::tanh(beta);
  double total = m * std::log(std::cosh(beta));
  for (int i = 0; i < n; ++i) {
    double bi = params.field_at(i).value();
    if (bi == kInf)
      throw std::invalid_argument("bethe_free_entropy_graph: field must be finite");
    double lp = bi, lm = -bi;  // log of e^{+-B} prod (1 +- u t_l)
    for (const Adj& a : g.neighbors(i)) {
      double t = tanh_ext(msgs.h[static_cast<size_t>(g.directed_index(a.edge, a.to))].value());
      lp += std::log1p(u * t);
      lm += std::log1p(-u * t);
    }
    total += logaddexp(lp, lm);
  }
  for (int e = 0; e < m; ++e) {
    auto [i, j] = g.edge(e);
    double ti = tanh_ext(msgs.h[static_cast<size_t>(g.directed_index(e, i))].value());
    double tj = tanh_ext(msgs.h[static_cast<size_t>(g.directed_index(e, j))].value());
    total -= std::log1p(u * ti * tj);
  }
  return total / n;
}

}  // namespace ising
