#pragma once

#include <vector>

#include "ising/core.hpp"
#include "ising/graph.hpp"
#include "ising/marginal.hpp"

namespace ising {

// Belief propagation messages in cavity-field form: h[d] for every directed
// edge slot d (see Graph::directed_index). The message distribution is
// nu(x) = (1 + tanh(h) x)/2; all h >= 0 is a positive initial condition.
struct MessageSet {
  const Graph* host = nullptr;
  std::vector<ExtField> h;

  ExtField at(int e, int tail) const { return h[static_cast<size_t>(host->directed_index(e, tail))]; }
};

enum class BPInit { Free, Plus };

MessageSet init_messages(const Graph& g, BPInit kind);
MessageSet init_messages(const Graph& g, double constant);  // constant >= 0

// One synchronous sweep: h'_{i->j} = B_i + sum_{l in di\j} xi(beta, h_{l->i}).
// Returns the updated messages and the max over directed edges of
// |tanh h' - tanh h| (finite even with +inf entries). Exclusion of the j term
// uses prefix/suffix sums, never subtraction, so each output depends only on
// the other incoming messages and sweeps settle to exact fixed points on
// trees.
std::pair<MessageSet, double> bp_sweep(const Graph& g, const IsingParams& params,
                                       const MessageSet& msgs);

struct BPResult {
  MessageSet messages;
  int sweeps = 0;
  std::vector<double> residuals;  // max tanh-space change per sweep
  bool converged = false;
  bool zero_field_warning = false;  // B = 0: no convergence guarantee
};

// Iterates bp_sweep until the residual drops to tol or max_sweeps is hit.
// Non-convergence is reported in the result, not thrown. `damping` in [0,1)
// blends each update with the previous messages in tanh space; the default
// is off, plain synchronous sweeps need none for B > 0.
BPResult bp_fixed_point(const Graph& g, const IsingParams& params,
                        const MessageSet& init, double tol = 1e-10,
                        int max_sweeps = 10000, double damping = 0.0);

// tanh(B_i + sum_{l in di} xi(beta, h_{l->i})).
double vertex_marginal(const Graph& g, const IsingParams& params,
                       const MessageSet& msgs, int i);
std::vector<double> all_vertex_marginals(const Graph& g,
                                         const IsingParams& params,
                                         const MessageSet& msgs);

// <x_i x_j> under the pairwise Bethe marginal of edge e:
// (u + t_i t_j) / (1 + u t_i t_j), u = tanh beta, t = tanh of the two
// directed messages.
double edge_correlation(const Graph& g, const IsingParams& params,
                        const MessageSet& msgs, int e);

// BP local-marginal approximation nu_U on the ball U = B(i_star, r): Boltzmann
// weights on E_U, field only on U \ dU, and the fixed-point message
// nu*_{i->j(i)} as boundary factor, j(i) the lowest-index neighbor of i in U.
// r = 0 degenerates to the single-site readout. |U| <= 20.
SpinMarginal local_marginal_nu_u(const Graph& g, const IsingParams& params,
                                 const MessageSet& msgs, int i_star, int r);

// Finite-graph Bethe free entropy per spin; on a tree at the BP fixed point
// this equals (1/n) log Z exactly. Requires finite fields.
double bethe_free_entropy_graph(const Graph& g, const IsingParams& params,
                                const MessageSet& msgs);

}  // namespace ising
