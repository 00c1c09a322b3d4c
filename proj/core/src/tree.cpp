#include "ising/tree.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "ising/rng.hpp"

namespace ising {

namespace {

using detail::tanh_ext;
using detail::xi_unchecked;

}  // namespace

int RootedTree::Builder::add_node(int parent) {
  int idx = static_cast<int>(t_.parent_.size());
  if (parent < 0) {
    if (idx != 0) throw std::invalid_argument("tree builder: root must be first");
    t_.depth_.push_back(0);
  } else {
    if (parent >= idx)
      throw std::invalid_argument("tree builder: parent must precede child");
    t_.depth_.push_back(t_.depth_[static_cast<size_t>(parent)] + 1);
  }
  t_.parent_.push_back(parent);
  t_.field_.push_back(0.0);
  t_.has_field_.push_back(0);
  return idx;
}

void RootedTree::Builder::set_field(int v, ExtField f) { t_.set_field(v, f); }

void RootedTree::Builder::set_label(int v, int label) {
  if (t_.label_.empty()) t_.label_.assign(t_.parent_.size(), -1);
  t_.label_.resize(t_.parent_.size(), -1);
  t_.label_[static_cast<size_t>(v)] = label;
}

RootedTree RootedTree::Builder::finish(int target_depth, bool truncated) {
  std::vector<int> boundary;
  for (int v = 0; v < t_.size(); ++v)
    if (t_.depth(v) == target_depth) boundary.push_back(v);
  return finish_with_boundary(std::move(boundary), target_depth, truncated);
}

RootedTree RootedTree::Builder::finish_with_boundary(std::vector<int> boundary,
                                                     int target_depth,
                                                     bool truncated) {
  size_t n = t_.parent_.size();
  if (n == 0) throw std::invalid_argument("tree builder: empty tree");
  t_.target_depth_ = target_depth;
  t_.truncated_ = truncated;
  if (!t_.label_.empty()) t_.label_.resize(n, -1);
  t_.boundary_ = std::move(boundary);
  // CSR children from the parent list (children appear in index order).
  t_.child_offset_.assign(n + 1, 0);
  for (size_t v = 1; v < n; ++v)
    t_.child_offset_[static_cast<size_t>(t_.parent_[v]) + 1]++;
  for (size_t v = 0; v < n; ++v) t_.child_offset_[v + 1] += t_.child_offset_[v];
  t_.child_list_.resize(n - 1);
  std::vector<int> cursor(t_.child_offset_.begin(), t_.child_offset_.end() - 1);
  for (size_t v = 1; v < n; ++v)
    t_.child_list_[static_cast<size_t>(
        cursor[static_cast<size_t>(t_.parent_[v])]++)] = static_cast<int>(v);
  return std::move(t_);
}

void RootedTree::set_field(int v, ExtField f) {
  if (f.value() == -kInf)
    throw std::invalid_argument("tree field: -inf not allowed");
  field_[static_cast<size_t>(v)] = f.value();
  has_field_[static_cast<size_t>(v)] = 1;
}

ExtField RootedTree::effective_field(int v, const IsingParams& params) const {
  if (has_field(v)) return field(v);
  if (params.has_per_vertex() &&
      static_cast<int>(params.per_vertex().size()) == size())
    return params.per_vertex()[static_cast<size_t>(v)];
  return ExtField(params.field());
}

RootedTree RootedTree::truncated_at(int depth, std::vector<int>* remap_out) const {
  if (depth < 0) throw std::invalid_argument("truncated_at: negative depth");
  Builder b;
  std::vector<int> remap(static_cast<size_t>(size()), -1);
  for (int v = 0; v < size(); ++v) {
    if (this->depth(v) > depth) continue;
    int p = parent(v);
    int nv = b.add_node(p < 0 ? -1 : remap[static_cast<size_t>(p)]);
    remap[static_cast<size_t>(v)] = nv;
    if (has_field(v)) b.set_field(nv, field(v));
    if (!label_.empty() && label_[static_cast<size_t>(v)] >= 0)
      b.set_label(nv, label_[static_cast<size_t>(v)]);
  }
  if (remap_out) *remap_out = std::move(remap);
  return b.finish(std::min(depth, target_depth_), truncated_);
}

RootedTree RootedTree::subtree(int v, std::vector<int>* remap_out) const {
  if (v < 0 || v >= size()) throw std::invalid_argument("subtree: bad node");
  Builder b;
  std::vector<int> queue{v};
  std::vector<int> remap(static_cast<size_t>(size()), -1);
  remap[static_cast<size_t>(v)] = b.add_node(-1);
  for (size_t head = 0; head < queue.size(); ++head) {
    int u = queue[head];
    int nu = remap[static_cast<size_t>(u)];
    if (has_field(u)) b.set_field(nu, field(u));
    if (!label_.empty() && label_[static_cast<size_t>(u)] >= 0)
      b.set_label(nu, label_[static_cast<size_t>(u)]);
    for (int c : children(u)) {
      remap[static_cast<size_t>(c)] = b.add_node(nu);
      queue.push_back(c);
    }
  }
  if (remap_out) *remap_out = std::move(remap);
  return b.finish(std::max(0, target_depth_ - depth(v)), truncated_);
}

Graph RootedTree::to_graph() const {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<size_t>(size()) - 1);
  for (int v = 1; v < size(); ++v) edges.emplace_back(parent(v), v);
  return Graph::from_edges(size(), std::move(edges));
}

void RootedTree::dump(std::ostream& out) const {
  for (int v = 0; v < size(); ++v) {
    out << v << ' ' << parent(v) << ' ' << depth(v) << ' ';
    if (has_field(v)) {
      double f = field(v).value();
      if (f == kInf)
        out << "inf";
      else
        out << f;
    } else {
      out << '.';
    }
    out << '\n';
  }
}

namespace {

RootedTree sample_tree_impl(const DegreeDistribution& p, int t, uint64_t seed,
                            bool root_size_biased, int64_t max_nodes) {
  if (t < 0) throw std::invalid_argument("sample_tree: negative depth");
  if (max_nodes < 1) throw std::invalid_argument("sample_tree: max_nodes >= 1");
  CounterRng rng(seed, streams::kTreeSample);
  RootedTree::Builder b;
  int count = static_cast<int>(b.add_node(-1)) + 1;
  bool truncated = false;
  // Nodes are appended in BFS order, so an index scan is the BFS itself.
  std::vector<int> depth{0};
  for (int v = 0; v < count && !truncated; ++v) {
    int d = depth[static_cast<size_t>(v)];
    if (d >= t) continue;
    int offspring = (v == 0 && !root_size_biased)
                        ? p.sample(rng)
                        : p.sample_size_biased(rng) - 1;
    for (int c = 0; c < offspring; ++c) {
      if (count >= max_nodes) {
        truncated = true;
        break;
      }
      b.add_node(v);
      depth.push_back(d + 1);
      ++count;
    }
  }
  return b.finish(t, truncated);
}

}  // namespace

RootedTree sample_tree(const DegreeDistribution& p, int t, uint64_t seed,
                       int64_t max_nodes) {
  return sample_tree_impl(p, t, seed, /*root_size_biased=*/false, max_nodes);
}

RootedTree sample_tree_rho(const DegreeDistribution& p, int t, uint64_t seed,
                           int64_t max_nodes) {
  return sample_tree_impl(p, t, seed, /*root_size_biased=*/true, max_nodes);
}

RootedTree sample_edge_tree(const DegreeDistribution& p, int t, uint64_t seed,
                            int64_t max_nodes) {
  // Two independent copies on derived seeds, glued by the root edge.
  RootedTree a = sample_tree_rho(p, t, seed, max_nodes);
  RootedTree bt = sample_tree_rho(p, t, seed + 0x9e3779b97f4a7c15ull, max_nodes);
  RootedTree::Builder b;
  b.add_node(-1);      // root of copy a
  b.add_node(0);       // root of copy b, the distinguished first child
  std::vector<int> remap_a(static_cast<size_t>(a.size()), -1);
  std::vector<int> remap_b(static_cast<size_t>(bt.size()), -1);
  remap_a[0] = 0;
  remap_b[0] = 1;
  std::vector<int> boundary;
  auto splice = [&](const RootedTree& src, std::vector<int>& remap) {
    for (int v = 1; v < src.size(); ++v)
      remap[static_cast<size_t>(v)] =
          b.add_node(remap[static_cast<size_t>(src.parent(v))]);
    for (int v : src.boundary()) boundary.push_back(remap[static_cast<size_t>(v)]);
  };
  splice(a, remap_a);
  splice(bt, remap_b);
  // Boundary is each copy's generation-t set; copy a's sits at glued depth t,
  // copy b's at t+1.
  std::sort(boundary.begin(), boundary.end());
  return b.finish_with_boundary(std::move(boundary), t + 1,
                                a.truncated() || bt.truncated());
}

namespace {

// Leaf-to-root cavity fields, one per node; +inf where pinned.
std::vector<double> cavity_fields(const RootedTree& tree,
                                  const IsingParams& params,
                                  BoundaryCondition bc) {
  int n = tree.size();
  std::vector<uint8_t> pinned(static_cast<size_t>(n), 0);
  if (bc == BoundaryCondition::Plus)
    for (int v : tree.boundary()) pinned[static_cast<size_t>(v)] = 1;
  double beta = params.beta();
  std::vector<double> h(static_cast<size_t>(n));
  for (int v = n - 1; v >= 0; --v) {
    if (pinned[static_cast<size_t>(v)]) {
      h[static_cast<size_t>(v)] = kInf;
      continue;
    }
    double s = tree.effective_field(v, params).value();
    for (int c : tree.children(v)) s += xi_unchecked(beta, h[static_cast<size_t>(c)]);
    h[static_cast<size_t>(v)] = s;
  }
  return h;
}

}  // namespace

double root_magnetization_truncated(const RootedTree& tree,
                                    const IsingParams& params,
                                    BoundaryCondition bc, int depth) {
  int n = tree.size();
  if (n == 0) throw std::invalid_argument("root_magnetization_truncated: empty");
  if (depth < 0) throw std::invalid_argument("root_magnetization_truncated: depth");
  double beta = params.beta();
  std::vector<double> h(static_cast<size_t>(n), 0.0);
  // Children deeper than `depth` are skipped, so the recursion truncates
  // itself; only the boundary pinning needs the depth test.
  for (int v = n - 1; v >= 0; --v) {
    int d = tree.depth(v);
    if (d > depth) continue;
    if (d == depth && bc == BoundaryCondition::Plus) {
      h[static_cast<size_t>(v)] = kInf;
      continue;
    }
    double s = tree.effective_field(v, params).value();
    if (d < depth)
      for (int c : tree.children(v))
        s += xi_unchecked(beta, h[static_cast<size_t>(c)]);
    h[static_cast<size_t>(v)] = s;
  }
  return tanh_ext(h[0]);
}

ExtField root_cavity_field(const RootedTree& tree, const IsingParams& params,
                           BoundaryCondition bc) {
  if (tree.size() == 0) throw std::invalid_argument("root_cavity_field: empty tree");
  return ExtField(cavity_fields(tree, params, bc)[0]);
}

double root_magnetization(const RootedTree& tree, const IsingParams& params,
                          BoundaryCondition bc) {
  return tanh_ext(root_cavity_field(tree, params, bc).value());
}

double tree_log_partition(const RootedTree& tree, const IsingParams& params,
                          BoundaryCondition bc) {
  int n = tree.size();
  if (n == 0) throw std::invalid_argument("tree_log_partition: empty tree");
  std::vector<uint8_t> pinned(static_cast<size_t>(n), 0);
  if (bc == BoundaryCondition::Plus)
    for (int v : tree.boundary()) pinned[static_cast<size_t>(v)] = 1;
  double beta = params.beta();
  // Per node: cavity field h_v and log Z_v(+1) of its subtree.
  std::vector<double> h(static_cast<size_t>(n)), logzp(static_cast<size_t>(n));
  for (int v = n - 1; v >= 0; --v) {
    double f = tree.effective_field(v, params).value();
    bool pin = pinned[static_cast<size_t>(v)] || f == kInf;
    // A pinned spin contributes its finite field factor e^{B_v}; a spin whose
    // field itself is +inf contributes no factor (pure conditioning).
    double zp = pin ? (std::isfinite(f) ? f : 0.0) : f;
    double hv = pin ? kInf : f;
    for (int c : tree.children(v)) {
      double hc = h[static_cast<size_t>(c)];
      // log sum_{x_c} e^{beta x_c} Z_c(x_c) at x_v = +1.
      zp += logzp[static_cast<size_t>(c)] +
            (hc == kInf ? beta : logaddexp(beta, -beta - 2.0 * hc));
      if (!pin) hv += xi_unchecked(beta, hc);
    }
    h[static_cast<size_t>(v)] = hv;
    logzp[static_cast<size_t>(v)] = zp;
  }
  double hr = h[0], zp = logzp[0];
  if (hr == kInf) return zp;
  if (hr >= 0.0) return zp + std::log1p(std::exp(-2.0 * hr));
  return (zp - 2.0 * hr) + std::log1p(std::exp(2.0 * hr));
}

double root_pair_correlation(const RootedTree& tree, const IsingParams& params,
                             BoundaryCondition bc, int v) {
  int n = tree.size();
  if (v < 0 || v >= n) throw std::invalid_argument("root_pair_correlation: bad node");
  std::vector<double> lam = cavity_fields(tree, params, bc);
  double m_root = tanh_ext(lam[0]);
  if (v == 0) return 1.0 - m_root * m_root;

  std::vector<int> path;  // v up to (but excluding) the root
  for (int u = v; u != 0; u = tree.parent(u)) path.push_back(u);
  std::reverse(path.begin(), path.end());

  double beta = params.beta();
  double p_root = 0.5 * (1.0 + m_root);
  // q[s] = P(x_u = +1 | x_root = s), s in {+,-}, folded down the path.
  double qp = 1.0, qm = 1.0;
  bool first = true;
  for (int u : path) {
    double lu = lam[static_cast<size_t>(u)];
    double cond_p = 0.5 * (1.0 + tanh_ext(lu == kInf ? kInf : lu + beta));
    double cond_m = 0.5 * (1.0 + tanh_ext(lu == kInf ? kInf : lu - beta));
    if (first) {
      qp = cond_p;
      qm = cond_m;
      first = false;
    } else {
      double np = qp * cond_p + (1.0 - qp) * cond_m;
      double nm = qm * cond_p + (1.0 - qm) * cond_m;
      qp = np;
      qm = nm;
    }
  }
  double mv_plus = 2.0 * qp - 1.0, mv_minus = 2.0 * qm - 1.0;
  double mean_ov = p_root * mv_plus - (1.0 - p_root) * mv_minus;
  double mean_v = p_root * mv_plus + (1.0 - p_root) * mv_minus;
  return mean_ov - m_root * mean_v;
}

RootedTree computation_tree(const Graph& g, int i, int j, int t) {
  if (t < 0) throw std::invalid_argument("computation_tree: negative depth");
  int e0 = g.find_edge(i, j);
  if (e0 < 0) throw std::invalid_argument("computation_tree: (i,j) not an edge");
  RootedTree::Builder b;
  struct State {
    int node, vertex, from_edge, depth;
  };
  std::vector<State> queue{{b.add_node(-1), i, e0, 0}};
  b.set_label(0, i);
  bool truncated = false;
  for (size_t head = 0; head < queue.size() && !truncated; ++head) {
    State s = queue[head];
    if (s.depth >= t) continue;
    for (const Adj& a : g.neighbors(s.vertex)) {
      if (a.edge == s.from_edge) continue;
      if (static_cast<int64_t>(queue.size()) >= kDefaultTreeNodeCap) {
        truncated = true;
        break;
      }
      int c = b.add_node(s.node);
      b.set_label(c, a.to);
      queue.push_back({c, a.to, a.edge, s.depth + 1});
    }
  }
  RootedTree tree = b.finish(t, truncated);
  // Depth-t nodes stand for the initialization messages: absolute field 0,
  // so Free boundary reproduces the free (all-zero) initial condition.
  for (int v : tree.boundary()) tree.set_field(v, ExtField(0.0));
  return tree;
}

}  // namespace ising
