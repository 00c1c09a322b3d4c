#include "ising/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "ising/tree.hpp"

namespace ising {

namespace {

struct Welford {
  int64_t n = 0;
  double mean = 0.0, m2 = 0.0;
  void add(double x) {
    ++n;
    double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double std_error() const {
    return n > 1 ? std::sqrt(m2 / (static_cast<double>(n) - 1) /
                             static_cast<double>(n))
                 : 0.0;
  }
};

}  // namespace

GapCurve tree_gap_curve(const DegreeDistribution& p, const IsingParams& params,
                        int max_depth, int trees, uint64_t seed) {
  std::vector<Welford> acc(static_cast<size_t>(max_depth));
  for (int s = 0; s < trees; ++s) {
    RootedTree t = sample_tree(p, max_depth, seed + static_cast<uint64_t>(s));
    for (int l = 1; l <= max_depth; ++l) {
      double gap =
          root_magnetization_truncated(t, params, BoundaryCondition::Plus, l) -
          root_magnetization_truncated(t, params, BoundaryCondition::Free, l);
      acc[static_cast<size_t>(l - 1)].add(gap);
    }
  }
  GapCurve out;
  std::vector<double> xs, ys;
  for (int l = 1; l <= max_depth; ++l) {
    out.depth.push_back(l);
    out.mean.push_back(acc[static_cast<size_t>(l - 1)].mean);
    out.std_error.push_back(acc[static_cast<size_t>(l - 1)].std_error());
    xs.push_back(l);
    ys.push_back(acc[static_cast<size_t>(l - 1)].mean);
  }
  out.fit = fit_log_linear(xs, ys);
  return out;
}

DecayCurve tree_correlation_decay(const DegreeDistribution& p,
                                  const IsingParams& params, int max_depth,
                                  int trees, uint64_t seed) {
  std::vector<Welford> acc(static_cast<size_t>(max_depth));
  for (int s = 0; s < trees; ++s) {
    RootedTree t = sample_tree(p, max_depth, seed + static_cast<uint64_t>(s));
    for (int r = 1; r <= max_depth; ++r) {
      RootedTree tr = t.truncated_at(r);
      double sum = 0.0;
      for (int v = 0; v < tr.size(); ++v)
        if (tr.depth(v) == r)
          sum += root_pair_correlation(tr, params, BoundaryCondition::Free, v);
      acc[static_cast<size_t>(r - 1)].add(sum);
    }
  }
  DecayCurve out;
  std::vector<double> xs, ys;
  for (int r = 1; r <= max_depth; ++r) {
    out.radius.push_back(r);
    out.mean.push_back(acc[static_cast<size_t>(r - 1)].mean);
    out.std_error.push_back(acc[static_cast<size_t>(r - 1)].std_error());
    xs.push_back(r);
    ys.push_back(acc[static_cast<size_t>(r - 1)].mean);
  }
  out.fit = fit_log_linear(xs, ys);
  return out;
}

SimonStats simon_inequality_sweep(const DegreeDistribution& p,
                                  const IsingParams& params, int trees,
                                  int max_nodes, uint64_t seed, double tol) {
  SimonStats st;
  double beta = params.beta();
  auto slot = [&st](int t) -> size_t {
    for (size_t i = 0; i < st.t_values.size(); ++i)
      if (st.t_values[i] == t) return i;
    st.t_values.push_back(t);
    st.t_checks.push_back(0);
    st.t_min_slack.push_back(kInf);
    return st.t_values.size() - 1;
  };
  for (uint64_t s = 0; st.trees_used < trees; ++s) {
    RootedTree t = sample_tree(p, 6, seed + s, /*max_nodes=*/1 + max_nodes);
    if (t.truncated() || t.size() < 3 || t.size() > max_nodes) continue;
    ++st.trees_used;
    // ancestor lists per node
    for (int k = 1; k < t.size(); ++k) {
      std::vector<int> path;  // k up to root
      for (int u = k; u >= 0; u = t.parent(u)) path.push_back(u);
      std::reverse(path.begin(), path.end());  // root ... k
      double lhs = root_pair_correlation(t, params, BoundaryCondition::Free, k);
      for (int ti = 0; ti + 1 < static_cast<int>(path.size()); ++ti) {
        int i = path[static_cast<size_t>(ti)];
        int j = path[static_cast<size_t>(ti) + 1];
        std::vector<int> tremap;
        RootedTree trunc = t.truncated_at(ti, &tremap);
        double f1 = root_pair_correlation(trunc, params, BoundaryCondition::Free,
                                          tremap[static_cast<size_t>(i)]);
        std::vector<int> remap;
        RootedTree sub = t.subtree(j, &remap);
        double f2 = root_pair_correlation(sub, params, BoundaryCondition::Free,
                                          remap[static_cast<size_t>(k)]);
        double bi = t.effective_field(i, params).value();
        double c = std::cosh(2.0 * beta + bi);
        double slack = c * c * f1 * f2 - lhs;
        ++st.checks;
        size_t sl = slot(ti);
        ++st.t_checks[sl];
        st.t_min_slack[sl] = std::min(st.t_min_slack[sl], slack);
        st.min_slack = std::min(st.min_slack, slack);
        if (slack < -tol) ++st.violations;
      }
    }
  }
  return st;
}

}  // namespace ising
