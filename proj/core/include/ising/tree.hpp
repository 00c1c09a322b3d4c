#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ising/core.hpp"
#include "ising/degree.hpp"
#include "ising/graph.hpp"

namespace ising {

enum class BoundaryCondition { Free, Plus };

// Finite rooted tree in breadth-first node order (parents precede children).
// Each node may carry an absolute field override; without one the node takes
// the uniform field of the IsingParams it is solved under. `boundary` lists
// the nodes pinned to +inf under plus boundary conditions; by default these
// are the nodes of the last requested generation.
class RootedTree {
 public:
  class Builder;

  int size() const noexcept { return static_cast<int>(parent_.size()); }
  int parent(int v) const { return parent_[static_cast<size_t>(v)]; }
  int depth(int v) const { return depth_[static_cast<size_t>(v)]; }
  std::span<const int> children(int v) const {
    return {child_list_.data() + child_offset_[static_cast<size_t>(v)],
            child_list_.data() + child_offset_[static_cast<size_t>(v) + 1]};
  }
  int max_depth() const noexcept { return size() ? depth_.back() : 0; }
  int target_depth() const noexcept { return target_depth_; }
  bool truncated() const noexcept { return truncated_; }
  const std::vector<int>& boundary() const noexcept { return boundary_; }

  bool has_field(int v) const { return has_field_[static_cast<size_t>(v)] != 0; }
  ExtField field(int v) const { return ExtField(field_[static_cast<size_t>(v)]); }
  void set_field(int v, ExtField f);
  // Field override if present, else the params' field (per-vertex table, if
  // the params carry one sized to this tree, wins over the uniform value).
  ExtField effective_field(int v, const IsingParams& params) const;

  // Host-graph label per node (computation trees); empty otherwise.
  const std::vector<int>& labels() const noexcept { return label_; }

  // First `depth` generations (a prefix in BFS order), boundary reset to the
  // nodes at the new target depth. `remap`, when given, receives old->new
  // node indices (-1 for dropped nodes).
  RootedTree truncated_at(int depth, std::vector<int>* remap = nullptr) const;
  // Subtree of v and its descendants, depths rebased to v; the target depth
  // shrinks by depth(v).
  RootedTree subtree(int v, std::vector<int>* remap = nullptr) const;
  // Parent-child edges as a Graph with the same vertex numbering.
  Graph to_graph() const;

  // One node per line: "idx parent depth field", field '.' when unset.
  void dump(std::ostream& out) const;

 private:
  std::vector<int> parent_, depth_;
  std::vector<int> child_offset_, child_list_;  // CSR form, built at finish()
  std::vector<double> field_;
  std::vector<uint8_t> has_field_;
  std::vector<int> label_;
  std::vector<int> boundary_;
  int target_depth_ = 0;
  bool truncated_ = false;

  friend class Builder;
};

class RootedTree::Builder {
 public:
  // Returns the index of the new node; parent -1 creates the root (once).
  int add_node(int parent);
  void set_field(int v, ExtField f);
  void set_label(int v, int label);
  // Boundary defaults to the nodes at target_depth.
  RootedTree finish(int target_depth, bool truncated = false);
  // Same, with an explicit plus-boundary node set (edge-rooted trees, whose
  // two copies have boundaries at different glued depths).
  RootedTree finish_with_boundary(std::vector<int> boundary, int target_depth,
                                  bool truncated = false);

 private:
  RootedTree t_;
};

inline constexpr int64_t kDefaultTreeNodeCap = 10'000'000;

// T(P, rho, t): root offspring ~ P, deeper nodes offspring K-1 with K ~ rho.
// Sampling stops at max_nodes and marks the tree truncated instead of
// exhausting memory.
RootedTree sample_tree(const DegreeDistribution& p, int t, uint64_t seed,
                       int64_t max_nodes = kDefaultTreeNodeCap);
// T(rho, t): as above but the root also has offspring K-1, K ~ rho.
RootedTree sample_tree_rho(const DegreeDistribution& p, int t, uint64_t seed,
                           int64_t max_nodes = kDefaultTreeNodeCap);
// Edge-rooted tree: two independent T(rho, t) copies, drawn as
// sample_tree_rho(p, t, seed) and sample_tree_rho(p, t, seed + golden), glued
// by an edge. The root's first child is the other endpoint; the boundary is
// the union of the two copies' generation-t nodes.
RootedTree sample_edge_tree(const DegreeDistribution& p, int t, uint64_t seed,
                            int64_t max_nodes = kDefaultTreeNodeCap);

// Cavity field at the root: h_v = B_v + sum_c xi(beta, h_c), leaves to root.
// Plus boundary pins the tree's boundary nodes to +inf first. The root
// magnetization is tanh of the returned value.
ExtField root_cavity_field(const RootedTree& tree, const IsingParams& params,
                           BoundaryCondition bc);
double root_magnetization(const RootedTree& tree, const IsingParams& params,
                          BoundaryCondition bc);
// As if the tree were truncated at `depth` (nodes there form the boundary),
// without building the truncated copy.
double root_magnetization_truncated(const RootedTree& tree,
                                    const IsingParams& params,
                                    BoundaryCondition bc, int depth);

// Exact log partition function by the same leaf-to-root pass. Under Plus the
// boundary spins are fixed to +1 and their (finite) field factors e^{B_v}
// stay in the weight, matching the constrained measure's normalizer.
double tree_log_partition(const RootedTree& tree, const IsingParams& params,
                          BoundaryCondition bc);

// Centered correlation <x_root x_v> - <x_root><x_v>, exact, via the Markov
// chain along the root-to-v path.
double root_pair_correlation(const RootedTree& tree, const IsingParams& params,
                             BoundaryCondition bc, int v);

// Unrolled BP tree for the directed edge i->j: the root is i with direction j
// removed; a node (u, from w) has children (x, from u) for x in d(u)\{w};
// depth t. Nodes are labeled by their host vertex. Depth-t nodes carry a
// field override of 0, so that under Free (resp. Plus) boundary the root
// cavity field equals the BP message after exactly t sweeps from the free
// (resp. plus) initialization.
RootedTree computation_tree(const Graph& g, int i, int j, int t);

}  // namespace ising
