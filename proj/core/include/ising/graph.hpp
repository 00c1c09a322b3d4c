#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ising {

struct Adj {
  int32_t to;
  int32_t edge;
};

// Immutable sparse undirected (multi)graph. Adjacency lists are sorted by
// (neighbor, edge) so traversal order is deterministic. Each undirected edge
// e = (a,b) owns two directed slots: index 2e for a->b and 2e+1 for b->a.
class Graph {
 public:
  Graph() = default;
  static Graph from_edges(int n, std::vector<std::pair<int, int>> edges,
                          bool allow_multi = false);

  int num_vertices() const noexcept { return n_; }
  int num_edges() const noexcept { return static_cast<int>(edges_.size()); }
  std::pair<int, int> edge(int e) const { return edges_[static_cast<size_t>(e)]; }
  const std::vector<std::pair<int, int>>& edges() const noexcept {
    return edges_;
  }
  const std::vector<Adj>& neighbors(int v) const {
    return adj_[static_cast<size_t>(v)];
  }
  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }

  // Directed slot of edge e leaving `tail`.
  int directed_index(int e, int tail) const {
    return 2 * e + (edges_[static_cast<size_t>(e)].first == tail ? 0 : 1);
  }
  // Directed index for the ordered pair tail->head; -1 if no such edge
  // (first matching edge when parallel edges exist).
  int directed_index_pair(int tail, int head) const;
  int find_edge(int a, int b) const;  // -1 if absent

  bool is_connected() const;
  int diameter() const;  // max eccentricity over components' BFS; -1 if disconnected

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<std::vector<Adj>> adj_;
};

// BFS ball of radius t around a vertex or an edge. `vertices` are host labels
// in discovery order; `subgraph` is the induced graph on them (local index =
// position in `vertices`); `boundary` holds host labels at distance exactly t.
struct Ball {
  int radius = 0;
  int center_vertex = -1;                 // -1 for edge-centered balls
  std::pair<int, int> center_edge{-1, -1};
  std::vector<int> vertices;
  std::vector<int> distance;
  std::vector<int> boundary;
  Graph subgraph;

  int local_index(int host_vertex) const;  // -1 if outside the ball
};

Ball ball(const Graph& g, int center, int t);
Ball edge_ball(const Graph& g, int edge_index, int t);

// True iff the ball's subgraph is a tree (connected and |E| = |V|-1).
bool is_tree(const Ball& b);

// (1/n) sum_i |d_i| * 1(|d_i| >= l): the uniform-sparsity statistic.
double sparsity_stat(const Graph& g, int l);

// Fraction of `samples` uniformly drawn vertices whose radius-t ball is a
// tree; empirical local-convergence diagnostic.
double local_tree_fraction(const Graph& g, int t, int samples, uint64_t seed);

// Text format: header "n m", then m lines "i j" (0-based); '#' lines ignored.
Graph read_graph(std::istream& in, bool allow_multi = false);
Graph read_graph_file(const std::string& path, bool allow_multi = false);
void write_graph(std::ostream& out, const Graph& g);
void write_graph_file(const std::string& path, const Graph& g);

}  // namespace ising
