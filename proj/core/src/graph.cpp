#include "ising/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "ising/rng.hpp"

namespace ising {

Graph Graph::from_edges(int n, std::vector<std::pair<int, int>> edges,
                        bool allow_multi) {
  if (n < 0) throw std::invalid_argument("Graph: negative vertex count");
  std::unordered_set<uint64_t> seen;
  for (auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n)
      throw std::invalid_argument("Graph: endpoint out of range");
    if (a == b) throw std::invalid_argument("Graph: self-loop");
    if (a > b) std::swap(a, b);
    if (!allow_multi) {
      uint64_t key = (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
      if (!seen.insert(key).second)
        throw std::invalid_argument("Graph: duplicate edge in simple graph");
    }
  }
  Graph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  g.adj_.assign(static_cast<size_t>(n), {});
  for (int e = 0; e < g.num_edges(); ++e) {
    auto [a, b] = g.edges_[static_cast<size_t>(e)];
    g.adj_[static_cast<size_t>(a)].push_back({b, e});
    g.adj_[static_cast<size_t>(b)].push_back({a, e});
  }
  for (auto& list : g.adj_)
    std::sort(list.begin(), list.end(), [](const Adj& x, const Adj& y) {
      return x.to != y.to ? x.to < y.to : x.edge < y.edge;
    });
  return g;
}

int Graph::find_edge(int a, int b) const {
  for (const Adj& ad : neighbors(a))
    if (ad.to == b) return ad.edge;
  return -1;
}

int Graph::directed_index_pair(int tail, int head) const {
  int e = find_edge(tail, head);
  return e < 0 ? -1 : directed_index(e, tail);
}

namespace {

// BFS distances from the given sources; -1 for unreached vertices.
std::vector<int> bfs_distances(const Graph& g, const std::vector<int>& sources,
                               int limit = -1) {
  std::vector<int> dist(static_cast<size_t>(g.num_vertices()), -1);
  std::vector<int> queue;
  for (int s : sources) {
    dist[static_cast<size_t>(s)] = 0;
    queue.push_back(s);
  }
  for (size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    int dv = dist[static_cast<size_t>(v)];
    if (limit >= 0 && dv == limit) continue;
    for (const Adj& a : g.neighbors(v)) {
      if (dist[static_cast<size_t>(a.to)] < 0) {
        dist[static_cast<size_t>(a.to)] = dv + 1;
        queue.push_back(a.to);
      }
    }
  }
  return dist;
}

Ball ball_from_sources(const Graph& g, const std::vector<int>& sources, int t) {
  if (t < 0) throw std::invalid_argument("ball: negative radius");
  for (int s : sources)
    if (s < 0 || s >= g.num_vertices())
      throw std::invalid_argument("ball: center out of range");

  Ball b;
  b.radius = t;
  std::vector<int> dist(static_cast<size_t>(g.num_vertices()), -1);
  std::vector<int> local(static_cast<size_t>(g.num_vertices()), -1);
  for (int s : sources) {
    if (dist[static_cast<size_t>(s)] == 0) continue;
    dist[static_cast<size_t>(s)] = 0;
    local[static_cast<size_t>(s)] = static_cast<int>(b.vertices.size());
    b.vertices.push_back(s);
    b.distance.push_back(0);
  }
  for (size_t head = 0; head < b.vertices.size(); ++head) {
    int v = b.vertices[head];
    int dv = dist[static_cast<size_t>(v)];
    if (dv == t) continue;
    for (const Adj& a : g.neighbors(v)) {
      if (dist[static_cast<size_t>(a.to)] < 0) {
        dist[static_cast<size_t>(a.to)] = dv + 1;
        local[static_cast<size_t>(a.to)] = static_cast<int>(b.vertices.size());
        b.vertices.push_back(a.to);
        b.distance.push_back(dv + 1);
      }
    }
  }
  for (size_t i = 0; i < b.vertices.size(); ++i)
    if (b.distance[i] == t) b.boundary.push_back(b.vertices[i]);

  // Induced edges: collect each host edge once, from its endpoint with the
  // smaller host label.
  std::vector<std::pair<int, int>> sub_edges;
  for (int v : b.vertices) {
    for (const Adj& a : g.neighbors(v)) {
      if (v < a.to && local[static_cast<size_t>(a.to)] >= 0)
        sub_edges.emplace_back(local[static_cast<size_t>(v)],
                               local[static_cast<size_t>(a.to)]);
    }
  }
  b.subgraph = Graph::from_edges(static_cast<int>(b.vertices.size()),
                                 std::move(sub_edges), /*allow_multi=*/true);
  return b;
}

}  // namespace

int Ball::local_index(int host_vertex) const {
  for (size_t i = 0; i < vertices.size(); ++i)
    if (vertices[i] == host_vertex) return static_cast<int>(i);
  return -1;
}

Ball ball(const Graph& g, int center, int t) {
  Ball b = ball_from_sources(g, {center}, t);
  b.center_vertex = center;
  return b;
}

Ball edge_ball(const Graph& g, int edge_index, int t) {
  if (edge_index < 0 || edge_index >= g.num_edges())
    throw std::invalid_argument("edge_ball: edge out of range");
  auto [a, c] = g.edge(edge_index);
  Ball b = ball_from_sources(g, {a, c}, t);
  b.center_edge = {a, c};
  return b;
}

bool Graph::is_connected() const {
  if (n_ == 0) return true;
  auto dist = bfs_distances(*this, {0});
  for (int d : dist)
    if (d < 0) return false;
  return true;
}

int Graph::diameter() const {
  int best = 0;
  for (int v = 0; v < n_; ++v) {
    auto dist = bfs_distances(*this, {v});
    for (int d : dist) {
      if (d < 0) return -1;
      best = std::max(best, d);
    }
  }
  return best;
}

bool is_tree(const Ball& b) {
  const Graph& s = b.subgraph;
  if (s.num_vertices() == 0) return false;
  if (s.num_edges() != s.num_vertices() - 1) return false;
  return s.is_connected();
}

double sparsity_stat(const Graph& g, int l) {
  if (l < 0) throw std::invalid_argument("sparsity_stat: l must be >= 0");
  if (g.num_vertices() == 0) return 0.0;
  double sum = 0.0;
  for (int v = 0; v < g.num_vertices(); ++v) {
    int d = g.degree(v);
    if (d >= l) sum += d;
  }
  return sum / g.num_vertices();
}

double local_tree_fraction(const Graph& g, int t, int samples, uint64_t seed) {
  if (samples < 1)
    throw std::invalid_argument("local_tree_fraction: samples >= 1 required");
  if (g.num_vertices() == 0) return 0.0;
  CounterRng rng(seed, streams::kVertexSample);
  int hits = 0;
  for (int s = 0; s < samples; ++s) {
    int v = static_cast<int>(rng.next_below(static_cast<uint64_t>(g.num_vertices())));
    if (is_tree(ball(g, v, t))) ++hits;
  }
  return static_cast<double>(hits) / samples;
}

Graph read_graph(std::istream& in, bool allow_multi) {
  std::string line;
  int n = -1, m = -1;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream ls(line);
    if (n < 0) {
      if (!(ls >> n >> m) || n < 0 || m < 0)
        throw std::runtime_error("graph file: bad header");
      edges.reserve(static_cast<size_t>(m));
    } else {
      int a, b;
      if (!(ls >> a >> b)) throw std::runtime_error("graph file: bad edge line");
      edges.emplace_back(a, b);
    }
  }
  if (n < 0) throw std::runtime_error("graph file: missing header");
  if (static_cast<int>(edges.size()) != m)
    throw std::runtime_error("graph file: edge count mismatch");
  return Graph::from_edges(n, std::move(edges), allow_multi);
}

Graph read_graph_file(const std::string& path, bool allow_multi) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return read_graph(in, allow_multi);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (int e = 0; e < g.num_edges(); ++e) {
    auto [a, b] = g.edge(e);
    out << a << ' ' << b << '\n';
  }
}

void write_graph_file(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_graph(out, g);
}

}  // namespace ising
