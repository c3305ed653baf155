#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "firefight/vertex_set.hpp"

namespace firefight {

using Weight = std::int64_t;
using Edge = std::pair<Vertex, Vertex>;

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Immutable undirected simple graph on vertices 0..n-1 with positive integer
/// vertex weights (all 1 unless given).
class Graph {
 public:
  Graph() = default;

  static Graph from_edges(std::size_t n, std::span<const Edge> edges,
                          std::vector<Weight> weights = {}) {
    Graph g;
    g.adjacency_.assign(n, {});
    for (const auto& [u, v] : edges) {
      if (u >= n || v >= n)
        throw GraphError("edge [" + std::to_string(u) + "," + std::to_string(v) +
                         "] references a vertex outside 0.." +
                         std::to_string(n == 0 ? 0 : n - 1));
      if (u == v) throw GraphError("self-loop at vertex " + std::to_string(u));
      g.adjacency_[u].push_back(v);
      g.adjacency_[v].push_back(u);
    }
    for (std::size_t v = 0; v < n; ++v) {
      auto& adj = g.adjacency_[v];
      std::sort(adj.begin(), adj.end());
      if (std::adjacent_find(adj.begin(), adj.end()) != adj.end())
        throw GraphError("duplicate edge at vertex " + std::to_string(v));
    }
    g.edge_count_ = edges.size();
    g.set_weights(std::move(weights));
    g.build_masks();
    return g;
  }

  static Graph from_edges(std::size_t n, std::initializer_list<Edge> edges) {
    return from_edges(n, std::span<const Edge>(edges.begin(), edges.size()));
  }

  /// Same structure, new weights (empty = unit weights).
  Graph with_weights(std::vector<Weight> weights) const {
    Graph g = *this;
    g.set_weights(std::move(weights));
    return g;
  }

  std::size_t size() const { return adjacency_.size(); }
  std::size_t edge_count() const { return edge_count_; }

  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_.at(v); }
  std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }
  bool adjacent(Vertex u, Vertex v) const {
    const auto& a = adjacency_.at(u);
    return std::binary_search(a.begin(), a.end(), v);
  }

  Weight weight(Vertex v) const { return weights_.at(v); }
  const std::vector<Weight>& weights() const { return weights_; }
  bool unit_weights() const {
    return std::all_of(weights_.begin(), weights_.end(),
                       [](Weight w) { return w == 1; });
  }
  Weight total_weight() const {
    return std::accumulate(weights_.begin(), weights_.end(), Weight{0});
  }
  Weight weight_of(const VertexSet& s) const {
    Weight total = 0;
    s.for_each([&](Vertex v) { total += weights_[v]; });
    return total;
  }

  /// Neighbourhood bitmask; only available when n <= VertexSet::kCapacity.
  const VertexSet& neighbor_mask(Vertex v) const {
    if (masks_.empty())
      throw GraphError("graph too large for bitmask operations (n = " +
                       std::to_string(size()) + ")");
    return masks_[v];
  }
  bool fits_bitmask() const { return size() <= VertexSet::kCapacity; }
  VertexSet all_vertices() const { return VertexSet::first(size()); }

  /// Union of the neighbourhoods of every vertex in s.
  VertexSet neighborhood(const VertexSet& s) const {
    if (masks_.empty() && size() > 0) neighbor_mask(0);
    VertexSet out;
    s.for_each([&](Vertex v) { out |= masks_[v]; });
    return out;
  }

  /// Edges with u < v, sorted.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < size(); ++u)
      for (Vertex v : adjacency_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.adjacency_ == b.adjacency_ && a.weights_ == b.weights_;
  }

 private:
  void set_weights(std::vector<Weight> weights) {
    if (weights.empty()) weights.assign(size(), 1);
    if (weights.size() != size())
      throw GraphError("expected " + std::to_string(size()) + " weights, got " +
                       std::to_string(weights.size()));
    for (std::size_t v = 0; v < weights.size(); ++v)
      if (weights[v] < 1)
        throw GraphError("weight of vertex " + std::to_string(v) +
                         " must be a positive integer");
    weights_ = std::move(weights);
  }

  void build_masks() {
    masks_.clear();
    if (!fits_bitmask()) return;
    masks_.resize(size());
    for (Vertex v = 0; v < size(); ++v)
      for (Vertex u : adjacency_[v]) masks_[v].insert(u);
  }

  std::vector<std::vector<Vertex>> adjacency_;
  std::vector<Weight> weights_;
  std::vector<VertexSet> masks_;
  std::size_t edge_count_ = 0;
};

inline constexpr std::uint32_t kUnreachable = std::numeric_limits<std::uint32_t>::max();

/// All-pairs hop distances; kUnreachable for disconnected pairs.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(const Graph& g) : n_(g.size()), dist_(n_ * n_, kUnreachable) {
    std::vector<Vertex> queue;
    queue.reserve(n_);
    for (Vertex s = 0; s < n_; ++s) {
      auto* row = &dist_[s * n_];
      row[s] = 0;
      queue.assign(1, s);
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const Vertex u = queue[head];
        for (Vertex v : g.neighbors(u)) {
          if (row[v] == kUnreachable) {
            row[v] = row[u] + 1;
            queue.push_back(v);
          }
        }
      }
    }
  }

  std::uint32_t operator()(Vertex u, Vertex v) const { return dist_.at(u * n_ + v); }
  std::size_t size() const { return n_; }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint32_t> dist_;
};

inline DistanceMatrix distance_matrix(const Graph& g) { return DistanceMatrix(g); }

/// Vertices of `alive` reachable from `source` by a path of at most `radius`
/// edges that stays inside `alive`.
inline VertexSet ball_in_induced(const Graph& g, const VertexSet& alive, Vertex source,
                                 std::uint32_t radius) {
  VertexSet reached{source};
  VertexSet frontier = reached;
  for (std::uint32_t step = 0; step < radius && !frontier.empty(); ++step) {
    frontier = (g.neighborhood(frontier) & alive) - reached;
    reached |= frontier;
  }
  return reached;
}

/// Shortest u-v path length using only vertices of `alive`.
inline std::uint32_t distance_in_induced(const Graph& g, const VertexSet& alive, Vertex u,
                                         Vertex v) {
  if (!alive.contains(u) || !alive.contains(v))
    throw std::invalid_argument("distance_in_induced: endpoint not in the alive set");
  VertexSet reached{u};
  VertexSet frontier = reached;
  for (std::uint32_t d = 0; !frontier.empty(); ++d) {
    if (frontier.contains(v)) return d;
    frontier = (g.neighborhood(frontier) & alive) - reached;
    reached |= frontier;
  }
  return kUnreachable;
}

inline bool is_connected(const Graph& g) {
  if (g.size() <= 1) return true;
  std::vector<bool> seen(g.size(), false);
  std::vector<Vertex> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const Vertex u = stack.back();
    stack.pop_back();
    for (Vertex v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == g.size();
}

inline bool is_tree(const Graph& g) {
  return g.size() >= 1 && g.edge_count() + 1 == g.size() && is_connected(g);
}

/// Largest finite distance; 0 for graphs with fewer than two vertices.
inline std::uint32_t diameter(const Graph& g) {
  const DistanceMatrix dist(g);
  std::uint32_t best = 0;
  for (Vertex u = 0; u < g.size(); ++u)
    for (Vertex v = 0; v < g.size(); ++v)
      if (dist(u, v) != kUnreachable) best = std::max(best, dist(u, v));
  return best;
}

/// Proper 2-colouring (colour 0 on the smallest vertex of each component), or
/// nullopt when the graph has an odd cycle.
inline std::optional<std::vector<int>> two_coloring(const Graph& g) {
  std::vector<int> color(g.size(), -1);
  for (Vertex s = 0; s < g.size(); ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::queue<Vertex> q;
    q.push(s);
    while (!q.empty()) {
      const Vertex u = q.front();
      q.pop();
      for (Vertex v : g.neighbors(u)) {
        if (color[v] == -1) {
          color[v] = 1 - color[u];
          q.push(v);
        } else if (color[v] == color[u]) {
          return std::nullopt;
        }
      }
    }
  }
  return color;
}

inline bool is_bipartite(const Graph& g) { return two_coloring(g).has_value(); }

}  // namespace firefight
