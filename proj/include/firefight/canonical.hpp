#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "firefight/graph.hpp"

namespace firefight {

inline constexpr std::size_t kMaxEnumerationOrder = 8;

namespace detail {

// Upper-triangle adjacency bits in row order; fits n <= 11.
inline std::uint64_t adjacency_code(const Graph& g, const std::vector<Vertex>& label) {
  const std::size_t n = g.size();
  std::vector<Vertex> at(n);
  for (Vertex v = 0; v < n; ++v) at[label[v]] = v;
  std::uint64_t code = 0;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) code = (code << 1) | (g.adjacent(at[i], at[j]) ? 1u : 0u);
  return code;
}

// Colour refinement until stable; colours are ranks of
// isomorphism-invariant signatures.
inline std::vector<std::size_t> refine(const Graph& g, std::vector<std::size_t> colour) {
  const std::size_t n = g.size();
  const auto classes = [](const std::vector<std::size_t>& c) {
    return std::set<std::size_t>(c.begin(), c.end()).size();
  };
  for (;;) {
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> sig(n);
    for (Vertex v = 0; v < n; ++v) {
      sig[v].first = colour[v];
      for (Vertex u : g.neighbors(v)) sig[v].second.push_back(colour[u]);
      std::sort(sig[v].second.begin(), sig[v].second.end());
    }
    auto sorted = sig;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<std::size_t> next(n);
    for (Vertex v = 0; v < n; ++v)
      next[v] = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), sig[v]) -
                                         sorted.begin());
    if (classes(next) == classes(colour)) return next;
    colour = std::move(next);
  }
}

}  // namespace detail

/// Relabels g so that isomorphic graphs map to identical graphs:
/// individualise-and-refine over every choice in the first non-trivial
/// colour class, keeping the leaf labelling with the largest adjacency code.
inline Graph canonical_form(const Graph& g, std::uint64_t* code_out = nullptr) {
  const std::size_t n = g.size();
  if (n > 11) throw std::invalid_argument("canonical form supports at most 11 vertices");
  std::uint64_t best = 0;
  std::vector<Vertex> best_label;
  auto search = [&](auto&& self, std::vector<std::size_t> colour) -> void {
    colour = detail::refine(g, std::move(colour));
    std::vector<std::size_t> size(n, 0);
    for (auto c : colour) ++size[c];
    std::size_t target = n;
    for (std::size_t c = 0; c < n && target == n; ++c)
      if (size[c] > 1) target = c;
    if (target == n) {
      std::vector<Vertex> label(colour.begin(), colour.end());
      const auto code = detail::adjacency_code(g, label);
      if (best_label.empty() || code > best) {
        best = code;
        best_label = std::move(label);
      }
      return;
    }
    for (Vertex v = 0; v < n; ++v) {
      if (colour[v] != target) continue;
      std::vector<std::size_t> split(n);
      for (Vertex u = 0; u < n; ++u) split[u] = 2 * colour[u] + (u == v ? 0 : 1);
      self(self, std::move(split));
    }
  };
  std::vector<std::size_t> degree(n);
  for (Vertex v = 0; v < n; ++v) degree[v] = g.degree(v);
  search(search, std::move(degree));
  std::vector<Edge> edges;
  for (const auto& [u, v] : g.edges()) {
    auto a = best_label[u], b = best_label[v];
    edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges.begin(), edges.end());
  if (code_out) *code_out = best;
  return Graph::from_edges(n, edges);
}

/// All graphs of order n up to isomorphism, grown one vertex at a time.
inline std::vector<Graph> all_graphs(std::size_t n) {
  if (n == 0 || n > kMaxEnumerationOrder)
    throw std::invalid_argument("graph enumeration supports orders 1.." +
                                std::to_string(kMaxEnumerationOrder));
  std::map<std::uint64_t, Graph> level{{0, Graph::from_edges(1, {})}};
  for (std::size_t m = 2; m <= n; ++m) {
    std::map<std::uint64_t, Graph> next;
    for (const auto& [code, g] : level) {
      auto base = g.edges();
      for (std::uint32_t mask = 0; mask < (1u << (m - 1)); ++mask) {
        auto edges = base;
        for (Vertex u = 0; u + 1 < m; ++u)
          if (mask >> u & 1u) edges.emplace_back(u, static_cast<Vertex>(m - 1));
        std::uint64_t c = 0;
        auto canon = canonical_form(Graph::from_edges(m, edges), &c);
        next.try_emplace(c, std::move(canon));
      }
    }
    level = std::move(next);
  }
  std::vector<Graph> out;
  for (auto& [code, g] : level) out.push_back(std::move(g));
  return out;
}

/// Connected graphs of order n up to isomorphism, in canonical-code order.
inline std::vector<Graph> connected_graphs(std::size_t n) {
  std::vector<Graph> out;
  for (auto& g : all_graphs(n))
    if (is_connected(g)) out.push_back(std::move(g));
  return out;
}

}  // namespace firefight
