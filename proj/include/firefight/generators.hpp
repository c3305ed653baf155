#pragma once

#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "firefight/graph.hpp"

namespace firefight::gen {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw GraphError(what);
}

/// P_n: 0 - 1 - ... - (n-1)
inline Graph path(std::size_t n) {
  require(n >= 1, "path needs n >= 1");
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Graph::from_edges(n, edges);
}

inline Graph cycle(std::size_t n) {
  require(n >= 3, "cycle needs n >= 3");
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  edges.emplace_back(0, static_cast<Vertex>(n - 1));
  return Graph::from_edges(n, edges);
}

/// K_{1,n-1} with centre 0.
inline Graph star(std::size_t n) {
  require(n >= 2, "star needs n >= 2");
  std::vector<Edge> edges;
  for (Vertex v = 1; v < n; ++v) edges.emplace_back(0, v);
  return Graph::from_edges(n, edges);
}

inline Graph complete(std::size_t n) {
  require(n >= 1, "complete graph needs n >= 1");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph::from_edges(n, edges);
}

/// P_n box P_n, vertex (row, col) has id row * n + col.
inline Graph grid(std::size_t n) {
  require(n >= 1, "grid needs n >= 1");
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const auto v = static_cast<Vertex>(r * n + c);
      if (c + 1 < n) edges.emplace_back(v, v + 1);
      if (r + 1 < n) edges.emplace_back(v, static_cast<Vertex>(v + n));
    }
  return Graph::from_edges(n * n, edges);
}

/// Spine 0..p-1, then leaves_per_spine[i] pendant vertices on spine vertex i.
inline Graph caterpillar(const std::vector<std::size_t>& leaves_per_spine) {
  require(!leaves_per_spine.empty(), "caterpillar needs a spine of length >= 1");
  const std::size_t p = leaves_per_spine.size();
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < p; ++v) edges.emplace_back(v, v + 1);
  auto next = static_cast<Vertex>(p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < leaves_per_spine[i]; ++j)
      edges.emplace_back(static_cast<Vertex>(i), next++);
  return Graph::from_edges(next, edges);
}

/// Star with `leaves` leaves (centre 0, leaves 1..leaves) where the first
/// `subdivided` edges carry one extra vertex each.
inline Graph subdivided_star(std::size_t leaves, std::size_t subdivided) {
  require(leaves >= 1, "subdivided star needs at least one leaf");
  require(subdivided <= leaves, "cannot subdivide more edges than the star has");
  std::vector<Edge> edges;
  auto next = static_cast<Vertex>(leaves + 1);
  for (Vertex leaf = 1; leaf <= leaves; ++leaf) {
    if (leaf <= subdivided) {
      edges.emplace_back(0, next);
      edges.emplace_back(next, leaf);
      ++next;
    } else {
      edges.emplace_back(0, leaf);
    }
  }
  return Graph::from_edges(next, edges);
}

/// Star with centre 0 and leaves 1..center_leaves, plus `extra` leaves hung on
/// leaf 1.
inline Graph double_star(std::size_t center_leaves, std::size_t extra) {
  require(center_leaves >= 1, "double star needs at least one centre leaf");
  std::vector<Edge> edges;
  for (Vertex v = 1; v <= center_leaves; ++v) edges.emplace_back(0, v);
  auto next = static_cast<Vertex>(center_leaves + 1);
  for (std::size_t i = 0; i < extra; ++i) edges.emplace_back(1, next++);
  return Graph::from_edges(next, edges);
}

namespace detail {

inline std::vector<std::size_t> parse_numbers(std::string_view text, char sep = ',') {
  std::vector<std::size_t> out;
  if (text.empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find(sep, start), text.size());
    const auto piece = text.substr(start, end - start);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), value);
    if (ec != std::errc{} || ptr != piece.data() + piece.size() || piece.empty())
      throw GraphError("bad number '" + std::string(piece) + "' in family spec");
    out.push_back(value);
    start = end + 1;
  }
  return out;
}

}  // namespace detail

/// Builds a family member from a compact text spec:
///   path:7  cycle:7  star:6  complete:4 (or k4)  grid:3
///   caterpillar:2,0,1  subdivided-star:5,2  double-star:3,2
inline Graph family(std::string_view spec) {
  std::string_view name = spec;
  std::string_view args;
  if (const auto colon = spec.find(':'); colon != std::string_view::npos) {
    name = spec.substr(0, colon);
    args = spec.substr(colon + 1);
  } else if (spec.size() > 1 && (spec[0] == 'k' || spec[0] == 'K')) {
    name = "complete";
    args = spec.substr(1);
  }
  const auto nums = detail::parse_numbers(args);
  auto one = [&](const char* fam) {
    require(nums.size() == 1, std::string(fam) + " takes exactly one parameter");
    return nums[0];
  };
  if (name == "path") return path(one("path"));
  if (name == "cycle") return cycle(one("cycle"));
  if (name == "star") return star(one("star"));
  if (name == "complete") return complete(one("complete"));
  if (name == "grid") return grid(one("grid"));
  if (name == "caterpillar") return caterpillar(nums);
  if (name == "subdivided-star") {
    require(nums.size() == 2, "subdivided-star takes leaves,subdivided");
    return subdivided_star(nums[0], nums[1]);
  }
  if (name == "double-star") {
    require(nums.size() == 2, "double-star takes centre_leaves,extra");
    return double_star(nums[0], nums[1]);
  }
  throw GraphError("unknown graph family '" + std::string(name) + "'");
}

}  // namespace firefight::gen
