#pragma once

// Test-only reference implementations. Nothing here calls into the engine's
// move generation, matching, or search: they are the independent side of the
// checks in the unit and acceptance suites.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "firefight/engine.hpp"
#include "firefight/graph.hpp"

namespace oracle {

using firefight::Edge;
using firefight::GameConfig;
using firefight::Graph;
using firefight::Mode;
using firefight::Vertex;
using firefight::Weight;

/// Plain boolean-vector game state.
struct State {
  std::vector<bool> burnt, defended;
  std::vector<Vertex> positions;
  std::size_t turn = 0;
};

inline bool any_threat(const Graph& g, const State& s) {
  for (Vertex v = 0; v < g.size(); ++v)
    if (s.burnt[v])
      for (Vertex u : g.neighbors(v))
        if (!s.burnt[u] && !s.defended[u]) return true;
  return false;
}

inline State spread(const Graph& g, State s) {
  std::vector<bool> next = s.burnt;
  for (Vertex v = 0; v < g.size(); ++v)
    if (s.burnt[v])
      for (Vertex u : g.neighbors(v))
        if (!s.defended[u]) next[u] = true;
  s.burnt = std::move(next);
  return s;
}

/// Does some simple path from a to b of at most `limit` edges avoid every
/// vertex in `blocked`? Enumerates paths by DFS.
inline bool path_within(const Graph& g, const std::vector<bool>& blocked, Vertex a, Vertex b,
                        std::uint32_t limit) {
  if (blocked[a] || blocked[b]) return false;
  std::vector<bool> on_path(g.size(), false);
  auto dfs = [&](auto&& self, Vertex u, std::uint32_t used) -> bool {
    if (u == b) return true;
    if (used == limit) return false;
    on_path[u] = true;
    for (Vertex w : g.neighbors(u))
      if (!on_path[w] && !blocked[w] && self(self, w, used + 1)) return true;
    on_path[u] = false;
    return false;
  };
  return dfs(dfs, a, 0);
}

/// Can a firefighter on `from` legally end on `to`?
inline bool can_move(const Graph& g, const State& s, Vertex from, Vertex to,
                     const GameConfig& cfg) {
  if (s.burnt[to]) return false;
  switch (cfg.mode) {
    case Mode::classic: return true;
    case Mode::dr: {
      std::vector<bool> none(g.size(), false);
      return path_within(g, none, from, to, cfg.distance);
    }
    case Mode::dpr: return path_within(g, s.burnt, from, to, cfg.distance);
  }
  return false;
}

/// Tries every one of the b! firefighter-to-destination assignments.
inline bool brute_force_valid(const Graph& g, const State& s, std::vector<Vertex> dest,
                              const GameConfig& cfg) {
  for (Vertex v : dest)
    if (s.burnt[v]) return false;
  if (s.positions.empty() || cfg.mode == Mode::classic) return true;
  std::vector<std::size_t> perm(dest.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (std::size_t i = 0; i < perm.size() && ok; ++i)
      ok = can_move(g, s, s.positions[i], dest[perm[i]], cfg);
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

/// All size-b multisets over {0..n-1}, lexicographic.
inline std::vector<std::vector<Vertex>> multisets(std::size_t n, std::size_t b) {
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> cur;
  auto rec = [&](auto&& self, Vertex from) -> void {
    if (cur.size() == b) {
      out.push_back(cur);
      return;
    }
    for (Vertex v = from; v < n; ++v) {
      cur.push_back(v);
      self(self, v);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline State start(const Graph& g, const std::vector<Vertex>& fires) {
  State s;
  s.burnt.assign(g.size(), false);
  s.defended.assign(g.size(), false);
  for (Vertex f : fires) s.burnt[f] = true;
  return s;
}

inline Weight unburnt_weight(const Graph& g, const State& s) {
  Weight w = 0;
  for (Vertex v = 0; v < g.size(); ++v)
    if (!s.burnt[v]) w += g.weight(v);
  return w;
}

/// Memo-free, prune-free game value by exhaustive DFS.
inline Weight plain_value(const Graph& g, const State& s, const GameConfig& cfg) {
  if (s.turn >= cfg.horizon_for(g) || !any_threat(g, s)) return unburnt_weight(g, s);
  Weight best = -1;
  for (const auto& dest : multisets(g.size(), cfg.firefighters)) {
    if (!brute_force_valid(g, s, dest, cfg)) continue;
    State next = s;
    for (Vertex v : dest) next.defended[v] = true;
    next.positions = dest;
    ++next.turn;
    best = std::max(best, plain_value(g, spread(g, next), cfg));
  }
  return best;
}

inline Weight plain_solve(const Graph& g, const std::vector<Vertex>& fires,
                          const GameConfig& cfg) {
  return plain_value(g, start(g, fires), cfg);
}

/// Defend one multiset, then let the fire run: the d = 0 game.
inline Weight firebreak_value(const Graph& g, const std::vector<Vertex>& fires,
                              std::size_t b) {
  const State s0 = start(g, fires);
  if (!any_threat(g, s0)) return unburnt_weight(g, s0);
  Weight best = 0;
  for (const auto& dest : multisets(g.size(), b)) {
    bool ok = true;
    for (Vertex v : dest) ok = ok && !s0.burnt[v];
    if (!ok) continue;
    State s = s0;
    for (Vertex v : dest) s.defended[v] = true;
    while (any_threat(g, s)) s = spread(g, s);
    best = std::max(best, unburnt_weight(g, s));
  }
  return best;
}

// Seeded random instances.

inline Graph random_connected(std::mt19937_64& rng, std::size_t n, double extra_edge_p) {
  std::vector<Edge> edges;
  std::vector<std::vector<bool>> has(n, std::vector<bool>(n, false));
  for (Vertex v = 1; v < n; ++v) {
    const auto u = static_cast<Vertex>(std::uniform_int_distribution<std::size_t>(0, v - 1)(rng));
    edges.emplace_back(u, v);
    has[u][v] = has[v][u] = true;
  }
  std::bernoulli_distribution coin(extra_edge_p);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (!has[u][v] && coin(rng)) edges.emplace_back(u, v);
  return Graph::from_edges(n, edges);
}

inline Graph random_tree(std::mt19937_64& rng, std::size_t n) {
  return random_connected(rng, n, 0.0);
}

inline Graph random_bipartite(std::mt19937_64& rng, std::size_t left, std::size_t right,
                              double p) {
  std::vector<Edge> edges;
  std::bernoulli_distribution coin(p);
  for (Vertex u = 0; u < left; ++u)
    for (Vertex v = 0; v < right; ++v)
      if (coin(rng)) edges.emplace_back(u, static_cast<Vertex>(left + v));
  return Graph::from_edges(left + right, edges);
}

}  // namespace oracle
