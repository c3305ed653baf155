#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "firefight/engine.hpp"
#include "firefight/graph.hpp"
#include "firefight/graph_io.hpp"

namespace firefight::reduce {

enum class Variant { weighted, unweighted, bipartite };

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::weighted: return "weighted-dpr";
    case Variant::unweighted: return "unweighted-dpr";
    case Variant::bipartite: return "bipartite-dpr";
  }
  return "?";
}

inline Variant parse_variant(std::string_view s) {
  if (s == "weighted-dpr") return Variant::weighted;
  if (s == "unweighted-dpr") return Variant::unweighted;
  if (s == "bipartite-dpr") return Variant::bipartite;
  throw std::invalid_argument("unknown reduction target: " + std::string(s));
}

/// A path-restricted instance built from a classic one. Original vertices
/// keep their ids 0..r-1; gadget vertices follow.
struct DprInstance {
  Variant variant = Variant::weighted;
  Graph graph;
  VertexSet fires;
  std::uint32_t distance = 0;
  Weight k_prime = 0;

  Weight k = 0;
  std::size_t r = 0;
  std::size_t t = 0;  // non-adjacent pairs in the original
  Weight heavy_weight = 1;
  std::vector<std::pair<Edge, std::vector<Vertex>>> gadgets;  // pair -> internal path
  std::vector<std::vector<Vertex>> leaves;                    // unweighted variant only

  bool is_original(Vertex v) const { return v < r; }
};

namespace detail {

inline Weight light_total(const DprInstance& inst) {
  Weight w = 0;
  for (const auto& [pair, path] : inst.gadgets) w += static_cast<Weight>(path.size());
  return w;
}

// Joins every non-adjacent pair by a fresh path; `internal(u, v)` gives the
// number of internal vertices for that pair.
template <class Internal>
DprInstance subdivide_missing_pairs(const Graph& g, const VertexSet& fires, Weight k,
                                    Internal internal) {
  DprInstance inst;
  inst.r = g.size();
  inst.k = k;
  inst.fires = fires;
  auto edges = g.edges();
  std::size_t next = g.size();
  for (Vertex u = 0; u < g.size(); ++u)
    for (Vertex v = u + 1; v < g.size(); ++v) {
      if (g.adjacent(u, v)) continue;
      ++inst.t;
      std::vector<Vertex> path;
      const std::size_t len = internal(u, v);
      Vertex prev = u;
      for (std::size_t i = 0; i < len; ++i) {
        const auto s = static_cast<Vertex>(next++);
        path.push_back(s);
        edges.emplace_back(prev, s);
        prev = s;
      }
      edges.emplace_back(prev, v);
      inst.gadgets.push_back({{u, v}, std::move(path)});
    }
  inst.graph = Graph::from_edges(next, edges);
  return inst;
}

inline void apply_heavy_weight(DprInstance& inst, Weight heavy) {
  if (light_total(inst) >= heavy)
    throw std::logic_error("gadget weight does not stay below one original vertex");
  std::vector<Weight> w(inst.graph.size(), 1);
  for (Vertex v = 0; v < inst.r; ++v) w[v] = heavy;
  inst.graph = inst.graph.with_weights(std::move(w));
  inst.heavy_weight = heavy;
  inst.k_prime = inst.k * heavy;
}

}  // namespace detail

/// b-Firefighter on g to weighted path-restricted firefighting: each
/// non-adjacent pair is joined by a path with 2r internal unit-weight
/// vertices, originals weigh 2rt+1, d = 2r+1, k' = k(2rt+1).
inline DprInstance reduce_to_weighted_dpr(const Graph& g, const VertexSet& fires, Weight k) {
  const std::size_t r = g.size();
  auto inst = detail::subdivide_missing_pairs(g, fires, k, [&](Vertex, Vertex) { return 2 * r; });
  inst.variant = Variant::weighted;
  inst.distance = static_cast<std::uint32_t>(2 * r + 1);
  detail::apply_heavy_weight(inst, static_cast<Weight>(2 * r * inst.t + 1));
  return inst;
}

/// Same-part pairs get one more internal vertex so every cycle stays even,
/// and d grows by one. Originals weigh one more than all gadget vertices.
inline DprInstance reduce_bipartite_preserving(const Graph& g, const VertexSet& fires, Weight k) {
  const auto colour = two_coloring(g);
  if (!colour) throw std::invalid_argument("input graph is not bipartite");
  const std::size_t r = g.size();
  auto inst = detail::subdivide_missing_pairs(g, fires, k, [&](Vertex u, Vertex v) {
    return 2 * r + ((*colour)[u] == (*colour)[v] ? 1 : 0);
  });
  inst.variant = Variant::bipartite;
  inst.distance = static_cast<std::uint32_t>(2 * r + 2);
  detail::apply_heavy_weight(inst, detail::light_total(inst) + 1);
  if (!is_bipartite(inst.graph)) throw std::logic_error("bipartite reduction produced an odd cycle");
  return inst;
}

/// Replaces each vertex of weight w by itself plus w-1 pendant leaves; leaves
/// of burning vertices start burning. The threshold now counts vertices.
inline DprInstance reduce_weighted_to_unweighted(const DprInstance& in) {
  DprInstance out = in;
  out.variant = Variant::unweighted;
  auto edges = in.graph.edges();
  std::size_t next = in.graph.size();
  out.leaves.assign(in.graph.size(), {});
  for (Vertex v = 0; v < in.graph.size(); ++v)
    for (Weight i = 1; i < in.graph.weight(v); ++i) {
      const auto leaf = static_cast<Vertex>(next++);
      edges.emplace_back(v, leaf);
      out.leaves[v].push_back(leaf);
    }
  out.graph = Graph::from_edges(next, edges);
  in.fires.for_each([&](Vertex f) {
    for (Vertex leaf : out.leaves[f]) out.fires.insert(leaf);
  });
  return out;
}

inline GameConfig reduced_config(const DprInstance& inst, std::size_t firefighters) {
  GameConfig c;
  c.firefighters = firefighters;
  c.distance = inst.distance;
  c.mode = Mode::dpr;
  return c;
}

/// Replays a classic strategy on the reduced instance (same vertices, same
/// turns), then keeps defending the lowest-numbered surviving originals.
inline Strategy translate_strategy_forward(const Graph& original, const Strategy& strategy,
                                           std::size_t firefighters, const DprInstance& inst) {
  GameConfig classic;
  classic.firefighters = firefighters;
  classic.distance = static_cast<std::uint32_t>(original.size());
  const auto played = play(original, inst.fires, strategy, classic);

  const Game game(inst.graph, reduced_config(inst, firefighters));
  GameState s = game.initial_state(inst.fires);
  Strategy out;
  for (const auto& rec : played.trace) {
    if (game.at_fixed_point(s)) break;
    if (!game.is_valid_move(s, rec.defend))
      throw GameError("translated move at turn " + std::to_string(s.turn + 1) +
                      " is not reachable in the reduced instance");
    s = game.step(s, rec.defend);
    out.turns.push_back(rec.defend);
  }
  while (!game.at_fixed_point(s)) {
    std::size_t best_score = 0;
    Placement best;
    game.for_each_legal_move(s, [&](const Placement& move) {
      VertexSet fresh;
      for (Vertex v : move)
        if (inst.is_original(v) && !s.defended.contains(v)) fresh.insert(v);
      if (fresh.count() > best_score) {
        best_score = fresh.count();
        best = move;
      }
    });
    if (best_score == 0) break;
    s = game.step(s, best);
    out.turns.push_back(best);
  }
  return out;
}

/// Instance file: distance, threshold, weights, fires.
inline nlohmann::json instance_json(const DprInstance& inst) {
  return {{"d", inst.distance},
          {"k_prime", inst.k_prime},
          {"weights", inst.graph.weights()},
          {"fires", inst.fires.to_vector()},
          {"mode", "dpr"}};
}

/// Sidecar recording where the instance came from and how it was built.
inline nlohmann::json provenance_json(const DprInstance& inst, const Graph& original) {
  nlohmann::json gadgets = nlohmann::json::array();
  for (const auto& [pair, path] : inst.gadgets)
    gadgets.push_back({{"pair", {pair.first, pair.second}}, {"internal", path}});
  nlohmann::json j = {
      {"variant", std::string(to_string(inst.variant))},
      {"original", nlohmann::json::parse(format_graph(original))},
      {"fires", inst.fires.to_vector()},
      {"k", inst.k},
      {"r", inst.r},
      {"t", inst.t},
      {"heavy_weight", inst.heavy_weight},
      {"d", inst.distance},
      {"k_prime", inst.k_prime},
      {"vertices", inst.graph.size()},
      {"gadgets", gadgets},
  };
  switch (inst.variant) {
    case Variant::weighted:
      j["formulas"] = {{"internal_per_pair", "2r"}, {"heavy_weight", "2rt+1"}, {"d", "2r+1"},
                       {"k_prime", "k(2rt+1)"}};
      break;
    case Variant::bipartite:
      j["formulas"] = {{"internal_per_pair", "2r, or 2r+1 within a part"},
                       {"heavy_weight", "total gadget weight + 1"}, {"d", "2r+2"},
                       {"k_prime", "k * heavy_weight"}};
      break;
    case Variant::unweighted:
      j["formulas"] = {{"leaves_per_vertex", "w_v - 1"}, {"fires", "burning vertices and their leaves"},
                       {"k_prime", "unchanged"}};
      break;
  }
  return j;
}

}  // namespace firefight::reduce
