#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "firefight/graph.hpp"
#include "firefight/matching.hpp"

namespace firefight {

enum class Mode { classic, dr, dpr };

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::classic: return "classic";
    case Mode::dr: return "dr";
    case Mode::dpr: return "dpr";
  }
  return "?";
}

inline Mode parse_mode(std::string_view s) {
  if (s == "classic") return Mode::classic;
  if (s == "dr") return Mode::dr;
  if (s == "dpr") return Mode::dpr;
  throw std::invalid_argument("unknown mode '" + std::string(s) + "' (classic|dr|dpr)");
}

/// Rule parameters. `distance` is ignored in classic mode; an unbounded move
/// distance is expressed as distance >= n.
struct GameConfig {
  std::size_t firefighters = 1;
  std::uint32_t distance = 1;
  Mode mode = Mode::classic;
  std::optional<std::size_t> horizon;

  std::size_t horizon_for(const Graph& g) const { return horizon.value_or(g.size()); }
};

/// Sorted multiset of vertices: where the firefighters stand after a turn.
using Placement = std::vector<Vertex>;

struct GameState {
  VertexSet burnt;
  VertexSet defended;
  Placement positions;  // empty before the first defence
  std::size_t turn = 0;

  friend bool operator==(const GameState&, const GameState&) = default;
};

/// Destination multiset for each turn 1..T.
struct Strategy {
  std::vector<Placement> turns;

  friend bool operator==(const Strategy&, const Strategy&) = default;
};

class GameError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidMove : public GameError {
 public:
  InvalidMove(std::size_t turn, const std::string& why)
      : GameError("invalid move at turn " + std::to_string(turn) + ": " + why), turn_(turn) {}
  std::size_t turn() const { return turn_; }

 private:
  std::size_t turn_;
};

struct TurnRecord {
  std::size_t turn = 0;
  Placement defend;
  VertexSet burnt;
  VertexSet defended;
};

struct PlayResult {
  GameState final_state;
  std::vector<TurnRecord> trace;
  Weight saved_weight = 0;
  std::size_t burnt_count = 0;
};

/// Game rules bound to one graph and configuration. Copies the graph, so the
/// object is self-contained and cheap to share read-only between threads.
class Game {
 public:
  Game(Graph g, GameConfig cfg) : graph_(std::move(g)), cfg_(cfg) {
    if (cfg_.firefighters == 0) throw GameError("need at least one firefighter");
    if (!graph_.fits_bitmask())
      throw GameError("game engine supports at most " +
                      std::to_string(VertexSet::kCapacity) + " vertices");
    all_ = graph_.all_vertices();
    if (cfg_.mode == Mode::dr) {
      const DistanceMatrix dist(graph_);
      balls_.resize(graph_.size());
      for (Vertex u = 0; u < graph_.size(); ++u)
        for (Vertex v = 0; v < graph_.size(); ++v)
          if (dist(u, v) <= cfg_.distance) balls_[u].insert(v);
    }
  }

  const Graph& graph() const { return graph_; }
  const GameConfig& config() const { return cfg_; }
  std::size_t horizon() const { return cfg_.horizon_for(graph_); }
  VertexSet all_vertices() const { return all_; }

  GameState initial_state(const VertexSet& fires) const {
    if (fires.empty()) throw GameError("initial fire set must be nonempty");
    if (!fires.is_subset_of(all_)) throw GameError("fire vertex outside the graph");
    GameState s;
    s.burnt = fires;
    return s;
  }

  /// Unburnt, undefended vertices adjacent to the fire.
  VertexSet threatened(const GameState& s) const {
    return graph_.neighborhood(s.burnt) - s.burnt - s.defended;
  }

  bool at_fixed_point(const GameState& s) const { return threatened(s).empty(); }

  /// Fire moves into every undefended neighbour of a burning vertex.
  GameState spread(const GameState& s) const {
    GameState next = s;
    next.burnt |= threatened(s);
    return next;
  }

  /// Places the firefighters on `dest` (no validation) and advances the turn.
  GameState defend(const GameState& s, Placement dest) const {
    GameState next = s;
    std::sort(dest.begin(), dest.end());
    for (Vertex v : dest) next.defended.insert(v);
    next.positions = std::move(dest);
    ++next.turn;
    return next;
  }

  /// Unburnt vertices a firefighter standing on `from` may move to.
  VertexSet reach(const GameState& s, Vertex from) const {
    const VertexSet alive = all_ - s.burnt;
    switch (cfg_.mode) {
      case Mode::classic: return alive;
      case Mode::dr: return balls_[from] & alive;
      case Mode::dpr: return ball_in_induced(graph_, alive, from, cfg_.distance);
    }
    return alive;
  }

  bool is_valid_move(const GameState& s, const Placement& dest) const {
    if (dest.size() != cfg_.firefighters)
      throw GameError("destination multiset has " + std::to_string(dest.size()) +
                      " vertices, expected " + std::to_string(cfg_.firefighters));
    for (Vertex v : dest)
      if (v >= graph_.size() || s.burnt.contains(v)) return false;
    if (s.positions.empty() || cfg_.mode == Mode::classic) return true;
    if (s.positions.size() != dest.size())
      throw GameError("state holds " + std::to_string(s.positions.size()) +
                      " firefighters, config expects " + std::to_string(dest.size()));
    return matchable(reaches(s), dest);
  }

  /// Every legal destination multiset, in increasing lexicographic order.
  std::vector<Placement> legal_moves(const GameState& s) const {
    std::vector<Placement> out;
    for_each_legal_move(s, [&](const Placement& p) { out.push_back(p); });
    return out;
  }

  template <typename F>
  void for_each_legal_move(const GameState& s, F&& f) const {
    const std::size_t b = cfg_.firefighters;
    const bool unrestricted = s.positions.empty() || cfg_.mode == Mode::classic;
    std::vector<VertexSet> per_firefighter;
    VertexSet candidates_mask;
    if (unrestricted) {
      candidates_mask = all_ - s.burnt;
    } else {
      per_firefighter = reaches(s);
      for (const auto& r : per_firefighter) candidates_mask |= r;
    }
    const auto candidates = candidates_mask.to_vector();
    if (candidates.empty()) return;
    Placement current;
    current.reserve(b);
    enumerate(candidates, 0, b, current, [&](const Placement& p) {
      if (unrestricted || b == 1 || matchable(per_firefighter, p)) f(p);
    });
  }

  /// Validates, defends, spreads.
  GameState step(const GameState& s, Placement dest) const {
    std::sort(dest.begin(), dest.end());
    if (dest.size() != cfg_.firefighters)
      throw InvalidMove(s.turn + 1, "expected " + std::to_string(cfg_.firefighters) +
                                        " destinations, got " + std::to_string(dest.size()));
    if (!is_valid_move(s, dest)) throw InvalidMove(s.turn + 1, describe_invalid(s, dest));
    return spread(defend(s, std::move(dest)));
  }

  /// Replays a strategy. Once the strategy runs out the firefighters stay put;
  /// the game stops at the spread fixed point or the horizon.
  PlayResult play(const VertexSet& fires, const Strategy& strategy) const {
    PlayResult result;
    GameState s = initial_state(fires);
    const std::size_t horizon = this->horizon();
    while (s.turn < horizon && !at_fixed_point(s)) {
      const std::size_t t = s.turn;
      if (t < strategy.turns.size()) {
        s = step(s, strategy.turns[t]);
      } else if (!s.positions.empty()) {
        Placement stay = s.positions;
        s = spread(defend(s, std::move(stay)));
      } else {
        s = spread(s);
        ++s.turn;
      }
      result.trace.push_back(
          {s.turn, t < strategy.turns.size() ? sorted(strategy.turns[t]) : s.positions,
           s.burnt, s.defended});
    }
    result.burnt_count = s.burnt.count();
    result.saved_weight = graph_.total_weight() - graph_.weight_of(s.burnt);
    result.final_state = std::move(s);
    return result;
  }

 private:
  static Placement sorted(Placement p) {
    std::sort(p.begin(), p.end());
    return p;
  }

  std::vector<VertexSet> reaches(const GameState& s) const {
    std::vector<VertexSet> out;
    out.reserve(s.positions.size());
    for (Vertex p : s.positions) out.push_back(reach(s, p));
    return out;
  }

  static bool matchable(const std::vector<VertexSet>& reach_sets, const Placement& dest) {
    const std::size_t b = dest.size();
    if (b == 1) return reach_sets[0].contains(dest[0]);
    BipartiteMatcher m(b, b);
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < b; ++j)
        if (reach_sets[i].contains(dest[j])) m.add_edge(i, j);
    return m.has_perfect_matching();
  }

  template <typename F>
  static void enumerate(const std::vector<Vertex>& candidates, std::size_t from,
                        std::size_t remaining, Placement& current, F&& f) {
    if (remaining == 0) {
      f(current);
      return;
    }
    for (std::size_t i = from; i < candidates.size(); ++i) {
      current.push_back(candidates[i]);
      enumerate(candidates, i, remaining - 1, current, f);
      current.pop_back();
    }
  }

  std::string describe_invalid(const GameState& s, const Placement& dest) const {
    for (Vertex v : dest) {
      if (v >= graph_.size()) return "vertex " + std::to_string(v) + " is not in the graph";
      if (s.burnt.contains(v)) return "vertex " + std::to_string(v) + " is burnt";
    }
    return "no assignment of firefighters to destinations within distance " +
           std::to_string(cfg_.distance);
  }

  Graph graph_;
  GameConfig cfg_;
  VertexSet all_;
  std::vector<VertexSet> balls_;
};

// Free-function forms of the rules.

inline GameState initial_state(const Graph& g, const VertexSet& fires) {
  return Game(g, {}).initial_state(fires);
}

inline GameState spread(const Graph& g, const GameState& s) { return Game(g, {}).spread(s); }

inline bool is_valid_move(const Graph& g, const GameState& s, const Placement& dest,
                          const GameConfig& cfg) {
  return Game(g, cfg).is_valid_move(s, dest);
}

inline std::vector<Placement> legal_moves(const Graph& g, const GameState& s,
                                          const GameConfig& cfg) {
  return Game(g, cfg).legal_moves(s);
}

inline PlayResult play(const Graph& g, const VertexSet& fires, const Strategy& strategy,
                       const GameConfig& cfg) {
  return Game(g, cfg).play(fires, strategy);
}

// JSON forms: {"turns":[{"defend":[v,...]},...]} and the per-turn trace.

inline nlohmann::json strategy_to_json(const Strategy& s) {
  nlohmann::json turns = nlohmann::json::array();
  for (const auto& p : s.turns) turns.push_back({{"defend", p}});
  return {{"turns", turns}};
}

inline Strategy strategy_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("turns") || !j["turns"].is_array())
    throw GameError("strategy JSON must be {\"turns\": [...]}");
  Strategy s;
  for (const auto& t : j["turns"]) {
    if (!t.contains("defend") || !t["defend"].is_array())
      throw GameError("each strategy turn needs a \"defend\" array");
    Placement p;
    for (const auto& v : t["defend"]) {
      if (!v.is_number_integer() || v.get<long long>() < 0)
        throw GameError("defend entries must be vertex ids");
      p.push_back(v.get<Vertex>());
    }
    std::sort(p.begin(), p.end());
    s.turns.push_back(std::move(p));
  }
  return s;
}

inline nlohmann::json trace_to_json(const PlayResult& r) {
  nlohmann::json turns = nlohmann::json::array();
  for (const auto& t : r.trace)
    turns.push_back({{"turn", t.turn},
                     {"defend", t.defend},
                     {"burnt", t.burnt.to_vector()},
                     {"defended", t.defended.to_vector()}});
  return {{"turns", turns},
          {"saved", r.saved_weight},
          {"burnt", r.burnt_count},
          {"final_burnt", r.final_state.burnt.to_vector()},
          {"final_defended", r.final_state.defended.to_vector()}};
}

}  // namespace firefight
