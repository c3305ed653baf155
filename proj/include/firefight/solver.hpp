#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "firefight/engine.hpp"
#include "firefight/graph.hpp"

namespace firefight {

inline constexpr std::size_t kMaxSolverFirefighters = 8;

/// Node cap used when the caller gives none; FIREFIGHT_BUDGET overrides it.
inline std::uint64_t default_node_budget() {
  if (const char* env = std::getenv("FIREFIGHT_BUDGET")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 20'000'000;
}

struct SolverOptions {
  std::uint64_t node_budget = default_node_budget();
  bool memoize = true;
  bool prune = true;
  bool tree_fast_path = true;
};

struct SolveResult {
  Weight saved_weight = 0;
  std::size_t burnt_count = 0;
  Strategy optimal_strategy;
  std::uint64_t nodes_explored = 0;
};

class BudgetExhausted : public std::runtime_error {
 public:
  explicit BudgetExhausted(std::uint64_t nodes)
      : std::runtime_error("budget exhausted after " + std::to_string(nodes) + " nodes"),
        nodes_(nodes) {}
  std::uint64_t nodes() const { return nodes_; }

 private:
  std::uint64_t nodes_;
};

namespace detail {

struct StateKey {
  VertexSet burnt;
  VertexSet defended;
  std::array<std::uint8_t, kMaxSolverFirefighters> positions{};
  std::uint16_t turn = 0;

  friend bool operator==(const StateKey&, const StateKey&) = default;
};

struct StateKeyHash {
  std::size_t operator()(const StateKey& k) const {
    std::size_t h = k.burnt.hash();
    h ^= k.defended.hash() * 0x100000001b3ULL + (h << 7);
    std::uint64_t p = k.turn;
    for (auto v : k.positions) p = p * 257 + v;
    h ^= static_cast<std::size_t>(p * 0x9e3779b97f4a7c15ULL) + (h >> 3);
    return h;
  }
};

struct MemoEntry {
  Weight value = 0;
  Placement move;
};

/// Exhaustive game-tree search over states taken right after a spread.
class Search {
 public:
  Search(const Game& game, const SolverOptions& opts) : game_(game), opts_(opts) {
    const auto& cfg = game.config();
    if (cfg.firefighters > kMaxSolverFirefighters)
      throw GameError("solver supports at most " + std::to_string(kMaxSolverFirefighters) +
                      " firefighters");
    const auto n = game.graph().size();
    horizon_ = game.horizon();
    turn_matters_ = horizon_ + 1 < n;
    positions_matter_ = cfg.mode != Mode::classic;
    if (cfg.mode == Mode::dr && is_connected(game.graph()) &&
        cfg.distance >= diameter(game.graph()))
      positions_matter_ = false;
  }

  std::uint64_t nodes() const { return nodes_; }

  bool terminal(const GameState& s) const {
    return s.turn >= horizon_ || game_.at_fixed_point(s);
  }

  Weight unburnt_weight(const GameState& s) const {
    return game_.graph().total_weight() - game_.graph().weight_of(s.burnt);
  }

  /// Admissible bound on the weight still savable from s: at most b of the
  /// currently threatened vertices can be defended before the next spread.
  Weight upper_bound(const GameState& s) const {
    const Weight unburnt = unburnt_weight(s);
    if (terminal(s)) return unburnt;
    const auto& g = game_.graph();
    std::vector<Weight> threat;
    game_.threatened(s).for_each([&](Vertex v) { threat.push_back(g.weight(v)); });
    std::sort(threat.begin(), threat.end(), std::greater<>());
    Weight lost = 0;
    for (std::size_t i = game_.config().firefighters; i < threat.size(); ++i) lost += threat[i];
    return unburnt - lost;
  }

  /// Weight that survives even if the firefighters never act again.
  Weight lower_bound(const GameState& s) const {
    const auto& g = game_.graph();
    const VertexSet open = game_.all_vertices() - s.defended;
    VertexSet reached = s.burnt;
    VertexSet frontier = s.burnt;
    while (!frontier.empty()) {
      frontier = (g.neighborhood(frontier) & open) - reached;
      reached |= frontier;
    }
    return g.total_weight() - g.weight_of(reached);
  }

  GameState child(const GameState& s, const Placement& move) const {
    return game_.spread(game_.defend(s, move));
  }

  /// Optimal saved weight from s and the lexicographically least move
  /// achieving it (nullopt when s is terminal).
  std::pair<Weight, std::optional<Placement>> evaluate(const GameState& s) {
    if (terminal(s)) return {unburnt_weight(s), std::nullopt};
    StateKey key;
    if (opts_.memoize) {
      key = make_key(s);
      if (auto it = memo_.find(key); it != memo_.end())
        return {it->second.value, it->second.move};
    }
    count_node();

    Weight best = -1;
    Placement best_move;
    for (const auto& move : ordered_moves(s)) {
      const GameState next = child(s, move);
      if (opts_.prune && best >= 0) {
        const Weight ub = upper_bound(next);
        if (ub < best || (ub == best && move > best_move)) continue;
      }
      const Weight v = evaluate(next).first;
      if (v > best || (v == best && move < best_move)) {
        best = v;
        best_move = move;
      }
    }
    if (opts_.memoize) memo_.emplace(key, MemoEntry{best, best_move});
    return {best, best_move};
  }

  /// Is a saved weight of at least k reachable from s?
  bool reaches(const GameState& s, Weight k) {
    if (upper_bound(s) < k) return false;
    if (terminal(s)) return unburnt_weight(s) >= k;
    if (lower_bound(s) >= k) return true;
    StateKey key;
    if (opts_.memoize) {
      key = make_key(s);
      if (failed_.contains(key)) return false;
    }
    count_node();
    for (const auto& move : ordered_moves(s)) {
      const GameState next = child(s, move);
      if (opts_.prune && upper_bound(next) < k) continue;
      if (reaches(next, k)) return true;
    }
    if (opts_.memoize) failed_.insert(key);
    return false;
  }

 private:
  void count_node() {
    if (++nodes_ > opts_.node_budget) throw BudgetExhausted(nodes_);
  }

  StateKey make_key(const GameState& s) const {
    StateKey k;
    k.burnt = s.burnt;
    k.defended = s.defended;
    if (positions_matter_)
      for (std::size_t i = 0; i < s.positions.size(); ++i)
        k.positions[i] = static_cast<std::uint8_t>(s.positions[i] + 1);
    if (turn_matters_) k.turn = static_cast<std::uint16_t>(s.turn);
    return k;
  }

  /// Legal moves, those touching the fire frontier first; lexicographic
  /// within equal frontier contact.
  std::vector<Placement> ordered_moves(const GameState& s) const {
    auto moves = game_.legal_moves(s);
    const VertexSet threat = game_.threatened(s);
    std::vector<std::pair<std::size_t, std::size_t>> order;
    order.reserve(moves.size());
    for (std::size_t i = 0; i < moves.size(); ++i) {
      std::size_t hits = 0;
      for (Vertex v : moves[i]) hits += threat.contains(v) ? 1 : 0;
      order.emplace_back(hits, i);
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<Placement> out;
    out.reserve(moves.size());
    for (const auto& [hits, i] : order) out.push_back(std::move(moves[i]));
    return out;
  }

  const Game& game_;
  SolverOptions opts_;
  std::size_t horizon_ = 0;
  bool turn_matters_ = false;
  bool positions_matter_ = true;
  std::uint64_t nodes_ = 0;
  std::unordered_map<StateKey, MemoEntry, StateKeyHash> memo_;
  std::unordered_set<StateKey, StateKeyHash> failed_;
};

}  // namespace detail

/// DPR optimum on a tree with a single fire: defend the roots of the b
/// heaviest components of T - fire on the first turn. One traversal.
inline SolveResult solve_tree_dpr(const Graph& tree, Vertex fire, std::size_t firefighters) {
  if (!is_tree(tree)) throw std::invalid_argument("solve_tree_dpr: graph is not a tree");
  if (fire >= tree.size()) throw std::invalid_argument("solve_tree_dpr: fire vertex out of range");
  if (firefighters == 0) throw std::invalid_argument("solve_tree_dpr: need a firefighter");

  const std::size_t n = tree.size();
  std::vector<Vertex> parent(n, fire), order;
  std::vector<bool> seen(n, false);
  order.reserve(n);
  std::vector<Vertex> stack{fire};
  seen[fire] = true;
  while (!stack.empty()) {
    const Vertex u = stack.back();
    stack.pop_back();
    order.push_back(u);
    for (Vertex v : tree.neighbors(u))
      if (!seen[v]) {
        seen[v] = true;
        parent[v] = u;
        stack.push_back(v);
      }
  }
  std::vector<Weight> subtree(n, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    subtree[*it] += tree.weight(*it);
    if (*it != fire) subtree[parent[*it]] += subtree[*it];
  }

  std::vector<Vertex> branches(tree.neighbors(fire).begin(), tree.neighbors(fire).end());
  std::stable_sort(branches.begin(), branches.end(),
                   [&](Vertex a, Vertex b) { return subtree[a] > subtree[b]; });
  branches.resize(std::min(branches.size(), firefighters));

  SolveResult result;
  result.nodes_explored = n;
  for (Vertex v : branches) result.saved_weight += subtree[v];
  std::size_t saved_vertices = 0;
  for (Vertex v : branches) {
    std::vector<Vertex> todo{v};
    while (!todo.empty()) {
      const Vertex u = todo.back();
      todo.pop_back();
      ++saved_vertices;
      for (Vertex w : tree.neighbors(u))
        if (w != parent[u]) todo.push_back(w);
    }
  }
  result.burnt_count = n - saved_vertices;
  if (!branches.empty()) {
    Placement first = branches;
    while (first.size() < firefighters) first.push_back(branches.front());
    std::sort(first.begin(), first.end());
    result.optimal_strategy.turns.push_back(std::move(first));
  }
  return result;
}

/// Maximum total weight of never-burnt vertices over all legal strategies,
/// with the lexicographically least optimal strategy as witness.
inline SolveResult solve(const Graph& g, const VertexSet& fires, const GameConfig& cfg,
                         const SolverOptions& opts = {}) {
  const Game game(g, cfg);
  const GameState root = game.initial_state(fires);
  if (opts.tree_fast_path && cfg.mode == Mode::dpr && cfg.distance >= 1 &&
      fires.count() == 1 && game.horizon() + 1 >= g.size() && is_tree(g))
    return solve_tree_dpr(g, fires.to_vector().front(), cfg.firefighters);

  detail::Search search(game, opts);
  SolveResult result;
  result.saved_weight = search.evaluate(root).first;
  GameState s = root;
  while (true) {
    auto [value, move] = search.evaluate(s);
    if (!move) break;
    result.optimal_strategy.turns.push_back(*move);
    s = search.child(s, *move);
  }
  result.burnt_count = s.burnt.count();
  result.nodes_explored = search.nodes();
  return result;
}

/// Is the optimum at least k? Answered by a threshold search that stops at
/// the first witness.
inline bool decide(const Graph& g, const VertexSet& fires, const GameConfig& cfg, Weight k,
                   const SolverOptions& opts = {}) {
  const Game game(g, cfg);
  const GameState root = game.initial_state(fires);
  if (opts.tree_fast_path && cfg.mode == Mode::dpr && cfg.distance >= 1 &&
      fires.count() == 1 && game.horizon() + 1 >= g.size() && is_tree(g))
    return solve_tree_dpr(g, fires.to_vector().front(), cfg.firefighters).saved_weight >= k;
  detail::Search search(game, opts);
  return search.reaches(root, k);
}

}  // namespace firefight
