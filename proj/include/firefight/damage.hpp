#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "firefight/canonical.hpp"
#include "firefight/engine.hpp"
#include "firefight/generators.hpp"
#include "firefight/graph.hpp"
#include "firefight/graph_io.hpp"
#include "firefight/parallel.hpp"
#include "firefight/solver.hpp"

namespace firefight {

/// Non-negative fraction kept with its natural denominator; compare and
/// print through the reduced form.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  std::pair<std::int64_t, std::int64_t> reduced() const {
    const auto g = std::gcd(num, den);
    return {num / g, den / g};
  }
  std::string to_string() const {
    const auto [a, b] = reduced();
    return b == 1 ? std::to_string(a) : std::to_string(a) + "/" + std::to_string(b);
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational& x, const Rational& y) {
    return static_cast<__int128>(x.num) * y.den == static_cast<__int128>(y.num) * x.den;
  }
  friend bool operator<(const Rational& x, const Rational& y) {
    return static_cast<__int128>(x.num) * y.den < static_cast<__int128>(y.num) * x.den;
  }
  friend bool operator>(const Rational& x, const Rational& y) { return y < x; }
  friend bool operator<=(const Rational& x, const Rational& y) { return !(y < x); }
  friend bool operator>=(const Rational& x, const Rational& y) { return !(x < y); }
};

inline nlohmann::json to_json(const Rational& r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", r.value());
  return {{"num", r.num}, {"den", r.den}, {"reduced", r.to_string()}, {"decimal", buf}};
}

inline std::int64_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::int64_t c = 1;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<std::int64_t>(n - k + i) / static_cast<std::int64_t>(i);
  return c;
}

/// All q-subsets of {0..n-1} in lexicographic order.
inline std::vector<std::vector<Vertex>> fire_sets(std::size_t n, std::size_t q) {
  std::vector<std::vector<Vertex>> out;
  std::vector<Vertex> cur;
  auto rec = [&](auto&& self, Vertex from) -> void {
    if (cur.size() == q) {
      out.push_back(cur);
      return;
    }
    for (Vertex v = from; v < n; ++v) {
      cur.push_back(v);
      self(self, v + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

struct DamageOptions {
  std::size_t workers = 1;
  SolverOptions solver;
};

struct FireSetResult {
  std::vector<Vertex> fires;
  std::optional<std::size_t> burnt;  // empty when the solver ran out of budget
  std::uint64_t nodes = 0;
};

struct DamageReport {
  std::string graph_id;
  std::size_t n = 0, q = 1, b = 1;
  std::uint32_t d = 0;
  Mode mode = Mode::classic;
  std::vector<FireSetResult> per_fire_set;
  bool complete = true;
  Rational expected;
};

/// Average number of burnt vertices over every q-subset of initial fires,
/// each played optimally.
inline DamageReport expected_damage(const Graph& g, std::size_t q, const GameConfig& cfg,
                                    const DamageOptions& opts = {},
                                    std::string graph_id = "graph") {
  if (q < 1 || q > g.size()) throw std::invalid_argument("q must be in 1..n");
  DamageReport rep;
  rep.graph_id = std::move(graph_id);
  rep.n = g.size();
  rep.q = q;
  rep.b = cfg.firefighters;
  rep.d = cfg.distance;
  rep.mode = cfg.mode;
  const auto sets = fire_sets(g.size(), q);
  rep.per_fire_set.resize(sets.size());
  parallel_for(sets.size(), opts.workers, [&](std::size_t i) {
    auto& out = rep.per_fire_set[i];
    out.fires = sets[i];
    try {
      const auto r = solve(g, VertexSet::of(sets[i]), cfg, opts.solver);
      out.burnt = r.burnt_count;
      out.nodes = r.nodes_explored;
    } catch (const BudgetExhausted& e) {
      out.nodes = e.nodes();
    }
  });
  std::int64_t total = 0;
  for (const auto& r : rep.per_fire_set) {
    if (r.burnt)
      total += static_cast<std::int64_t>(*r.burnt);
    else
      rep.complete = false;
  }
  rep.expected = {total, binomial(g.size(), q)};
  return rep;
}

inline nlohmann::json to_json(const DamageReport& r) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& f : r.per_fire_set) {
    nlohmann::json row = {{"fires", f.fires}, {"nodes", f.nodes}};
    row["burnt"] = f.burnt ? nlohmann::json(*f.burnt) : nlohmann::json(nullptr);
    per.push_back(row);
  }
  return {{"graph", r.graph_id},
          {"n", r.n},
          {"q", r.q},
          {"b", r.b},
          {"d", r.d},
          {"mode", std::string(to_string(r.mode))},
          {"complete", r.complete},
          {"expected", r.complete ? to_json(r.expected) : nlohmann::json(nullptr)},
          {"per_fire_set", per}};
}

// ---- optimal graphs

inline constexpr std::size_t kDefaultSearchOrderCap = 7;

struct OptimalGraphs {
  std::size_t n = 0;
  Rational minimum;
  std::vector<Graph> minimizers;  // canonical labelling
  std::size_t graphs_examined = 0;
  bool complete = true;
};

/// Connected graphs of order n (up to isomorphism) minimising expected
/// damage. `cfg.distance` is used as given; pass n for an unbounded range.
inline OptimalGraphs optimal_graph_search(std::size_t n, std::size_t q, const GameConfig& cfg,
                                          const DamageOptions& opts = {},
                                          std::size_t order_cap = kDefaultSearchOrderCap) {
  if (n > order_cap || n > kMaxEnumerationOrder)
    throw std::invalid_argument("optimal graph search is capped at n = " + std::to_string(order_cap));
  const auto graphs = connected_graphs(n);
  std::vector<DamageReport> reports(graphs.size());
  DamageOptions inner = opts;
  inner.workers = 1;
  parallel_for(graphs.size(), opts.workers,
               [&](std::size_t i) { reports[i] = expected_damage(graphs[i], q, cfg, inner); });
  OptimalGraphs out;
  out.n = n;
  out.graphs_examined = graphs.size();
  bool have = false;
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    if (!reports[i].complete) {
      out.complete = false;
      continue;
    }
    if (!have || reports[i].expected < out.minimum) {
      out.minimum = reports[i].expected;
      out.minimizers.clear();
      have = true;
    }
    if (reports[i].expected == out.minimum) out.minimizers.push_back(graphs[i]);
  }
  return out;
}

inline nlohmann::json to_json(const OptimalGraphs& r) {
  nlohmann::json graphs = nlohmann::json::array();
  for (const auto& g : r.minimizers) graphs.push_back(nlohmann::json::parse(format_graph(g)));
  return {{"n", r.n},
          {"graphs_examined", r.graphs_examined},
          {"complete", r.complete},
          {"minimum", to_json(r.minimum)},
          {"minimizers", graphs}};
}

// ---- G_l construction

struct GEllSpec {
  Graph ga;
  Graph gb;
  std::size_t ell = 0;
  std::size_t b = 1;
  std::vector<Vertex> attach;  // b+1 vertices of G_A; defaults to 0..b
};

struct GEll {
  Graph graph;
  Graph without_b_edges;
  std::vector<Vertex> a_vertices, b_vertices;
  std::vector<std::vector<Vertex>> paths;  // internal vertices, from the G_A side
};

/// G_A and G_B joined by b+1 disjoint paths with ell internal vertices each.
/// Ids: G_A first, then G_B, then path internals path by path.
inline GEll build_g_ell(const GEllSpec& spec) {
  const std::size_t b1 = spec.b + 1;
  if (spec.gb.size() != b1) throw std::invalid_argument("G_B must have exactly b+1 vertices");
  if (spec.ga.size() < b1) throw std::invalid_argument("G_A needs at least b+1 vertices");
  std::vector<Vertex> attach = spec.attach;
  if (attach.empty())
    for (Vertex v = 0; v < b1; ++v) attach.push_back(v);
  if (attach.size() != b1) throw std::invalid_argument("need b+1 attachment vertices");
  {
    auto sorted = attach;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.back() >= spec.ga.size())
      throw std::invalid_argument("attachment vertices must be distinct vertices of G_A");
  }
  GEll out;
  const auto na = spec.ga.size();
  std::vector<Edge> edges = spec.ga.edges();
  std::vector<Edge> b_edges;
  for (auto [u, v] : spec.gb.edges()) b_edges.emplace_back(u + na, v + na);
  for (Vertex v = 0; v < na; ++v) out.a_vertices.push_back(v);
  for (Vertex v = 0; v < b1; ++v) out.b_vertices.push_back(static_cast<Vertex>(na + v));
  std::size_t next = na + b1;
  for (std::size_t i = 0; i < b1; ++i) {
    std::vector<Vertex> path;
    Vertex prev = attach[i];
    for (std::size_t j = 0; j < spec.ell; ++j) {
      const auto s = static_cast<Vertex>(next++);
      edges.emplace_back(prev, s);
      path.push_back(s);
      prev = s;
    }
    edges.emplace_back(prev, out.b_vertices[i]);
    out.paths.push_back(std::move(path));
  }
  out.without_b_edges = Graph::from_edges(next, edges);
  edges.insert(edges.end(), b_edges.begin(), b_edges.end());
  out.graph = Graph::from_edges(next, edges);
  return out;
}

struct NonmonoRow {
  std::size_t ell = 0;
  std::size_t n = 0;
  std::optional<Rational> with_b_edges, without_b_edges;
  bool holds = false;  // with < without
};

struct NonmonoReport {
  std::size_t b = 1;
  std::vector<NonmonoRow> rows;
  std::optional<std::size_t> first_holding;
};

/// Path-restricted expected damage (q = b fires, b firefighters, unbounded
/// distance) of G_l and of G_l without the G_B edges, for each l.
inline NonmonoReport nonmono_experiment(const Graph& ga, const Graph& gb, std::size_t b,
                                        const std::vector<std::size_t>& ells,
                                        const DamageOptions& opts = {}) {
  NonmonoReport rep;
  rep.b = b;
  rep.rows.resize(ells.size());
  for (std::size_t i = 0; i < ells.size(); ++i) {
    const auto built = build_g_ell({ga, gb, ells[i], b, {}});
    GameConfig cfg;
    cfg.firefighters = b;
    cfg.mode = Mode::dpr;
    cfg.distance = static_cast<std::uint32_t>(built.graph.size());
    auto& row = rep.rows[i];
    row.ell = ells[i];
    row.n = built.graph.size();
    const auto full = expected_damage(built.graph, b, cfg, opts);
    const auto cut = expected_damage(built.without_b_edges, b, cfg, opts);
    if (full.complete) row.with_b_edges = full.expected;
    if (cut.complete) row.without_b_edges = cut.expected;
    row.holds = full.complete && cut.complete && full.expected < cut.expected;
    if (row.holds && !rep.first_holding) rep.first_holding = row.ell;
  }
  return rep;
}

inline nlohmann::json to_json(const NonmonoReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json j = {{"ell", row.ell}, {"n", row.n}, {"holds", row.holds}};
    j["with_b_edges"] = row.with_b_edges ? to_json(*row.with_b_edges) : nlohmann::json(nullptr);
    j["without_b_edges"] =
        row.without_b_edges ? to_json(*row.without_b_edges) : nlohmann::json(nullptr);
    if (row.with_b_edges && row.without_b_edges) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6f", row.without_b_edges->value() / row.with_b_edges->value());
      j["ratio"] = buf;
    }
    rows.push_back(j);
  }
  return {{"b", r.b},
          {"rows", rows},
          {"first_holding_ell", r.first_holding ? nlohmann::json(*r.first_holding) : nlohmann::json(nullptr)}};
}

// ---- grid experiment

struct CornerBlock {
  Weight saved = 0;
  std::size_t h = 0, w = 0;
  bool reversed = false;
  Strategy strategy;
};

/// Best L-shaped wall cutting off the top-left h x w corner (h = 0 gives a
/// bare segment of the top row), walked one cell per turn in either direction
/// and replayed through the engine.
inline CornerBlock corner_block_bound(std::size_t n, const GameConfig& cfg) {
  const auto g = gen::grid(n);
  const std::size_t c = (n - 1) / 2;
  const VertexSet fire{static_cast<Vertex>(c * n + c)};
  CornerBlock best;
  auto id = [n](std::size_t r, std::size_t col) { return static_cast<Vertex>(r * n + col); };
  for (std::size_t h = 0; h <= c; ++h)
    for (std::size_t w = 0; w <= c; ++w)
      for (bool reversed : {false, true}) {
        if (h == c && w >= c) continue;  // wall through the fire
        std::vector<Vertex> wall;
        for (std::size_t col = 0; col <= w; ++col) wall.push_back(id(h, col));
        for (std::size_t r = h; r-- > 0;) wall.push_back(id(r, w));
        if (reversed) std::reverse(wall.begin(), wall.end());
        Strategy s;
        for (Vertex v : wall) s.turns.push_back(Placement(cfg.firefighters, v));
        try {
          const auto r = play(g, fire, s, cfg);
          if (r.saved_weight > best.saved) best = {r.saved_weight, h, w, reversed, s};
        } catch (const InvalidMove&) {
          // the fire reached the wall first
        }
      }
  return best;
}

struct GridResult {
  std::size_t n = 0;
  std::uint32_t d = 0;
  bool complete = false;
  Weight drmvs = 0;
  Rational ratio;
  Strategy witness;
  std::uint64_t nodes = 0;
  CornerBlock corner;
};

/// Exact DR value on the n x n grid with a centre fire and one firefighter.
inline GridResult grid_experiment(std::size_t n, std::uint32_t d, const SolverOptions& opts = {}) {
  if (n % 2 == 0) throw std::invalid_argument("grid experiment needs odd n");
  GridResult out;
  out.n = n;
  out.d = d;
  GameConfig cfg;
  cfg.firefighters = 1;
  cfg.distance = d;
  cfg.mode = Mode::dr;
  out.corner = corner_block_bound(n, cfg);
  const std::size_t c = (n - 1) / 2;
  try {
    const auto r = solve(gen::grid(n), {static_cast<Vertex>(c * n + c)}, cfg, opts);
    out.complete = true;
    out.drmvs = r.saved_weight;
    out.witness = r.optimal_strategy;
    out.nodes = r.nodes_explored;
    out.ratio = {r.saved_weight, static_cast<std::int64_t>(n * n)};
  } catch (const BudgetExhausted& e) {
    out.nodes = e.nodes();
  }
  return out;
}

inline nlohmann::json to_json(const GridResult& r) {
  nlohmann::json j = {{"n", r.n}, {"d", r.d}, {"complete", r.complete}, {"nodes", r.nodes}};
  if (r.complete) {
    j["drmvs"] = r.drmvs;
    j["ratio"] = to_json(r.ratio);
    j["witness"] = strategy_to_json(r.witness);
  } else {
    j["drmvs"] = nullptr;
  }
  j["corner_block"] = {{"saved", r.corner.saved},
                       {"h", r.corner.h},
                       {"w", r.corner.w},
                       {"reversed", r.corner.reversed},
                       {"strategy", strategy_to_json(r.corner.strategy)}};
  return j;
}

}  // namespace firefight
