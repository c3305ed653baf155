#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "firefight/engine.hpp"
#include "firefight/graph.hpp"

namespace firefight::ip {

class IPError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Sense { le, ge, eq };

struct Term {
  std::size_t var;
  std::int64_t coef;
};

struct Constraint {
  std::string name;  // c<k>_<family>
  std::string family;
  std::vector<Term> terms;
  Sense sense;
  std::int64_t rhs;
};

/// Solver-agnostic 0/1 program: minimise a linear objective over binaries
/// subject to integer linear constraints.
class IPModel {
 public:
  std::size_t add_binary(std::string name) {
    if (index_.contains(name)) throw IPError("duplicate variable " + name);
    index_.emplace(name, names_.size());
    names_.push_back(std::move(name));
    return names_.size() - 1;
  }

  std::optional<std::size_t> find(std::string_view name) const {
    if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
    return std::nullopt;
  }
  std::size_t index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw IPError("unknown variable " + std::string(name));
  }

  void add_constraint(std::string_view family, std::vector<Term> terms, Sense sense,
                      std::int64_t rhs) {
    for (const auto& t : terms)
      if (t.var >= names_.size()) throw IPError("constraint references undeclared variable");
    Constraint c;
    c.name = "c" + std::to_string(constraints_.size()) + "_" + std::string(family);
    c.family = family;
    c.terms = std::move(terms);
    c.sense = sense;
    c.rhs = rhs;
    constraints_.push_back(std::move(c));
  }

  void set_objective(std::vector<Term> terms) { objective_ = std::move(terms); }

  const std::vector<std::string>& variables() const { return names_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<Term>& objective() const { return objective_; }

  /// CPLEX-style LP text: Minimize / Subject To / Binary / End.
  void write_lp(std::ostream& out) const {
    out << "Minimize\n obj:";
    write_terms(out, objective_);
    out << "\nSubject To\n";
    for (const auto& c : constraints_) {
      out << ' ' << c.name << ':';
      write_terms(out, c.terms);
      out << (c.sense == Sense::le ? " <= " : c.sense == Sense::ge ? " >= " : " = ") << c.rhs
          << '\n';
    }
    out << "Binary\n";
    for (const auto& n : names_) out << ' ' << n << '\n';
    out << "End\n";
  }

  std::string to_lp() const {
    std::ostringstream out;
    write_lp(out);
    return out.str();
  }

 private:
  void write_terms(std::ostream& out, const std::vector<Term>& terms) const {
    if (terms.empty()) {
      out << " 0";
      return;
    }
    bool first = true;
    for (const auto& t : terms) {
      const std::int64_t mag = t.coef < 0 ? -t.coef : t.coef;
      if (first)
        out << (t.coef < 0 ? " -" : "");
      else
        out << (t.coef < 0 ? " -" : " +");
      out << ' ';
      if (mag != 1) out << mag << ' ';
      out << names_[t.var];
      first = false;
    }
  }

  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<Constraint> constraints_;
  std::vector<Term> objective_;
};

/// Firefighter placements of B firefighters on n vertices, i.e. weak
/// compositions of B into n parts. Ordered so that the sorted vertex
/// multisets are increasing lexicographically.
class PositionIndex {
 public:
  PositionIndex() = default;
  PositionIndex(std::size_t n, std::size_t firefighters) : n_(n) {
    Placement cur;
    auto rec = [&](auto&& self, Vertex from) -> void {
      if (cur.size() == firefighters) {
        lookup_.emplace(cur, placements_.size());
        placements_.push_back(cur);
        return;
      }
      for (Vertex v = from; v < n; ++v) {
        cur.push_back(v);
        self(self, v);
        cur.pop_back();
      }
    };
    rec(rec, 0);
  }

  /// C(n + B - 1, B), computed without enumerating.
  static std::uint64_t count(std::size_t n, std::size_t firefighters) {
    if (n == 0) return 0;
    std::uint64_t c = 1;
    for (std::size_t i = 1; i <= firefighters; ++i) c = c * (n - 1 + i) / i;
    return c;
  }

  std::size_t size() const { return placements_.size(); }
  const Placement& placement(std::size_t i) const { return placements_.at(i); }

  std::size_t index_of(Placement p) const {
    std::sort(p.begin(), p.end());
    auto it = lookup_.find(p);
    if (it == lookup_.end()) throw IPError("placement not in the position index");
    return it->second;
  }

  /// Multiplicity vector (the weak composition) of placement i.
  std::vector<std::size_t> composition(std::size_t i) const {
    std::vector<std::size_t> c(n_, 0);
    for (Vertex v : placement(i)) ++c[v];
    return c;
  }

  /// Occupancy matrix: row x, column i is 1 iff composition i puts a
  /// firefighter on x.
  bool occupies(std::size_t i, Vertex x) const {
    const auto& p = placement(i);
    return std::binary_search(p.begin(), p.end(), x);
  }

 private:
  std::size_t n_ = 0;
  std::vector<Placement> placements_;
  std::map<Placement, std::size_t> lookup_;
};

enum class ModelKind { mvs, drmvs };

inline std::string_view to_string(ModelKind k) { return k == ModelKind::mvs ? "mvs" : "drmvs"; }

/// An emitted model plus the layout needed to map game trajectories onto it.
struct EmittedModel {
  IPModel model;
  ModelKind kind = ModelKind::mvs;
  std::size_t n = 0;
  std::size_t firefighters = 1;
  std::size_t horizon = 1;
  std::uint32_t distance = 0;
  VertexSet fires;
  std::optional<PositionIndex> positions;
  std::vector<bool> invalid;  // row-major P x P, true when no legal move i -> j

  std::size_t burn(Vertex x, std::size_t t) const { return t * n + x; }
  std::size_t defend(Vertex x, std::size_t t) const { return (horizon + 1 + t) * n + x; }
  std::size_t pos(std::size_t t, std::size_t i) const {
    return 2 * n * (horizon + 1) + (t - 1) * positions->size() + i;
  }
  std::size_t trans(std::size_t t, std::size_t i, std::size_t j) const {
    const std::size_t p = positions->size();
    return 2 * n * (horizon + 1) + horizon * p + (t - 1) * p * p + i * p + j;
  }
  bool is_invalid(std::size_t i, std::size_t j) const {
    return invalid[i * positions->size() + j];
  }
};

inline constexpr std::uint64_t kDefaultVariableCap = 2'000'000;

namespace detail {

inline void add_fire_dynamics(EmittedModel& m, const Graph& g) {
  auto& model = m.model;
  const std::size_t n = g.size(), T = m.horizon;
  for (std::size_t t = 0; t <= T; ++t)
    for (Vertex x = 0; x < n; ++x) model.add_binary("b_" + std::to_string(x) + "_" + std::to_string(t));
  for (std::size_t t = 0; t <= T; ++t)
    for (Vertex x = 0; x < n; ++x) model.add_binary("d_" + std::to_string(x) + "_" + std::to_string(t));

  std::vector<Term> obj;
  for (Vertex x = 0; x < n; ++x) obj.push_back({m.burn(x, T), g.weight(x)});
  model.set_objective(std::move(obj));

  for (Vertex x = 0; x < n; ++x)
    model.add_constraint("init_burn", {{m.burn(x, 0), 1}}, Sense::eq, m.fires.contains(x) ? 1 : 0);
  for (Vertex x = 0; x < n; ++x) model.add_constraint("init_def", {{m.defend(x, 0), 1}}, Sense::eq, 0);

  for (std::size_t t = 1; t <= T; ++t) {
    for (Vertex x = 0; x < n; ++x)
      model.add_constraint("burn_mono", {{m.burn(x, t), 1}, {m.burn(x, t - 1), -1}}, Sense::ge, 0);
    for (Vertex x = 0; x < n; ++x)
      model.add_constraint("def_mono", {{m.defend(x, t), 1}, {m.defend(x, t - 1), -1}}, Sense::ge,
                           0);
    for (Vertex x = 0; x < n; ++x)
      for (Vertex y : g.neighbors(x))
        model.add_constraint(
            "spread", {{m.burn(x, t), 1}, {m.defend(x, t), 1}, {m.burn(y, t - 1), -1}}, Sense::ge,
            0);
    for (Vertex x = 0; x < n; ++x)
      model.add_constraint("exclusive", {{m.burn(x, t), 1}, {m.defend(x, t), 1}}, Sense::le, 1);
    // A vertex burns at t only if it or a neighbour was burning at t-1.
    for (Vertex x = 0; x < n; ++x) {
      std::vector<Term> terms{{m.burn(x, t - 1), 1}};
      for (Vertex y : g.neighbors(x)) terms.push_back({m.burn(y, t - 1), 1});
      terms.push_back({m.burn(x, t), -1});
      model.add_constraint("source", std::move(terms), Sense::ge, 0);
    }
    std::vector<Term> budget;
    for (Vertex x = 0; x < n; ++x) budget.push_back({m.defend(x, t), 1});
    for (Vertex x = 0; x < n; ++x) budget.push_back({m.defend(x, t - 1), -1});
    model.add_constraint("budget", std::move(budget), Sense::le,
                         static_cast<std::int64_t>(m.firefighters));
  }
}

}  // namespace detail

/// Time-indexed burn/defend program whose optimum is the burnt weight at
/// turn T under unrestricted (classic) firefighting.
inline EmittedModel emit_mvs(const Graph& g, const VertexSet& fires, std::size_t firefighters,
                             std::size_t horizon) {
  if (horizon < 1) throw IPError("horizon T must be at least 1");
  if (firefighters < 1) throw IPError("need at least one firefighter");
  EmittedModel m;
  m.kind = ModelKind::mvs;
  m.n = g.size();
  m.firefighters = firefighters;
  m.horizon = horizon;
  m.fires = fires;
  detail::add_fire_dynamics(m, g);
  return m;
}

/// The classic program extended with one-hot placement vectors p_t, their
/// transition tensors a_t = p_t (x) p_{t+1}, and the move-validity matrix for
/// distance d measured in the whole graph.
inline EmittedModel emit_drmvs(const Graph& g, const VertexSet& fires, std::size_t firefighters,
                               std::uint32_t distance, std::size_t horizon,
                               std::uint64_t variable_cap = kDefaultVariableCap) {
  if (horizon < 1) throw IPError("horizon T must be at least 1");
  if (firefighters < 1) throw IPError("need at least one firefighter");
  const std::uint64_t p = PositionIndex::count(g.size(), firefighters);
  const std::uint64_t vars = 2 * g.size() * (horizon + 1) + horizon * p + (horizon - 1) * p * p;
  if (vars > variable_cap)
    throw IPError("model would need " + std::to_string(vars) + " variables (cap " +
                  std::to_string(variable_cap) + ")");

  EmittedModel m;
  m.kind = ModelKind::drmvs;
  m.n = g.size();
  m.firefighters = firefighters;
  m.horizon = horizon;
  m.distance = distance;
  m.fires = fires;
  m.positions.emplace(g.size(), firefighters);
  const auto& index = *m.positions;
  const std::size_t P = index.size(), T = horizon;

  GameConfig cfg;
  cfg.firefighters = firefighters;
  cfg.distance = distance;
  cfg.mode = Mode::dr;
  const Game game(g, cfg);
  m.invalid.assign(P * P, false);
  for (std::size_t i = 0; i < P; ++i) {
    GameState from;
    from.positions = index.placement(i);
    for (std::size_t j = 0; j < P; ++j) m.invalid[i * P + j] = !game.is_valid_move(from, index.placement(j));
  }

  detail::add_fire_dynamics(m, g);
  auto& model = m.model;
  for (std::size_t t = 1; t <= T; ++t)
    for (std::size_t i = 0; i < P; ++i)
      model.add_binary("p_" + std::to_string(t) + "_" + std::to_string(i));
  for (std::size_t t = 1; t < T; ++t)
    for (std::size_t i = 0; i < P; ++i)
      for (std::size_t j = 0; j < P; ++j)
        model.add_binary("a_" + std::to_string(t) + "_" + std::to_string(i) + "_" +
                         std::to_string(j));

  for (std::size_t t = 1; t <= T; ++t) {
    std::vector<Term> terms;
    for (std::size_t i = 0; i < P; ++i) terms.push_back({m.pos(t, i), 1});
    model.add_constraint("onehot_p", std::move(terms), Sense::eq, 1);
  }
  for (std::size_t t = 1; t < T; ++t) {
    std::vector<Term> all, bad;
    for (std::size_t i = 0; i < P; ++i)
      for (std::size_t j = 0; j < P; ++j) {
        all.push_back({m.trans(t, i, j), 1});
        if (m.is_invalid(i, j)) bad.push_back({m.trans(t, i, j), 1});
      }
    model.add_constraint("onehot_a", std::move(all), Sense::eq, 1);
    for (std::size_t i = 0; i < P; ++i) {
      std::vector<Term> row;
      for (std::size_t j = 0; j < P; ++j) row.push_back({m.trans(t, i, j), 1});
      row.push_back({m.pos(t, i), -1});
      model.add_constraint("proj1", std::move(row), Sense::eq, 0);
    }
    for (std::size_t j = 0; j < P; ++j) {
      std::vector<Term> col;
      for (std::size_t i = 0; i < P; ++i) col.push_back({m.trans(t, i, j), 1});
      col.push_back({m.pos(t + 1, j), -1});
      model.add_constraint("proj2", std::move(col), Sense::eq, 0);
    }
    if (!bad.empty()) model.add_constraint("valid", std::move(bad), Sense::le, 0);
  }
  for (std::size_t t = 1; t + 1 < T; ++t)
    for (std::size_t j = 0; j < P; ++j) {
      std::vector<Term> terms;
      for (std::size_t i = 0; i < P; ++i) terms.push_back({m.trans(t, i, j), 1});
      for (std::size_t k = 0; k < P; ++k) terms.push_back({m.trans(t + 1, j, k), -1});
      model.add_constraint("consist", std::move(terms), Sense::eq, 0);
    }
  for (std::size_t t = 1; t <= T; ++t)
    for (Vertex x = 0; x < g.size(); ++x) {
      std::vector<Term> upper{{m.defend(x, t), 1}};
      for (std::size_t tp = 1; tp <= t; ++tp) {
        std::vector<Term> lower{{m.defend(x, t), 1}};
        for (std::size_t i = 0; i < P; ++i)
          if (index.occupies(i, x)) {
            lower.push_back({m.pos(tp, i), -1});
            upper.push_back({m.pos(tp, i), -1});
          }
        model.add_constraint("occ_lb", std::move(lower), Sense::ge, 0);
      }
      model.add_constraint("occ_ub", std::move(upper), Sense::le, 0);
    }
  return m;
}

/// 0/1 value per model variable, in declaration order.
using Assignment = std::vector<std::uint8_t>;

struct CheckResult {
  bool feasible = false;
  std::int64_t objective = 0;
  std::vector<std::string> violated;  // in model order; front() is the first
};

inline CheckResult check_assignment(const IPModel& model, const Assignment& a) {
  if (a.size() != model.variables().size())
    throw IPError("assignment covers " + std::to_string(a.size()) + " of " +
                  std::to_string(model.variables().size()) + " variables");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > 1) throw IPError("variable " + model.variables()[i] + " is not 0/1");
  CheckResult r;
  for (const auto& c : model.constraints()) {
    std::int64_t lhs = 0;
    for (const auto& t : c.terms) lhs += t.coef * a[t.var];
    const bool ok = c.sense == Sense::le ? lhs <= c.rhs : c.sense == Sense::ge ? lhs >= c.rhs
                                                                             : lhs == c.rhs;
    if (!ok) r.violated.push_back(c.name);
  }
  for (const auto& t : model.objective()) r.objective += t.coef * a[t.var];
  r.feasible = r.violated.empty();
  return r;
}

inline nlohmann::json assignment_to_json(const IPModel& model, const Assignment& a) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t i = 0; i < a.size(); ++i) j[model.variables()[i]] = a[i];
  return j;
}

inline Assignment assignment_from_json(const IPModel& model, const nlohmann::json& j) {
  if (!j.is_object()) throw IPError("assignment JSON must be an object");
  Assignment a(model.variables().size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& name = model.variables()[i];
    if (!j.contains(name)) throw IPError("missing variable " + name);
    const auto& v = j[name];
    if (!v.is_number_integer() || (v.get<int>() != 0 && v.get<int>() != 1))
      throw IPError("variable " + name + " must be 0 or 1");
    a[i] = static_cast<std::uint8_t>(v.get<int>());
  }
  for (const auto& [name, _] : j.items())
    if (!model.find(name)) throw IPError("unknown variable " + name);
  return a;
}

/// Encodes the trajectory of `strategy` (padded with stay-put turns up to T)
/// without checking move legality.
inline Assignment trajectory_assignment(const Graph& g, const Strategy& strategy,
                                        const EmittedModel& m) {
  const Game game(g, GameConfig{m.firefighters, m.distance, Mode::classic, m.horizon});
  Assignment a(m.model.variables().size(), 0);
  GameState s = game.initial_state(m.fires);
  auto record = [&](const GameState& st, std::size_t t) {
    for (Vertex x = 0; x < m.n; ++x) {
      a[m.burn(x, t)] = st.burnt.contains(x) ? 1 : 0;
      a[m.defend(x, t)] = st.defended.contains(x) ? 1 : 0;
    }
  };
  record(s, 0);
  std::vector<std::size_t> placement_at(m.horizon + 1, 0);
  for (std::size_t t = 1; t <= m.horizon; ++t) {
    Placement dest;
    if (t <= strategy.turns.size()) {
      dest = strategy.turns[t - 1];
    } else if (!s.positions.empty()) {
      dest = s.positions;
    } else {
      const auto alive = (game.all_vertices() - s.burnt).to_vector();
      if (alive.empty()) throw IPError("no unburnt vertex to place firefighters on");
      dest.assign(m.firefighters, alive.front());
    }
    if (dest.size() != m.firefighters)
      throw InvalidMove(t, "expected " + std::to_string(m.firefighters) + " destinations");
    s = game.spread(game.defend(s, dest));
    record(s, t);
    if (m.positions) {
      placement_at[t] = m.positions->index_of(s.positions);
      a[m.pos(t, placement_at[t])] = 1;
      if (t >= 2) a[m.trans(t - 1, placement_at[t - 1], placement_at[t])] = 1;
    }
  }
  return a;
}

/// Encodes a legal strategy; throws InvalidMove naming the first bad turn.
inline Assignment strategy_to_assignment(const Graph& g, const Strategy& strategy,
                                         const GameConfig& cfg, const EmittedModel& m) {
  GameConfig rules = cfg;
  rules.firefighters = m.firefighters;
  rules.horizon = m.horizon;
  if (m.kind == ModelKind::drmvs) {
    rules.mode = Mode::dr;
    rules.distance = m.distance;
  }
  const Game game(g, rules);
  GameState s = game.initial_state(m.fires);
  for (std::size_t t = 1; t <= std::min(strategy.turns.size(), m.horizon); ++t)
    s = game.step(s, strategy.turns[t - 1]);
  if (strategy.turns.size() > m.horizon)
    throw InvalidMove(m.horizon + 1, "strategy is longer than the model horizon");
  return trajectory_assignment(g, strategy, m);
}

/// Decodes firefighter placements from a feasible assignment. For the
/// position-encoded model this reads the one-hot p_t; for the classic model
/// it reads the new defences per turn and pads with re-defences.
inline Strategy assignment_to_strategy(const Assignment& a, const EmittedModel& m) {
  const auto check = check_assignment(m.model, a);
  if (!check.feasible) throw IPError("assignment is infeasible (" + check.violated.front() + ")");
  Strategy out;
  if (m.kind == ModelKind::drmvs) {
    for (std::size_t t = 1; t <= m.horizon; ++t) {
      std::optional<std::size_t> hot;
      for (std::size_t i = 0; i < m.positions->size(); ++i)
        if (a[m.pos(t, i)] == 1) {
          if (hot) throw IPError("p_" + std::to_string(t) + " is not one-hot");
          hot = i;
        }
      if (!hot) throw IPError("p_" + std::to_string(t) + " is not one-hot");
      out.turns.push_back(m.positions->placement(*hot));
    }
    return out;
  }
  Placement previous;
  for (std::size_t t = 1; t <= m.horizon; ++t) {
    Placement dest;
    for (Vertex x = 0; x < m.n; ++x)
      if (a[m.defend(x, t)] == 1 && a[m.defend(x, t - 1)] == 0) dest.push_back(x);
    if (dest.size() > m.firefighters) throw IPError("more new defences than firefighters");
    if (dest.empty()) {
      if (previous.empty()) {
        for (Vertex x = 0; x < m.n && dest.empty(); ++x)
          if (a[m.burn(x, t - 1)] == 0) dest.push_back(x);
      } else {
        dest = previous;
      }
    }
    if (dest.empty()) throw IPError("no unburnt vertex to place firefighters on");
    while (dest.size() < m.firefighters) dest.push_back(dest.front());
    std::sort(dest.begin(), dest.end());
    out.turns.push_back(dest);
    previous = std::move(dest);
  }
  return out;
}

}  // namespace firefight::ip
