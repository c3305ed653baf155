#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "firefight/firefight.hpp"

namespace firefight::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitUsage = 64;

namespace detail {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
}

inline std::vector<Vertex> vertex_list(const std::string& text) {
  std::vector<Vertex> out;
  for (auto v : gen::detail::parse_numbers(text)) out.push_back(static_cast<Vertex>(v));
  return out;
}

// "inf" (or no value) means unbounded, encoded as n.
inline std::uint32_t distance_of(const std::string& text, const Graph& g) {
  if (text.empty() || text == "inf") return static_cast<std::uint32_t>(g.size());
  const auto v = gen::detail::parse_numbers(text);
  if (v.size() != 1) throw std::invalid_argument("bad distance '" + text + "'");
  return static_cast<std::uint32_t>(v.front());
}

struct GameFlags {
  std::string graph;
  std::string fires;
  std::size_t b = 1;
  std::string d = "inf";
  std::string mode = "classic";
  std::optional<std::size_t> horizon;
  std::string weights;

  void attach(CLI::App* app, bool need_fires = true) {
    app->add_option("--graph", graph, "graph JSON file")->required();
    auto* f = app->add_option("--fires", fires, "comma-separated initial fires");
    if (need_fires) f->required();
    app->add_option("--b", b, "firefighters per turn");
    app->add_option("--d", d, "movement distance, or inf");
    app->add_option("--mode", mode, "classic | dr | dpr");
    app->add_option("--horizon", horizon, "last turn (default n)");
    app->add_option("--weights", weights, "comma-separated vertex weights");
  }

  Graph load() const {
    auto g = read_graph(graph);
    if (!weights.empty()) {
      std::vector<Weight> w;
      for (auto x : gen::detail::parse_numbers(weights)) w.push_back(static_cast<Weight>(x));
      g = g.with_weights(std::move(w));
    }
    return g;
  }

  GameConfig config(const Graph& g) const {
    GameConfig c;
    c.firefighters = b;
    c.distance = distance_of(d, g);
    c.mode = parse_mode(mode);
    c.horizon = horizon;
    return c;
  }
};

}  // namespace detail

/// Parses and runs one command line; JSON (or LP text) goes to `out`,
/// diagnostics to `err`. Returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact solver toolkit for distance-restricted firefighting"};
  app.require_subcommand(1);
  app.fallthrough();
  bool pretty = false;
  std::size_t workers = default_workers();
  std::optional<std::uint64_t> budget;
  app.add_flag("--pretty", pretty, "indent JSON output");
  app.add_option("--workers", workers, "worker threads for fire-set fan-out");
  app.add_option("--budget", budget, "solver node budget (default FIREFIGHT_BUDGET or 20M)");

  auto emit = [&](const nlohmann::json& j) { out << (pretty ? j.dump(2) : j.dump()) << '\n'; };
  auto solver_options = [&] {
    SolverOptions o;
    if (budget) o.node_budget = *budget;
    return o;
  };

  // gen
  auto* gen_cmd = app.add_subcommand("gen", "generate a graph family member");
  std::string gen_family, gen_params, gen_out;
  std::size_t gen_n = 0;
  double gen_p = 0.3;
  std::uint64_t gen_seed = 1;
  gen_cmd->add_option("family", gen_family,
                      "path | cycle | star | complete | grid | caterpillar | subdivided-star | "
                      "double-star | random")
      ->required();
  gen_cmd->add_option("--n", gen_n, "order (side length for grid)");
  gen_cmd->add_option("--params", gen_params, "comma-separated family parameters");
  gen_cmd->add_option("--p", gen_p, "extra-edge probability for random");
  gen_cmd->add_option("--seed", gen_seed, "seed for random");
  gen_cmd->add_option("--out", gen_out, "output file (stdout if omitted)");

  // solve / decide
  auto* solve_cmd = app.add_subcommand("solve", "optimal strategy and saved weight");
  detail::GameFlags solve_flags;
  std::optional<Weight> solve_k;
  bool solve_trace = false, solve_no_tree = false;
  solve_flags.attach(solve_cmd);
  solve_cmd->add_option("--k", solve_k, "also answer whether weight k can be saved");
  solve_cmd->add_flag("--trace", solve_trace, "include the turn-by-turn replay");
  solve_cmd->add_flag("--no-tree-fast-path", solve_no_tree, "always run the general search");

  auto* decide_cmd = app.add_subcommand("decide", "can weight k be saved?");
  detail::GameFlags decide_flags;
  Weight decide_k = 0;
  decide_flags.attach(decide_cmd);
  decide_cmd->add_option("--k", decide_k, "threshold")->required();

  // validate-move
  auto* vm_cmd = app.add_subcommand("validate-move", "check one firefighter move");
  detail::GameFlags vm_flags;
  std::string vm_burnt, vm_defended, vm_positions, vm_dest;
  vm_flags.attach(vm_cmd, false);
  vm_cmd->add_option("--burnt", vm_burnt, "burnt vertices");
  vm_cmd->add_option("--defended", vm_defended, "defended vertices");
  vm_cmd->add_option("--positions", vm_positions, "current firefighter positions");
  vm_cmd->add_option("--dest", vm_dest, "destination multiset")->required();

  // ip
  auto* ip_cmd = app.add_subcommand("ip", "integer-program models");
  ip_cmd->require_subcommand(1);
  struct IpFlags {
    detail::GameFlags game;
    std::string kind = "mvs";
    std::size_t horizon = 0;
    std::uint64_t cap = ip::kDefaultVariableCap;
  };
  IpFlags ipf;
  auto attach_ip = [&](CLI::App* c) {
    ipf.game.attach(c);
    c->add_option("--kind", ipf.kind, "mvs | drmvs");
    c->add_option("--T", ipf.horizon, "model horizon")->required();
    c->add_option("--cap", ipf.cap, "variable cap for drmvs");
  };
  auto* ip_emit = ip_cmd->add_subcommand("emit", "write the LP file");
  std::string ip_out;
  attach_ip(ip_emit);
  ip_emit->add_option("--out", ip_out, "LP file (stdout if omitted)");
  auto* ip_check = ip_cmd->add_subcommand("check", "evaluate an assignment");
  std::string ip_assignment;
  attach_ip(ip_check);
  ip_check->add_option("--assignment", ip_assignment, "assignment JSON")->required();
  auto* ip_round = ip_cmd->add_subcommand("roundtrip", "strategy -> assignment -> strategy");
  std::string ip_strategy;
  attach_ip(ip_round);
  ip_round->add_option("--strategy", ip_strategy, "strategy JSON (default: solver witness)");

  // reduce
  auto* red_cmd = app.add_subcommand("reduce", "build a hardness-reduction instance");
  std::string red_to, red_graph, red_fires, red_out;
  Weight red_k = 1;
  red_cmd->add_option("--to", red_to, "weighted-dpr | unweighted-dpr | bipartite-dpr")->required();
  red_cmd->add_option("--graph", red_graph, "original graph JSON")->required();
  red_cmd->add_option("--fires", red_fires, "initial fires")->required();
  red_cmd->add_option("--k", red_k, "original threshold")->required();
  red_cmd->add_option("--out", red_out, "output directory")->required();

  // damage
  auto* dmg_cmd = app.add_subcommand("damage", "exact expected damage");
  detail::GameFlags dmg_flags;
  std::size_t dmg_q = 1;
  std::string dmg_out, dmg_id;
  dmg_flags.attach(dmg_cmd, false);
  dmg_cmd->add_option("--q", dmg_q, "number of initial fires");
  dmg_cmd->add_option("--out", dmg_out, "report file (stdout too)");
  dmg_cmd->add_option("--id", dmg_id, "graph id for the report");

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "grid, edge-removal and optimal-graph experiments");
  exp_cmd->require_subcommand(1);
  auto* grid_cmd = exp_cmd->add_subcommand("grid", "centre fire on the n x n grid");
  std::size_t grid_n = 3;
  std::uint32_t grid_d = 1;
  grid_cmd->add_option("--n", grid_n, "odd side length")->required();
  grid_cmd->add_option("--d", grid_d, "movement distance");
  auto* nm_cmd = exp_cmd->add_subcommand("nonmono", "edge removal raising expected damage");
  std::size_t nm_b = 1, nm_lmin = 1, nm_lmax = 12;
  std::string nm_ga = "path:2", nm_gb = "k2";
  nm_cmd->add_option("--b", nm_b, "firefighters (and fires)");
  nm_cmd->add_option("--ga", nm_ga, "G_A family spec");
  nm_cmd->add_option("--gb", nm_gb, "G_B family spec");
  nm_cmd->add_option("--lmin", nm_lmin, "smallest path length");
  nm_cmd->add_option("--lmax", nm_lmax, "largest path length");
  auto* og_cmd = exp_cmd->add_subcommand("optimal-graphs", "connected graphs minimising damage");
  std::size_t og_n = 4, og_q = 1, og_b = 1, og_cap = kDefaultSearchOrderCap;
  std::string og_d = "inf", og_mode = "dpr";
  og_cmd->add_option("--n", og_n, "order")->required();
  og_cmd->add_option("--q", og_q, "fires");
  og_cmd->add_option("--b", og_b, "firefighters");
  og_cmd->add_option("--d", og_d, "distance or inf");
  og_cmd->add_option("--mode", og_mode, "classic | dr | dpr");
  og_cmd->add_option("--max-n", og_cap, "order cap");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*gen_cmd) {
      Graph g;
      if (gen_family == "random") {
        if (gen_n == 0) throw std::invalid_argument("random needs --n");
        std::mt19937_64 rng(gen_seed);
        std::vector<Edge> edges;
        for (Vertex v = 1; v < gen_n; ++v)
          edges.emplace_back(
              static_cast<Vertex>(std::uniform_int_distribution<std::size_t>(0, v - 1)(rng)), v);
        std::bernoulli_distribution coin(gen_p);
        for (Vertex u = 0; u < gen_n; ++u)
          for (Vertex v = u + 1; v < gen_n; ++v)
            if (std::find(edges.begin(), edges.end(), Edge{u, v}) == edges.end() && coin(rng))
              edges.emplace_back(u, v);
        g = Graph::from_edges(gen_n, edges);
      } else {
        std::string spec = gen_family + ":";
        spec += gen_params.empty() ? std::to_string(gen_n) : gen_params;
        g = gen::family(spec);
      }
      if (gen_out.empty())
        out << format_graph(g);
      else
        write_graph(g, gen_out);
      return kExitOk;
    }

    if (*solve_cmd) {
      const auto g = solve_flags.load();
      const auto cfg = solve_flags.config(g);
      const auto fires = VertexSet::of(detail::vertex_list(solve_flags.fires));
      auto opts = solver_options();
      opts.tree_fast_path = !solve_no_tree;
      const auto r = solve(g, fires, cfg, opts);
      nlohmann::json j = {{"saved", r.saved_weight},
                          {"burnt", r.burnt_count},
                          {"strategy", strategy_to_json(r.optimal_strategy)},
                          {"nodes", r.nodes_explored}};
      if (solve_k) j["decision"] = r.saved_weight >= *solve_k;
      if (solve_trace) j["trace"] = trace_to_json(play(g, fires, r.optimal_strategy, cfg));
      emit(j);
      return kExitOk;
    }

    if (*decide_cmd) {
      const auto g = decide_flags.load();
      const auto fires = VertexSet::of(detail::vertex_list(decide_flags.fires));
      emit({{"k", decide_k},
            {"decision", decide(g, fires, decide_flags.config(g), decide_k, solver_options())}});
      return kExitOk;
    }

    if (*vm_cmd) {
      const auto g = vm_flags.load();
      GameState s;
      s.burnt = VertexSet::of(detail::vertex_list(vm_burnt));
      s.defended = VertexSet::of(detail::vertex_list(vm_defended));
      s.positions = detail::vertex_list(vm_positions);
      std::sort(s.positions.begin(), s.positions.end());
      const auto dest = detail::vertex_list(vm_dest);
      emit({{"valid", is_valid_move(g, s, dest, vm_flags.config(g))}});
      return kExitOk;
    }

    if (*ip_cmd) {
      const auto g = ipf.game.load();
      const auto fires = VertexSet::of(detail::vertex_list(ipf.game.fires));
      const auto cfg = ipf.game.config(g);
      const auto model =
          ipf.kind == "mvs"     ? ip::emit_mvs(g, fires, cfg.firefighters, ipf.horizon)
          : ipf.kind == "drmvs" ? ip::emit_drmvs(g, fires, cfg.firefighters, cfg.distance,
                                                 ipf.horizon, ipf.cap)
                                : throw std::invalid_argument("--kind must be mvs or drmvs");
      if (*ip_emit) {
        if (ip_out.empty())
          model.model.write_lp(out);
        else
          detail::spill(ip_out, model.model.to_lp());
        return kExitOk;
      }
      if (*ip_check) {
        const auto a = ip::assignment_from_json(
            model.model, nlohmann::json::parse(detail::slurp(ip_assignment)));
        const auto r = ip::check_assignment(model.model, a);
        emit({{"feasible", r.feasible}, {"objective", r.objective}, {"violated", r.violated}});
        return kExitOk;
      }
      Strategy s;
      if (!ip_strategy.empty()) {
        s = strategy_from_json(nlohmann::json::parse(detail::slurp(ip_strategy)));
      } else {
        auto scfg = cfg;
        scfg.horizon = ipf.horizon;
        if (model.kind == ip::ModelKind::drmvs) scfg.mode = Mode::dr;
        s = solve(g, fires, scfg, solver_options()).optimal_strategy;
      }
      const auto a = ip::strategy_to_assignment(g, s, cfg, model);
      const auto r = ip::check_assignment(model.model, a);
      const auto back = ip::assignment_to_strategy(a, model);
      auto rcfg = cfg;
      if (model.kind == ip::ModelKind::mvs) rcfg.mode = Mode::classic;
      const bool same = ip::strategy_to_assignment(g, back, rcfg, model) == a;
      emit({{"feasible", r.feasible},
            {"objective", r.objective},
            {"strategy", strategy_to_json(s)},
            {"decoded", strategy_to_json(back)},
            {"reencodes_identically", same},
            {"assignment", ip::assignment_to_json(model.model, a)}});
      return kExitOk;
    }

    if (*red_cmd) {
      const auto g = read_graph(red_graph);
      const auto fires = VertexSet::of(detail::vertex_list(red_fires));
      const auto variant = reduce::parse_variant(red_to);
      reduce::DprInstance inst =
          variant == reduce::Variant::bipartite ? reduce::reduce_bipartite_preserving(g, fires, red_k)
                                                : reduce::reduce_to_weighted_dpr(g, fires, red_k);
      if (variant == reduce::Variant::unweighted) inst = reduce::reduce_weighted_to_unweighted(inst);
      std::filesystem::create_directories(red_out);
      const auto dir = std::filesystem::path(red_out);
      write_graph(inst.graph, (dir / "graph.json").string());
      detail::spill((dir / "instance.json").string(), reduce::instance_json(inst).dump(2) + "\n");
      detail::spill((dir / "provenance.json").string(),
                    reduce::provenance_json(inst, g).dump(2) + "\n");
      emit({{"variant", red_to},
            {"vertices", inst.graph.size()},
            {"d", inst.distance},
            {"k_prime", inst.k_prime},
            {"files", {"graph.json", "instance.json", "provenance.json"}}});
      return kExitOk;
    }

    if (*dmg_cmd) {
      const auto g = dmg_flags.load();
      DamageOptions opts;
      opts.workers = workers;
      opts.solver = solver_options();
      const auto rep = expected_damage(g, dmg_q, dmg_flags.config(g), opts,
                                       dmg_id.empty() ? dmg_flags.graph : dmg_id);
      const auto j = to_json(rep);
      if (!dmg_out.empty()) detail::spill(dmg_out, j.dump(2) + "\n");
      emit(j);
      return rep.complete ? kExitOk : kExitBudget;
    }

    if (*grid_cmd) {
      const auto r = grid_experiment(grid_n, grid_d, solver_options());
      emit(to_json(r));
      return r.complete ? kExitOk : kExitBudget;
    }

    if (*nm_cmd) {
      std::vector<std::size_t> ells;
      for (std::size_t l = nm_lmin; l <= nm_lmax; ++l) ells.push_back(l);
      DamageOptions opts;
      opts.workers = workers;
      opts.solver = solver_options();
      emit(to_json(nonmono_experiment(gen::family(nm_ga), gen::family(nm_gb), nm_b, ells, opts)));
      return kExitOk;
    }

    if (*og_cmd) {
      GameConfig c;
      c.firefighters = og_b;
      c.mode = parse_mode(og_mode);
      c.distance = og_d == "inf" ? static_cast<std::uint32_t>(og_n)
                                 : static_cast<std::uint32_t>(std::stoul(og_d));
      DamageOptions opts;
      opts.workers = workers;
      opts.solver = solver_options();
      const auto r = optimal_graph_search(og_n, og_q, c, opts, og_cap);
      emit(to_json(r));
      return r.complete ? kExitOk : kExitBudget;
    }
  } catch (const BudgetExhausted& e) {
    err << nlohmann::json{{"error", e.what()}, {"nodes", e.nodes()}}.dump() << '\n';
    return kExitBudget;
  } catch (const GraphParseError& e) {
    err << nlohmann::json{{"error", e.what()}, {"line", e.line()}}.dump() << '\n';
    return kExitDomain;
  } catch (const InvalidMove& e) {
    err << nlohmann::json{{"error", e.what()}, {"turn", e.turn()}}.dump() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << nlohmann::json{{"error", e.what()}}.dump() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace firefight::cli
