#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>

#include "firefight/firefight.hpp"
#include "support/ip_oracle.hpp"
#include "support/oracles.hpp"

namespace ff = firefight;
namespace ip = firefight::ip;
namespace rd = firefight::reduce;
using nlohmann::json;

namespace {

struct Context {
  std::size_t workers = 1;
  bool long_run = false;
};

struct Outcome {
  bool pass = true;
  json data;
  std::string note;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      note = why;
    }
  }
};

ff::GameConfig config(ff::Mode mode, std::size_t b, std::uint32_t d,
                      std::optional<std::size_t> horizon = std::nullopt) {
  ff::GameConfig c;
  c.mode = mode;
  c.firefighters = b;
  c.distance = d;
  c.horizon = horizon;
  return c;
}

ff::DamageOptions damage_opts(const Context& ctx) {
  ff::DamageOptions o;
  o.workers = ctx.workers;
  return o;
}

std::string label(ff::Mode m, std::uint32_t d) {
  return std::string(ff::to_string(m)) + (m == ff::Mode::classic ? "" : ":d=" + std::to_string(d));
}

// 1
Outcome star_damage(const Context& ctx) {
  Outcome out;
  out.data = json::array();
  for (std::size_t n = 3; n <= 10; ++n) {
    const auto g = ff::gen::star(n);
    const ff::Rational want{static_cast<std::int64_t>(2 * n - 2), static_cast<std::int64_t>(n)};
    std::vector<ff::GameConfig> cfgs{config(ff::Mode::classic, 1, 1)};
    for (auto mode : {ff::Mode::dr, ff::Mode::dpr})
      for (std::uint32_t d : {1u, 2u, static_cast<std::uint32_t>(n)}) cfgs.push_back(config(mode, 1, d));
    for (const auto& c : cfgs) {
      const auto rep = ff::expected_damage(g, 1, c, damage_opts(ctx));
      out.require(rep.complete && rep.expected == want,
                  "star n=" + std::to_string(n) + " " + label(c.mode, c.distance) + " gave " +
                      rep.expected.to_string());
      out.data.push_back({{"n", n}, {"rules", label(c.mode, c.distance)}, {"expected", ff::to_json(rep.expected)}});
    }
  }
  return out;
}

// 2
Outcome cycle_vs_path(const Context& ctx) {
  Outcome out;
  const auto c7 = ff::expected_damage(ff::gen::cycle(7), 1, config(ff::Mode::dpr, 1, 7), damage_opts(ctx));
  const auto p7 = ff::expected_damage(ff::gen::path(7), 1, config(ff::Mode::dpr, 1, 7), damage_opts(ctx));
  const auto p7c = ff::expected_damage(ff::gen::path(7), 1, config(ff::Mode::classic, 1, 7), damage_opts(ctx));
  const ff::Rational two{2, 1};
  out.require(c7.expected == two, "C7 gave " + c7.expected.to_string());
  out.require(p7.expected == (ff::Rational{16, 7}) && two < p7.expected, "P7 dpr gave " + p7.expected.to_string());
  out.require(p7c.expected == (ff::Rational{12, 7}) && p7c.expected < two,
              "P7 classic gave " + p7c.expected.to_string());
  out.data = {{"C7_dpr", ff::to_json(c7.expected)},
              {"P7_dpr", ff::to_json(p7.expected)},
              {"P7_classic", ff::to_json(p7c.expected)}};
  return out;
}

// 3
Outcome tree_fast_path(const Context& ctx) {
  Outcome out;
  std::mt19937_64 rng(3);
  struct Case {
    ff::Graph tree;
    std::size_t b;
  };
  std::vector<Case> cases;
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 12)(rng);
    cases.push_back({oracle::random_tree(rng, n), 1 + static_cast<std::size_t>(i % 2)});
  }
  ff::SolverOptions general;
  general.tree_fast_path = false;
  std::vector<std::size_t> mismatches(cases.size(), 0), roots(cases.size(), 0);
  ff::parallel_for(cases.size(), ctx.workers, [&](std::size_t i) {
    const auto& [t, b] = cases[i];
    const auto c = config(ff::Mode::dpr, b, static_cast<std::uint32_t>(t.size()));
    for (ff::Vertex r = 0; r < t.size(); ++r) {
      ++roots[i];
      if (ff::solve_tree_dpr(t, r, b).saved_weight != ff::solve(t, {r}, c, general).saved_weight)
        ++mismatches[i];
    }
  });
  std::size_t total = 0, bad = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    total += roots[i];
    bad += mismatches[i];
  }
  out.require(bad == 0, std::to_string(bad) + " root choices disagree");
  out.data = {{"trees", cases.size()}, {"root_choices", total}, {"mismatches", bad}};
  return out;
}

// 4
Outcome matching_validation(const Context& ctx) {
  Outcome out;
  std::mt19937_64 rng(4);
  struct Case {
    ff::Graph g;
    ff::GameConfig cfg;
    oracle::State state;
    ff::Placement dest;
  };
  std::vector<Case> cases;
  const ff::Mode modes[] = {ff::Mode::classic, ff::Mode::dr, ff::Mode::dpr};
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(4, 9)(rng);
    const std::size_t b = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    const auto d = std::uniform_int_distribution<std::uint32_t>(0, 3)(rng);
    Case c{oracle::random_connected(rng, n, 0.2), config(modes[i % 3 == 0 ? 0 : 1 + i % 2], b, d), {}, {}};
    c.state = oracle::start(c.g, {});
    c.state.turn = 1;
    std::bernoulli_distribution burn(0.3);
    for (ff::Vertex v = 1; v < n; ++v) c.state.burnt[v] = burn(rng);
    std::vector<ff::Vertex> alive;
    for (ff::Vertex v = 0; v < n; ++v)
      if (!c.state.burnt[v]) alive.push_back(v);
    auto pick = [&](const std::vector<ff::Vertex>& from) {
      return from[std::uniform_int_distribution<std::size_t>(0, from.size() - 1)(rng)];
    };
    for (std::size_t j = 0; j < b; ++j) c.state.positions.push_back(pick(alive));
    std::sort(c.state.positions.begin(), c.state.positions.end());
    for (ff::Vertex v : c.state.positions) c.state.defended[v] = true;
    std::vector<ff::Vertex> all(n);
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t j = 0; j < b; ++j) c.dest.push_back(pick(i % 4 == 0 ? all : alive));
    std::sort(c.dest.begin(), c.dest.end());
    cases.push_back(std::move(c));
  }
  std::vector<int> engine(cases.size()), brute(cases.size());
  ff::parallel_for(cases.size(), ctx.workers, [&](std::size_t i) {
    const auto& c = cases[i];
    ff::GameState s;
    for (ff::Vertex v = 0; v < c.g.size(); ++v) {
      if (c.state.burnt[v]) s.burnt.insert(v);
      if (c.state.defended[v]) s.defended.insert(v);
    }
    s.positions = c.state.positions;
    s.turn = c.state.turn;
    engine[i] = ff::Game(c.g, c.cfg).is_valid_move(s, c.dest);
    brute[i] = oracle::brute_force_valid(c.g, c.state, c.dest, c.cfg);
  });
  std::size_t valid = 0, bad = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    valid += engine[i];
    bad += engine[i] != brute[i];
  }
  out.require(bad == 0, std::to_string(bad) + " triples disagree");
  out.data = {{"triples", cases.size()}, {"valid", valid}, {"mismatches", bad}};
  return out;
}

// 5
Outcome monotonicity(const Context& ctx) {
  Outcome out;
  std::mt19937_64 rng(5);
  struct Case {
    ff::Graph g;
    ff::Vertex fire;
  };
  std::vector<Case> cases;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 8)(rng);
    auto g = oracle::random_connected(rng, n, 0.25);
    const auto fire = static_cast<ff::Vertex>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    cases.push_back({std::move(g), fire});
  }
  std::vector<json> rows(cases.size());
  std::vector<std::string> failures(cases.size());
  ff::parallel_for(cases.size(), ctx.workers, [&](std::size_t i) {
    const auto& [g, fire] = cases[i];
    const auto diam = ff::diameter(g);
    const auto mvs = ff::solve(g, {fire}, config(ff::Mode::classic, 1, 1)).saved_weight;
    std::vector<ff::Weight> dr, dpr;
    for (std::uint32_t d = 0; d <= diam; ++d) {
      dr.push_back(ff::solve(g, {fire}, config(ff::Mode::dr, 1, d)).saved_weight);
      dpr.push_back(ff::solve(g, {fire}, config(ff::Mode::dpr, 1, d)).saved_weight);
      if (!(mvs >= dr.back() && dr.back() >= dpr.back())) failures[i] = "chain broken at d=" + std::to_string(d);
      if (d > 0 && (dr[d] < dr[d - 1] || dpr[d] < dpr[d - 1])) failures[i] = "decrease at d=" + std::to_string(d);
    }
    if (dr.back() != mvs) failures[i] = "DRMVS(diameter) != MVS";
    rows[i] = {{"n", g.size()}, {"fire", fire}, {"diameter", diam}, {"mvs", mvs}, {"drmvs", dr}, {"dprmvs", dpr}};
  });
  for (std::size_t i = 0; i < cases.size(); ++i)
    out.require(failures[i].empty(), "graph " + std::to_string(i) + ": " + failures[i]);
  out.data = rows;
  return out;
}

// 6
Outcome ip_fidelity(const Context& ctx) {
  Outcome out;
  std::vector<ff::Graph> graphs = ff::connected_graphs(3);
  graphs.push_back(ff::gen::path(4));
  graphs.push_back(ff::gen::complete(4));
  struct Case {
    std::size_t graph;
    ff::Vertex fire;
    std::size_t T;
    std::uint32_t d;  // 0 selects the plain MVS model
  };
  std::vector<Case> cases;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi)
    for (ff::Vertex f = 0; f < graphs[gi].size(); ++f)
      for (std::size_t T = 1; T <= 3; ++T)
        for (std::uint32_t d : {0u, 1u, 2u}) cases.push_back({gi, f, T, d});
  std::vector<json> rows(cases.size());
  std::vector<bool> ok(cases.size());
  ff::parallel_for(cases.size(), ctx.workers, [&](std::size_t i) {
    const auto& c = cases[i];
    const auto& g = graphs[c.graph];
    const auto n = static_cast<std::int64_t>(g.size());
    const ff::VertexSet fires{c.fire};
    const auto m = c.d == 0 ? ip::emit_mvs(g, fires, 1, c.T) : ip::emit_drmvs(g, fires, 1, c.d, c.T);
    const auto best = oracle::IpMinimizer(m.model).minimize(oracle::time_order(m));
    const auto rules = c.d == 0 ? config(ff::Mode::classic, 1, 1, c.T) : config(ff::Mode::dr, 1, c.d, c.T);
    const auto saved = ff::solve(g, fires, rules).saved_weight;
    ok[i] = best && *best == n - saved;
    rows[i] = {{"n", n}, {"edges", g.edge_count()}, {"fire", c.fire}, {"T", c.T},
               {"model", c.d == 0 ? "mvs" : "drmvs:d=" + std::to_string(c.d)},
               {"ip_minimum", best ? json(*best) : json(nullptr)}, {"solver", n - saved}};
  });
  for (std::size_t i = 0; i < cases.size(); ++i) out.require(ok[i], "mismatch: " + rows[i].dump());
  out.data = rows;
  return out;
}

ff::Strategy padded(ff::Strategy s, std::size_t horizon, std::size_t b, const ff::Graph& g,
                    const ff::VertexSet& fires) {
  if (s.turns.empty()) s.turns.push_back(ff::Placement(b, (g.all_vertices() - fires).to_vector().front()));
  while (s.turns.size() < horizon) s.turns.push_back(s.turns.back());
  return s;
}

// 7
Outcome ip_roundtrip(const Context& ctx) {
  Outcome out;
  std::vector<ff::Graph> graphs;
  for (std::size_t n = 3; n <= 5; ++n)
    for (auto& g : ff::connected_graphs(n)) graphs.push_back(std::move(g));
  std::mt19937_64 rng(7);
  for (int i = 0; i < 15; ++i) graphs.push_back(oracle::random_connected(rng, 6, 0.2));
  struct Case {
    std::size_t graph;
    ff::Mode mode;
    std::size_t b;
  };
  std::vector<Case> cases;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi)
    for (auto mode : {ff::Mode::classic, ff::Mode::dr, ff::Mode::dpr})
      for (std::size_t b : {1u, 2u}) cases.push_back({gi, mode, b});
  std::vector<std::string> failures(cases.size());
  ff::parallel_for(cases.size(), ctx.workers, [&](std::size_t i) {
    const auto& c = cases[i];
    const auto& g = graphs[c.graph];
    const std::size_t T = g.size();
    const ff::VertexSet fires{0};
    const auto rules = config(c.mode, c.b, 1, T);
    const auto w = ff::solve(g, fires, rules);
    const auto target = static_cast<std::int64_t>(g.size()) - w.saved_weight;

    const auto mvs = ip::emit_mvs(g, fires, c.b, T);
    const auto a1 = ip::strategy_to_assignment(g, w.optimal_strategy, rules, mvs);
    const auto r1 = ip::check_assignment(mvs.model, a1);
    if (!r1.feasible || r1.objective != target) failures[i] = "mvs encoding";
    else if (ip::strategy_to_assignment(g, ip::assignment_to_strategy(a1, mvs),
                                        config(ff::Mode::classic, c.b, 1, T), mvs) != a1)
      failures[i] = "mvs round trip";
    if (c.mode == ff::Mode::classic) return;

    const auto dr = ip::emit_drmvs(g, fires, c.b, 1, T);
    const auto a2 = ip::strategy_to_assignment(g, w.optimal_strategy, rules, dr);
    const auto r2 = ip::check_assignment(dr.model, a2);
    if (!r2.feasible || r2.objective != target) failures[i] = "drmvs encoding";
    else if (ip::assignment_to_strategy(a2, dr) != padded(w.optimal_strategy, T, c.b, g, fires))
      failures[i] = "drmvs round trip";
  });
  std::size_t bad = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    bad += !failures[i].empty();
    out.require(failures[i].empty(), "case " + std::to_string(i) + ": " + failures[i]);
  }
  out.data = {{"witnesses", cases.size()}, {"graphs", graphs.size()}, {"failures", bad}};
  return out;
}

// 8
Outcome reduction_equivalence(const Context& ctx) {
  Outcome out;
  struct Case {
    ff::Graph g;
    ff::Vertex fire;
    ff::Weight k;
  };
  std::vector<Case> cases;
  for (std::size_t r = 2; r <= 4; ++r)
    for (const auto& g : ff::connected_graphs(r))
      for (ff::Vertex f = 0; f < r; ++f)
        for (ff::Weight k = 1; k < static_cast<ff::Weight>(r); ++k) cases.push_back({g, f, k});
  std::vector<json> rows(cases.size());
  std::vector<bool> ok(cases.size());
  ff::parallel_for(cases.size(), ctx.workers, [&](std::size_t i) {
    const auto& [g, f, k] = cases[i];
    const std::size_t r = g.size();
    const bool original = ff::decide(g, {f}, config(ff::Mode::classic, 1, 1), k);
    const auto inst = rd::reduce_to_weighted_dpr(g, {f}, k);
    const bool weighted = ff::decide(inst.graph, inst.fires, rd::reduced_config(inst, 1), inst.k_prime);
    ok[i] = weighted == original;
    rows[i] = {{"r", r}, {"edges", g.edge_count()}, {"fire", f}, {"k", k}, {"classic", original},
               {"weighted_dpr", weighted}, {"reduced_n", inst.graph.size()}};
    if (r <= 3) {
      const auto flat = rd::reduce_weighted_to_unweighted(inst);
      const bool unweighted = ff::decide(flat.graph, flat.fires, rd::reduced_config(flat, 1), flat.k_prime);
      ok[i] = ok[i] && unweighted == original;
      rows[i]["unweighted_dpr"] = unweighted;
    }
  });
  for (std::size_t i = 0; i < cases.size(); ++i) out.require(ok[i], "disagreement: " + rows[i].dump());

  std::mt19937_64 rng(8);
  std::size_t bipartite_ok = 0;
  for (int i = 0; i < 50; ++i) {
    const auto left = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    const auto right = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
    const auto g = oracle::random_bipartite(rng, left, right, 0.5);
    const auto inst = rd::reduce_bipartite_preserving(g, {0}, 1);
    bipartite_ok += ff::two_coloring(inst.graph).has_value();
  }
  out.require(bipartite_ok == 50, "bipartite output not 2-colourable");
  out.data = {{"decisions", rows}, {"bipartite_checked", 50}, {"bipartite_ok", bipartite_ok}};
  return out;
}

// 9
Outcome nonmonotonicity(const Context& ctx) {
  Outcome out;
  std::vector<std::size_t> ells(12);
  std::iota(ells.begin(), ells.end(), 1);
  const auto rep = ff::nonmono_experiment(ff::gen::path(2), ff::gen::complete(2), 1, ells, damage_opts(ctx));
  out.require(rep.first_holding.has_value(), "no ell <= 12 with strict decrease");
  for (const auto& row : rep.rows)
    out.require(!rep.first_holding || row.ell < *rep.first_holding || row.holds,
                "inequality lapses at ell=" + std::to_string(row.ell));
  out.data = ff::to_json(rep);
  return out;
}

// 10
Outcome grid(const Context& ctx) {
  Outcome out;
  const auto c = config(ff::Mode::dr, 1, 1);
  const auto oracle3 = oracle::plain_solve(ff::gen::grid(3), {4}, c);
  json table = json::array();
  std::vector<std::size_t> sizes{3, 5, 7};
  if (ctx.long_run) sizes.insert(sizes.end(), {9, 11});
  for (std::size_t n : sizes) {
    ff::SolverOptions opts;
    if (ctx.long_run) opts.node_budget = 2'000'000'000;
    const auto r = ff::grid_experiment(n, 1, opts);
    if (n == 3) {
      out.require(r.complete && r.drmvs == 2 && oracle3 == 2, "3x3 value");
    }
    if (n == 5) out.require(r.complete && r.drmvs >= r.corner.saved, "5x5 below corner block");
    out.require(r.complete || n > 7, "grid " + std::to_string(n) + " ran out of budget");
    auto row = ff::to_json(r);
    row.erase("witness");
    row["corner_block"].erase("strategy");
    table.push_back(row);
  }
  out.data = {{"oracle_3x3", oracle3}, {"table", table}};
  return out;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome(const Context&)> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "star expected damage is 2 - 2/n", star_damage},
      {2, "cycle versus path damage", cycle_vs_path},
      {3, "tree fast path matches general search", tree_fast_path},
      {4, "matching move validation matches brute force", matching_validation},
      {5, "monotonicity chains", monotonicity},
      {6, "IP optimum matches solver", ip_fidelity},
      {7, "IP round trip of solver witnesses", ip_roundtrip},
      {8, "reduction equivalence", reduction_equivalence},
      {9, "expected damage non-monotone under edge removal", nonmonotonicity},
      {10, "grid experiment", grid},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"firefight acceptance suite"};
  Context ctx;
  std::size_t compare_workers = 8;
  std::string json_out;
  std::vector<int> only;
  app.add_flag("--long", ctx.long_run, "also run the larger grid sizes");
  app.add_option("--compare-workers", compare_workers, "worker count checked against 1")->capture_default_str();
  app.add_option("--json", json_out, "write criterion data here");
  app.add_option("--only", only, "run a subset of criteria 1-10");
  CLI11_PARSE(app, argc, argv);

  using clock = std::chrono::steady_clock;
  json report;
  bool all_pass = true;
  auto line = [&](bool pass, int id, const std::string& title, double secs, const std::string& note) {
    all_pass = all_pass && pass;
    std::printf("%s %2d %s (%.1fs)%s%s\n", pass ? "PASS" : "FAIL", id, title.c_str(), secs,
                note.empty() ? "" : ": ", note.c_str());
    std::fflush(stdout);
  };
  auto selected = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };

  std::map<int, std::string> dumps;
  for (const auto& c : criteria()) {
    if (!selected(c.id)) continue;
    const auto t0 = clock::now();
    Outcome o;
    try {
      o = c.run(ctx);
    } catch (const std::exception& e) {
      o.pass = false;
      o.note = std::string("exception: ") + e.what();
    }
    line(o.pass, c.id, c.title, std::chrono::duration<double>(clock::now() - t0).count(), o.note);
    report[std::to_string(c.id)] = {{"pass", o.pass}, {"data", o.data}};
    dumps[c.id] = o.data.dump();
  }

  const auto t0 = clock::now();
  Context wide = ctx;
  wide.workers = compare_workers;
  std::string differ;
  for (const auto& c : criteria()) {
    if (!selected(c.id)) continue;
    std::string dump;
    try {
      dump = c.run(wide).data.dump();
    } catch (const std::exception& e) {
      dump = e.what();
    }
    if (dump != dumps[c.id]) differ += (differ.empty() ? "" : ",") + std::to_string(c.id);
  }
  line(differ.empty(), 11, "identical JSON with 1 and " + std::to_string(compare_workers) + " workers",
       std::chrono::duration<double>(clock::now() - t0).count(), differ.empty() ? "" : "criteria " + differ + " differ");
  report["11"] = {{"pass", differ.empty()}, {"workers", {1, compare_workers}}};

  if (!json_out.empty()) std::ofstream(json_out) << report.dump(2) << "\n";
  return all_pass ? 0 : 1;
}
