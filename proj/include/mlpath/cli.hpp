#pragma once

// Command-line front end. Exit codes are part of the contract: 0 success,
// 1 no feasible path, 2 invalid input or flags.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mlpath/gen.hpp"
#include "mlpath/grammar.hpp"
#include "mlpath/io.hpp"
#include "mlpath/oracle.hpp"
#include "mlpath/pathfinder.hpp"
#include "mlpath/pda.hpp"

namespace mlpath {

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string network_to_dot(const Network& net) {
  std::string out = "digraph network {\n  rankdir=LR;\n";
  for (NodeId u = 0; u < net.nodes.size(); ++u) {
    out += "  \"" + net.nodes[u] + "\"";
    if (u == net.source) out += " [shape=box]";
    else if (u == net.destination) out += " [shape=doublecircle]";
    out += ";\n";
  }
  for (const auto& [u, v] : net.links)
    out += "  \"" + net.nodes[u] + "\" -> \"" + net.nodes[v] + "\";\n";
  out += "}\n";
  return out;
}

inline std::uint64_t micros_since(std::chrono::steady_clock::time_point t0) {
  auto d = std::chrono::steady_clock::now() - t0;
  return std::chrono::duration_cast<std::chrono::microseconds>(d).count();
}

}  // namespace detail

inline int run_solve(const std::string& topology_path, const std::string& objective,
                     const std::string& emit, std::ostream& out) {
  Network net = parse_network(detail::read_file(topology_path));
  auto obj = parse_objective(objective);
  if (!obj) throw ParseError("unknown objective: " + objective);
  PathResult r = solve(net, *obj);
  if (!r.feasible) {
    out << "no feasible path\n";
    return 1;
  }
  if (emit == "word") {
    out << render_word(net.protocols, r.word) << "\n";
  } else if (emit == "trace") {
    out << render_trace(net, r.trace) << "\n";
  } else {
    FeasiblePath fp = make_feasible_path(net, r.nodes, r.trace);
    out << render_result_document(net, objective_name(*obj), render_word(net.protocols, r.word),
                                  fp);
  }
  return 0;
}

inline int run_verify(const std::string& topology_path, const std::string& path_doc_path,
                      bool with_oracle, std::ostream& out) {
  Network net = parse_network(detail::read_file(topology_path));
  PathDocument doc = parse_path_document(net, detail::read_file(path_doc_path));
  PathVerdict verdict = check_path(net, doc.nodes, doc.trace);
  if (!verdict.ok) {
    out << "infeasible: " << verdict.detail << "\n";
    return 1;
  }
  if (!with_oracle) {
    out << "feasible\n";
    return 0;
  }
  Objective obj = Objective::kMinHops;
  if (doc.objective) {
    auto parsed = parse_objective(*doc.objective);
    if (!parsed) throw ParseError("unknown objective in path document: " + *doc.objective);
    obj = *parsed;
  }
  FeasiblePath fp = make_feasible_path(net, doc.nodes, doc.trace);
  std::uint64_t cost = obj == Objective::kMinHops ? fp.hops : fp.adaptations;
  // the verified path is itself a witness performing at most `cost` pushes,
  // so a search bounded by that cost explores every run that could beat it
  OracleResult oracle = brute_force(net, obj, std::max<std::uint64_t>(1, cost));
  if (oracle.truncated) {
    out << "feasible; oracle truncated, no optimality verdict\n";
  } else if (oracle.cost && *oracle.cost == cost) {
    out << "feasible; optimal\n";
  } else if (oracle.cost) {
    out << "feasible; suboptimal (cost " << cost << ", optimum " << *oracle.cost << ")\n";
  } else {
    out << "feasible; oracle disagrees (reports no path)\n";
  }
  return 0;
}

inline int run_export(const std::string& topology_path, const std::string& what,
                      const std::string& format, std::ostream& out) {
  Network net = parse_network(detail::read_file(topology_path));
  if (what == "network") {
    out << (format == "dot" ? detail::network_to_dot(net) : render_topology(net));
    return 0;
  }
  Pda pda = build_pda(net);
  if (what == "pda") {
    out << (format == "dot" ? pda_to_dot(pda) : pda_to_text(pda));
    return 0;
  }
  pda = transform_pda(pda);
  if (what == "tpda") {
    out << (format == "dot" ? pda_to_dot(pda) : pda_to_text(pda));
    return 0;
  }
  // the grammar is the adaptation pipeline's, built on the transformed automaton
  if (format == "dot") throw ParseError("the grammar has no dot form, use --format text");
  out << cfg_to_text(pda_to_cfg(pda));
  return 0;
}

inline int run_gen(const GenSpec& spec, std::ostream& out) {
  out << render_topology(generate_network(spec));
  return 0;
}

struct BenchSpec {
  std::uint32_t nodes_min = 4;
  std::uint32_t nodes_max = 10;
  std::uint32_t protocols = 2;
  std::uint32_t per_size = 3;
  double edge_probability = 0.4;
  double function_density = 0.4;
  std::uint64_t seed = 1;
};

/// One row per generated instance: structural counts first (stable given
/// the seed), per-stage wall-clock micros last (not reproducible, kept out
/// of any golden comparison). The pipeline measured is the adaptation one,
/// which exercises every stage.
inline int run_bench(const BenchSpec& spec, std::ostream& out) {
  if (spec.nodes_min < 2 || spec.nodes_max < spec.nodes_min)
    throw ParseError("bench needs 2 <= nodes-min <= nodes-max");
  out << "nodes\tprotocols\tseed\tstates\ttransitions\tt_transitions\tnonterminals\tproductions"
         "\tsweeps\tfeasible\tadaptations\tbuild_us\ttransform_us\tcfg_us\tlvalues_us\tword_us"
         "\tpath_us\n";
  using clock = std::chrono::steady_clock;
  for (std::uint32_t n = spec.nodes_min; n <= spec.nodes_max; ++n) {
    for (std::uint32_t k = 0; k < spec.per_size; ++k) {
      GenSpec gs;
      gs.node_count = n;
      gs.protocol_count = spec.protocols;
      gs.edge_probability = spec.edge_probability;
      gs.function_density = spec.function_density;
      gs.seed = spec.seed + n * 1000 + k;
      Network net = generate_network(gs);

      auto t0 = clock::now();
      Pda pda = build_pda(net);
      auto build_us = detail::micros_since(t0);
      std::size_t plain_transitions = pda.transitions.size();

      t0 = clock::now();
      Pda tpda = transform_pda(pda);
      auto transform_us = detail::micros_since(t0);

      t0 = clock::now();
      Cfg cfg = pda_to_cfg(tpda);
      auto cfg_us = detail::micros_since(t0);

      t0 = clock::now();
      LengthValues lv = l_values(cfg);
      auto lvalues_us = detail::micros_since(t0);

      t0 = clock::now();
      ShortestWord sw = shortest_word(cfg, lv);
      auto word_us = detail::micros_since(t0);

      std::uint64_t path_us = 0;
      bool feasible = sw.word.has_value();
      std::string adaptations = "-";
      if (feasible) {
        Trace trace = expand_f(*sw.word);
        t0 = clock::now();
        auto nodes = find_path(net, trace);
        path_us = detail::micros_since(t0);
        if (!nodes) throw std::logic_error("accepted trace has no matching path");
        adaptations = std::to_string(sw.word->size() - 1);
      }
      out << n << '\t' << spec.protocols << '\t' << gs.seed << '\t' << pda.states.size() << '\t'
          << plain_transitions << '\t' << tpda.transitions.size() << '\t'
          << cfg.num_nonterminals() << '\t' << cfg.productions.size() << '\t' << lv.sweeps << '\t'
          << (feasible ? 1 : 0) << '\t' << adaptations << '\t' << build_us << '\t' << transform_us
          << '\t' << cfg_us << '\t' << lvalues_us << '\t' << word_us << '\t' << path_us << '\n';
    }
  }
  return 0;
}

inline int run_cli(int argc, const char* const* argv) {
  CLI::App app{"shortest feasible paths in multi-layer networks"};
  app.require_subcommand(1);

  std::string topology, objective, emit = "result", what, format = "text", path_doc;
  bool with_oracle = false;
  GenSpec gen_spec;
  BenchSpec bench_spec;

  auto* solve_cmd = app.add_subcommand("solve", "compute a shortest feasible path");
  solve_cmd->add_option("topology", topology, "topology file")->required();
  solve_cmd->add_option("--objective", objective, "hops or adaptations")
      ->required()
      ->check(CLI::IsMember({"hops", "min-hops", "adaptations", "min-adaptations"}));
  solve_cmd->add_option("--emit", emit, "result, trace, or word")
      ->check(CLI::IsMember({"result", "trace", "word"}));

  auto* verify_cmd = app.add_subcommand("verify", "check a path document for feasibility");
  verify_cmd->add_option("topology", topology, "topology file")->required();
  verify_cmd->add_option("path", path_doc, "path document file")->required();
  verify_cmd->add_flag("--oracle", with_oracle, "also compare against the exhaustive optimum");

  auto* export_cmd = app.add_subcommand("export", "print derived artifacts");
  export_cmd->add_option("topology", topology, "topology file")->required();
  export_cmd->add_option("--what", what, "network, pda, tpda, or cfg")
      ->required()
      ->check(CLI::IsMember({"network", "pda", "tpda", "cfg"}));
  export_cmd->add_option("--format", format, "text or dot")
      ->check(CLI::IsMember({"text", "dot"}));

  auto* gen_cmd = app.add_subcommand("gen", "generate a seeded random topology");
  gen_cmd->add_option("--nodes", gen_spec.node_count, "node count");
  gen_cmd->add_option("--protocols", gen_spec.protocol_count, "protocol count");
  gen_cmd->add_option("--edge-probability", gen_spec.edge_probability, "per ordered pair");
  gen_cmd->add_option("--function-density", gen_spec.function_density,
                      "encap/decap sampling probability");
  gen_cmd->add_option("--seed", gen_spec.seed, "rng seed");

  auto* bench_cmd = app.add_subcommand("bench", "sweep sizes and print a timing table");
  bench_cmd->add_option("--nodes-min", bench_spec.nodes_min, "smallest node count");
  bench_cmd->add_option("--nodes-max", bench_spec.nodes_max, "largest node count");
  bench_cmd->add_option("--protocols", bench_spec.protocols, "protocol count");
  bench_cmd->add_option("--per-size", bench_spec.per_size, "instances per size");
  bench_cmd->add_option("--edge-probability", bench_spec.edge_probability, "per ordered pair");
  bench_cmd->add_option("--function-density", bench_spec.function_density,
                        "encap/decap sampling probability");
  bench_cmd->add_option("--seed", bench_spec.seed, "base rng seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*solve_cmd) return run_solve(topology, objective, emit, std::cout);
    if (*verify_cmd) return run_verify(topology, path_doc, with_oracle, std::cout);
    if (*export_cmd) return run_export(topology, what, format, std::cout);
    if (*gen_cmd) return run_gen(gen_spec, std::cout);
    if (*bench_cmd) return run_bench(bench_spec, std::cout);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace mlpath
