#pragma once

// Maps an accepted trace back to a concrete node path, and bundles the
// whole pipeline (network -> automaton -> grammar -> shortest word ->
// path) behind one call per objective.

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mlpath/grammar.hpp"
#include "mlpath/network.hpp"
#include "mlpath/pda.hpp"

namespace mlpath {

/// Chooses among equally admissible predecessors during backtracking,
/// e.g. to spread load. Candidates arrive in ascending id order.
using PredecessorPolicy = std::function<NodeId(const std::vector<NodeId>&)>;

/// Reconstructs a path matching the trace: a layered sweep marks which
/// nodes are reachable after each symbol, then a backward pass picks a
/// predecessor at every layer (the smallest id unless a policy says
/// otherwise). Any choice is safe because the protocol stack depends only
/// on the trace, not on the nodes taken. Returns nothing when no path
/// emits the trace.
inline std::optional<std::vector<NodeId>> find_path(const Network& net, const Trace& trace,
                                                    const PredecessorPolicy& policy = {}) {
  if (trace.empty() || trace.back().barred) return std::nullopt;
  std::vector<AdaptationFunction> seq;
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    auto fn = implied_function(trace[i], trace[i + 1]);
    if (!fn) return std::nullopt;
    seq.push_back(*fn);
  }
  if (!is_valid_sequence(seq)) return std::nullopt;
  auto caps = all_capabilities(net);
  const std::size_t n = trace.size();

  auto step_ok = [&](std::size_t i, NodeId u, NodeId v) {
    LinkSymbol cur = trace[i];
    if (v == net.source) return false;  // the source is never re-entered
    if (cur.protocol >= net.protocols.size()) return false;
    if (!caps[u].out.contains(cur.protocol) || !caps[v].in.contains(cur.protocol)) return false;
    if (i > 0) {
      auto fn = implied_function(trace[i - 1], cur);
      if (!fn) return false;
      const auto& fns = net.functions[u];
      if (!std::binary_search(fns.begin(), fns.end(), *fn)) return false;
    }
    return true;
  };

  // layers[i] marks the nodes reachable after emitting i symbols
  std::vector<std::vector<char>> layers(n + 1, std::vector<char>(net.nodes.size(), 0));
  layers[0][net.source] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (NodeId u = 0; u < net.nodes.size(); ++u) {
      if (!layers[i][u]) continue;
      auto lo = std::lower_bound(net.links.begin(), net.links.end(),
                                 std::pair<NodeId, NodeId>{u, 0});
      for (auto it = lo; it != net.links.end() && it->first == u; ++it)
        if (step_ok(i, u, it->second)) layers[i + 1][it->second] = 1;
    }
  }
  if (!layers[n][net.destination]) return std::nullopt;

  std::vector<NodeId> path(n + 1);
  path[n] = net.destination;
  for (std::size_t i = n; i-- > 0;) {
    std::vector<NodeId> candidates;
    for (NodeId u = 0; u < net.nodes.size(); ++u) {
      if (!layers[i][u] || !net.has_link(u, path[i + 1])) continue;
      if (!step_ok(i, u, path[i + 1])) continue;
      candidates.push_back(u);
    }
    if (candidates.empty()) return std::nullopt;
    path[i] = policy ? policy(candidates) : candidates.front();
  }
  return path;
}

enum class Objective { kMinHops, kMinAdaptations };

inline const char* objective_name(Objective o) {
  return o == Objective::kMinHops ? "min-hops" : "min-adaptations";
}

inline std::optional<Objective> parse_objective(const std::string& s) {
  if (s == "min-hops" || s == "hops") return Objective::kMinHops;
  if (s == "min-adaptations" || s == "adaptations") return Objective::kMinAdaptations;
  return std::nullopt;
}

struct PathResult {
  bool feasible = false;
  Word word;    // shortest word for the chosen objective
  Trace trace;  // its expansion, one symbol per link
  std::vector<NodeId> nodes;
  std::uint64_t hops = 0;
  std::uint64_t adaptations = 0;
};

/// End-to-end pipeline. For the adaptation objective the transformed
/// automaton makes word length count encapsulations and decapsulations
/// (plus the closing step) instead of hops.
inline PathResult solve(const Network& net, Objective objective) {
  Pda pda = build_pda(net);
  if (objective == Objective::kMinAdaptations) pda = transform_pda(pda);
  Cfg cfg = pda_to_cfg(pda);
  LengthValues lv = l_values(cfg);
  ShortestWord sw = shortest_word(cfg, lv);

  PathResult result;
  if (!sw.word) return result;
  result.feasible = true;
  result.word = std::move(*sw.word);
  result.trace = expand_f(result.word);
  auto nodes = find_path(net, result.trace);
  if (!nodes) throw std::logic_error("accepted trace has no matching path");
  result.nodes = std::move(*nodes);
  FeasiblePath fp = make_feasible_path(net, result.nodes, result.trace);
  result.hops = fp.hops;
  result.adaptations = fp.adaptations;
  return result;
}

}  // namespace mlpath
