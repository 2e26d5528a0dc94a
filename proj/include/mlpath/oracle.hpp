#pragma once

// Reference solver that never looks at the automaton: it walks
// configurations (node, received protocol, nesting stack) directly with a
// 0/1-cost Dijkstra. Exponential in the worst case, so expansion stops at
// a stack depth bound; because every push costs at least one unit under
// either objective, a result no larger than the bound is still certified
// optimal even when deeper configurations were cut off.

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "mlpath/network.hpp"
#include "mlpath/pathfinder.hpp"

namespace mlpath {

struct OracleResult {
  std::optional<std::uint64_t> cost;  // empty: no path found within the bound
  bool truncated = false;             // the depth bound may have hidden a better answer
  std::vector<NodeId> nodes;          // witness path when cost is set
  Trace trace;
};

inline OracleResult brute_force(const Network& net, Objective objective,
                                std::size_t stack_bound = 0) {
  if (stack_bound == 0) stack_bound = 2 * net.nodes.size() * net.protocols.size();
  auto caps = all_capabilities(net);

  // stack holds the protocols nested under the current one, newest first
  using Config = std::tuple<NodeId, ProtocolId, std::vector<ProtocolId>>;
  struct Entry {
    std::uint64_t cost;
    std::optional<Config> parent;
    ProtocolId emitted;         // protocol on the link into this config
    FunctionKind kind;          // function applied by the emitting node
    bool initial;
  };
  std::map<Config, Entry> table;
  std::deque<std::pair<std::uint64_t, Config>> queue;
  bool blocked = false;

  // 0/1 weights keep the deque sorted: same-cost entries go to the front,
  // one-heavier entries to the back
  auto relax = [&](const Config& next, Entry e, bool zero_weight) {
    auto it = table.find(next);
    if (it != table.end() && it->second.cost <= e.cost) return;
    std::uint64_t cost = e.cost;
    if (it == table.end()) table.emplace(next, std::move(e));
    else it->second = std::move(e);
    if (zero_weight) queue.emplace_front(cost, next);
    else queue.emplace_back(cost, next);
  };

  const bool count_hops = objective == Objective::kMinHops;
  for (const auto& [u, v] : net.links) {
    if (u != net.source || v == net.source) continue;
    for (ProtocolId p = 0; p < net.protocols.size(); ++p) {
      if (!caps[net.source].out.contains(p) || !caps[v].in.contains(p)) continue;
      // all seeds share one cost, so back insertion keeps the order
      relax({v, p, {}}, {count_hops ? 1u : 0u, std::nullopt, p, FunctionKind::kPassive, true},
            false);
    }
  }

  OracleResult result;
  std::optional<Config> goal;
  while (!queue.empty()) {
    auto [cost, cfg] = queue.front();
    queue.pop_front();
    auto it = table.find(cfg);
    if (it == table.end() || it->second.cost != cost) continue;  // stale entry
    const auto& [node, proto, stack] = cfg;
    if (node == net.destination && stack.empty()) {
      goal = cfg;
      break;
    }
    auto lo = std::lower_bound(net.links.begin(), net.links.end(),
                               std::pair<NodeId, NodeId>{node, 0});
    for (auto link = lo; link != net.links.end() && link->first == node; ++link) {
      NodeId w = link->second;
      if (w == net.source) continue;
      for (const auto& fn : net.functions[node]) {
        ProtocolId out_proto;
        std::vector<ProtocolId> out_stack = stack;
        if (fn.kind == FunctionKind::kPassive) {
          if (fn.a != proto) continue;
          out_proto = proto;
        } else if (fn.kind == FunctionKind::kEncap) {
          if (fn.a != proto) continue;
          if (stack.size() >= stack_bound) {
            blocked = true;
            continue;
          }
          out_stack.insert(out_stack.begin(), proto);
          out_proto = fn.b;
        } else {
          if (fn.b != proto) continue;  // decap consumes the received protocol
          if (stack.empty() || stack.front() != fn.a) continue;
          out_stack.erase(out_stack.begin());
          out_proto = fn.a;
        }
        if (!caps[w].in.contains(out_proto)) continue;
        std::uint64_t step = count_hops || fn.kind != FunctionKind::kPassive ? 1 : 0;
        relax({w, out_proto, std::move(out_stack)},
              {cost + step, cfg, out_proto, fn.kind, false}, step == 0);
      }
    }
  }

  if (goal) {
    result.cost = table.at(*goal).cost;
    // walk parents, then mark each link barred when its receiver decapsulates
    std::vector<std::pair<NodeId, std::pair<ProtocolId, FunctionKind>>> rev;
    for (Config at = *goal;;) {
      const Entry& e = table.at(at);
      rev.push_back({std::get<0>(at), {e.emitted, e.kind}});
      if (e.initial) break;
      at = *e.parent;
    }
    result.nodes.push_back(net.source);
    for (auto it2 = rev.rbegin(); it2 != rev.rend(); ++it2) result.nodes.push_back(it2->first);
    for (std::size_t i = rev.size(); i-- > 0;) {
      bool receiver_decaps = i > 0 && rev[i - 1].second.second == FunctionKind::kDecap;
      result.trace.push_back({rev[i].second.first, receiver_decaps});
    }
  }
  // pushes cost one unit each, so depth beyond the bound cannot beat a
  // result that stayed within it
  result.truncated = blocked && !(result.cost && *result.cost <= stack_bound);
  return result;
}

/// Decides whether any feasible path exists, with no depth bound. A mode is
/// a node plus the protocol it just received; balanced(m, m') holds when a
/// walk can carry m to m' while keeping the nesting level it started at
/// and never dipping below it. Every walk at one level decomposes into
/// passive steps and fully wrapped encapsulation episodes, so two rules
/// reach the fixpoint. Useful as a second opinion when the depth-bounded
/// search cannot settle an absence.
inline bool has_feasible_path(const Network& net) {
  auto caps = all_capabilities(net);
  const std::size_t na = net.protocols.size();
  const std::size_t n = net.nodes.size() * na;
  auto mode = [&](NodeId u, ProtocolId x) { return u * na + x; };
  auto valid = [&](NodeId u, ProtocolId x) { return u != net.source && caps[u].in.contains(x); };

  std::vector<std::vector<char>> balanced(n, std::vector<char>(n, 0));
  for (NodeId u = 0; u < net.nodes.size(); ++u)
    for (ProtocolId x = 0; x < na; ++x)
      if (valid(u, x)) balanced[mode(u, x)][mode(u, x)] = 1;

  auto links_from = [&](NodeId u) {
    return std::lower_bound(net.links.begin(), net.links.end(), std::pair<NodeId, NodeId>{u, 0});
  };

  for (bool changed = true; changed;) {
    changed = false;
    auto extend = [&](std::size_t from, std::size_t to) {
      if (!balanced[from][to]) {
        balanced[from][to] = 1;
        changed = true;
      }
    };
    for (std::size_t m = 0; m < n; ++m) {
      for (NodeId v = 0; v < net.nodes.size(); ++v) {
        for (ProtocolId a = 0; a < na; ++a) {
          if (!balanced[m][mode(v, a)]) continue;
          for (const auto& fn : net.functions[v]) {
            if (fn.kind == FunctionKind::kPassive && fn.a == a) {
              for (auto it = links_from(v); it != net.links.end() && it->first == v; ++it)
                if (valid(it->second, a)) extend(m, mode(it->second, a));
            } else if (fn.kind == FunctionKind::kEncap && fn.a == a) {
              for (auto it = links_from(v); it != net.links.end() && it->first == v; ++it) {
                if (!valid(it->second, fn.b)) continue;
                std::size_t inner = mode(it->second, fn.b);
                for (NodeId t = 0; t < net.nodes.size(); ++t) {
                  for (ProtocolId c = 0; c < na; ++c) {
                    if (!balanced[inner][mode(t, c)]) continue;
                    // closing the wrap: t pops the pushed protocol back out
                    if (!std::binary_search(net.functions[t].begin(), net.functions[t].end(),
                                            decap(a, c)))
                      continue;
                    for (auto jt = links_from(t); jt != net.links.end() && jt->first == t; ++jt)
                      if (valid(jt->second, a)) extend(m, mode(jt->second, a));
                  }
                }
              }
            }
          }
        }
      }
    }
  }

  for (const auto& [u, v] : net.links) {
    if (u != net.source || v == net.source) continue;
    for (ProtocolId x = 0; x < na; ++x) {
      if (!caps[net.source].out.contains(x) || !valid(v, x)) continue;
      for (ProtocolId y = 0; y < na; ++y)
        if (balanced[mode(v, x)][mode(net.destination, y)]) return true;
    }
  }
  return false;
}

}  // namespace mlpath
