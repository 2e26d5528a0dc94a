#pragma once

// Multi-layer network model. Nodes carry adaptation functions (encapsulate,
// decapsulate, or passively forward a protocol), links are directed, and a
// path is feasible only if the protocol nesting along its trace closes like
// a well-parenthesized word.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mlpath {

using NodeId = std::uint32_t;
using ProtocolId = std::uint32_t;

/// One element of a trace: the protocol carried by a link. Barred means the
/// protocol's span ends at the receiving node, i.e. that node decapsulates.
struct LinkSymbol {
  ProtocolId protocol{};
  bool barred = false;
  auto operator<=>(const LinkSymbol&) const = default;
};

using Trace = std::vector<LinkSymbol>;

enum class FunctionKind : std::uint8_t { kEncap, kPassive, kDecap };

/// Encap(a,b): receive a, nest it inside b, emit b (a != b).
/// Passive(a): forward a untouched (stored with a == b).
/// Decap(a,b): receive b barred, un-nest a, emit a (a != b).
struct AdaptationFunction {
  FunctionKind kind{};
  ProtocolId a{};
  ProtocolId b{};
  auto operator<=>(const AdaptationFunction&) const = default;
};

inline AdaptationFunction encap(ProtocolId a, ProtocolId b) {
  return {FunctionKind::kEncap, a, b};
}
inline AdaptationFunction passive(ProtocolId p) {
  return {FunctionKind::kPassive, p, p};
}
inline AdaptationFunction decap(ProtocolId a, ProtocolId b) {
  return {FunctionKind::kDecap, a, b};
}

/// Directed graph with per-node adaptation functions and fixed endpoints.
/// All vectors are sorted and duplicate-free; ids index into them.
struct Network {
  std::vector<std::string> protocols;
  std::vector<std::string> nodes;
  std::vector<std::vector<AdaptationFunction>> functions;  // per node
  std::vector<std::pair<NodeId, NodeId>> links;
  NodeId source{};
  NodeId destination{};

  std::optional<ProtocolId> protocol_id(std::string_view name) const {
    auto it = std::lower_bound(protocols.begin(), protocols.end(), name);
    if (it == protocols.end() || *it != name) return std::nullopt;
    return static_cast<ProtocolId>(it - protocols.begin());
  }

  std::optional<NodeId> node_id(std::string_view name) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), name);
    if (it == nodes.end() || *it != name) return std::nullopt;
    return static_cast<NodeId>(it - nodes.begin());
  }

  bool has_link(NodeId from, NodeId to) const {
    return std::binary_search(links.begin(), links.end(), std::make_pair(from, to));
  }
};

/// Throws std::invalid_argument if the structure breaks the model invariants.
inline void validate(const Network& net) {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (!std::is_sorted(net.protocols.begin(), net.protocols.end()) ||
      std::adjacent_find(net.protocols.begin(), net.protocols.end()) != net.protocols.end())
    fail("protocols must be sorted and unique");
  if (!std::is_sorted(net.nodes.begin(), net.nodes.end()) ||
      std::adjacent_find(net.nodes.begin(), net.nodes.end()) != net.nodes.end())
    fail("nodes must be sorted and unique");
  if (net.functions.size() != net.nodes.size()) fail("one function set per node required");
  if (net.nodes.size() < 2) fail("at least source and destination required");
  if (net.source >= net.nodes.size() || net.destination >= net.nodes.size())
    fail("endpoint id out of range");
  if (net.source == net.destination) fail("source equals destination");
  if (!std::is_sorted(net.links.begin(), net.links.end()) ||
      std::adjacent_find(net.links.begin(), net.links.end()) != net.links.end())
    fail("links must be sorted and free of parallel duplicates");
  for (const auto& [from, to] : net.links)
    if (from >= net.nodes.size() || to >= net.nodes.size()) fail("link endpoint out of range");
  for (const auto& fns : net.functions) {
    if (!std::is_sorted(fns.begin(), fns.end()) ||
        std::adjacent_find(fns.begin(), fns.end()) != fns.end())
      fail("node functions must be sorted and unique");
    for (const auto& fn : fns) {
      if (fn.a >= net.protocols.size() || fn.b >= net.protocols.size())
        fail("function references undeclared protocol");
      if (fn.kind == FunctionKind::kPassive && fn.a != fn.b)
        fail("passive function must keep its protocol");
      if (fn.kind != FunctionKind::kPassive && fn.a == fn.b)
        fail("self-encapsulation is not allowed");
    }
  }
}

/// Fixed-size protocol set backed by one bit per declared protocol.
struct ProtocolSet {
  std::vector<bool> bits;

  explicit ProtocolSet(std::size_t universe = 0) : bits(universe, false) {}
  bool contains(ProtocolId p) const { return p < bits.size() && bits[p]; }
  void insert(ProtocolId p) { bits[p] = true; }
  bool empty() const { return std::none_of(bits.begin(), bits.end(), [](bool b) { return b; }); }

  std::vector<ProtocolId> to_vector() const {
    std::vector<ProtocolId> out;
    for (ProtocolId p = 0; p < bits.size(); ++p)
      if (bits[p]) out.push_back(p);
    return out;
  }
};

/// In: protocols a node can receive. Out: protocols it can emit.
/// Pass: protocols it forwards untouched.
struct NodeCapabilities {
  ProtocolSet in, out, pass;
};

inline NodeCapabilities capabilities(const Network& net, NodeId u) {
  NodeCapabilities caps{ProtocolSet(net.protocols.size()), ProtocolSet(net.protocols.size()),
                        ProtocolSet(net.protocols.size())};
  for (const auto& fn : net.functions.at(u)) {
    switch (fn.kind) {
      case FunctionKind::kEncap:
        caps.in.insert(fn.a);
        caps.out.insert(fn.b);
        break;
      case FunctionKind::kPassive:
        caps.in.insert(fn.a);
        caps.out.insert(fn.a);
        caps.pass.insert(fn.a);
        break;
      case FunctionKind::kDecap:
        // the outer protocol arrives, the nested one leaves
        caps.in.insert(fn.b);
        caps.out.insert(fn.a);
        break;
    }
  }
  return caps;
}

inline std::vector<NodeCapabilities> all_capabilities(const Network& net) {
  std::vector<NodeCapabilities> out;
  out.reserve(net.nodes.size());
  for (NodeId u = 0; u < net.nodes.size(); ++u) out.push_back(capabilities(net, u));
  return out;
}

/// The adaptation a node must apply between its incoming and outgoing symbol,
/// or nullopt when no rule matches (barred followed by the same protocol).
inline std::optional<AdaptationFunction> implied_function(LinkSymbol incoming,
                                                          LinkSymbol outgoing) {
  if (!incoming.barred) {
    if (incoming.protocol == outgoing.protocol) return passive(incoming.protocol);
    return encap(incoming.protocol, outgoing.protocol);
  }
  if (outgoing.protocol == incoming.protocol) return std::nullopt;
  return decap(outgoing.protocol, incoming.protocol);
}

/// Functions applied by the intermediate nodes of a trace, in order.
/// Throws std::invalid_argument when a symbol pair matches no rule.
inline std::vector<AdaptationFunction> transition_sequence(const Trace& trace) {
  std::vector<AdaptationFunction> seq;
  if (trace.empty()) return seq;
  seq.reserve(trace.size() - 1);
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    auto fn = implied_function(trace[i], trace[i + 1]);
    if (!fn) throw std::invalid_argument("barred symbol followed by its own protocol");
    seq.push_back(*fn);
  }
  return seq;
}

/// Stack check over encapsulation pairs. Passive entries are skipped, so the
/// caller may pass a full transition sequence unfiltered.
inline bool is_valid_sequence(const std::vector<AdaptationFunction>& seq) {
  std::vector<std::pair<ProtocolId, ProtocolId>> stack;
  for (const auto& fn : seq) {
    switch (fn.kind) {
      case FunctionKind::kPassive:
        break;
      case FunctionKind::kEncap:
        stack.emplace_back(fn.a, fn.b);
        break;
      case FunctionKind::kDecap:
        if (stack.empty() || stack.back() != std::make_pair(fn.a, fn.b)) return false;
        stack.pop_back();
        break;
    }
  }
  return stack.empty();
}

enum class PathError : std::uint8_t {
  kNone,
  kShape,
  kEndpoints,
  kMissingLink,
  kSourceRevisited,
  kTrailingBarred,
  kProtocolMismatch,
  kNoRuleForPair,
  kFunctionMissing,
  kParenthesization,
};

struct PathVerdict {
  bool ok = false;
  PathError error = PathError::kNone;
  std::string detail;
};

/// Full feasibility check of a candidate path: graph path from source to
/// destination, per-node function availability, link protocol support, and
/// valid nesting. The source may appear only in first position; the
/// automaton-based pipeline cannot route through it, so neither does this
/// check.
inline PathVerdict check_path(const Network& net, const std::vector<NodeId>& nodes,
                              const Trace& trace) {
  auto bad = [](PathError e, std::string detail) {
    return PathVerdict{false, e, std::move(detail)};
  };
  if (nodes.size() < 2 || trace.size() + 1 != nodes.size())
    return bad(PathError::kShape, "node and symbol counts do not alternate");
  for (NodeId u : nodes)
    if (u >= net.nodes.size()) return bad(PathError::kShape, "unknown node id");
  if (nodes.front() != net.source || nodes.back() != net.destination)
    return bad(PathError::kEndpoints, "path must run from source to destination");
  for (std::size_t i = 1; i < nodes.size(); ++i)
    if (nodes[i] == net.source) return bad(PathError::kSourceRevisited, "source revisited");
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    if (!net.has_link(nodes[i], nodes[i + 1]))
      return bad(PathError::kMissingLink,
                 "missing link " + net.nodes[nodes[i]] + " -> " + net.nodes[nodes[i + 1]]);
  if (trace.back().barred)
    return bad(PathError::kTrailingBarred, "barred symbol on the final link");

  auto caps = all_capabilities(net);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    ProtocolId p = trace[i].protocol;
    if (p >= net.protocols.size()) return bad(PathError::kShape, "unknown protocol id");
    if (!caps[nodes[i]].out.contains(p) || !caps[nodes[i + 1]].in.contains(p))
      return bad(PathError::kProtocolMismatch,
                 "protocol " + net.protocols[p] + " not supported across link " +
                     net.nodes[nodes[i]] + " -> " + net.nodes[nodes[i + 1]]);
  }

  std::vector<AdaptationFunction> seq;
  for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
    auto fn = implied_function(trace[i], trace[i + 1]);
    if (!fn) return bad(PathError::kNoRuleForPair, "no adaptation rule for symbol pair");
    seq.push_back(*fn);
  }
  // nesting first: an unclosed encapsulation is the structural fault even
  // when the nodes also lack the functions the trace would need
  if (!is_valid_sequence(seq))
    return bad(PathError::kParenthesization, "invalid parenthesization");
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto& available = net.functions[nodes[i + 1]];
    if (!std::binary_search(available.begin(), available.end(), seq[i]))
      return bad(PathError::kFunctionMissing,
                 "function not available at node " + net.nodes[nodes[i + 1]]);
  }
  return PathVerdict{true, PathError::kNone, ""};
}

inline bool is_feasible_path(const Network& net, const std::vector<NodeId>& nodes,
                             const Trace& trace) {
  return check_path(net, nodes, trace).ok;
}

/// A verified path together with its two costs.
struct FeasiblePath {
  std::vector<NodeId> nodes;
  Trace symbols;
  std::uint64_t hops = 0;
  std::uint64_t adaptations = 0;
};

/// Throws std::logic_error when the candidate is not feasible.
inline FeasiblePath make_feasible_path(const Network& net, std::vector<NodeId> nodes,
                                       Trace trace) {
  auto verdict = check_path(net, nodes, trace);
  if (!verdict.ok) throw std::logic_error("infeasible path: " + verdict.detail);
  FeasiblePath path;
  path.hops = trace.size();
  for (const auto& fn : transition_sequence(trace))
    if (fn.kind != FunctionKind::kPassive) ++path.adaptations;
  path.nodes = std::move(nodes);
  path.symbols = std::move(trace);
  return path;
}

namespace detail {

inline void append_subscript(std::string& out, std::uint32_t value) {
  // U+2080..U+2089
  std::string digits = std::to_string(value);
  for (char d : digits) {
    out += "\xE2\x82";
    out += static_cast<char>(0x80 + (d - '0'));
  }
}

}  // namespace detail

/// "a" or "ā" (combining macron) for the barred form.
inline std::string render_link_symbol(const Network& net, LinkSymbol s) {
  std::string out = net.protocols.at(s.protocol);
  if (s.barred) out += "\xCC\x84";
  return out;
}

inline std::string render_trace(const Network& net, const Trace& trace) {
  std::string out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (i) out += ' ';
    out += render_link_symbol(net, trace[i]);
  }
  return out;
}

}  // namespace mlpath
