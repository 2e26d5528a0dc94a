#pragma once

// Document formats. Topologies, solver results, and path documents are JSON;
// field names and layouts are part of the tool's contract and kept stable.

#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mlpath/network.hpp"

namespace mlpath {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' && c != '-')
      return false;
  return true;
}

inline void require_fields(const nlohmann::json& obj, std::string_view where,
                           std::initializer_list<std::string_view> required,
                           std::initializer_list<std::string_view> optional = {}) {
  if (!obj.is_object()) throw ParseError(std::string(where) + " must be an object");
  for (auto field : required)
    if (!obj.contains(field)) throw ParseError(std::string(where) + " misses field '" +
                                               std::string(field) + "'");
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    auto known = [&](std::initializer_list<std::string_view> list) {
      for (auto f : list)
        if (it.key() == f) return true;
      return false;
    };
    if (!known(required) && !known(optional))
      throw ParseError(std::string(where) + " has unknown field '" + it.key() + "'");
  }
}

inline std::string get_string(const nlohmann::json& v, std::string_view where) {
  if (!v.is_string()) throw ParseError(std::string(where) + " must be a string");
  return v.get<std::string>();
}

}  // namespace detail

/// Topology document:
///   { "protocols": [...], "nodes": [{"id":..., "functions":[...]}, ...],
///     "links": [[from,to], ...], "source":..., "destination":... }
/// A function is {"kind":"encap"|"passive"|"decap","a":...,"b":...}; "b" is
/// absent for passive. Unknown fields are rejected everywhere.
inline Network parse_network(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("topology is not valid JSON: ") + e.what());
  }
  detail::require_fields(doc, "topology", {"protocols", "nodes", "links", "source", "destination"});

  Network net;
  if (!doc["protocols"].is_array()) throw ParseError("'protocols' must be an array");
  for (const auto& p : doc["protocols"]) {
    auto name = detail::get_string(p, "protocol name");
    if (!detail::valid_identifier(name))
      throw ParseError("protocol name '" + name + "' is not a plain identifier");
    net.protocols.push_back(name);
  }
  std::sort(net.protocols.begin(), net.protocols.end());
  if (std::adjacent_find(net.protocols.begin(), net.protocols.end()) != net.protocols.end())
    throw ParseError("duplicate protocol name");

  if (!doc["nodes"].is_array()) throw ParseError("'nodes' must be an array");
  std::vector<std::pair<std::string, const nlohmann::json*>> declared;
  for (const auto& n : doc["nodes"]) {
    detail::require_fields(n, "node", {"id", "functions"});
    auto id = detail::get_string(n["id"], "node id");
    if (!detail::valid_identifier(id))
      throw ParseError("node id '" + id + "' is not a plain identifier");
    declared.emplace_back(id, &n["functions"]);
    net.nodes.push_back(id);
  }
  std::sort(net.nodes.begin(), net.nodes.end());
  if (std::adjacent_find(net.nodes.begin(), net.nodes.end()) != net.nodes.end())
    throw ParseError("duplicate node id");

  auto proto_of = [&](const nlohmann::json& v, std::string_view where) {
    auto name = detail::get_string(v, where);
    auto id = net.protocol_id(name);
    if (!id) throw ParseError("unknown protocol '" + name + "'");
    return *id;
  };

  net.functions.assign(net.nodes.size(), {});
  for (const auto& [id, fns_json] : declared) {
    if (!fns_json->is_array()) throw ParseError("'functions' must be an array");
    auto& fns = net.functions[*net.node_id(id)];
    for (const auto& f : *fns_json) {
      auto kind = detail::get_string(f.is_object() && f.contains("kind") ? f["kind"] : nlohmann::json(),
                                     "function kind");
      AdaptationFunction fn;
      if (kind == "passive") {
        detail::require_fields(f, "passive function", {"kind", "a"});
        fn = passive(proto_of(f["a"], "function protocol"));
      } else if (kind == "encap" || kind == "decap") {
        detail::require_fields(f, "function", {"kind", "a", "b"});
        ProtocolId a = proto_of(f["a"], "function protocol");
        ProtocolId b = proto_of(f["b"], "function protocol");
        if (a == b) throw ParseError("self-encapsulation declared at node '" + id + "'");
        fn = kind == "encap" ? encap(a, b) : decap(a, b);
      } else {
        throw ParseError("unknown function kind '" + kind + "'");
      }
      fns.push_back(fn);
    }
    std::sort(fns.begin(), fns.end());
    fns.erase(std::unique(fns.begin(), fns.end()), fns.end());
  }

  auto node_of = [&](const nlohmann::json& v, std::string_view where) {
    auto name = detail::get_string(v, where);
    auto id = net.node_id(name);
    if (!id) throw ParseError("unknown node '" + name + "'");
    return *id;
  };
  if (!doc["links"].is_array()) throw ParseError("'links' must be an array");
  for (const auto& l : doc["links"]) {
    if (!l.is_array() || l.size() != 2) throw ParseError("each link must be a [from, to] pair");
    net.links.emplace_back(node_of(l[0], "link endpoint"), node_of(l[1], "link endpoint"));
  }
  std::sort(net.links.begin(), net.links.end());
  if (std::adjacent_find(net.links.begin(), net.links.end()) != net.links.end())
    throw ParseError("parallel links are not supported");

  net.source = node_of(doc["source"], "source");
  net.destination = node_of(doc["destination"], "destination");
  try {
    validate(net);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return net;
}

inline std::string function_kind_name(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::kEncap: return "encap";
    case FunctionKind::kPassive: return "passive";
    case FunctionKind::kDecap: return "decap";
  }
  return {};
}

/// Canonical serialization: everything sorted, stable field order.
inline std::string render_topology(const Network& net) {
  nlohmann::ordered_json doc;
  doc["protocols"] = net.protocols;
  doc["nodes"] = nlohmann::ordered_json::array();
  for (NodeId u = 0; u < net.nodes.size(); ++u) {
    nlohmann::ordered_json node;
    node["id"] = net.nodes[u];
    node["functions"] = nlohmann::ordered_json::array();
    for (const auto& fn : net.functions[u]) {
      nlohmann::ordered_json f;
      f["kind"] = function_kind_name(fn.kind);
      f["a"] = net.protocols[fn.a];
      if (fn.kind != FunctionKind::kPassive) f["b"] = net.protocols[fn.b];
      node["functions"].push_back(std::move(f));
    }
    doc["nodes"].push_back(std::move(node));
  }
  doc["links"] = nlohmann::ordered_json::array();
  for (const auto& [from, to] : net.links)
    doc["links"].push_back({net.nodes[from], net.nodes[to]});
  doc["source"] = net.nodes[net.source];
  doc["destination"] = net.nodes[net.destination];
  return doc.dump(2) + "\n";
}

/// Parses "a" / "ā" back into a link symbol.
inline LinkSymbol parse_link_symbol(const Network& net, std::string_view text) {
  LinkSymbol s;
  if (text.size() >= 2 && text.substr(text.size() - 2) == "\xCC\x84") {
    s.barred = true;
    text.remove_suffix(2);
  }
  auto id = net.protocol_id(text);
  if (!id) throw ParseError("unknown trace symbol '" + std::string(text) + "'");
  s.protocol = *id;
  return s;
}

struct PathDocument {
  std::vector<NodeId> nodes;
  Trace trace;
  std::optional<std::string> objective;
};

/// Accepts either a full solver result document or a bare {"path": [...]}
/// with nodes and symbols alternating.
inline PathDocument parse_path_document(const Network& net, const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("path document is not valid JSON: ") + e.what());
  }
  detail::require_fields(doc, "path document", {"path"},
                         {"objective", "word", "trace", "hops", "adaptations"});
  const auto& arr = doc["path"];
  if (!arr.is_array() || arr.size() < 3 || arr.size() % 2 == 0)
    throw ParseError("'path' must alternate nodes and symbols, so have odd length >= 3");
  PathDocument out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    auto item = detail::get_string(arr[i], "path item");
    if (i % 2 == 0) {
      auto id = net.node_id(item);
      if (!id) throw ParseError("unknown node '" + item + "' in path");
      out.nodes.push_back(*id);
    } else {
      out.trace.push_back(parse_link_symbol(net, item));
    }
  }
  if (doc.contains("objective")) out.objective = detail::get_string(doc["objective"], "objective");
  return out;
}

/// Result document, stable field order:
///   objective, word, trace, path, hops, adaptations.
inline std::string render_result_document(const Network& net, std::string_view objective,
                                          std::string_view word, const FeasiblePath& path) {
  nlohmann::ordered_json doc;
  doc["objective"] = std::string(objective);
  doc["word"] = std::string(word);
  doc["trace"] = render_trace(net, path.symbols);
  auto arr = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < path.nodes.size(); ++i) {
    arr.push_back(net.nodes[path.nodes[i]]);
    if (i < path.symbols.size()) arr.push_back(render_link_symbol(net, path.symbols[i]));
  }
  doc["path"] = std::move(arr);
  doc["hops"] = path.hops;
  doc["adaptations"] = path.adaptations;
  return doc.dump(2) + "\n";
}

}  // namespace mlpath
