#pragma once

// Push-down automaton view of a network. States pair a node with the
// protocol it just received; the stack records the protocols currently
// nested. Encapsulation pushes, decapsulation pops, passive forwarding
// leaves the stack alone. The transformed automaton adds indexed symbols
// that bypass runs of passive transitions so that word length counts
// adaptations instead of hops.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "mlpath/network.hpp"

namespace mlpath {

/// Terminal symbol. Index k stands for k passive forwardings folded into
/// one step; index 1 is the plain symbol. Barred follows the trace meaning.
struct InputSymbol {
  ProtocolId protocol{};
  bool barred = false;
  std::uint32_t index = 1;
  auto operator<=>(const InputSymbol&) const = default;
};

using Word = std::vector<InputSymbol>;

inline InputSymbol to_input_symbol(LinkSymbol s) { return {s.protocol, s.barred, 1}; }
inline LinkSymbol to_link_symbol(InputSymbol s) {
  assert(s.index == 1);
  return {s.protocol, s.barred};
}

/// Stack alphabet: the bottom marker plus one symbol per protocol.
struct StackSymbol {
  std::uint32_t code = 0;
  static StackSymbol bottom() { return {}; }
  static StackSymbol proto(ProtocolId p) { return {p + 1}; }
  bool is_bottom() const { return code == 0; }
  ProtocolId protocol() const { return code - 1; }
  auto operator<=>(const StackSymbol&) const = default;
};

struct PdaState {
  enum Kind : std::uint8_t { kStart, kNode, kFinal };
  Kind kind = kStart;
  NodeId node = 0;
  ProtocolId protocol = 0;
  auto operator<=>(const PdaState&) const = default;
};

/// push lists the symbols top first; empty push is a pop.
struct PdaTransition {
  std::uint32_t from = 0;
  std::optional<InputSymbol> input;  // nullopt reads nothing
  StackSymbol pop;
  std::vector<StackSymbol> push;
  std::uint32_t to = 0;
  auto operator<=>(const PdaTransition&) const = default;
};

struct Pda {
  std::vector<PdaState> states;  // sorted; vector position is the state id
  std::uint32_t start = 0;
  std::uint32_t final_state = 0;
  std::vector<InputSymbol> input_alphabet;  // sorted, unique
  std::vector<StackSymbol> stack_alphabet;  // bottom first, then protocols
  std::set<PdaTransition> transitions;
  std::vector<std::string> node_names;  // copies, keep exports self-contained
  std::vector<std::string> protocol_names;

  std::optional<std::uint32_t> state_index(NodeId u, ProtocolId x) const {
    PdaState key{PdaState::kNode, u, x};
    auto it = std::lower_bound(states.begin(), states.end(), key);
    if (it == states.end() || *it != key) return std::nullopt;
    return static_cast<std::uint32_t>(it - states.begin());
  }

  std::string state_name(std::uint32_t i) const {
    const PdaState& s = states.at(i);
    if (s.kind == PdaState::kNode) return node_names[s.node] + "_" + protocol_names[s.protocol];
    return node_names[s.node] + "_A";
  }
};

inline std::string render_input_symbol(const std::vector<std::string>& protocol_names,
                                       InputSymbol s) {
  std::string out = protocol_names.at(s.protocol);
  if (s.barred) out += "\xCC\x84";
  if (s.index > 1) detail::append_subscript(out, s.index);
  return out;
}

inline std::string render_word(const std::vector<std::string>& protocol_names, const Word& word) {
  std::string out;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += ' ';
    out += render_input_symbol(protocol_names, word[i]);
  }
  return out;
}

/// Builds the automaton recognizing exactly the traces of feasible paths.
/// States exist for every node but the source and every protocol the node
/// can receive; the source contributes a lone start state wired by
/// epsilon transitions, the destination an extra final state reached by
/// popping the bottom marker.
inline Pda build_pda(const Network& net) {
  Pda pda;
  pda.node_names = net.nodes;
  pda.protocol_names = net.protocols;
  auto caps = all_capabilities(net);

  pda.states.push_back({PdaState::kStart, net.source, 0});
  for (NodeId u = 0; u < net.nodes.size(); ++u) {
    if (u == net.source) continue;
    for (ProtocolId x = 0; x < net.protocols.size(); ++x)
      if (caps[u].in.contains(x)) pda.states.push_back({PdaState::kNode, u, x});
  }
  pda.states.push_back({PdaState::kFinal, net.destination, 0});
  pda.start = 0;
  pda.final_state = static_cast<std::uint32_t>(pda.states.size() - 1);

  pda.stack_alphabet.push_back(StackSymbol::bottom());
  for (ProtocolId p = 0; p < net.protocols.size(); ++p)
    pda.stack_alphabet.push_back(StackSymbol::proto(p));
  for (ProtocolId p = 0; p < net.protocols.size(); ++p) {
    pda.input_alphabet.push_back({p, false, 1});
    pda.input_alphabet.push_back({p, true, 1});
  }
  std::sort(pda.input_alphabet.begin(), pda.input_alphabet.end());

  const StackSymbol bottom = StackSymbol::bottom();
  for (const auto& [u, v] : net.links) {
    if (u == net.source) {
      if (v == net.source) continue;
      for (ProtocolId x = 0; x < net.protocols.size(); ++x) {
        if (!caps[net.source].out.contains(x)) continue;
        if (auto to = pda.state_index(v, x))
          pda.transitions.insert({pda.start, std::nullopt, bottom, {bottom}, *to});
      }
      continue;
    }
    if (v == net.source) continue;  // no states exist for the source
    for (const auto& fn : net.functions[u]) {
      if (fn.kind == FunctionKind::kPassive) {
        ProtocolId x = fn.a;
        auto from = pda.state_index(u, x);
        auto to = pda.state_index(v, x);
        if (!from || !to) continue;
        for (StackSymbol alpha : pda.stack_alphabet) {
          if (alpha == StackSymbol::proto(x)) continue;
          pda.transitions.insert({*from, InputSymbol{x, false, 1}, alpha, {alpha}, *to});
        }
      } else if (fn.kind == FunctionKind::kEncap) {
        ProtocolId x = fn.a, y = fn.b;
        auto from = pda.state_index(u, x);
        auto to = pda.state_index(v, y);
        if (!from || !to) continue;
        for (StackSymbol alpha : pda.stack_alphabet) {
          if (alpha == StackSymbol::proto(x)) continue;
          pda.transitions.insert(
              {*from, InputSymbol{x, false, 1}, alpha, {StackSymbol::proto(x), alpha}, *to});
        }
      } else {
        ProtocolId y = fn.a, x = fn.b;  // receive x barred, pop y, emit y
        auto from = pda.state_index(u, x);
        auto to = pda.state_index(v, y);
        if (!from || !to) continue;
        pda.transitions.insert({*from, InputSymbol{x, true, 1}, StackSymbol::proto(y), {}, *to});
      }
    }
  }
  for (ProtocolId x = 0; x < net.protocols.size(); ++x) {
    if (!caps[net.destination].in.contains(x)) continue;
    auto from = pda.state_index(net.destination, x);
    if (from) pda.transitions.insert({*from, InputSymbol{x, false, 1}, bottom, {}, pda.final_state});
  }
  return pda;
}

/// Accepting run exists: word fully read, final state, empty stack.
inline bool accepts(const Pda& pda, const Word& word) {
  std::vector<std::vector<const PdaTransition*>> by_from(pda.states.size());
  for (const auto& t : pda.transitions) by_from[t.from].push_back(&t);

  std::set<std::tuple<std::size_t, std::uint32_t, std::vector<StackSymbol>>> seen;
  std::vector<StackSymbol> stack{StackSymbol::bottom()};

  std::function<bool(std::size_t, std::uint32_t)> run = [&](std::size_t pos,
                                                            std::uint32_t state) -> bool {
    if (pos == word.size() && state == pda.final_state && stack.empty()) return true;
    if (!seen.insert({pos, state, stack}).second) return false;
    for (const PdaTransition* t : by_from[state]) {
      std::size_t next = pos;
      if (t->input) {
        if (pos == word.size() || word[pos] != *t->input) continue;
        next = pos + 1;
      }
      if (stack.empty() || stack.back() != t->pop) continue;
      stack.pop_back();
      for (auto it = t->push.rbegin(); it != t->push.rend(); ++it) stack.push_back(*it);
      if (run(next, t->to)) return true;
      for (std::size_t k = 0; k < t->push.size(); ++k) stack.pop_back();
      stack.push_back(t->pop);
    }
    return false;
  };
  return run(0, pda.start);
}

inline constexpr std::uint64_t kUnreachable = ~0ull;

/// All-pairs distances inside the passive sub-automaton of one protocol:
/// vertices are the states carrying x, edges the passive transitions
/// between them, every edge counting one hop.
struct PassiveDistances {
  std::vector<std::uint32_t> members;           // ascending state indices
  std::vector<std::vector<std::uint64_t>> dist;  // kUnreachable if disconnected

  std::uint64_t between(std::uint32_t from_state, std::uint32_t to_state) const {
    auto idx = [&](std::uint32_t s) -> std::optional<std::size_t> {
      auto it = std::lower_bound(members.begin(), members.end(), s);
      if (it == members.end() || *it != s) return std::nullopt;
      return static_cast<std::size_t>(it - members.begin());
    };
    auto i = idx(from_state), j = idx(to_state);
    if (!i || !j) return kUnreachable;
    return dist[*i][*j];
  }
};

inline PassiveDistances passive_distances(const Pda& pda, ProtocolId x) {
  PassiveDistances out;
  for (std::uint32_t i = 0; i < pda.states.size(); ++i)
    if (pda.states[i].kind == PdaState::kNode && pda.states[i].protocol == x)
      out.members.push_back(i);

  std::size_t n = out.members.size();
  out.dist.assign(n, std::vector<std::uint64_t>(n, kUnreachable));
  auto pos = [&](std::uint32_t s) -> std::optional<std::size_t> {
    auto it = std::lower_bound(out.members.begin(), out.members.end(), s);
    if (it == out.members.end() || *it != s) return std::nullopt;
    return static_cast<std::size_t>(it - out.members.begin());
  };
  for (std::size_t i = 0; i < n; ++i) out.dist[i][i] = 0;
  for (const auto& t : pda.transitions) {
    if (t.push.size() != 1 || t.push[0] != t.pop) continue;  // passive shape only
    auto i = pos(t.from), j = pos(t.to);
    if (i && j) out.dist[*i][*j] = std::min<std::uint64_t>(out.dist[*i][*j], 1);
  }
  // Floyd-Warshall
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) {
      if (out.dist[i][k] == kUnreachable) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (out.dist[k][j] == kUnreachable) continue;
        std::uint64_t via = out.dist[i][k] + out.dist[k][j];
        if (via < out.dist[i][j]) out.dist[i][j] = via;
      }
    }
  return out;
}

/// Adds, for every pair of same-protocol states at finite passive distance d,
/// indexed copies (index d+1) of the successor's outgoing transitions, so a
/// passive run plus its closing step collapses into one symbol. The original
/// transitions all remain.
inline Pda transform_pda(const Pda& pda) {
  Pda out = pda;
  std::set<InputSymbol> alphabet(pda.input_alphabet.begin(), pda.input_alphabet.end());

  std::vector<std::vector<const PdaTransition*>> by_from(pda.states.size());
  for (const auto& t : pda.transitions) by_from[t.from].push_back(&t);

  for (ProtocolId x = 0; x < pda.protocol_names.size(); ++x) {
    auto pd = passive_distances(pda, x);
    for (std::size_t i = 0; i < pd.members.size(); ++i) {
      for (std::size_t j = 0; j < pd.members.size(); ++j) {
        if (pd.dist[i][j] == kUnreachable) continue;
        auto idx = static_cast<std::uint32_t>(pd.dist[i][j] + 1);
        alphabet.insert({x, false, idx});
        alphabet.insert({x, true, idx});
        for (const PdaTransition* t : by_from[pd.members[j]]) {
          if (t->to == pd.members[i]) continue;
          assert(t->input && t->input->protocol == x && t->input->index == 1);
          PdaTransition copy = *t;
          copy.from = pd.members[i];
          copy.input = InputSymbol{x, t->input->barred, idx};
          out.transitions.insert(copy);
        }
      }
    }
  }
  out.input_alphabet.assign(alphabet.begin(), alphabet.end());
  return out;
}

/// Expands indexed symbols back into plain runs: a_k becomes k copies of a,
/// a-barred_k becomes k-1 copies of a and one barred a.
inline Trace expand_f(const Word& word) {
  Trace out;
  for (const auto& s : word) {
    std::uint32_t plains = s.barred ? s.index - 1 : s.index;
    for (std::uint32_t k = 0; k < plains; ++k) out.push_back({s.protocol, false});
    if (s.barred) out.push_back({s.protocol, true});
  }
  return out;
}

/// Minimal-length preimage under expand_f: maximal runs of one plain
/// protocol fold into a single indexed symbol, absorbing an immediately
/// following barred occurrence of the same protocol.
inline Word compress_g(const Trace& trace) {
  Word out;
  std::size_t i = 0;
  while (i < trace.size()) {
    if (trace[i].barred) {
      out.push_back({trace[i].protocol, true, 1});
      ++i;
      continue;
    }
    ProtocolId p = trace[i].protocol;
    std::size_t j = i;
    while (j < trace.size() && !trace[j].barred && trace[j].protocol == p) ++j;
    auto run = static_cast<std::uint32_t>(j - i);
    if (j < trace.size() && trace[j].barred && trace[j].protocol == p) {
      out.push_back({p, true, run + 1});
      i = j + 1;
    } else {
      out.push_back({p, false, run});
      i = j;
    }
  }
  return out;
}

inline std::string render_stack_symbol(const Pda& pda, StackSymbol s) {
  if (s.is_bottom()) return "Z\xE2\x82\x80";
  return pda.protocol_names.at(s.protocol());
}

inline std::string render_push(const Pda& pda, const std::vector<StackSymbol>& push) {
  if (push.empty()) return "\xE2\x88\x85";
  std::string out;
  for (StackSymbol s : push) out += render_stack_symbol(pda, s);
  return out;
}

inline std::string render_transition(const Pda& pda, const PdaTransition& t) {
  std::string out = "(" + pda.state_name(t.from) + ", ";
  out += t.input ? render_input_symbol(pda.protocol_names, *t.input) : "\xCE\xB5";
  out += ", " + render_stack_symbol(pda, t.pop) + ", " + render_push(pda, t.push) + ", " +
         pda.state_name(t.to) + ")";
  return out;
}

inline std::string pda_to_text(const Pda& pda) {
  std::string out = "states:";
  for (std::uint32_t i = 0; i < pda.states.size(); ++i)
    out += (i ? ", " : " ") + pda.state_name(i);
  out += "\ninput alphabet:";
  for (std::size_t i = 0; i < pda.input_alphabet.size(); ++i)
    out += (i ? ", " : " ") + render_input_symbol(pda.protocol_names, pda.input_alphabet[i]);
  out += "\nstack alphabet:";
  for (std::size_t i = 0; i < pda.stack_alphabet.size(); ++i)
    out += (i ? ", " : " ") + render_stack_symbol(pda, pda.stack_alphabet[i]);
  out += "\nstart: " + pda.state_name(pda.start);
  out += "\nfinal: " + pda.state_name(pda.final_state);
  out += "\ntransitions:\n";
  for (const auto& t : pda.transitions) out += render_transition(pda, t) + "\n";
  return out;
}

inline std::string pda_to_dot(const Pda& pda) {
  std::string out = "digraph pda {\n  rankdir=LR;\n";
  for (std::uint32_t i = 0; i < pda.states.size(); ++i) {
    out += "  \"" + pda.state_name(i) + "\"";
    if (i == pda.final_state) out += " [shape=doublecircle]";
    else if (i == pda.start) out += " [shape=box]";
    else out += " [shape=circle]";
    out += ";\n";
  }
  for (const auto& t : pda.transitions) {
    std::string label = t.input ? render_input_symbol(pda.protocol_names, *t.input) : "\xCE\xB5";
    label += ", " + render_stack_symbol(pda, t.pop) + "/" + render_push(pda, t.push);
    out += "  \"" + pda.state_name(t.from) + "\" -> \"" + pda.state_name(t.to) + "\" [label=\"" +
           label + "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace mlpath
