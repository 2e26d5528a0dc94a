#pragma once

// Context-free view of the automaton, built with the classic triple
// construction: nonterminal [q alpha p] derives exactly the words the
// automaton can read going from state q to state p while consuming alpha
// off the stack. Shortest-word extraction then runs on the grammar.

#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlpath/pda.hpp"

namespace mlpath {

inline constexpr std::uint32_t kNoNonterminal = ~0u;
inline constexpr std::uint64_t kInfiniteLength = ~0ull;

/// The construction only ever emits right-hand sides of the shapes
/// B, x, xB, xBC, so one optional terminal plus two nonterminal slots
/// cover every production.
struct Production {
  std::uint32_t lhs = 0;
  std::optional<InputSymbol> term;
  std::uint32_t nt1 = kNoNonterminal;
  std::uint32_t nt2 = kNoNonterminal;
};

struct Cfg {
  std::uint32_t num_states = 0;
  std::uint32_t num_stack = 0;
  std::vector<Production> productions;  // emission order is significant
  std::vector<std::string> state_names;
  std::vector<std::string> stack_names;
  std::vector<std::string> protocol_names;

  // id 0 is the axiom; triples are packed (from, stack symbol, to)
  std::uint32_t axiom() const { return 0; }
  std::uint32_t triple_id(std::uint32_t from, StackSymbol sym, std::uint32_t to) const {
    return 1 + (from * num_stack + sym.code) * num_states + to;
  }
  std::uint32_t num_nonterminals() const {
    return 1 + num_states * num_states * num_stack;
  }
  std::string nonterminal_name(std::uint32_t id) const {
    if (id == 0) return "[S_G]";
    std::uint32_t rest = id - 1;
    std::uint32_t to = rest % num_states;
    rest /= num_states;
    std::uint32_t sym = rest % num_stack;
    std::uint32_t from = rest / num_stack;
    return "[" + state_names.at(from) + " " + stack_names.at(sym) + " " + state_names.at(to) + "]";
  }
};

/// Triple construction. The axiom derives [start Z0 q] for every state q;
/// each transition contributes productions for every completion of the
/// states it leaves unconstrained.
inline Cfg pda_to_cfg(const Pda& pda) {
  Cfg g;
  g.num_states = static_cast<std::uint32_t>(pda.states.size());
  g.num_stack = static_cast<std::uint32_t>(pda.stack_alphabet.size());
  for (std::uint32_t i = 0; i < g.num_states; ++i) g.state_names.push_back(pda.state_name(i));
  for (StackSymbol s : pda.stack_alphabet) g.stack_names.push_back(render_stack_symbol(pda, s));
  g.protocol_names = pda.protocol_names;

  const StackSymbol bottom = StackSymbol::bottom();
  for (std::uint32_t q = 0; q < g.num_states; ++q)
    g.productions.push_back({g.axiom(), std::nullopt, g.triple_id(pda.start, bottom, q)});

  for (const auto& t : pda.transitions) {
    if (t.push.empty()) {
      g.productions.push_back({g.triple_id(t.from, t.pop, t.to), t.input});
    } else if (t.push.size() == 1) {
      for (std::uint32_t w = 0; w < g.num_states; ++w)
        g.productions.push_back(
            {g.triple_id(t.from, t.pop, w), t.input, g.triple_id(t.to, t.push[0], w)});
    } else {
      assert(t.push.size() == 2);
      for (std::uint32_t w = 0; w < g.num_states; ++w)
        for (std::uint32_t w2 = 0; w2 < g.num_states; ++w2)
          g.productions.push_back({g.triple_id(t.from, t.pop, w2), t.input,
                                   g.triple_id(t.to, t.push[0], w),
                                   g.triple_id(w, t.push[1], w2)});
    }
  }
  return g;
}

namespace detail {
inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  if (a == kInfiniteLength || b == kInfiniteLength) return kInfiniteLength;
  std::uint64_t s = a + b;
  return s < a ? kInfiniteLength : s;
}

inline std::uint64_t production_cost(const Production& p, const std::vector<std::uint64_t>& v) {
  std::uint64_t cost = p.term ? 1 : 0;
  if (p.nt1 != kNoNonterminal) cost = sat_add(cost, v[p.nt1]);
  if (p.nt2 != kNoNonterminal) cost = sat_add(cost, v[p.nt2]);
  return cost;
}
}  // namespace detail

/// Length of the shortest word derivable from each nonterminal, infinite
/// when none exists. Chaotic relaxation: sweep the productions in order,
/// lowering left-hand values, until a sweep changes nothing. sweeps counts
/// the passes that changed at least one value.
struct LengthValues {
  std::vector<std::uint64_t> values;
  std::uint32_t sweeps = 0;
};

inline LengthValues l_values(const Cfg& g) {
  LengthValues out;
  out.values.assign(g.num_nonterminals(), kInfiniteLength);
  for (;;) {
    bool changed = false;
    for (const auto& p : g.productions) {
      std::uint64_t cost = detail::production_cost(p, out.values);
      if (cost < out.values[p.lhs]) {
        out.values[p.lhs] = cost;
        changed = true;
      }
    }
    if (!changed) break;
    ++out.sweeps;
  }
  return out;
}

/// Expands the axiom depth-first, always taking the first production (in
/// emission order) whose cost matches the nonterminal's length value.
/// steps counts nonterminal expansions. Returns no word when the language
/// is empty.
struct ShortestWord {
  std::optional<Word> word;
  std::uint64_t steps = 0;
};

inline ShortestWord shortest_word(const Cfg& g, const LengthValues& lv) {
  ShortestWord out;
  std::uint64_t target = lv.values[g.axiom()];
  if (target == kInfiniteLength) return out;

  // first minimal production per nonterminal, in emission order
  std::vector<std::uint32_t> best(g.num_nonterminals(), ~0u);
  for (std::uint32_t i = 0; i < g.productions.size(); ++i) {
    const auto& p = g.productions[i];
    if (best[p.lhs] != ~0u) continue;
    if (detail::production_cost(p, lv.values) == lv.values[p.lhs]) best[p.lhs] = i;
  }

  Word word;
  std::vector<std::uint32_t> stack{g.axiom()};
  // every expansion either emits a terminal or is one of the unit
  // productions, and unit chains are short, so the bound is linear
  const std::uint64_t guard = 4 * (target + 2);
  while (!stack.empty()) {
    std::uint32_t nt = stack.back();
    stack.pop_back();
    if (++out.steps > guard) throw std::logic_error("shortest word expansion exceeded bound");
    assert(best[nt] != ~0u);
    const auto& p = g.productions[best[nt]];
    if (p.term) word.push_back(*p.term);
    if (p.nt2 != kNoNonterminal) stack.push_back(p.nt2);
    if (p.nt1 != kNoNonterminal) stack.push_back(p.nt1);
  }
  assert(word.size() == target);
  out.word = std::move(word);
  return out;
}

inline std::string render_production(const Cfg& g, const Production& p) {
  std::string out = g.nonterminal_name(p.lhs) + " ->";
  if (p.term) out += " " + render_input_symbol(g.protocol_names, *p.term);
  if (p.nt1 != kNoNonterminal) out += " " + g.nonterminal_name(p.nt1);
  if (p.nt2 != kNoNonterminal) out += " " + g.nonterminal_name(p.nt2);
  return out;
}

inline std::string cfg_to_text(const Cfg& g) {
  std::string out;
  for (const auto& p : g.productions) out += render_production(g, p) + "\n";
  return out;
}

}  // namespace mlpath
