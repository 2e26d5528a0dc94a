#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "support/test_support.hpp"

using namespace mlpath;
using testsupport::enumerate_words;
using testsupport::isym;
using testsupport::load_network;

namespace {

const StackSymbol kZ = StackSymbol::bottom();
const StackSymbol kSa = StackSymbol::proto(0);

}  // namespace

TEST_CASE("triple packing roundtrips") {
  Cfg g = pda_to_cfg(build_pda(load_network("ex1.json")));
  REQUIRE(g.num_states == 7);
  REQUIRE(g.num_stack == 3);
  CHECK(g.num_nonterminals() == 148);
  CHECK(g.axiom() == 0);

  for (std::uint32_t from = 0; from < g.num_states; ++from)
    for (std::uint32_t code = 0; code < g.num_stack; ++code)
      for (std::uint32_t to = 0; to < g.num_states; ++to) {
        std::uint32_t id = g.triple_id(from, StackSymbol{code}, to);
        CHECK(id > 0);
        CHECK(id < g.num_nonterminals());
      }
  CHECK(g.nonterminal_name(0) == "[S_G]");
  CHECK(g.nonterminal_name(g.triple_id(3, kSa, 1)) == "[V_b a D_a]");
  CHECK(g.nonterminal_name(g.triple_id(0, kZ, 6)) == "[S_A Z\xE2\x82\x80 D_A]");
}

TEST_CASE("production inventory of the chain grammar") {
  Cfg g = pda_to_cfg(build_pda(load_network("ex1.json")));
  // 7 axiom + 7 unit + 2*49 push + 2*7 passive + 2 pop
  REQUIRE(g.productions.size() == 128);
  CHECK(g.productions.size() <= 1 + 7 + 7 * 49);

  for (std::uint32_t q = 0; q < 7; ++q) {
    const Production& p = g.productions[q];
    CHECK(p.lhs == g.axiom());
    CHECK_FALSE(p.term.has_value());
    CHECK(p.nt1 == g.triple_id(0, kZ, q));
    CHECK(p.nt2 == kNoNonterminal);
  }

  std::size_t pops = 0, units = 0, pairs = 0, singles = 0;
  for (std::size_t i = 7; i < g.productions.size(); ++i) {
    const Production& p = g.productions[i];
    CHECK(p.lhs < g.num_nonterminals());
    if (p.nt2 != kNoNonterminal) {
      CHECK(p.nt1 != kNoNonterminal);
      CHECK(p.term.has_value());
      ++pairs;
    } else if (p.nt1 != kNoNonterminal) {
      p.term ? ++singles : ++units;
    } else {
      CHECK(p.term.has_value());
      ++pops;
    }
  }
  CHECK(pops == 2);
  CHECK(units == 7);
  CHECK(singles == 14);
  CHECK(pairs == 98);
}

TEST_CASE("length values of the chain") {
  Cfg g = pda_to_cfg(build_pda(load_network("ex1.json")));
  LengthValues lv = l_values(g);

  CHECK(lv.values[g.triple_id(1, kZ, 6)] == 1);   // [D_a Z0 D_A]
  CHECK(lv.values[g.triple_id(5, kSa, 1)] == 1);  // [W_b a D_a]
  CHECK(lv.values[g.triple_id(3, kSa, 1)] == 2);  // [V_b a D_a]
  CHECK(lv.values[g.triple_id(2, kZ, 6)] == 4);   // [U_a Z0 D_A]
  CHECK(lv.values[g.axiom()] == 4);
  CHECK(lv.values[g.triple_id(1, kZ, 0)] == kInfiniteLength);  // nothing reaches the start
  CHECK(lv.sweeps <= g.num_nonterminals());

  ShortestWord sw = shortest_word(g, lv);
  REQUIRE(sw.word.has_value());
  CHECK(*sw.word == Word{isym(0), isym(1), isym(1, true), isym(0)});
  CHECK(sw.steps <= 4 * (4 + 2));
}

TEST_CASE("transformation shortens the derived word") {
  Pda tpda = transform_pda(build_pda(load_network("ex1.json")));
  Cfg g = pda_to_cfg(tpda);
  LengthValues lv = l_values(g);
  CHECK(lv.values[g.axiom()] == 3);
  CHECK(lv.values[g.triple_id(3, kSa, 1)] == 1);  // bypass pop beats the passive route

  ShortestWord sw = shortest_word(g, lv);
  REQUIRE(sw.word.has_value());
  CHECK(*sw.word == Word{isym(0), isym(1, true, 2), isym(0)});

  std::string text = cfg_to_text(g);
  CHECK(text.find("[V_b a D_a] -> b\xCC\x84\xE2\x82\x82\n") != std::string::npos);
  CHECK(text.find("[S_G] -> [S_A Z\xE2\x82\x80 S_A]\n") != std::string::npos);
}

TEST_CASE("single-link grammar") {
  Cfg g = pda_to_cfg(build_pda(load_network("ex0.json")));
  REQUIRE(g.num_states == 3);
  REQUIRE(g.num_stack == 2);
  // 3 axiom + 3 unit + 1 pop
  CHECK(g.productions.size() == 7);
  LengthValues lv = l_values(g);
  CHECK(lv.values[g.axiom()] == 1);
  ShortestWord sw = shortest_word(g, lv);
  REQUIRE(sw.word.has_value());
  CHECK(*sw.word == Word{isym(0)});
}

TEST_CASE("empty languages yield infinite values and no word") {
  for (const char* name : {"nopath_nofunctions.json", "nopath_disconnected.json"}) {
    Cfg g = pda_to_cfg(build_pda(load_network(name)));
    LengthValues lv = l_values(g);
    CHECK(lv.values[g.axiom()] == kInfiniteLength);
    ShortestWord sw = shortest_word(g, lv);
    CHECK_FALSE(sw.word.has_value());
    CHECK(sw.steps == 0);
  }
}

TEST_CASE("saturating addition") {
  CHECK(detail::sat_add(2, 3) == 5);
  CHECK(detail::sat_add(kInfiniteLength, 0) == kInfiniteLength);
  CHECK(detail::sat_add(0, kInfiniteLength) == kInfiniteLength);
  CHECK(detail::sat_add(kInfiniteLength - 1, 5) == kInfiniteLength);
}

TEST_CASE("grammar agrees with the automaton on random instances") {
  std::mt19937_64 seeds(23);
  for (int round = 0; round < 40; ++round) {
    GenSpec spec;
    spec.node_count = 3 + round % 4;
    spec.protocol_count = 2;
    spec.edge_probability = 0.5;
    spec.function_density = 0.5;
    spec.seed = seeds();
    Network net = generate_network(spec);
    Pda pda = build_pda(net);
    Cfg g = pda_to_cfg(pda);
    LengthValues lv = l_values(g);
    CHECK(lv.sweeps <= g.num_nonterminals());
    CHECK(g.productions.size() <=
          1 + g.num_states + pda.transitions.size() * g.num_states * g.num_states);

    // only the shapes B, x, xB, xBC are ever emitted; nothing derives empty
    for (const auto& p : g.productions) {
      CHECK((p.term.has_value() || p.nt1 != kNoNonterminal));
      if (p.nt2 != kNoNonterminal) {
        CHECK(p.nt1 != kNoNonterminal);
        CHECK(p.term.has_value());
      }
    }

    auto words = enumerate_words(pda, 7);
    if (!words.empty()) {
      std::size_t shortest = ~0u;
      for (const auto& w : words) shortest = std::min(shortest, w.size());
      REQUIRE(lv.values[g.axiom()] == shortest);
      ShortestWord sw = shortest_word(g, lv);
      REQUIRE(sw.word.has_value());
      CHECK(sw.word->size() == shortest);
      CHECK(words.count(*sw.word) == 1);
      CHECK(accepts(pda, *sw.word));
    } else if (lv.values[g.axiom()] != kInfiniteLength) {
      CHECK(lv.values[g.axiom()] > 7);
    }
  }
}

TEST_CASE("derivations and acceptance define the same bounded language") {
  std::mt19937_64 seeds(83);
  for (int round = 0; round < 16; ++round) {
    GenSpec spec;
    spec.node_count = 3 + round % 2;
    spec.protocol_count = 2;
    spec.edge_probability = 0.5;
    spec.function_density = 0.5;
    spec.seed = seeds();
    Network net = generate_network(spec);
    for (bool transformed : {false, true}) {
      Pda pda = build_pda(net);
      if (transformed) pda = transform_pda(pda);
      Cfg g = pda_to_cfg(pda);
      auto derived = testsupport::enumerate_grammar_words(g, 6);
      auto accepted = testsupport::enumerate_words_by_length(pda, 6);
      INFO("seed " << spec.seed << (transformed ? ", transformed" : ", plain"));
      CHECK(derived == accepted);
    }
  }
}
