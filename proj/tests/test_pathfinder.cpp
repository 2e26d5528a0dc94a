#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "support/test_support.hpp"

using namespace mlpath;
using testsupport::isym;
using testsupport::load_network;
using testsupport::lsym;

TEST_CASE("path reconstruction on the chain") {
  Network net = load_network("ex1.json");
  auto path = find_path(net, {lsym(0), lsym(1), lsym(1, true), lsym(0)});
  REQUIRE(path.has_value());
  CHECK(*path == std::vector<NodeId>{1, 2, 3, 4, 0});

  CHECK(find_path(net, {}) == std::nullopt);
  CHECK(find_path(net, {lsym(0), lsym(1, true)}) == std::nullopt);   // trailing bar
  CHECK(find_path(net, {lsym(0, true), lsym(0)}) == std::nullopt);   // no rule for the pair
  CHECK(find_path(net, {lsym(0), lsym(1), lsym(0)}) == std::nullopt);  // unclosed nesting
  CHECK(find_path(net, {lsym(1), lsym(1)}) == std::nullopt);  // source cannot emit b
}

TEST_CASE("single link") {
  Network net = load_network("ex0.json");
  auto path = find_path(net, {lsym(0)});
  REQUIRE(path.has_value());
  CHECK(*path == std::vector<NodeId>{1, 0});
}

TEST_CASE("predecessor policy picks among equal candidates") {
  // diamond: S feeds A and B, both feed D, everything passive
  Network net;
  net.protocols = {"a"};
  net.nodes = {"A", "B", "D", "S"};
  net.functions = {{passive(0)}, {passive(0)}, {passive(0)}, {passive(0)}};
  net.links = {{0, 2}, {1, 2}, {3, 0}, {3, 1}};
  net.source = 3;
  net.destination = 2;
  validate(net);

  Trace trace{lsym(0), lsym(0)};
  auto low = find_path(net, trace);
  REQUIRE(low.has_value());
  CHECK(*low == std::vector<NodeId>{3, 0, 2});

  auto high = find_path(net, trace, [](const std::vector<NodeId>& c) { return c.back(); });
  REQUIRE(high.has_value());
  CHECK(*high == std::vector<NodeId>{3, 1, 2});

  auto order_seen = find_path(net, trace, [](const std::vector<NodeId>& c) {
    REQUIRE(std::is_sorted(c.begin(), c.end()));
    return c.front();
  });
  REQUIRE(order_seen.has_value());
}

TEST_CASE("objective names parse both spellings") {
  CHECK(parse_objective("min-hops") == Objective::kMinHops);
  CHECK(parse_objective("hops") == Objective::kMinHops);
  CHECK(parse_objective("min-adaptations") == Objective::kMinAdaptations);
  CHECK(parse_objective("adaptations") == Objective::kMinAdaptations);
  CHECK(parse_objective("fastest") == std::nullopt);
  CHECK(std::string(objective_name(Objective::kMinHops)) == "min-hops");
  CHECK(std::string(objective_name(Objective::kMinAdaptations)) == "min-adaptations");
}

TEST_CASE("solving the chain under both objectives") {
  Network net = load_network("ex1.json");

  PathResult hops = solve(net, Objective::kMinHops);
  REQUIRE(hops.feasible);
  CHECK(hops.word == Word{isym(0), isym(1), isym(1, true), isym(0)});
  CHECK(hops.trace == Trace{lsym(0), lsym(1), lsym(1, true), lsym(0)});
  CHECK(hops.nodes == std::vector<NodeId>{1, 2, 3, 4, 0});
  CHECK(hops.hops == 4);
  CHECK(hops.adaptations == 2);

  PathResult adapt = solve(net, Objective::kMinAdaptations);
  REQUIRE(adapt.feasible);
  CHECK(adapt.word == Word{isym(0), isym(1, true, 2), isym(0)});
  CHECK(adapt.trace == hops.trace);
  CHECK(adapt.nodes == hops.nodes);
  CHECK(adapt.hops == 4);
  CHECK(adapt.adaptations == 2);
  CHECK(adapt.adaptations == adapt.word.size() - 1);
}

TEST_CASE("solving the single link") {
  Network net = load_network("ex0.json");
  for (Objective obj : {Objective::kMinHops, Objective::kMinAdaptations}) {
    PathResult r = solve(net, obj);
    REQUIRE(r.feasible);
    CHECK(r.word == Word{isym(0)});
    CHECK(r.nodes == std::vector<NodeId>{1, 0});
    CHECK(r.hops == 1);
    CHECK(r.adaptations == 0);
  }
}

TEST_CASE("shuttle network needs a doubled link") {
  // nodes sorted: A=0, B=1, D=2, M=3, N=4, R=5, S=6
  Network net = load_network("shuttle.json");
  std::vector<NodeId> expected{6, 0, 1, 3, 4, 5, 3, 4, 2};
  Trace expected_trace{lsym(0), lsym(1), lsym(0), lsym(0, true),
                       lsym(1), lsym(1, true), lsym(0), lsym(0)};

  PathResult hops = solve(net, Objective::kMinHops);
  REQUIRE(hops.feasible);
  CHECK(hops.nodes == expected);
  CHECK(hops.trace == expected_trace);
  CHECK(hops.hops == 8);
  CHECK(hops.adaptations == 4);

  PathResult adapt = solve(net, Objective::kMinAdaptations);
  REQUIRE(adapt.feasible);
  CHECK(adapt.nodes == expected);
  CHECK(adapt.trace == expected_trace);
  CHECK(adapt.word ==
        Word{isym(0), isym(1), isym(0, true, 2), isym(1, true, 2), isym(0, false, 2)});
  CHECK(adapt.adaptations == 4);
  CHECK(adapt.adaptations == adapt.word.size() - 1);

  // the link M -> N carries the path twice
  std::size_t doubled = 0;
  for (std::size_t i = 0; i + 1 < hops.nodes.size(); ++i)
    if (hops.nodes[i] == 3 && hops.nodes[i + 1] == 4) ++doubled;
  CHECK(doubled == 2);
}

TEST_CASE("self-loop links are legal and can carry the nesting round trip") {
  // the only feasible route wraps a inside b across X's self-link and
  // unwraps it on the way out: S, X, X, D with trace a b̄ a
  Network net;
  net.protocols = {"a", "b"};
  net.nodes = {"D", "S", "X"};
  net.functions = {{passive(0)}, {passive(0)}, {encap(0, 1), decap(0, 1)}};
  net.links = {{1, 2}, {2, 0}, {2, 2}};
  net.source = 1;
  net.destination = 0;
  validate(net);

  std::vector<NodeId> expected{1, 2, 2, 0};
  Trace expected_trace{lsym(0), lsym(1, true), lsym(0)};
  for (Objective obj : {Objective::kMinHops, Objective::kMinAdaptations}) {
    PathResult r = solve(net, obj);
    REQUIRE(r.feasible);
    CHECK(r.nodes == expected);
    CHECK(r.trace == expected_trace);
    CHECK(r.hops == 3);
    CHECK(r.adaptations == 2);
    auto cmp = testsupport::compare_pipeline_oracle(net, obj);
    INFO(cmp.detail);
    CHECK(cmp.ok);
  }
}

TEST_CASE("infeasible instances are reported as such") {
  for (const char* name : {"nopath_nofunctions.json", "nopath_disconnected.json"}) {
    Network net = load_network(name);
    for (Objective obj : {Objective::kMinHops, Objective::kMinAdaptations}) {
      PathResult r = solve(net, obj);
      CHECK_FALSE(r.feasible);
      CHECK(r.word.empty());
      CHECK(r.nodes.empty());
    }
  }
}

TEST_CASE("solver output is always a feasible path") {
  std::mt19937_64 seeds(31);
  for (int round = 0; round < 60; ++round) {
    GenSpec spec;
    spec.node_count = 3 + round % 6;
    spec.protocol_count = 2 + round % 2;
    spec.edge_probability = 0.45;
    spec.function_density = 0.4;
    spec.seed = seeds();
    Network net = generate_network(spec);

    PathResult hops = solve(net, Objective::kMinHops);
    PathResult adapt = solve(net, Objective::kMinAdaptations);
    CHECK(hops.feasible == adapt.feasible);  // transformation preserves emptiness
    if (!hops.feasible) continue;

    for (const PathResult* r : {&hops, &adapt}) {
      CHECK(is_feasible_path(net, r->nodes, r->trace));
      CHECK(r->hops == r->trace.size());
      CHECK(expand_f(r->word) == r->trace);
    }
    std::uint64_t expanded = 0;
    for (const auto& s : hops.word) expanded += s.index;
    CHECK(hops.hops == expanded);
    CHECK(adapt.adaptations == adapt.word.size() - 1);
    CHECK(hops.hops <= adapt.hops);
    CHECK(adapt.adaptations <= hops.adaptations);

    // a shortest word of the transformed automaton never carries the same
    // protocol twice in a row; such neighbors would merge into one symbol
    for (std::size_t i = 0; i + 1 < adapt.word.size(); ++i)
      CHECK(adapt.word[i].protocol != adapt.word[i + 1].protocol);
  }
}
