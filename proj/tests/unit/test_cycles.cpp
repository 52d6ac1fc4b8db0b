#include <doctest.h>

#include <set>

#include "cycleflux/cycles.hpp"
#include "cycleflux/models.hpp"
#include "fixtures.hpp"

using namespace cycleflux;
using fixtures::error_of;

namespace {

TransitionNetwork complete(std::size_t n) {
  oracle::Rates k(n, std::vector<double>(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) k[i][i] = 0.0;
  return fixtures::from_rates(k);
}

std::vector<std::vector<std::size_t>> multiplicity(const TransitionNetwork& net) {
  std::vector<std::vector<std::size_t>> m(net.size(), std::vector<std::size_t>(net.size(), 0));
  for (const auto& e : net.edges()) ++m[e.u][e.v];
  return m;
}

std::set<std::vector<std::size_t>> oracle_cycles(const TransitionNetwork& net) {
  std::vector<std::set<std::size_t>> adj(net.size());
  for (const auto& e : net.edges()) {
    adj[e.u].insert(e.v);
    adj[e.v].insert(e.u);
  }
  return oracle::undirected_cycles(adj);
}

void check_simple_and_closed(const TransitionNetwork& net, const std::vector<Cycle>& cycles) {
  for (const auto& c : cycles) {
    REQUIRE(c.edges.size() == c.size());
    std::set<StateId> seen(c.vertices.begin(), c.vertices.end());
    CHECK(seen.size() == c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      const Edge& e = net.edges()[c.edges[i]];
      const bool joins = (e.u == c.vertices[i] && e.v == c.next(i)) || (e.v == c.vertices[i] && e.u == c.next(i));
      CHECK(joins);
    }
    CHECK(canonical_form(c).cycle == c);
    CHECK_FALSE(canonical_form(c).reversed);
  }
}

}  // namespace

TEST_SUITE("cycles") {
  TEST_CASE("triangle has one canonical cycle") {
    const auto cycles = enumerate_cycles(fixtures::ring(3));
    REQUIRE(cycles.size() == 1);
    CHECK(cycles[0].vertices == std::vector<StateId>{0, 1, 2});
  }

  TEST_CASE("canonical form examples") {
    const auto net = complete(4);
    const auto a = canonical_form(net, {2, 3, 1});
    const auto b = canonical_form(net, {1, 3, 2});
    CHECK(a.cycle.vertices == std::vector<StateId>{1, 2, 3});
    CHECK_FALSE(a.reversed);
    CHECK(b.cycle == a.cycle);
    CHECK(b.reversed);
    for (const auto& rot : {std::vector<StateId>{0, 1, 3, 2}, {1, 3, 2, 0}, {3, 2, 0, 1}, {2, 0, 1, 3}}) {
      CHECK(canonical_form(net, rot) == canonical_form(net, {0, 1, 3, 2}));
    }
    const auto once = canonical_form(net, {3, 0, 2});
    CHECK(canonical_form(once.cycle) == CanonicalCycle{once.cycle, false});
    CHECK(canonical_form(reverse(once.cycle)).reversed);
    CHECK(error_of([] { canonical_form(fixtures::ring(4), {0, 2, 1}); }) == ErrorCode::dangling_reference);
  }

  TEST_CASE("traversal sign") {
    const auto net = fixtures::ring(3);
    const auto c = enumerate_cycles(net)[0];
    const EdgeId e01 = net.edges_between(0, 1)[0];
    CHECK(traversal_sign(c, e01, 0) == 1);
    CHECK(traversal_sign(c, e01, 1) == -1);
    CHECK(traversal_sign(reverse(c), e01, 0) == -1);
    CHECK(traversal_sign(enumerate_cycles(fixtures::ring(4))[0], 99, 0) == 0);
  }

  TEST_CASE("pump has 14 canonical and 28 directed cycles") {
    const auto net = build_pump({});
    const auto cycles = enumerate_cycles(net);
    CHECK(cycles.size() == 14);
    CHECK(2 * cycles.size() == 28);
    check_simple_and_closed(net, cycles);
    std::set<std::vector<std::size_t>> ours;
    for (const auto& c : cycles) ours.insert({c.vertices.begin(), c.vertices.end()});
    CHECK(ours == oracle_cycles(net));
  }

  TEST_CASE("pump multigraph adds parallel-channel loops") {
    const auto net = build_pump({}, GraphMode::multigraph);
    const auto cycles = enumerate_cycles(net);
    CHECK(cycles.size() == oracle::multigraph_cycle_count(multiplicity(net)));
    std::size_t two = 0;
    for (const auto& c : cycles) two += c.size() == 2;
    CHECK(two == 3);
    check_simple_and_closed(net, cycles);
  }

  TEST_CASE("transistor census matches the DFS oracle") {
    const auto net = build_transistor({});
    const auto cycles = enumerate_cycles(net);
    std::set<std::vector<std::size_t>> ours;
    for (const auto& c : cycles) ours.insert({c.vertices.begin(), c.vertices.end()});
    CHECK(ours.size() == cycles.size());
    CHECK(ours == oracle_cycles(net));
  }

  TEST_CASE("random graphs up to ten vertices match the oracle") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 120; ++trial) {
      const std::size_t n = 3 + static_cast<std::size_t>(trial) % 8;
      const double density = 0.15 + 0.05 * (trial % 5);
      auto k = oracle::random_rates(rng, n, density, 0.1, 10.0);
      const auto net = fixtures::from_rates(k);
      const auto cycles = enumerate_cycles(net);
      std::set<std::vector<std::size_t>> ours;
      for (const auto& c : cycles) ours.insert({c.vertices.begin(), c.vertices.end()});
      CHECK(ours.size() == cycles.size());
      CHECK(ours == oracle_cycles(net));
      check_simple_and_closed(net, cycles);
    }
  }

  TEST_CASE("random multigraphs match the oracle count") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> pick_bath(1, 3);
    for (int trial = 0; trial < 60; ++trial) {
      const std::size_t n = 3 + static_cast<std::size_t>(trial) % 6;
      const auto k = oracle::random_rates(rng, n, 0.3, 0.1, 10.0);
      auto spec = fixtures::states(n);
      spec.mode = GraphMode::multigraph;
      spec.reservoirs.push_back(fixtures::bath(2));
      spec.reservoirs.push_back(fixtures::bath(3));
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
          if (k[a][b] == 0.0 && k[b][a] == 0.0) continue;
          const int copies = pick_bath(rng);
          for (int r = 1; r <= copies; ++r) spec.channels.push_back({a, b, r, 1.0, 1.0, {}});
        }
      }
      const auto net = build_network(spec);
      const auto cycles = enumerate_cycles(net);
      CHECK(cycles.size() == oracle::multigraph_cycle_count(multiplicity(net)));
      check_simple_and_closed(net, cycles);
      CHECK(std::set<Cycle>(cycles.begin(), cycles.end()).size() == cycles.size());
    }
  }

  TEST_CASE("cycle budget") {
    CHECK(error_of([] { enumerate_cycles(complete(7), {.max_cycles = 100}); }) == ErrorCode::cycle_budget_exceeded);
    CHECK(enumerate_cycles(complete(5)).size() == 37);
  }

  TEST_CASE("formatting") {
    const auto net = build_pump({});
    const auto c = canonical_form(net, {0, 3, 4, 1, 2});
    CHECK(format_cycle(net, c.cycle) == "|00⟩→|0↓⟩→|0↑⟩→|1↑⟩→|10⟩→|00⟩");
    CHECK(c.reversed);
  }
}
