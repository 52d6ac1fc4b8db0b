#include <doctest.h>

#include <cmath>

#include "cycleflux/models.hpp"
#include "cycleflux/stochastic.hpp"
#include "fixtures.hpp"

using namespace cycleflux;
using fixtures::error_of;

namespace {

// Feeds a hand-written state sequence through the counter; unit dwell times.
CycleCountReport trace(const TransitionNetwork& net, const std::vector<StateId>& states) {
  CycleCounter counter(net, static_cast<double>(states.size()));
  for (std::size_t i = 0; i < states.size(); ++i) {
    const EdgeId via = i == 0 ? no_edge : net.edges_between(states[i - 1], states[i])[0];
    counter.visit({states[i], 1.0, via});
  }
  return counter.report();
}

}  // namespace

TEST_SUITE("stochastic") {
  TEST_CASE("two-state occupancy") {
    const auto net = fixtures::two_state(2.0, 3.0);
    const auto report = simulate_and_count(net, 2e5, 17);
    CHECK(std::abs(report.occupancy[0] - 0.6) <= 3.0 * report.occupancy_stderr[0]);
    CHECK(report.occupancy_stderr[0] > 0.0);
    CHECK(report.cycles.empty());
    CHECK(report.discarded_excursions > 0);
  }

  TEST_CASE("fixed seed reproduces the trajectory bit for bit") {
    PumpParams p;
    p.T1 = 1.2;
    const auto net = build_pump(p);
    const auto a = simulate(net, 5e3, 99);
    const auto b = simulate(net, 5e3, 99);
    const auto c = simulate(net, 5e3, 100);
    REQUIRE(a.steps.size() == b.steps.size());
    bool same = true;
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
      same = same && a.steps[i].state == b.steps[i].state && a.steps[i].dwell == b.steps[i].dwell &&
             a.steps[i].via == b.steps[i].via;
    }
    CHECK(same);
    CHECK((c.steps.size() != a.steps.size() || c.steps[1].dwell != a.steps[1].dwell));
  }

  TEST_CASE("trajectory invariants") {
    const auto net = build_pump({});
    const auto t = simulate(net, 1e3, 3, {.start = 4});
    REQUIRE(!t.steps.empty());
    CHECK(t.steps[0].state == 4);
    double total = 0.0;
    for (std::size_t i = 0; i < t.steps.size(); ++i) {
      CHECK(t.steps[i].dwell > 0.0);
      total += t.steps[i].dwell;
      if (i > 0) {
        const Edge& e = net.edges()[t.steps[i].via];
        CHECK(e.other(t.steps[i - 1].state) == t.steps[i].state);
      }
    }
    CHECK(total == doctest::Approx(1e3).epsilon(1e-12));
    CHECK(error_of([&] { simulate(net, 1.0, 1, {.start = 6}); }) == ErrorCode::dangling_reference);
    CHECK(error_of([&] { simulate(net, 0.0, 1); }) == ErrorCode::invalid_parameter);
  }

  TEST_CASE("hand traces") {
    oracle::Rates k(4, std::vector<double>(4, 1.0));
    for (std::size_t i = 0; i < 4; ++i) k[i][i] = 0.0;
    const auto net = fixtures::from_rates(k);
    // States 1,2,3 of the worked examples map to ids 0,1,2; state 4 to id 3.
    auto r = trace(net, {0, 1, 2, 0});
    REQUIRE(r.cycles.size() == 1);
    CHECK(r.cycles[0].cycle.vertices == std::vector<StateId>{0, 1, 2});
    CHECK(r.cycles[0].forward == 1);
    CHECK(r.cycles[0].backward == 0);

    r = trace(net, {0, 1, 2, 1, 3, 0});
    REQUIRE(r.cycles.size() == 1);
    CHECK(r.discarded_excursions == 1);
    CHECK(r.cycles[0].cycle.vertices == std::vector<StateId>{0, 1, 3});
    CHECK(r.cycles[0].forward == 1);

    r = trace(net, {0, 2, 1, 0});
    CHECK(r.cycles[0].backward == 1);
  }

  TEST_CASE("multigraph keeps two-step loops through distinct channels") {
    auto spec = fixtures::states(2);
    spec.mode = GraphMode::multigraph;
    spec.reservoirs.push_back(fixtures::bath(2));
    spec.channels = {{0, 1, 1, 1.0, 1.0, {}}, {0, 1, 2, 1.0, 1.0, {}}};
    const auto net = build_network(spec);
    CycleCounter counter(net, 3.0);
    counter.visit({0, 1.0, no_edge});
    counter.visit({1, 1.0, 0});
    counter.visit({0, 1.0, 1});  // out on bath 1, back on bath 2
    counter.visit({1, 1.0, 1});
    counter.visit({0, 1.0, 1});  // out and back on bath 2: an excursion
    const auto r = counter.report();
    REQUIRE(r.cycles.size() == 1);
    CHECK(r.cycles[0].forward + r.cycles[0].backward == 1);
    CHECK(r.discarded_excursions == 1);
  }

  TEST_CASE("symmetric ring counts are balanced") {
    const auto net = fixtures::ring(3);
    const auto r = simulate_and_count(net, 2e5, 8);
    REQUIRE(r.cycles.size() == 1);
    const double f = static_cast<double>(r.cycles[0].forward), b = static_cast<double>(r.cycles[0].backward);
    CHECK(std::abs(f - b) <= 3.0 * std::sqrt(f + b));
  }

  TEST_CASE("ring flux estimate") {
    const auto net = fixtures::ring(3);
    const auto r = simulate_and_count(net, 1e6, 21);
    const auto records = all_cycle_fluxes(net);
    for (const auto& cmp : compare_with_analytic(r, records)) {
      CHECK(cmp.analytic_forward == doctest::Approx(1.0 / 9.0));
      CHECK(std::abs(cmp.z_forward) <= 3.0);
      CHECK(std::abs(cmp.z_backward) <= 3.0);
      CHECK(cmp.estimate.forward_stderr == doctest::Approx(std::sqrt(cmp.estimate.forward_count) / 1e6));
    }
  }

  TEST_CASE("pump occupancy and cycle signs") {
    PumpParams p;
    p.T1 = 1.2;
    const auto net = build_pump(p);
    const auto r = simulate_and_count(net, 3e6, 4);
    const auto exact = solve_steady_state(net);
    for (StateId s = 0; s < net.size(); ++s) {
      CHECK(std::abs(r.occupancy[s] - exact[s]) <= 3.0 * r.occupancy_stderr[s]);
    }
    const auto records = all_cycle_fluxes(net);
    const auto top = rank_cycles(records, 3);
    // The spin loop: analytic and empirical net flux share a sign.
    const auto* counted = r.find(top[2].cycle);
    REQUIRE(counted != nullptr);
    const double net_count = static_cast<double>(counted->forward) - static_cast<double>(counted->backward);
    CHECK(net_count * top[2].j_net > 0.0);
  }

  TEST_CASE("equilibrium pump has no net circulation") {
    const auto net = build_pump({});
    const auto r = simulate_and_count(net, 3e6, 6);
    for (const auto& e : empirical_cycle_flux(r)) {
      if (e.forward_count + e.backward_count == 0) continue;
      CHECK(std::abs(e.net()) <= 3.0 * e.net_stderr());
    }
  }

  TEST_CASE("absorbing state") {
    auto spec = fixtures::states(2);
    spec.channels = {{0, 1, 1, 1.0, 0.0, {}}};
    const auto net = build_network(spec);
    CHECK(error_of([&] { simulate(net, 10.0, 1); }) == ErrorCode::absorbing_state);
  }
}
