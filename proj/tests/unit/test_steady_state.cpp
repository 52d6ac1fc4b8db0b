#include <doctest.h>

#include <cmath>

#include "cycleflux/models.hpp"
#include "cycleflux/steady_state.hpp"
#include "fixtures.hpp"

using namespace cycleflux;
using fixtures::error_of;

namespace {

PumpParams pump_at(double dT) {
  PumpParams p;
  p.T1 = p.T2 + dT;
  return p;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_SUITE("steady_state") {
  TEST_CASE("symmetric three-ring is uniform") {
    const auto net = fixtures::ring(3);
    for (const auto& p : {solve_steady_state(net), solve_steady_state_lu(net)}) {
      for (double v : p.values) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    }
  }

  TEST_CASE("two-state closed form") {
    const auto p = solve_steady_state(fixtures::two_state(2.0, 3.0));
    CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(p[1] == doctest::Approx(0.4).epsilon(1e-14));
  }

  TEST_CASE("stationarity and tree-theorem agreement on the pump") {
    const auto net = build_pump(pump_at(0.2));
    const auto lap = build_laplacian(net);
    const auto p = solve_steady_state(net, lap);
    const auto tree = tree_theorem_steady_state(lap);
    CHECK(stationarity_residual(lap, p) <= 1e-10);
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      CHECK(p[i] >= 0.0);
      CHECK(std::abs(p[i] - tree[i]) <= 1e-8 * tree[i]);
      sum += p[i];
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    CHECK(relative_difference(solve_steady_state_lu(net, lap), tree) <= 1e-8);
  }

  TEST_CASE("solvers agree on random networks including one-way rates") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      const auto net = fixtures::from_rates(oracle::random_rates(rng, 2 + trial % 9, 0.3, 0.1, 10.0));
      const auto lap = build_laplacian(net);
      const auto tree = tree_theorem_steady_state(lap);
      CHECK(relative_difference(solve_steady_state(net, lap), tree) <= 1e-12);
      CHECK(relative_difference(solve_steady_state_lu(net, lap), tree) <= 1e-10);
    }
  }

  TEST_CASE("transient states get zero probability") {
    // 0 -> 1 only, 1 <-> 2 both ways: state 0 is transient.
    auto spec = fixtures::states(3);
    spec.channels = {{0, 1, 1, 1.0, 0.0, {}}, {1, 2, 1, 2.0, 1.0, {}}};
    const auto net = build_network(spec);
    const auto p = solve_steady_state(net);
    CHECK(p[0] == 0.0);
    CHECK(p[1] == doctest::Approx(1.0 / 3.0));
    CHECK(p[2] == doctest::Approx(2.0 / 3.0));
  }

  TEST_CASE("two closed classes are rejected") {
    auto spec = fixtures::states(3);
    spec.channels = {{1, 0, 1, 1.0, 0.0, {}}, {1, 2, 1, 1.0, 0.0, {}}};
    const auto net = build_network(spec);
    CHECK(error_of([&] { solve_steady_state(net); }) == ErrorCode::singular_beyond_rank_one);
    CHECK(error_of([&] { solve_steady_state_lu(net); }) == ErrorCode::singular_beyond_rank_one);
  }

  TEST_CASE("equilibrium fluxes vanish") {
    const auto net = build_pump(pump_at(0.0));
    const auto flux = edge_fluxes(net, solve_steady_state(net));
    for (const auto& f : flux.edges) CHECK(std::abs(f.net()) <= 1e-12);
    for (const auto& f : flux.channels) CHECK(std::abs(f.net()) <= 1e-12);
  }

  TEST_CASE("symmetric ring flows") {
    const auto net = fixtures::ring(3);
    const auto flux = edge_fluxes(net, solve_steady_state(net));
    for (const auto& f : flux.edges) {
      CHECK(f.forward == doctest::Approx(1.0 / 3.0));
      CHECK(f.backward == doctest::Approx(1.0 / 3.0));
      CHECK(std::abs(f.net()) <= 1e-15);
    }
  }

  TEST_CASE("Kirchhoff law away from equilibrium") {
    const auto net = build_pump(pump_at(0.2));
    const auto flux = edge_fluxes(net, solve_steady_state(net));
    double largest = 0.0;
    for (const auto& f : flux.edges) largest = std::max(largest, std::abs(f.net()));
    CHECK(largest > 1e-8);
    CHECK(flux.max_relative_divergence(net) < 1e-10);
    CHECK(max_abs(flux.divergence(net)) < 1e-10 * largest);
  }

  TEST_CASE("pump currents conserve spin and energy") {
    for (double dT : {-0.2, 0.2}) {
      const auto net = build_pump(pump_at(dT));
      const auto report = reservoir_currents(net, solve_steady_state(net));
      const double i3 = *report.at(3).spin, i4 = *report.at(4).spin;
      CHECK(std::abs(i3) > 1e-8);
      CHECK(std::abs(i3 + i4) <= 1e-10 * std::abs(i3));
      CHECK(*report.at(1).spin == 0.0);
      CHECK(*report.at(2).spin == 0.0);
      CHECK(std::abs(*report.total(Quantity::energy)) <= 1e-10 * std::abs(*report.at(1).energy));
      CHECK(std::abs(*report.total(Quantity::particle)) <= 1e-10 * std::abs(*report.at(1).particle));
      CHECK_FALSE(report.at(4).particle.value_or(0.0) != 0.0);
    }
  }

  TEST_CASE("equilibrium currents vanish") {
    const auto net = build_pump(pump_at(0.0));
    const auto report = reservoir_currents(net, solve_steady_state(net));
    for (const auto& r : report.reservoirs) {
      for (Quantity q : {Quantity::energy, Quantity::particle, Quantity::spin}) {
        if (auto v = r.get(q)) CHECK(std::abs(*v) <= 1e-12);
      }
    }
  }

  TEST_CASE("transistor switch is off at low gate temperature") {
    TransistorParams off, on;
    off.T_M = 0.05;
    on.T_M = 1.0;
    auto left = [](const TransistorParams& p) {
      const auto net = build_transistor(p);
      return reservoir_current(net, solve_steady_state(net), transistor_reservoir::left, Quantity::energy);
    };
    const double j_off = left(off), j_on = left(on);
    CHECK(j_on > 0.0);
    CHECK(std::abs(j_off) < 0.05 * j_on);
    const auto net = build_transistor(on);
    const auto report = reservoir_currents(net, solve_steady_state(net));
    CHECK(std::abs(*report.total(Quantity::energy)) <= 1e-10 * j_on);
    CHECK(*report.at(transistor_reservoir::right).energy < 0.0);
  }

  TEST_CASE("missing annotation") {
    const auto net = fixtures::ring(3);
    const auto p = solve_steady_state(net);
    CHECK(error_of([&] { reservoir_current(net, p, 1, Quantity::spin); }) == ErrorCode::missing_annotation);
    CHECK_FALSE(reservoir_currents(net, p).at(1).energy);
  }
}
