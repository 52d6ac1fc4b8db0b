#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cycleflux/analysis.hpp"
#include "cycleflux/csv.hpp"
#include "cycleflux/sweep.hpp"
#include "fixtures.hpp"

using namespace cycleflux;
using fixtures::error_of;

namespace {

SweepSpec pump_dT_sweep(std::size_t count, unsigned threads) {
  SweepSpec s;
  s.base.model = PumpParams{};
  s.grid = {"dT", -0.5, 0.5, count, false};
  s.analysis.top_k = 3;
  s.threads = threads;
  return s;
}

}  // namespace

TEST_SUITE("sweep") {
  TEST_CASE("grid values") {
    const auto lin = GridSpec{"x", 0.0, 1.0, 5, false}.values();
    CHECK(lin == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    const auto lg = GridSpec{"x", 0.01, 1.0, 3, true}.values();
    CHECK(lg[1] == doctest::Approx(0.1));
    CHECK(lg.back() == 1.0);
    CHECK(error_of([] { GridSpec{"x", 0.0, 1.0, 1, false}.values(); }) == ErrorCode::invalid_parameter);
    CHECK(error_of([] { GridSpec{"x", 0.0, 1.0, 4, true}.values(); }) == ErrorCode::invalid_parameter);
  }

  TEST_CASE("pump spin current follows the sign of the bias") {
    const auto result = run_sweep(pump_dT_sweep(11, 2));
    const auto x = result.values();
    const auto i3 = result.series(3, Quantity::spin);
    const auto i4 = result.series(4, Quantity::spin);
    REQUIRE(x.size() == 11);
    CHECK(std::abs(i3[5]) <= 1e-14);
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i == 5) continue;
      // Hotter reservoir 1 drives spin out of reservoir 3 at these defaults.
      CHECK(i3[i] * x[i] < 0.0);
      CHECK(std::abs(i3[i] + i4[i]) <= 1e-10 * std::abs(i3[i]));
    }
    for (const auto& pt : result.points) {
      CHECK(pt.analysis.decomposition_residual <= 1e-9);
      CHECK(pt.analysis.tree_theorem_difference <= 1e-12);
      CHECK(pt.analysis.cycle_count == 14);
    }
    CHECK_FALSE(result.tracked.empty());
    CHECK(result.tracked_flux.size() == 11);
  }

  TEST_CASE("output does not depend on the thread count") {
    std::ostringstream a, b, c, d;
    const auto one = run_sweep(pump_dT_sweep(9, 1));
    const auto many = run_sweep(pump_dT_sweep(9, 4));
    write_sweep_csv(a, one);
    write_sweep_csv(b, many);
    write_currents_csv(c, one);
    write_currents_csv(d, many);
    CHECK(a.str() == b.str());
    CHECK(c.str() == d.str());
    CHECK(c.str().rfind("sweep_value,reservoir_id,quantity,current\n", 0) == 0);
    CHECK(a.str().find("jnet[|00⟩→|0↑⟩→|0↓⟩→|00⟩]") != std::string::npos);
  }

  TEST_CASE("errors name the grid point") {
    SweepSpec s;
    s.base.model = PumpParams{};
    s.grid = {"T3", 1.0, -1.0, 3, false};
    try {
      run_sweep(s);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::invalid_parameter);
      CHECK(std::string(e.what()).find("T3=") != std::string::npos);
    }
    s.grid.parameter = "nope";
    CHECK(error_of([&] { run_sweep(s); }) == ErrorCode::invalid_parameter);
  }

  TEST_CASE("synthetic amplification") {
    std::vector<double> x, jl, jm;
    for (int i = 0; i <= 10; ++i) {
      x.push_back(0.1 * i);
      jl.push_back(2.0 * x.back());
      jm.push_back(x.back());
    }
    const auto r = amplification_factor(x, jl, jm);
    REQUIRE(r.alpha.size() == 9);
    for (std::size_t i = 0; i < r.alpha.size(); ++i) {
      CHECK(r.alpha[i] == doctest::Approx(2.0));
      CHECK_FALSE(r.divergence[i]);
    }
  }

  TEST_CASE("amplification flags a J_M extremum") {
    std::vector<double> x, jl, jm;
    for (int i = 0; i <= 20; ++i) {
      const double t = 0.05 * i + 0.013;
      x.push_back(t);
      jl.push_back(t);
      jm.push_back((t - 0.5) * (t - 0.5));
    }
    const auto r = amplification_factor(x, jl, jm);
    std::size_t flagged = 0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      if (r.divergence[i]) {
        ++flagged;
        CHECK(std::abs(r.x[i] - 0.5) < 0.05);
      }
    }
    CHECK(flagged == 1);
  }

  TEST_CASE("equilibrium amplification is undefined") {
    SweepSpec s;
    TransistorParams p;
    p.T_L = p.T_M = p.T_R = 0.8;
    s.base.model = p;
    s.grid = {"w_M", 0.8, 1.2, 5, false};
    s.analysis.cycles = false;
    const auto result = run_sweep(s);
    const auto r = amplification_factor(result.values(), result.series(1, Quantity::energy),
                                        result.series(2, Quantity::energy));
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      CHECK(r.undefined[i]);
      CHECK(std::isnan(r.alpha[i]));
    }
  }

  TEST_CASE("NDTC detection") {
    const std::vector<double> x{0, 1, 2, 3, 4, 5};
    CHECK(detect_ndtc(x, std::vector<double>{0, 1, 2, 3, 4, 5}).empty());
    const auto iv = detect_ndtc(x, std::vector<double>{0, -1, -2, -1, -3, -2});
    REQUIRE(iv.size() == 2);
    CHECK(iv[0].lo == 0.0);
    CHECK(iv[0].hi == 2.0);
    CHECK(iv[1].lo == 3.0);
    CHECK(iv[1].hi == 4.0);
  }

  TEST_CASE("pump swept in T1 shows no NDTC at reservoir 1") {
    SweepSpec s;
    s.base.model = PumpParams{};
    s.grid = {"T1", 0.5, 2.0, 31, false};
    s.analysis.cycles = false;
    const auto result = run_sweep(s);
    CHECK(detect_ndtc(result.values(), result.series(1, Quantity::energy)).empty());
  }

  TEST_CASE("half-plateau threshold") {
    const std::vector<double> x{0, 1, 2, 3, 4};
    const auto t = half_plateau_threshold(x, std::vector<double>{0, 0, 2, 4, 4});
    CHECK(t.found);
    CHECK(t.threshold == doctest::Approx(2.0));
    CHECK(t.plateau == 4.0);
    CHECK_FALSE(half_plateau_threshold(x, std::vector<double>{3, 3, 4, 4, 4}).found);
    CHECK_FALSE(half_plateau_threshold(x, std::vector<double>{0, 0, 0, 0, 0}).found);
  }

  TEST_CASE("configuration parsing") {
    const auto run = parse_run_config(R"({
      "model": "transistor", "mode": "multigraph",
      "params": {"T_M": 0.3, "gamma_L": 0.01},
      "sweep": {"parameter": "T_M", "start": 0.1, "stop": 1, "count": 4, "scale": "log"},
      "top_k": 7, "rank_key": "net"
    })");
    CHECK(model_name(run.model) == "transistor");
    CHECK(run.model.mode == GraphMode::multigraph);
    CHECK(get_parameter(run.model, "T_M") == 0.3);
    REQUIRE(run.sweep);
    CHECK(run.sweep->log_scale);
    CHECK(run.top_k == 7);
    CHECK(run.rank_key == RankKey::net);
    CHECK(build_model(run.model).edges().size() == 33);

    const auto net = parse_run_config(R"({"model": "network", "network": {
      "states": [{"label": "a", "energy": 0}, {"label": "b", "energy": 0}, {"label": "c", "energy": 0}],
      "reservoirs": [{"id": 1, "statistics": "boson", "T": 1, "coupling": 1}],
      "channels": [{"from": 0, "to": 1, "reservoir": 1, "rate_fw": 1, "rate_bw": 1},
                   {"from": 1, "to": 2, "reservoir": 1, "rate_fw": 1, "rate_bw": 1},
                   {"from": 2, "to": 0, "reservoir": 1, "rate_fw": 1, "rate_bw": 1}]},
      "params": {"rate_scale": 2}})");
    CHECK(build_model(net.model).rate(0, 1) == 2.0);

    CHECK(error_of([] { parse_run_config(R"({"model": "engine"})"); }) == ErrorCode::parse_error);
    CHECK(error_of([] { parse_run_config(R"({"model": "pump", "params": {"bogus": 1}})"); }) ==
          ErrorCode::invalid_parameter);
    CHECK(error_of([] { parse_run_config(R"({"model": "pump", "sweep": {"parameter": "dT"}})"); }) ==
          ErrorCode::parse_error);
  }

  TEST_CASE("CSV formatting") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-300) == "1e-300");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_double(std::nan("")) == "nan");
    std::ostringstream out;
    CsvWriter csv(out);
    csv.field("a,b").field("q\"x").field(3).end_row();
    CHECK(out.str() == "\"a,b\",\"q\"\"x\",3\n");
  }

  TEST_CASE("ranked CSV") {
    PumpParams p;
    p.T1 = 1.2;
    const auto net = build_pump(p);
    const auto ranked = rank_cycles(net, 3);
    std::ostringstream out;
    write_ranked_csv(out, net, ranked);
    const auto text = out.str();
    CHECK(text.rfind("rank,cycle,length,j_forward,j_backward,j_net,traffic,affinity,energy_1,particle_1,spin_1,", 0) == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  }
}
