#include "cycleflux/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

#include "cycleflux/csv.hpp"
#include "cycleflux/error.hpp"

namespace cycleflux {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();
constexpr Quantity all_quantities[] = {Quantity::energy, Quantity::particle, Quantity::spin};

// Runs body(i) for i in [0, n) on a small pool; the first exception wins.
template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

ModelConfig at_value(const ModelConfig& base, const std::string& parameter, double value) {
  ModelConfig config = base;
  set_parameter(config, parameter, value);
  return config;
}

[[noreturn]] void rethrow_at(const std::string& parameter, double value) {
  const std::string where = parameter + "=" + format_double(value) + ": ";
  try {
    throw;
  } catch (const Error& e) {
    throw Error(e.code(), where + e.what());
  }
}

std::string current_column(int reservoir, std::string_view quantity) {
  return "J" + std::to_string(reservoir) + "_" + std::string(quantity);
}

}  // namespace

PointAnalysis analyze_point(const TransitionNetwork& net, const AnalysisOptions& options) {
  PointAnalysis a;
  const Laplacian lap = build_laplacian(net);
  a.p = solve_steady_state(net, lap);
  a.stationarity_residual = stationarity_residual(lap, a.p);
  a.tree_theorem_difference = relative_difference(a.p, tree_theorem_steady_state(lap));
  a.min_probability = *std::min_element(a.p.values.begin(), a.p.values.end());
  a.max_divergence = edge_fluxes(net, a.p).max_relative_divergence(net);
  a.currents = reservoir_currents(net, a.p);
  a.decomposition_residual = nan;
  a.entropy_production = nan;
  if (options.cycles) {
    const auto cycles = enumerate_cycles(net, options.enumeration);
    const auto records = FluxContext(net).fluxes(cycles);
    a.cycle_count = records.size();
    a.decomposition_residual = max_decomposition_residual(net, records, a.p);
    a.entropy_production = entropy_production(records);
    a.ranked = rank_cycles(records, options.top_k, options.rank_key);
  }
  return a;
}

std::vector<double> SweepResult::values() const {
  std::vector<double> v;
  v.reserve(points.size());
  for (const auto& pt : points) v.push_back(pt.value);
  return v;
}

std::vector<double> SweepResult::series(int reservoir, Quantity q) const {
  std::vector<double> v;
  v.reserve(points.size());
  for (const auto& pt : points) v.push_back(pt.analysis.currents.at(reservoir).get(q).value_or(nan));
  return v;
}

SweepResult run_sweep(const SweepSpec& spec) {
  SweepResult result;
  result.parameter = spec.grid.parameter;
  const auto grid = spec.grid.values();
  get_parameter(spec.base, spec.grid.parameter);

  result.points.resize(grid.size());
  parallel_for(grid.size(), spec.threads, [&](std::size_t i) {
    try {
      const auto net = build_model(at_value(spec.base, spec.grid.parameter, grid[i]));
      result.points[i] = {grid[i], analyze_point(net, spec.analysis)};
    } catch (const Error&) {
      rethrow_at(spec.grid.parameter, grid[i]);
    }
  });
  for (const auto& r : result.points.front().analysis.currents.reservoirs) result.reservoir_ids.push_back(r.reservoir);

  std::set<Cycle> tracked;
  for (const auto& pt : result.points) {
    for (const auto& r : pt.analysis.ranked) tracked.insert(r.cycle);
  }
  result.tracked.assign(tracked.begin(), tracked.end());
  if (result.tracked.empty()) return result;

  {
    const auto net = build_model(at_value(spec.base, spec.grid.parameter, grid.front()));
    for (const auto& c : result.tracked) result.tracked_labels.push_back(format_cycle(net, c));
  }
  result.tracked_flux.assign(grid.size(), {});
  parallel_for(grid.size(), spec.threads, [&](std::size_t i) {
    try {
      const auto net = build_model(at_value(spec.base, spec.grid.parameter, grid[i]));
      const FluxContext ctx(net);
      auto& row = result.tracked_flux[i];
      for (const auto& c : result.tracked) {
        const auto rec = ctx.flux(c);
        row.push_back({rec.j_forward, rec.j_backward});
      }
    } catch (const Error&) {
      rethrow_at(spec.grid.parameter, grid[i]);
    }
  });
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  CsvWriter csv(out);
  std::vector<std::string> header{result.parameter};
  std::vector<std::pair<int, Quantity>> columns;
  if (!result.points.empty()) {
    for (const auto& r : result.points.front().analysis.currents.reservoirs) {
      for (Quantity q : all_quantities) {
        if (!r.get(q)) continue;
        columns.emplace_back(r.reservoir, q);
        header.push_back(current_column(r.reservoir, to_string(q)));
      }
    }
  }
  for (const char* h : {"p_min", "stationarity_residual", "tree_theorem_difference", "max_divergence",
                        "decomposition_residual", "entropy_production"}) {
    header.emplace_back(h);
  }
  for (const auto& label : result.tracked_labels) {
    header.push_back("jf[" + label + "]");
    header.push_back("jb[" + label + "]");
    header.push_back("jnet[" + label + "]");
  }
  csv.header(header);

  for (std::size_t i = 0; i < result.points.size(); ++i) {
    const auto& pt = result.points[i];
    const auto& a = pt.analysis;
    csv.field(pt.value);
    for (const auto& [res, q] : columns) csv.field(a.currents.at(res).get(q).value_or(nan));
    csv.field(a.min_probability)
        .field(a.stationarity_residual)
        .field(a.tree_theorem_difference)
        .field(a.max_divergence)
        .field(a.decomposition_residual)
        .field(a.entropy_production);
    if (!result.tracked_flux.empty()) {
      for (const auto& f : result.tracked_flux[i]) {
        csv.field(f.j_forward).field(f.j_backward).field(f.j_forward - f.j_backward);
      }
    }
    csv.end_row();
  }
}

void write_currents_csv(std::ostream& out, const SweepResult& result) {
  CsvWriter csv(out);
  csv.header({"sweep_value", "reservoir_id", "quantity", "current"});
  for (const auto& pt : result.points) {
    for (const auto& r : pt.analysis.currents.reservoirs) {
      auto emit = [&](std::string_view name, const std::optional<double>& v) {
        if (!v) return;
        csv.field(pt.value).field(r.reservoir).field(name).field(*v);
        csv.end_row();
      };
      emit("energy", r.energy);
      emit("heat", r.heat);
      emit("particle", r.particle);
      emit("spin", r.spin);
    }
  }
}

void write_ranked_csv(std::ostream& out, const TransitionNetwork& net, std::span<const CycleFluxRecord> ranked) {
  std::vector<std::pair<int, Quantity>> columns;
  for (const auto& res : net.reservoirs()) {
    for (Quantity q : all_quantities) {
      const bool annotated = std::any_of(net.channels().begin(), net.channels().end(), [&](const TransitionChannel& c) {
        return c.reservoir == res.id && c.carried(q).has_value();
      });
      if (annotated) columns.emplace_back(res.id, q);
    }
  }
  CsvWriter csv(out);
  std::vector<std::string> header{"rank", "cycle", "length", "j_forward", "j_backward", "j_net", "traffic", "affinity"};
  for (const auto& [res, q] : columns) header.push_back(std::string(to_string(q)) + "_" + std::to_string(res));
  csv.header(header);
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    const auto& r = ranked[i];
    csv.field(i + 1)
        .field(format_cycle(net, r.cycle))
        .field(r.cycle.size())
        .field(r.j_forward)
        .field(r.j_backward)
        .field(r.j_net)
        .field(r.traffic())
        .field(r.affinity);
    for (const auto& [res, q] : columns) {
      double v = 0.0;
      if (auto t = r.transport.find(res); t != r.transport.end()) {
        if (auto it = t->second.find(q); it != t->second.end()) v = it->second;
      }
      csv.field(v);
    }
    csv.end_row();
  }
}

}  // namespace cycleflux
