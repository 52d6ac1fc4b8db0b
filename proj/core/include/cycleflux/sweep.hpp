#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cycleflux/config.hpp"
#include "cycleflux/cycle_flux.hpp"
#include "cycleflux/steady_state.hpp"

namespace cycleflux {

/// Everything computed at one parameter point.
struct PointAnalysis {
  ProbabilityVector p;
  double stationarity_residual = 0.0;
  double tree_theorem_difference = 0.0;  ///< nullspace vs principal-minor p, relative
  double min_probability = 0.0;
  double max_divergence = 0.0;           ///< Kirchhoff check, relative to max flow
  CurrentReport currents;
  std::size_t cycle_count = 0;
  std::vector<CycleFluxRecord> ranked;   ///< top-k by the chosen key
  double decomposition_residual = 0.0;   ///< worst edge, relative; NaN without cycles
  double entropy_production = 0.0;       ///< NaN without cycles
};

struct AnalysisOptions {
  std::size_t top_k = 5;
  RankKey rank_key = RankKey::traffic;
  bool cycles = true;
  EnumerationOptions enumeration{};
};

PointAnalysis analyze_point(const TransitionNetwork& net, const AnalysisOptions& options = {});

struct SweepSpec {
  ModelConfig base;
  GridSpec grid;
  AnalysisOptions analysis{};
  unsigned threads = 0;  ///< 0: one per hardware thread
};

struct SweepPoint {
  double value = 0.0;
  PointAnalysis analysis;
};

struct TrackedFlux {
  double j_forward = 0.0;
  double j_backward = 0.0;
};

struct SweepResult {
  std::string parameter;
  std::vector<int> reservoir_ids;
  std::vector<SweepPoint> points;
  /// Union of every point's top-k, in canonical order, evaluated at every point.
  std::vector<Cycle> tracked;
  std::vector<std::string> tracked_labels;
  std::vector<std::vector<TrackedFlux>> tracked_flux;  ///< [point][tracked cycle]

  std::vector<double> values() const;
  /// Current of q from one reservoir along the sweep; NaN where not annotated.
  std::vector<double> series(int reservoir, Quantity q) const;
};

/// Evaluates the grid concurrently; the result is in grid order and does not
/// depend on the thread count. Errors are rethrown with the grid value.
SweepResult run_sweep(const SweepSpec& spec);

/// One row per grid point: currents, diagnostics, tracked cycle fluxes.
void write_sweep_csv(std::ostream& out, const SweepResult& result);
/// Long format: sweep_value,reservoir_id,quantity,current.
void write_currents_csv(std::ostream& out, const SweepResult& result);
/// rank,cycle,length,j_forward,j_backward,j_net,traffic,affinity and per-reservoir
/// transport per forward completion (<quantity>_<reservoir id>).
void write_ranked_csv(std::ostream& out, const TransitionNetwork& net, std::span<const CycleFluxRecord> ranked);

}  // namespace cycleflux
