#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "cycleflux/cycle_flux.hpp"
#include "cycleflux/cycles.hpp"
#include "cycleflux/network.hpp"

namespace cycleflux {

inline constexpr EdgeId no_edge = std::numeric_limits<EdgeId>::max();

struct TrajectoryStep {
  StateId state = 0;
  double dwell = 0.0;    ///< time spent in state (last step truncated at total_time)
  EdgeId via = no_edge;  ///< edge used to enter state; no_edge for the first step
};

struct Trajectory {
  std::vector<TrajectoryStep> steps;
  std::uint64_t seed = 0;
  double total_time = 0.0;
};

struct SimulationOptions {
  /// Starting state; defaults to state 0.
  std::optional<StateId> start;
};

/// Continuous-time Markov chain sampler over the network's edges.
///
/// Uses std::mt19937_64 seeded with `seed`; uniforms are built from the top 53
/// bits of each draw, so a seed reproduces the same path on any platform.
/// Throws AbsorbingState on entering a state with zero exit rate.
class GillespieSampler {
 public:
  GillespieSampler(const TransitionNetwork& net, std::uint64_t seed, SimulationOptions options = {});

  /// Calls visit(step) for every visited state, in order.
  void run(double total_time, const std::function<void(const TrajectoryStep&)>& visit);

 private:
  struct Move {
    StateId to;
    EdgeId edge;
    double cumulative;
  };
  const TransitionNetwork& net_;
  std::uint64_t seed_;
  SimulationOptions options_;
  std::vector<std::vector<Move>> moves_;
};

Trajectory simulate(const TransitionNetwork& net, double total_time, std::uint64_t seed,
                    SimulationOptions options = {});

struct CycleCount {
  Cycle cycle;  ///< canonical forward orientation
  std::uint64_t forward = 0;
  std::uint64_t backward = 0;
};

struct CycleCountReport {
  std::vector<CycleCount> cycles;  ///< sorted by canonical key
  double total_time = 0.0;
  std::uint64_t jumps = 0;
  std::uint64_t discarded_excursions = 0;
  std::vector<double> occupancy;         ///< time fraction per state
  std::vector<double> occupancy_stderr;  ///< batch-means standard error

  const CycleCount* find(const Cycle& canonical_cycle) const;
};

/// Loop-erasing counter: keeps the stack of visited states and pops a loop
/// whenever the walker returns to a state on the stack. Loops of length two
/// are discarded in collapsed mode, and in multigraph mode unless the two
/// arcs used distinct edges.
class CycleCounter {
 public:
  static constexpr std::size_t default_batches = 32;

  CycleCounter(const TransitionNetwork& net, double total_time, std::size_t batches = default_batches);

  void visit(const TrajectoryStep& step);
  CycleCountReport report() const;

 private:
  void record_loop(std::size_t from);
  void accumulate_occupancy(StateId s, double dwell);

  const TransitionNetwork& net_;
  double total_time_;
  std::vector<StateId> stack_;
  std::vector<EdgeId> stack_edges_;  // edge used to enter stack_[i]
  std::vector<std::ptrdiff_t> position_;
  std::map<Cycle, std::pair<std::uint64_t, std::uint64_t>> counts_;
  std::uint64_t jumps_ = 0;
  std::uint64_t discarded_ = 0;
  double clock_ = 0.0;
  std::vector<std::vector<double>> batch_time_;  // [batch][state]
};

CycleCountReport count_cycle_completions(const TransitionNetwork& net, const Trajectory& trajectory);

/// Simulate and count without storing the trajectory.
CycleCountReport simulate_and_count(const TransitionNetwork& net, double total_time, std::uint64_t seed,
                                    SimulationOptions options = {});

struct CycleFluxEstimate {
  Cycle cycle;
  std::uint64_t forward_count = 0;
  std::uint64_t backward_count = 0;
  double forward = 0.0;  ///< count / time
  double backward = 0.0;
  double forward_stderr = 0.0;  ///< sqrt(count) / time
  double backward_stderr = 0.0;
  double net() const { return forward - backward; }
  double net_stderr() const;
};

std::vector<CycleFluxEstimate> empirical_cycle_flux(const CycleCountReport& report);

struct FluxComparison {
  CycleFluxEstimate estimate;
  double analytic_forward = 0.0;
  double analytic_backward = 0.0;
  double z_forward = 0.0;  ///< (estimate - analytic) / stderr; 0 when both vanish
  double z_backward = 0.0;
};

/// Pairs analytic records with estimates by canonical cycle. Cycles never
/// observed are compared against zero counts.
std::vector<FluxComparison> compare_with_analytic(const CycleCountReport& report,
                                                  std::span<const CycleFluxRecord> records);

}  // namespace cycleflux
