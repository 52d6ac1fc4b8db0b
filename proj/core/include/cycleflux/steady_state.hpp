#pragma once

#include <optional>
#include <vector>

#include "cycleflux/laplacian.hpp"
#include "cycleflux/network.hpp"

namespace cycleflux {

/// Stationary occupation probabilities, indexed by StateId.
struct ProbabilityVector {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](StateId s) const { return values[s]; }
};

/// Solves L p = 0, sum(p) = 1 by subtraction-free state reduction (GTH), which
/// keeps small probabilities accurate to working precision entrywise. Throws
/// SingularBeyondRankOne when the rate graph has more than one closed
/// communicating class.
ProbabilityVector solve_steady_state(const TransitionNetwork& net);
ProbabilityVector solve_steady_state(const TransitionNetwork& net, const Laplacian& lap);

/// Same system by partial-pivot LU with row 0 of L replaced by the
/// normalization constraint. Accurate normwise only.
ProbabilityVector solve_steady_state_lu(const TransitionNetwork& net);
ProbabilityVector solve_steady_state_lu(const TransitionNetwork& net, const Laplacian& lap);

/// Markov chain tree theorem: p_i = det(L[i;i]) / sum_j det(L[j;j]).
ProbabilityVector tree_theorem_steady_state(const Laplacian& lap);

/// max_i |(L p)_i| / (max|L| * max p).
double stationarity_residual(const Laplacian& lap, const ProbabilityVector& p);

/// max_i |a_i - b_i| / max_i |b_i|.
double relative_difference(const ProbabilityVector& a, const ProbabilityVector& b);

struct Flow {
  double forward = 0.0;   ///< probability flow along the stored direction
  double backward = 0.0;  ///< flow against it
  double net() const { return forward - backward; }
  double traffic() const { return forward > backward ? forward : backward; }
};

/// Channel flows are oriented from -> to; edge flows u -> v (u < v).
struct EdgeFluxMap {
  std::vector<Flow> channels;
  std::vector<Flow> edges;

  /// Net inflow at every state; zero at a stationary p.
  std::vector<double> divergence(const TransitionNetwork& net) const;
  /// max |divergence| / max traffic.
  double max_relative_divergence(const TransitionNetwork& net) const;
};

EdgeFluxMap edge_fluxes(const TransitionNetwork& net, const ProbabilityVector& p);

/// Currents from the bath into the system; heat = energy - mu * particle.
struct ReservoirCurrent {
  int reservoir = 0;
  std::optional<double> energy;
  std::optional<double> heat;
  std::optional<double> particle;
  std::optional<double> spin;

  std::optional<double> get(Quantity q) const;
};

struct CurrentReport {
  std::vector<ReservoirCurrent> reservoirs;

  const ReservoirCurrent& at(int reservoir_id) const;
  /// Sum over reservoirs; empty when any reservoir lacks the quantity.
  std::optional<double> total(Quantity q) const;
};

/// Current of one quantity into the system from one reservoir. Throws
/// MissingAnnotation when any of the reservoir's channels lacks q.
double reservoir_current(const TransitionNetwork& net, const ProbabilityVector& p, int reservoir,
                         Quantity q);

/// Every quantity that all channels of a reservoir annotate is reported.
CurrentReport reservoir_currents(const TransitionNetwork& net, const ProbabilityVector& p);

}  // namespace cycleflux
