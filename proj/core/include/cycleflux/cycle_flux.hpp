#pragma once

#include <map>
#include <span>
#include <vector>

#include "cycleflux/cycles.hpp"
#include "cycleflux/laplacian.hpp"
#include "cycleflux/network.hpp"
#include "cycleflux/steady_state.hpp"

namespace cycleflux {

/// Transported amounts keyed by quantity (absent when a channel lacks it).
using QuantityMap = std::map<Quantity, double>;

/// Cycle flux pair of one canonical cycle, J± = Π± det(L[C;C]) / Σ_i det(L[i;i]).
struct CycleFluxRecord {
  Cycle cycle;                 ///< canonical forward orientation
  double pi_forward = 0.0;     ///< product of rates along the forward orientation
  double pi_backward = 0.0;
  double rooted_minor = 0.0;   ///< det(L[C;C]), trees rooted on the cycle
  double normalization = 0.0;  ///< Σ_i det(L[i;i])
  double j_forward = 0.0;
  double j_backward = 0.0;
  double j_net = 0.0;
  double affinity = 0.0;       ///< ln(Π+ / Π-), ±inf if one side vanishes
  /// Per reservoir id: amount entering the system per forward completion.
  /// On collapsed edges the step is split across channels by rate weight.
  std::map<int, QuantityMap> transport;
  /// Same for a backward completion (equals -transport without parallel channels).
  std::map<int, QuantityMap> transport_backward;

  double traffic() const { return j_forward > j_backward ? j_forward : j_backward; }
  /// Expected amount of q exchanged with reservoir per unit time via this cycle.
  double transport_rate(int reservoir, Quantity q) const;
};

/// Product of directed rates along the cycle as traversed (edge-specific).
double cycle_weight(const TransitionNetwork& net, const Cycle& cycle);

/// det(L[C;C]); 1 when the cycle covers every state.
double rooted_minor(const Laplacian& lap, const Cycle& cycle);

/// Network plus its Laplacian and normalization, computed once. Throws
/// NumericalUnderflow when Σ is not a normal double; rescale rates then.
class FluxContext {
 public:
  explicit FluxContext(const TransitionNetwork& net);

  const TransitionNetwork& network() const { return *net_; }
  const Laplacian& laplacian() const { return lap_; }
  double normalization() const { return normalization_; }

  CycleFluxRecord flux(const Cycle& canonical_cycle) const;
  std::vector<CycleFluxRecord> fluxes(std::span<const Cycle> cycles) const;

 private:
  const TransitionNetwork* net_;
  Laplacian lap_;
  double normalization_;
};

CycleFluxRecord cycle_flux_pair(const TransitionNetwork& net, const Cycle& cycle);

/// Enumerate every cycle and evaluate its flux pair.
std::vector<CycleFluxRecord> all_cycle_fluxes(const TransitionNetwork& net,
                                              EnumerationOptions options = {});

enum class RankKey {
  traffic,  ///< max(J+, J-), keeps futile cycles visible
  net,      ///< |J+ - J-|
};

std::string_view to_string(RankKey key);
RankKey parse_rank_key(std::string_view s);

/// Sorted descending by key, ties broken by canonical cycle order; truncated to k.
std::vector<CycleFluxRecord> rank_cycles(std::vector<CycleFluxRecord> records, std::size_t k,
                                         RankKey key = RankKey::traffic);
std::vector<CycleFluxRecord> rank_cycles(const TransitionNetwork& net, std::size_t k,
                                         RankKey key = RankKey::traffic);

struct CycleContribution {
  std::size_t record = 0;  ///< index into the records span
  int sign = 0;            ///< +1 if the forward orientation runs u -> v
  double contribution = 0.0;
};

struct EdgeDecomposition {
  EdgeId edge = 0;
  std::vector<CycleContribution> contributions;
  double cycle_sum = 0.0;   ///< Σ sign * j_net, oriented u -> v
  double edge_flux = 0.0;   ///< steady-state net flux u -> v
  double residual = 0.0;
  double relative_residual = 0.0;  ///< residual / max(|J|, one-way flows)
};

EdgeDecomposition decompose_edge_flux(const TransitionNetwork& net,
                                      std::span<const CycleFluxRecord> records,
                                      const ProbabilityVector& p, EdgeId edge);

/// Largest relative residual over all edges.
double max_decomposition_residual(const TransitionNetwork& net,
                                  std::span<const CycleFluxRecord> records,
                                  const ProbabilityVector& p);

/// Σ_C (J+ - J-) ln(Π+/Π-). Non-negative; zero at equilibrium.
double entropy_production(std::span<const CycleFluxRecord> records);
double entropy_production(const TransitionNetwork& net);

}  // namespace cycleflux
