#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cycleflux {

using StateId = std::size_t;
using EdgeId = std::size_t;

enum class Statistics { fermion, boson };
enum class GraphMode { collapsed, multigraph };
enum class Quantity { energy, particle, spin };

std::string_view to_string(Statistics s);
std::string_view to_string(GraphMode m);
std::string_view to_string(Quantity q);
Statistics parse_statistics(std::string_view s);
GraphMode parse_graph_mode(std::string_view s);
Quantity parse_quantity(std::string_view s);

/// A system eigenstate. Energies are in the dimensionless units hbar = k_B = 1.
struct StateNode {
  StateId id = 0;
  std::string label;
  double energy = 0.0;
  std::map<std::string, double> quantum_numbers;
};

struct ReservoirSpec {
  int id = 0;
  std::string name;
  Statistics statistics = Statistics::boson;
  double temperature = 1.0;
  double chemical_potential = 0.0;
  double coupling = 1.0;
};

/// One reservoir-induced transition pair between two states.
///
/// rate_forward drives from -> to, rate_backward drives to -> from. The
/// transported map holds what enters the system from the reservoir on a
/// forward transition; a backward transition carries the negative.
struct TransitionChannel {
  StateId from = 0;
  StateId to = 0;
  int reservoir = 0;
  double rate_forward = 0.0;
  double rate_backward = 0.0;
  std::map<Quantity, double> transported;

  std::optional<double> carried(Quantity q) const;
};

/// Declarative description accepted by build_network.
struct NetworkSpec {
  std::vector<StateNode> states;
  std::vector<ReservoirSpec> reservoirs;
  std::vector<TransitionChannel> channels;
  GraphMode mode = GraphMode::collapsed;
};

/// A graph edge between u < v. In collapsed mode it merges every channel on the
/// state pair; in multigraph mode it wraps exactly one channel.
struct Edge {
  StateId u = 0;
  StateId v = 0;
  std::vector<std::size_t> channels;
  double rate_uv = 0.0;
  double rate_vu = 0.0;

  double rate_from(StateId from) const { return from == u ? rate_uv : rate_vu; }
  StateId other(StateId s) const { return s == u ? v : u; }
};

struct Neighbor {
  StateId state;
  EdgeId edge;
};

/// Validated, immutable transition network. Construct with build_network.
class TransitionNetwork {
 public:
  std::size_t size() const { return spec_.states.size(); }
  GraphMode mode() const { return spec_.mode; }

  const NetworkSpec& spec() const { return spec_; }
  const std::vector<StateNode>& states() const { return spec_.states; }
  const std::vector<ReservoirSpec>& reservoirs() const { return spec_.reservoirs; }
  const std::vector<TransitionChannel>& channels() const { return spec_.channels; }
  const std::vector<Edge>& edges() const { return edges_; }

  std::span<const Neighbor> neighbors(StateId s) const { return adjacency_[s]; }
  std::span<const EdgeId> edges_between(StateId a, StateId b) const;

  const ReservoirSpec& reservoir(int id) const;
  std::size_t reservoir_index(int id) const;
  StateId state_by_label(std::string_view label) const;

  /// Total rate from -> to summed over every channel.
  double rate(StateId from, StateId to) const;
  double max_rate() const;

  /// Copy with every rate multiplied by factor (> 0). Fluxes scale linearly,
  /// flux ratios and the steady state are unchanged.
  TransitionNetwork rescaled(double factor) const;
  TransitionNetwork with_mode(GraphMode mode) const;

 private:
  friend TransitionNetwork build_network(NetworkSpec spec);
  TransitionNetwork() = default;

  NetworkSpec spec_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<std::vector<EdgeId>> pair_edges_;  // dense size() x size()
  std::map<int, std::size_t> reservoir_lookup_;
};

/// Validates spec and builds the edge structure.
/// Throws Error with DanglingReference, InvalidRate, DuplicateChannel or
/// DisconnectedGraph.
TransitionNetwork build_network(NetworkSpec spec);

struct BalanceDiagnostic {
  std::size_t channel = 0;
  bool zero_rate = false;
  /// ln(k_fw / k_bw) + (dE - mu dn) / T; empty when a rate is zero.
  std::optional<double> residual;
};

/// Local-detailed-balance check for every channel. dE is taken from the state
/// energies and dn from the channel's particle annotation (0 when absent).
std::vector<BalanceDiagnostic> validate_detailed_balance(const TransitionNetwork& net);

}  // namespace cycleflux
