#include "cycleflux/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "cycleflux/error.hpp"

namespace cycleflux {

std::string_view to_string(Statistics s) {
  return s == Statistics::fermion ? "fermion" : "boson";
}

std::string_view to_string(GraphMode m) {
  return m == GraphMode::collapsed ? "collapsed" : "multigraph";
}

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::energy: return "energy";
    case Quantity::particle: return "particle";
    case Quantity::spin: return "spin";
  }
  return "energy";
}

Statistics parse_statistics(std::string_view s) {
  if (s == "fermion") return Statistics::fermion;
  if (s == "boson") return Statistics::boson;
  throw Error(ErrorCode::parse_error, "unknown statistics '" + std::string(s) + "'");
}

GraphMode parse_graph_mode(std::string_view s) {
  if (s == "collapsed") return GraphMode::collapsed;
  if (s == "multigraph") return GraphMode::multigraph;
  throw Error(ErrorCode::parse_error, "unknown graph mode '" + std::string(s) + "'");
}

Quantity parse_quantity(std::string_view s) {
  if (s == "energy") return Quantity::energy;
  if (s == "particle") return Quantity::particle;
  if (s == "spin") return Quantity::spin;
  throw Error(ErrorCode::parse_error, "unknown quantity '" + std::string(s) + "'");
}

std::optional<double> TransitionChannel::carried(Quantity q) const {
  auto it = transported.find(q);
  if (it == transported.end()) return std::nullopt;
  return it->second;
}

std::span<const EdgeId> TransitionNetwork::edges_between(StateId a, StateId b) const {
  return pair_edges_[a * size() + b];
}

const ReservoirSpec& TransitionNetwork::reservoir(int id) const {
  return spec_.reservoirs[reservoir_index(id)];
}

std::size_t TransitionNetwork::reservoir_index(int id) const {
  auto it = reservoir_lookup_.find(id);
  if (it == reservoir_lookup_.end()) {
    throw Error(ErrorCode::dangling_reference, "no reservoir with id " + std::to_string(id));
  }
  return it->second;
}

StateId TransitionNetwork::state_by_label(std::string_view label) const {
  for (const auto& s : spec_.states) {
    if (s.label == label) return s.id;
  }
  throw Error(ErrorCode::dangling_reference, "no state labelled '" + std::string(label) + "'");
}

double TransitionNetwork::rate(StateId from, StateId to) const {
  double total = 0.0;
  for (EdgeId e : edges_between(from, to)) total += edges_[e].rate_from(from);
  return total;
}

double TransitionNetwork::max_rate() const {
  double m = 0.0;
  for (const auto& c : spec_.channels) m = std::max({m, c.rate_forward, c.rate_backward});
  return m;
}

TransitionNetwork TransitionNetwork::rescaled(double factor) const {
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw Error(ErrorCode::invalid_rate, "rescale factor must be positive and finite");
  }
  NetworkSpec copy = spec_;
  for (auto& c : copy.channels) {
    c.rate_forward *= factor;
    c.rate_backward *= factor;
  }
  return build_network(std::move(copy));
}

TransitionNetwork TransitionNetwork::with_mode(GraphMode mode) const {
  NetworkSpec copy = spec_;
  copy.mode = mode;
  return build_network(std::move(copy));
}

namespace {

void check_rate(double r, std::size_t index) {
  if (!std::isfinite(r) || r < 0.0) {
    throw Error(ErrorCode::invalid_rate,
                "channel " + std::to_string(index) + " has a negative or non-finite rate");
  }
}

bool connected(std::size_t n, const std::vector<std::vector<Neighbor>>& adjacency) {
  if (n == 0) return false;
  std::vector<bool> seen(n, false);
  std::vector<StateId> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    StateId s = stack.back();
    stack.pop_back();
    for (const auto& nb : adjacency[s]) {
      if (!seen[nb.state]) {
        seen[nb.state] = true;
        ++count;
        stack.push_back(nb.state);
      }
    }
  }
  return count == n;
}

}  // namespace

TransitionNetwork build_network(NetworkSpec spec) {
  const std::size_t n = spec.states.size();
  if (n == 0) throw Error(ErrorCode::disconnected_graph, "network has no states");

  std::set<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) {
    spec.states[i].id = i;
    if (!labels.insert(spec.states[i].label).second) {
      throw Error(ErrorCode::dangling_reference,
                  "duplicate state label '" + spec.states[i].label + "'");
    }
  }

  TransitionNetwork net;
  for (std::size_t r = 0; r < spec.reservoirs.size(); ++r) {
    const auto& res = spec.reservoirs[r];
    if (!(res.temperature > 0.0)) {
      throw Error(ErrorCode::invalid_parameter,
                  "reservoir " + std::to_string(res.id) + " needs a positive temperature");
    }
    if (!(res.coupling > 0.0)) {
      throw Error(ErrorCode::invalid_parameter,
                  "reservoir " + std::to_string(res.id) + " needs a positive coupling");
    }
    if (!net.reservoir_lookup_.emplace(res.id, r).second) {
      throw Error(ErrorCode::dangling_reference, "duplicate reservoir id " + std::to_string(res.id));
    }
  }

  std::set<std::tuple<StateId, StateId, int>> seen_channels;
  for (std::size_t i = 0; i < spec.channels.size(); ++i) {
    const auto& c = spec.channels[i];
    if (c.from >= n || c.to >= n) {
      throw Error(ErrorCode::dangling_reference, "channel " + std::to_string(i) + " references a missing state");
    }
    if (c.from == c.to) {
      throw Error(ErrorCode::dangling_reference, "channel " + std::to_string(i) + " is a self-loop");
    }
    if (!net.reservoir_lookup_.contains(c.reservoir)) {
      throw Error(ErrorCode::dangling_reference,
                  "channel " + std::to_string(i) + " references missing reservoir " + std::to_string(c.reservoir));
    }
    check_rate(c.rate_forward, i);
    check_rate(c.rate_backward, i);
    if (c.rate_forward == 0.0 && c.rate_backward == 0.0) {
      throw Error(ErrorCode::invalid_rate, "channel " + std::to_string(i) + " has both rates zero");
    }
    auto key = std::make_tuple(std::min(c.from, c.to), std::max(c.from, c.to), c.reservoir);
    if (!seen_channels.insert(key).second) {
      throw Error(ErrorCode::duplicate_channel,
                  "channel " + std::to_string(i) + " repeats a (state pair, reservoir) combination");
    }
  }

  // Edges are created in order of first appearance so ids are stable.
  std::map<std::pair<StateId, StateId>, EdgeId> pair_to_edge;
  for (std::size_t i = 0; i < spec.channels.size(); ++i) {
    const auto& c = spec.channels[i];
    const StateId u = std::min(c.from, c.to);
    const StateId v = std::max(c.from, c.to);
    EdgeId e;
    if (spec.mode == GraphMode::collapsed) {
      auto [it, inserted] = pair_to_edge.try_emplace({u, v}, net.edges_.size());
      if (inserted) net.edges_.push_back(Edge{u, v, {}, 0.0, 0.0});
      e = it->second;
    } else {
      e = net.edges_.size();
      net.edges_.push_back(Edge{u, v, {}, 0.0, 0.0});
    }
    Edge& edge = net.edges_[e];
    edge.channels.push_back(i);
    const double k_uv = c.from == u ? c.rate_forward : c.rate_backward;
    const double k_vu = c.from == u ? c.rate_backward : c.rate_forward;
    edge.rate_uv += k_uv;
    edge.rate_vu += k_vu;
  }

  net.adjacency_.assign(n, {});
  net.pair_edges_.assign(n * n, {});
  for (EdgeId e = 0; e < net.edges_.size(); ++e) {
    const Edge& edge = net.edges_[e];
    net.adjacency_[edge.u].push_back({edge.v, e});
    net.adjacency_[edge.v].push_back({edge.u, e});
    net.pair_edges_[edge.u * n + edge.v].push_back(e);
    net.pair_edges_[edge.v * n + edge.u].push_back(e);
  }

  if (!connected(n, net.adjacency_)) {
    throw Error(ErrorCode::disconnected_graph, "the undirected support of the network is not connected");
  }

  net.spec_ = std::move(spec);
  return net;
}

std::vector<BalanceDiagnostic> validate_detailed_balance(const TransitionNetwork& net) {
  std::vector<BalanceDiagnostic> out;
  out.reserve(net.channels().size());
  for (std::size_t i = 0; i < net.channels().size(); ++i) {
    const auto& c = net.channels()[i];
    BalanceDiagnostic d;
    d.channel = i;
    if (c.rate_forward == 0.0 || c.rate_backward == 0.0) {
      d.zero_rate = true;
    } else {
      const auto& res = net.reservoir(c.reservoir);
      const double de = net.states()[c.to].energy - net.states()[c.from].energy;
      const double dn = c.carried(Quantity::particle).value_or(0.0);
      const double expected = -(de - res.chemical_potential * dn) / res.temperature;
      d.residual = std::log(c.rate_forward / c.rate_backward) - expected;
    }
    out.push_back(d);
  }
  return out;
}

}  // namespace cycleflux
