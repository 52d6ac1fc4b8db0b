#include "cycleflux/cycle_flux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cycleflux/error.hpp"

namespace cycleflux {

double CycleFluxRecord::transport_rate(int reservoir, Quantity q) const {
  auto value = [&](const std::map<int, QuantityMap>& t) {
    auto r = t.find(reservoir);
    if (r == t.end()) return 0.0;
    auto it = r->second.find(q);
    return it == r->second.end() ? 0.0 : it->second;
  };
  return j_forward * value(transport) + j_backward * value(transport_backward);
}

double cycle_weight(const TransitionNetwork& net, const Cycle& cycle) {
  double w = 1.0;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    w *= net.edges()[cycle.edges[i]].rate_from(cycle.vertices[i]);
  }
  return w;
}

double rooted_minor(const Laplacian& lap, const Cycle& cycle) {
  return principal_minor(lap, cycle.vertices);
}

namespace {

// Expected transport of one traversal of `cycle`, channel contributions
// weighted by their share of the edge rate in the direction of travel.
std::map<int, QuantityMap> traversal_transport(const TransitionNetwork& net, const Cycle& cycle) {
  std::map<int, QuantityMap> out;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const StateId from = cycle.vertices[i];
    const Edge& edge = net.edges()[cycle.edges[i]];
    const double total = edge.rate_from(from);
    for (std::size_t ci : edge.channels) {
      const auto& ch = net.channels()[ci];
      const bool along = ch.from == from;
      const double k = along ? ch.rate_forward : ch.rate_backward;
      const double share = total > 0.0 ? k / total : 1.0 / static_cast<double>(edge.channels.size());
      auto& slot = out[ch.reservoir];
      for (const auto& [q, amount] : ch.transported) {
        slot[q] += share * (along ? amount : -amount);
      }
    }
  }
  return out;
}

double log_ratio(const TransitionNetwork& net, const Cycle& cycle) {
  double a = 0.0;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    const Edge& edge = net.edges()[cycle.edges[i]];
    const double fw = edge.rate_from(cycle.vertices[i]);
    const double bw = edge.rate_from(cycle.next(i));
    if (fw == 0.0 && bw == 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (fw == 0.0) return -std::numeric_limits<double>::infinity();
    if (bw == 0.0) return std::numeric_limits<double>::infinity();
    a += std::log(fw) - std::log(bw);
  }
  return a;
}

}  // namespace

FluxContext::FluxContext(const TransitionNetwork& net)
    : net_(&net), lap_(build_laplacian(net)), normalization_(tree_normalization(lap_)) {
  if (!(normalization_ > 0.0) || !std::isnormal(normalization_)) {
    throw Error(ErrorCode::numerical_underflow,
                "spanning-tree normalization is not a normal double; rescale the rates");
  }
}

CycleFluxRecord FluxContext::flux(const Cycle& cycle) const {
  CycleFluxRecord r;
  r.cycle = cycle;
  const Cycle back = reverse(cycle);
  r.pi_forward = cycle_weight(*net_, cycle);
  r.pi_backward = cycle_weight(*net_, back);
  r.rooted_minor = rooted_minor(lap_, cycle);
  r.normalization = normalization_;
  r.j_forward = r.pi_forward * r.rooted_minor / r.normalization;
  r.j_backward = r.pi_backward * r.rooted_minor / r.normalization;
  r.j_net = r.j_forward - r.j_backward;
  r.affinity = log_ratio(*net_, cycle);
  r.transport = traversal_transport(*net_, cycle);
  r.transport_backward = traversal_transport(*net_, back);
  return r;
}

std::vector<CycleFluxRecord> FluxContext::fluxes(std::span<const Cycle> cycles) const {
  std::vector<CycleFluxRecord> out;
  out.reserve(cycles.size());
  for (const auto& c : cycles) out.push_back(flux(c));
  return out;
}

CycleFluxRecord cycle_flux_pair(const TransitionNetwork& net, const Cycle& cycle) {
  return FluxContext(net).flux(canonical_form(cycle).cycle);
}

std::vector<CycleFluxRecord> all_cycle_fluxes(const TransitionNetwork& net, EnumerationOptions options) {
  const auto cycles = enumerate_cycles(net, options);
  return FluxContext(net).fluxes(cycles);
}

std::string_view to_string(RankKey key) { return key == RankKey::traffic ? "traffic" : "net"; }

RankKey parse_rank_key(std::string_view s) {
  if (s == "traffic") return RankKey::traffic;
  if (s == "net") return RankKey::net;
  throw Error(ErrorCode::parse_error, "unknown rank key '" + std::string(s) + "'");
}

std::vector<CycleFluxRecord> rank_cycles(std::vector<CycleFluxRecord> records, std::size_t k, RankKey key) {
  auto score = [key](const CycleFluxRecord& r) {
    return key == RankKey::traffic ? r.traffic() : std::abs(r.j_net);
  };
  std::sort(records.begin(), records.end(), [&](const CycleFluxRecord& a, const CycleFluxRecord& b) {
    const double sa = score(a), sb = score(b);
    if (sa != sb) return sa > sb;
    return a.cycle < b.cycle;
  });
  if (records.size() > k) records.resize(k);
  return records;
}

std::vector<CycleFluxRecord> rank_cycles(const TransitionNetwork& net, std::size_t k, RankKey key) {
  return rank_cycles(all_cycle_fluxes(net), k, key);
}

EdgeDecomposition decompose_edge_flux(const TransitionNetwork& net, std::span<const CycleFluxRecord> records,
                                      const ProbabilityVector& p, EdgeId edge) {
  const Edge& e = net.edges().at(edge);
  EdgeDecomposition d;
  d.edge = edge;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const int sign = traversal_sign(records[i].cycle, edge, e.u);
    if (sign == 0) continue;
    const double c = sign * records[i].j_net;
    d.contributions.push_back({i, sign, c});
    d.cycle_sum += c;
  }
  const double forward = e.rate_uv * p[e.u];
  const double backward = e.rate_vu * p[e.v];
  d.edge_flux = forward - backward;
  d.residual = std::abs(d.cycle_sum - d.edge_flux);
  const double scale = std::max({std::abs(d.edge_flux), forward, backward});
  d.relative_residual = scale > 0.0 ? d.residual / scale : d.residual;
  return d;
}

double max_decomposition_residual(const TransitionNetwork& net, std::span<const CycleFluxRecord> records,
                                  const ProbabilityVector& p) {
  // One pass over records instead of one per edge.
  std::vector<double> sums(net.edges().size(), 0.0);
  for (const auto& r : records) {
    for (std::size_t i = 0; i < r.cycle.size(); ++i) {
      const Edge& e = net.edges()[r.cycle.edges[i]];
      sums[r.cycle.edges[i]] += (r.cycle.vertices[i] == e.u ? 1.0 : -1.0) * r.j_net;
    }
  }
  double worst = 0.0;
  for (EdgeId id = 0; id < net.edges().size(); ++id) {
    const Edge& e = net.edges()[id];
    const double forward = e.rate_uv * p[e.u];
    const double backward = e.rate_vu * p[e.v];
    const double scale = std::max({std::abs(forward - backward), forward, backward});
    const double res = std::abs(sums[id] - (forward - backward));
    worst = std::max(worst, scale > 0.0 ? res / scale : res);
  }
  return worst;
}

double entropy_production(std::span<const CycleFluxRecord> records) {
  double total = 0.0;
  for (const auto& r : records) {
    if (r.j_net == 0.0) continue;
    total += r.j_net * r.affinity;
  }
  return total;
}

double entropy_production(const TransitionNetwork& net) {
  const auto records = all_cycle_fluxes(net);
  return entropy_production(records);
}

}  // namespace cycleflux
