#include "cycleflux/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "cycleflux/error.hpp"

namespace cycleflux {

namespace {

struct ClosedClasses {
  std::size_t count = 0;         // dimension of the nullspace of L
  std::vector<bool> recurrent;  // member of some closed class
};

ClosedClasses closed_classes(const TransitionNetwork& net) {
  const std::size_t n = net.size();
  // Tarjan SCC, iterative enough for n <= a few thousand.
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<StateId> stack;
  int counter = 0, ncomp = 0;
  std::function<void(StateId)> strong = [&](StateId v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (const auto& nb : net.neighbors(v)) {
      if (net.edges()[nb.edge].rate_from(v) <= 0.0) continue;
      StateId w = nb.state;
      if (index[w] < 0) {
        strong(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      StateId w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = ncomp;
      } while (w != v);
      ++ncomp;
    }
  };
  for (StateId v = 0; v < n; ++v) {
    if (index[v] < 0) strong(v);
  }
  std::vector<bool> leaks(static_cast<std::size_t>(ncomp), false);
  for (StateId v = 0; v < n; ++v) {
    for (const auto& nb : net.neighbors(v)) {
      if (net.edges()[nb.edge].rate_from(v) > 0.0 && comp[nb.state] != comp[v]) {
        leaks[static_cast<std::size_t>(comp[v])] = true;
      }
    }
  }
  ClosedClasses out;
  out.count = static_cast<std::size_t>(std::count(leaks.begin(), leaks.end(), false));
  out.recurrent.resize(n);
  for (StateId v = 0; v < n; ++v) out.recurrent[v] = !leaks[static_cast<std::size_t>(comp[v])];
  return out;
}

std::vector<bool> require_unique(const TransitionNetwork& net) {
  auto classes = closed_classes(net);
  if (classes.count != 1) {
    throw Error(ErrorCode::singular_beyond_rank_one,
                "rate graph has " + std::to_string(classes.count) + " closed classes; steady state is not unique");
  }
  return std::move(classes.recurrent);
}

// Transient states are zeroed exactly rather than left at round-off.
ProbabilityVector normalized(const Eigen::VectorXd& x, const std::vector<bool>& recurrent) {
  ProbabilityVector p;
  p.values.resize(static_cast<std::size_t>(x.size()));
  double total = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double v = recurrent[static_cast<std::size_t>(i)] ? std::max(0.0, x(i)) : 0.0;
    p.values[static_cast<std::size_t>(i)] = v;
    total += v;
  }
  for (double& v : p.values) v /= total;
  return p;
}

}  // namespace

ProbabilityVector solve_steady_state(const TransitionNetwork& net) {
  return solve_steady_state(net, build_laplacian(net));
}

ProbabilityVector solve_steady_state(const TransitionNetwork& net, const Laplacian& lap) {
  const auto recurrent = require_unique(net);
  const auto n = static_cast<Eigen::Index>(lap.size());
  if (n == 1) return ProbabilityVector{{1.0}};

  // Grassmann-Taksar-Heyman state reduction: LU on L with each pivot taken
  // as the censored escape rate, then back substitution from p_0 = 1.
  const Eigen::MatrixXd& m = lap.matrix();
  Eigen::MatrixXd rate(n, n);  // rate(a, b): a -> b
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) rate(a, b) = a == b ? 0.0 : -m(b, a);
  }
  Eigen::VectorXd pivot = Eigen::VectorXd::Zero(n);
  for (Eigen::Index p = n - 1; p > 0; --p) {
    for (Eigen::Index b = 0; b < p; ++b) pivot(p) += rate(p, b);
    // Transient states can leave a censored state with no way down; the
    // reduction is undefined there.
    if (!(pivot(p) > 0.0)) return solve_steady_state_lu(net, lap);
    for (Eigen::Index a = 0; a < p; ++a) {
      const double f = rate(a, p) / pivot(p);
      if (f == 0.0) continue;
      for (Eigen::Index b = 0; b < p; ++b) {
        if (b != a) rate(a, b) += f * rate(p, b);
      }
    }
  }
  Eigen::VectorXd x(n);
  x(0) = 1.0;
  for (Eigen::Index j = 1; j < n; ++j) {
    double in = 0.0;
    for (Eigen::Index i = 0; i < j; ++i) in += x(i) * rate(i, j);
    x(j) = in / pivot(j);
  }
  return normalized(x, recurrent);
}

ProbabilityVector solve_steady_state_lu(const TransitionNetwork& net) {
  return solve_steady_state_lu(net, build_laplacian(net));
}

ProbabilityVector solve_steady_state_lu(const TransitionNetwork& net, const Laplacian& lap) {
  const auto recurrent = require_unique(net);
  const auto n = static_cast<Eigen::Index>(lap.size());
  if (n == 1) return ProbabilityVector{{1.0}};

  // Rows of L sum to the zero vector, so any single row is redundant.
  Eigen::MatrixXd a = lap.matrix();
  a.row(0).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(0) = 1.0;
  return normalized(a.partialPivLu().solve(rhs), recurrent);
}

ProbabilityVector tree_theorem_steady_state(const Laplacian& lap) {
  ProbabilityVector p;
  p.values.resize(lap.size());
  double total = 0.0;
  for (StateId i = 0; i < lap.size(); ++i) {
    const StateId single[] = {i};
    p.values[i] = principal_minor(lap, single);
    total += p.values[i];
  }
  if (!(total > 0.0) || !std::isnormal(total)) {
    throw Error(ErrorCode::numerical_underflow,
                "spanning-tree normalization is not a normal double; rescale the rates");
  }
  for (double& v : p.values) v /= total;
  return p;
}

double stationarity_residual(const Laplacian& lap, const ProbabilityVector& p) {
  Eigen::Map<const Eigen::VectorXd> v(p.values.data(), static_cast<Eigen::Index>(p.size()));
  const double scale = lap.matrix().cwiseAbs().maxCoeff() * v.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return (lap.matrix() * v).cwiseAbs().maxCoeff() / scale;
}

double relative_difference(const ProbabilityVector& a, const ProbabilityVector& b) {
  double diff = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a.values[i] - b.values[i]));
    ref = std::max(ref, std::abs(b.values[i]));
  }
  return ref == 0.0 ? diff : diff / ref;
}

std::vector<double> EdgeFluxMap::divergence(const TransitionNetwork& net) const {
  std::vector<double> div(net.size(), 0.0);
  for (EdgeId e = 0; e < edges.size(); ++e) {
    const Edge& edge = net.edges()[e];
    div[edge.v] += edges[e].net();
    div[edge.u] -= edges[e].net();
  }
  return div;
}

double EdgeFluxMap::max_relative_divergence(const TransitionNetwork& net) const {
  double scale = 0.0;
  for (const auto& f : edges) scale = std::max(scale, f.traffic());
  double worst = 0.0;
  for (double d : divergence(net)) worst = std::max(worst, std::abs(d));
  return scale == 0.0 ? worst : worst / scale;
}

EdgeFluxMap edge_fluxes(const TransitionNetwork& net, const ProbabilityVector& p) {
  EdgeFluxMap map;
  map.channels.reserve(net.channels().size());
  for (const auto& c : net.channels()) {
    map.channels.push_back({c.rate_forward * p[c.from], c.rate_backward * p[c.to]});
  }
  map.edges.reserve(net.edges().size());
  for (const auto& e : net.edges()) {
    map.edges.push_back({e.rate_uv * p[e.u], e.rate_vu * p[e.v]});
  }
  return map;
}

std::optional<double> ReservoirCurrent::get(Quantity q) const {
  switch (q) {
    case Quantity::energy: return energy;
    case Quantity::particle: return particle;
    case Quantity::spin: return spin;
  }
  return std::nullopt;
}

const ReservoirCurrent& CurrentReport::at(int reservoir_id) const {
  for (const auto& r : reservoirs) {
    if (r.reservoir == reservoir_id) return r;
  }
  throw Error(ErrorCode::dangling_reference, "no current for reservoir " + std::to_string(reservoir_id));
}

std::optional<double> CurrentReport::total(Quantity q) const {
  double sum = 0.0;
  for (const auto& r : reservoirs) {
    auto v = r.get(q);
    if (!v) return std::nullopt;
    sum += *v;
  }
  return sum;
}

double reservoir_current(const TransitionNetwork& net, const ProbabilityVector& p, int reservoir,
                         Quantity q) {
  net.reservoir_index(reservoir);
  double total = 0.0;
  for (std::size_t i = 0; i < net.channels().size(); ++i) {
    const auto& c = net.channels()[i];
    if (c.reservoir != reservoir) continue;
    auto carried = c.carried(q);
    if (!carried) {
      throw Error(ErrorCode::missing_annotation, "channel " + std::to_string(i) + " does not annotate " +
                                                     std::string(to_string(q)));
    }
    total += *carried * (c.rate_forward * p[c.from] - c.rate_backward * p[c.to]);
  }
  return total;
}

CurrentReport reservoir_currents(const TransitionNetwork& net, const ProbabilityVector& p) {
  CurrentReport report;
  for (const auto& res : net.reservoirs()) {
    ReservoirCurrent cur;
    cur.reservoir = res.id;
    auto annotated = [&](Quantity q) {
      return std::all_of(net.channels().begin(), net.channels().end(), [&](const TransitionChannel& c) {
        return c.reservoir != res.id || c.carried(q).has_value();
      });
    };
    if (annotated(Quantity::energy)) cur.energy = reservoir_current(net, p, res.id, Quantity::energy);
    if (annotated(Quantity::particle)) cur.particle = reservoir_current(net, p, res.id, Quantity::particle);
    if (annotated(Quantity::spin)) cur.spin = reservoir_current(net, p, res.id, Quantity::spin);
    if (cur.energy) cur.heat = *cur.energy - res.chemical_potential * cur.particle.value_or(0.0);
    report.reservoirs.push_back(cur);
  }
  return report;
}

}  // namespace cycleflux
