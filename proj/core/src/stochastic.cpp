#include "cycleflux/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cycleflux/error.hpp"

namespace cycleflux {

namespace {

// Uniform on (0, 1] from the top 53 bits.
double uniform_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

GillespieSampler::GillespieSampler(const TransitionNetwork& net, std::uint64_t seed, SimulationOptions options)
    : net_(net), seed_(seed), options_(options), moves_(net.size()) {
  for (StateId s = 0; s < net.size(); ++s) {
    double acc = 0.0;
    for (const auto& nb : net.neighbors(s)) {
      const double k = net.edges()[nb.edge].rate_from(s);
      if (k <= 0.0) continue;
      acc += k;
      moves_[s].push_back({nb.state, nb.edge, acc});
    }
  }
  if (options_.start && *options_.start >= net.size()) {
    throw Error(ErrorCode::dangling_reference, "start state out of range");
  }
}

void GillespieSampler::run(double total_time, const std::function<void(const TrajectoryStep&)>& visit) {
  if (!(total_time > 0.0)) throw Error(ErrorCode::invalid_parameter, "total_time must be positive");
  std::mt19937_64 rng(seed_);
  StateId state = options_.start.value_or(0);
  EdgeId via = no_edge;
  double t = 0.0;
  for (;;) {
    const auto& moves = moves_[state];
    if (moves.empty()) {
      throw Error(ErrorCode::absorbing_state,
                  "state '" + net_.states()[state].label + "' has zero total exit rate");
    }
    const double exit_rate = moves.back().cumulative;
    double dwell = -std::log(uniform_open(rng)) / exit_rate;
    if (t + dwell >= total_time) {
      visit({state, total_time - t, via});
      return;
    }
    visit({state, dwell, via});
    t += dwell;
    const double pick = (1.0 - uniform_open(rng)) * exit_rate;  // [0, R)
    std::size_t m = 0;
    while (m + 1 < moves.size() && pick >= moves[m].cumulative) ++m;
    state = moves[m].to;
    via = moves[m].edge;
  }
}

Trajectory simulate(const TransitionNetwork& net, double total_time, std::uint64_t seed, SimulationOptions options) {
  Trajectory traj;
  traj.seed = seed;
  traj.total_time = total_time;
  GillespieSampler(net, seed, options).run(total_time, [&](const TrajectoryStep& s) { traj.steps.push_back(s); });
  return traj;
}

const CycleCount* CycleCountReport::find(const Cycle& canonical_cycle) const {
  auto it = std::lower_bound(cycles.begin(), cycles.end(), canonical_cycle,
                             [](const CycleCount& c, const Cycle& key) { return c.cycle < key; });
  if (it == cycles.end() || it->cycle != canonical_cycle) return nullptr;
  return &*it;
}

CycleCounter::CycleCounter(const TransitionNetwork& net, double total_time, std::size_t batches)
    : net_(net),
      total_time_(total_time),
      position_(net.size(), -1),
      batch_time_(std::max<std::size_t>(batches, 2), std::vector<double>(net.size(), 0.0)) {
  if (!(total_time > 0.0)) throw Error(ErrorCode::invalid_parameter, "total_time must be positive");
}

void CycleCounter::visit(const TrajectoryStep& step) {
  const StateId s = step.state;
  if (stack_.empty()) {
    stack_.push_back(s);
    stack_edges_.push_back(no_edge);
    position_[s] = 0;
  } else {
    ++jumps_;
    if (position_[s] >= 0) {
      const auto i = static_cast<std::size_t>(position_[s]);
      stack_edges_.push_back(step.via);  // closing arc, popped below
      record_loop(i);
      for (std::size_t j = i + 1; j < stack_.size(); ++j) position_[stack_[j]] = -1;
      stack_.resize(i + 1);
      stack_edges_.resize(i + 1);
    } else {
      position_[s] = static_cast<std::ptrdiff_t>(stack_.size());
      stack_.push_back(s);
      stack_edges_.push_back(step.via);
    }
  }
  accumulate_occupancy(s, step.dwell);
}

// stack_edges_ has one extra trailing entry: the arc closing the loop.
void CycleCounter::record_loop(std::size_t from) {
  const std::size_t top = stack_.size() - 1;
  const std::size_t k = top - from + 1;
  Cycle loop;
  loop.vertices.assign(stack_.begin() + static_cast<std::ptrdiff_t>(from), stack_.end());
  loop.edges.assign(stack_edges_.begin() + static_cast<std::ptrdiff_t>(from + 1), stack_edges_.end());
  if (k == 2 && (net_.mode() == GraphMode::collapsed || loop.edges[0] == loop.edges[1])) {
    ++discarded_;
    return;
  }
  const auto canon = canonical_form(loop);
  auto& slot = counts_[canon.cycle];
  if (canon.reversed) {
    ++slot.second;
  } else {
    ++slot.first;
  }
}

void CycleCounter::accumulate_occupancy(StateId s, double dwell) {
  const std::size_t batches = batch_time_.size();
  const double width = total_time_ / static_cast<double>(batches);
  double begin = clock_;
  const double end = std::min(clock_ + dwell, total_time_);
  while (begin < end) {
    auto b = static_cast<std::size_t>(begin / width);
    if (b >= batches) b = batches - 1;
    const double stop = std::min(end, (b + 1 == batches) ? total_time_ : static_cast<double>(b + 1) * width);
    batch_time_[b][s] += stop - begin;
    if (stop <= begin) break;
    begin = stop;
  }
  clock_ += dwell;
}

CycleCountReport CycleCounter::report() const {
  CycleCountReport r;
  r.total_time = total_time_;
  r.jumps = jumps_;
  r.discarded_excursions = discarded_;
  for (const auto& [cycle, c] : counts_) r.cycles.push_back({cycle, c.first, c.second});

  const std::size_t n = net_.size();
  const auto batches = static_cast<double>(batch_time_.size());
  const double width = total_time_ / batches;
  r.occupancy.assign(n, 0.0);
  r.occupancy_stderr.assign(n, 0.0);
  for (StateId s = 0; s < n; ++s) {
    double sum = 0.0, sumsq = 0.0;
    for (const auto& b : batch_time_) {
      const double f = b[s] / width;
      sum += f;
      sumsq += f * f;
    }
    const double mean = sum / batches;
    const double var = std::max(0.0, (sumsq - batches * mean * mean) / (batches - 1.0));
    r.occupancy[s] = mean;
    r.occupancy_stderr[s] = std::sqrt(var / batches);
  }
  return r;
}

CycleCountReport count_cycle_completions(const TransitionNetwork& net, const Trajectory& trajectory) {
  CycleCounter counter(net, trajectory.total_time);
  for (const auto& step : trajectory.steps) counter.visit(step);
  return counter.report();
}

CycleCountReport simulate_and_count(const TransitionNetwork& net, double total_time, std::uint64_t seed,
                                    SimulationOptions options) {
  CycleCounter counter(net, total_time);
  GillespieSampler(net, seed, options).run(total_time, [&](const TrajectoryStep& s) { counter.visit(s); });
  return counter.report();
}

double CycleFluxEstimate::net_stderr() const {
  return std::hypot(forward_stderr, backward_stderr);
}

std::vector<CycleFluxEstimate> empirical_cycle_flux(const CycleCountReport& report) {
  if (!(report.total_time > 0.0)) throw Error(ErrorCode::invalid_parameter, "report has zero total time");
  std::vector<CycleFluxEstimate> out;
  out.reserve(report.cycles.size());
  const double t = report.total_time;
  for (const auto& c : report.cycles) {
    CycleFluxEstimate e;
    e.cycle = c.cycle;
    e.forward_count = c.forward;
    e.backward_count = c.backward;
    e.forward = static_cast<double>(c.forward) / t;
    e.backward = static_cast<double>(c.backward) / t;
    e.forward_stderr = std::sqrt(static_cast<double>(c.forward)) / t;
    e.backward_stderr = std::sqrt(static_cast<double>(c.backward)) / t;
    out.push_back(e);
  }
  return out;
}

std::vector<FluxComparison> compare_with_analytic(const CycleCountReport& report,
                                                  std::span<const CycleFluxRecord> records) {
  const auto estimates = empirical_cycle_flux(report);
  auto z = [t = report.total_time](double est, double err, double analytic) {
    if (err > 0.0) return (est - analytic) / err;
    // Nothing observed: compare against a single-count error bar.
    return analytic == 0.0 ? 0.0 : -analytic * t;
  };
  std::vector<FluxComparison> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    FluxComparison cmp;
    auto it = std::lower_bound(estimates.begin(), estimates.end(), r.cycle,
                               [](const CycleFluxEstimate& e, const Cycle& key) { return e.cycle < key; });
    if (it != estimates.end() && it->cycle == r.cycle) {
      cmp.estimate = *it;
    } else {
      cmp.estimate.cycle = r.cycle;
    }
    cmp.analytic_forward = r.j_forward;
    cmp.analytic_backward = r.j_backward;
    cmp.z_forward = z(cmp.estimate.forward, cmp.estimate.forward_stderr, r.j_forward);
    cmp.z_backward = z(cmp.estimate.backward, cmp.estimate.backward_stderr, r.j_backward);
    out.push_back(cmp);
  }
  return out;
}

}  // namespace cycleflux
