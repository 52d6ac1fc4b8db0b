#include "cycleflux/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cycleflux/csv.hpp"
#include "cycleflux/error.hpp"
#include "cycleflux/steady_state.hpp"

namespace cycleflux {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

void check_grid(std::span<const double> x, std::span<const double> a, std::span<const double> b = {}) {
  if (a.size() != x.size() || (!b.empty() && b.size() != x.size())) {
    throw Error(ErrorCode::invalid_parameter, "series lengths differ from the grid");
  }
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw Error(ErrorCode::invalid_parameter, "grid must be strictly increasing");
  }
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  v.back() = b;
  return v;
}

AmplificationResult amplification_on(const CurrentProbe& probe, const std::vector<double>& x, double tol) {
  std::vector<double> jl(x.size()), jm(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) std::tie(jl[i], jm[i]) = probe(x[i]);
  return amplification_factor(x, jl, jm, tol);
}

}  // namespace

double AmplificationResult::max_alpha() const {
  double m = nan;
  for (double a : alpha) {
    if (!std::isnan(a) && !(a <= m)) m = a;
  }
  return m;
}

AmplificationResult amplification_factor(std::span<const double> x, std::span<const double> j_l,
                                         std::span<const double> j_m, double zero_tolerance) {
  check_grid(x, j_l, j_m);
  AmplificationResult r;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double dl = j_l[i + 1] - j_l[i - 1];
    const double dm = j_m[i + 1] - j_m[i - 1];
    const double left = j_m[i] - j_m[i - 1];
    const double right = j_m[i + 1] - j_m[i];
    const bool undefined = std::abs(dl) <= zero_tolerance && std::abs(dm) <= zero_tolerance;
    r.x.push_back(x[i]);
    r.undefined.push_back(undefined);
    r.divergence.push_back(!undefined && left * right < 0.0);
    r.alpha.push_back(undefined ? nan : std::abs(dl / dm));
  }
  return r;
}

CurrentProbe make_current_probe(ModelConfig base, std::string parameter, int reservoir_a, int reservoir_b,
                                Quantity q) {
  get_parameter(base, parameter);
  return [base = std::move(base), parameter = std::move(parameter), reservoir_a, reservoir_b, q](double v) {
    ModelConfig config = base;
    set_parameter(config, parameter, v);
    const auto net = build_model(config);
    const auto p = solve_steady_state(net);
    return std::pair{reservoir_current(net, p, reservoir_a, q), reservoir_current(net, p, reservoir_b, q)};
  };
}

ConvergedAmplification converged_amplification(const CurrentProbe& probe, double start, double stop,
                                               std::size_t count, double tolerance, std::size_t max_halvings,
                                               double zero_tolerance) {
  if (count < 3) throw Error(ErrorCode::invalid_parameter, "amplification needs at least 3 grid points");
  ConvergedAmplification out;
  out.count = count;
  out.result = amplification_on(probe, linspace(start, stop, count), zero_tolerance);
  while (out.halvings < max_halvings) {
    const std::size_t fine_count = 2 * out.count - 1;
    auto fine = amplification_on(probe, linspace(start, stop, fine_count), zero_tolerance);
    const auto& coarse = out.result;
    // coarse interior point i sits at fine interior index 2i + 1.
    std::vector<bool> near_divergence(coarse.x.size(), false);
    auto mark = [&](std::size_t centre) {
      for (std::size_t j = centre >= 2 ? centre - 2 : 0; j <= std::min(centre + 2, coarse.x.size() - 1); ++j) {
        near_divergence[j] = true;
      }
    };
    for (std::size_t i = 0; i < coarse.x.size(); ++i) {
      if (coarse.divergence[i]) mark(i);
    }
    for (std::size_t f = 0; f < fine.x.size(); ++f) {
      if (fine.divergence[f]) mark(f / 2);
    }
    double change = 0.0;
    for (std::size_t i = 0; i < coarse.x.size(); ++i) {
      const std::size_t f = 2 * i + 1;
      if (near_divergence[i] || coarse.undefined[i] || fine.undefined[f]) continue;
      const double a = coarse.alpha[i], b = fine.alpha[f];
      change = std::max(change, std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0}));
    }
    out.result = std::move(fine);
    out.count = fine_count;
    ++out.halvings;
    out.max_change = change;
    if (change < tolerance) {
      out.converged = true;
      break;
    }
  }
  return out;
}

DivergenceRefinement refine_divergence(const CurrentProbe& probe, double lo, double hi, double target,
                                       std::size_t points, std::size_t max_levels) {
  if (points < 5) throw Error(ErrorCode::invalid_parameter, "refinement needs at least 5 points per level");
  DivergenceRefinement out;
  for (std::size_t level = 0; level < max_levels; ++level) {
    const auto x = linspace(lo, hi, points);
    const auto amp = amplification_on(probe, x, 0.0);
    std::size_t best = amp.x.size();
    for (std::size_t i = 0; i < amp.x.size(); ++i) {
      if (amp.divergence[i] && (best == amp.x.size() || amp.alpha[i] > amp.alpha[best])) best = i;
    }
    if (best == amp.x.size()) break;
    out.found = true;
    out.levels = level + 1;
    out.location = amp.x[best];
    out.alpha = amp.alpha[best];
    out.trace.emplace_back(out.location, out.alpha);
    if (out.alpha >= target) break;
    // amp.x[best] is x[best + 1]; keep its two neighbours.
    lo = x[best];
    hi = x[best + 2];
  }
  return out;
}

std::vector<Interval> detect_ndtc(std::span<const double> x, std::span<const double> j_m, double tolerance) {
  check_grid(x, j_m);
  std::vector<Interval> out;
  bool open = false;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double slope = -(j_m[i + 1] - j_m[i]) / (x[i + 1] - x[i]);
    if (slope > tolerance) {
      if (open) {
        out.back().hi = x[i + 1];
      } else {
        out.push_back({x[i], x[i + 1]});
        open = true;
      }
    } else {
      open = false;
    }
  }
  return out;
}

Threshold half_plateau_threshold(std::span<const double> x, std::span<const double> j) {
  check_grid(x, j);
  Threshold t;
  if (x.empty()) return t;
  std::size_t peak = 0;
  for (std::size_t i = 1; i < j.size(); ++i) {
    if (std::abs(j[i]) > std::abs(j[peak])) peak = i;
  }
  t.plateau = j[peak];
  t.plateau_at = x[peak];
  const double half = std::abs(t.plateau) / 2.0;
  if (!(half > 0.0) || std::abs(j[0]) >= half) return t;
  for (std::size_t i = 1; i <= peak; ++i) {
    const double a = std::abs(j[i - 1]), b = std::abs(j[i]);
    if (b >= half) {
      t.found = true;
      t.threshold = x[i - 1] + (half - a) / (b - a) * (x[i] - x[i - 1]);
      break;
    }
  }
  return t;
}

std::vector<ThresholdRow> switch_threshold(const TransistorParams& base, std::span<const double> w_m,
                                           std::span<const double> t_m_grid, GraphMode mode) {
  std::vector<ThresholdRow> rows;
  for (double w : w_m) {
    TransistorParams p = base;
    p.w_M = w;
    std::vector<double> jl;
    jl.reserve(t_m_grid.size());
    for (double t : t_m_grid) {
      p.T_M = t;
      const auto net = build_transistor(p, mode);
      jl.push_back(reservoir_current(net, solve_steady_state(net), transistor_reservoir::left, Quantity::energy));
    }
    rows.push_back({w, half_plateau_threshold(t_m_grid, jl)});
  }
  return rows;
}

void write_amplification_csv(std::ostream& out, const AmplificationResult& r) {
  CsvWriter csv(out);
  csv.header({"x", "alpha", "divergence", "undefined"});
  for (std::size_t i = 0; i < r.x.size(); ++i) {
    csv.field(r.x[i]).field(r.alpha[i]).field(r.divergence[i] ? 1 : 0).field(r.undefined[i] ? 1 : 0);
    csv.end_row();
  }
}

void write_threshold_csv(std::ostream& out, std::span<const ThresholdRow> rows) {
  CsvWriter csv(out);
  csv.header({"w_M", "threshold", "ratio", "plateau", "plateau_at", "found"});
  for (const auto& r : rows) {
    csv.field(r.w_M)
        .field(r.threshold.found ? r.threshold.threshold : nan)
        .field(r.threshold.found ? r.threshold.threshold / r.w_M : nan)
        .field(r.threshold.plateau)
        .field(r.threshold.plateau_at)
        .field(r.threshold.found ? 1 : 0);
    csv.end_row();
  }
}

}  // namespace cycleflux
