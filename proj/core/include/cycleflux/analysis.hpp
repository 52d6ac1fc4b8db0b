#pragma once

#include <cstddef>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cycleflux/config.hpp"
#include "cycleflux/models.hpp"

namespace cycleflux {

/// alpha = |dJ_L/dJ_M| by centered differences at interior grid points.
struct AmplificationResult {
  std::vector<double> x;
  std::vector<double> alpha;      ///< NaN where undefined
  std::vector<bool> divergence;   ///< dJ_M/dx changes sign at x
  std::vector<bool> undefined;    ///< both differences vanish (e.g. equilibrium)

  double max_alpha() const;       ///< ignores NaN
};

/// zero_tolerance: absolute bound under which a centered difference counts as zero.
AmplificationResult amplification_factor(std::span<const double> x, std::span<const double> j_l,
                                         std::span<const double> j_m, double zero_tolerance = 1e-15);

/// Returns (J_L, J_M) at a value of the swept parameter.
using CurrentProbe = std::function<std::pair<double, double>(double)>;

/// Energy currents of two reservoirs as the named parameter varies.
CurrentProbe make_current_probe(ModelConfig base, std::string parameter, int reservoir_a, int reservoir_b,
                                Quantity q = Quantity::energy);

struct ConvergedAmplification {
  AmplificationResult result;  ///< on the finest grid
  std::size_t count = 0;       ///< points of the finest grid
  std::size_t halvings = 0;
  double max_change = 0.0;     ///< between the last two grids
  bool converged = false;
};

/// Halves the grid spacing until alpha moves by less than `tolerance` at the
/// shared grid points. Points within two coarse intervals of a divergence are
/// skipped, and alpha below 1 is compared absolutely.
ConvergedAmplification converged_amplification(const CurrentProbe& probe, double start, double stop,
                                               std::size_t count, double tolerance = 0.05,
                                               std::size_t max_halvings = 6, double zero_tolerance = 1e-15);

struct DivergenceRefinement {
  bool found = false;
  double location = 0.0;  ///< grid point carrying the largest flagged alpha
  double alpha = 0.0;
  std::size_t levels = 0;
  std::vector<std::pair<double, double>> trace;  ///< (location, alpha) per level
};

/// Zooms into the sign change of dJ_M/dx: each level lays `points` samples
/// over the window, takes the divergence-flagged point with the largest
/// alpha and narrows to its two neighbours. Stops once alpha >= target.
DivergenceRefinement refine_divergence(const CurrentProbe& probe, double lo, double hi, double target = 1e3,
                                       std::size_t points = 11, std::size_t max_levels = 40);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Maximal runs of grid intervals on which -J_M increases (slope > tolerance).
std::vector<Interval> detect_ndtc(std::span<const double> x, std::span<const double> j_m, double tolerance = 0.0);

struct Threshold {
  bool found = false;
  double threshold = 0.0;   ///< first x where |J| reaches half the plateau
  double plateau = 0.0;     ///< J at max |J| over the grid
  double plateau_at = 0.0;
};

/// Linear interpolation between the bracketing grid points. Not found when
/// the grid starts above half the plateau or J vanishes everywhere.
Threshold half_plateau_threshold(std::span<const double> x, std::span<const double> j);

struct ThresholdRow {
  double w_M = 0.0;
  Threshold threshold;
};

/// Half-plateau threshold of the left heat current over the T_M grid for each w_M.
std::vector<ThresholdRow> switch_threshold(const TransistorParams& base, std::span<const double> w_m,
                                           std::span<const double> t_m_grid,
                                           GraphMode mode = GraphMode::collapsed);

void write_amplification_csv(std::ostream& out, const AmplificationResult& r);
void write_threshold_csv(std::ostream& out, std::span<const ThresholdRow> rows);

}  // namespace cycleflux
