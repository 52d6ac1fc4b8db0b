#include "cycleflux/laplacian.hpp"

#include <vector>

namespace cycleflux {

double Laplacian::max_column_sum() const {
  return m_.colwise().sum().cwiseAbs().maxCoeff();
}

Laplacian build_laplacian(const TransitionNetwork& net) {
  const auto n = static_cast<Eigen::Index>(net.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& c : net.channels()) {
    const auto a = static_cast<Eigen::Index>(c.from);
    const auto b = static_cast<Eigen::Index>(c.to);
    m(b, a) -= c.rate_forward;
    m(a, a) += c.rate_forward;
    m(a, b) -= c.rate_backward;
    m(b, b) += c.rate_backward;
  }
  return Laplacian(std::move(m));
}

double principal_minor(const Laplacian& lap, std::span<const StateId> removed) {
  const std::size_t n = lap.size();
  std::vector<bool> drop(n, false);
  for (StateId s : removed) drop[s] = true;
  std::vector<Eigen::Index> keep;
  keep.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!drop[i]) keep.push_back(static_cast<Eigen::Index>(i));
  }
  const auto k = static_cast<Eigen::Index>(keep.size());
  if (k == 0) return 1.0;

  // Elimination on rates instead of matrix entries: every pivot is rebuilt as
  // the escape rate to the remaining kept states plus the leak into removed
  // ones. Only sums and products of non-negative numbers appear, so tiny
  // minors keep full relative precision.
  const Eigen::MatrixXd& m = lap.matrix();
  Eigen::MatrixXd rate(k, k);  // rate(a, b): keep[a] -> keep[b]
  Eigen::VectorXd leak = Eigen::VectorXd::Zero(k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) rate(a, b) = a == b ? 0.0 : -m(keep[b], keep[a]);
    for (std::size_t i = 0; i < n; ++i) {
      if (drop[i]) leak(a) -= m(static_cast<Eigen::Index>(i), keep[a]);
    }
  }
  double det = 1.0;
  for (Eigen::Index p = k - 1; p >= 0; --p) {
    double pivot = leak(p);
    for (Eigen::Index b = 0; b < p; ++b) pivot += rate(p, b);
    if (!(pivot > 0.0)) return 0.0;
    det *= pivot;
    for (Eigen::Index a = 0; a < p; ++a) {
      const double f = rate(a, p) / pivot;
      if (f == 0.0) continue;
      for (Eigen::Index b = 0; b < p; ++b) {
        if (b != a) rate(a, b) += f * rate(p, b);
      }
      leak(a) += f * leak(p);
    }
  }
  return det;
}

double tree_normalization(const Laplacian& lap) {
  double total = 0.0;
  for (StateId i = 0; i < lap.size(); ++i) {
    const StateId single[] = {i};
    total += principal_minor(lap, single);
  }
  return total;
}

}  // namespace cycleflux
