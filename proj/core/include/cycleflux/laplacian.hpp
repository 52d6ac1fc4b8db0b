#pragma once

#include <span>

#include <Eigen/Dense>

#include "cycleflux/network.hpp"

namespace cycleflux {

/// Transition matrix with L(i,j) = -k(j->i) for i != j and L(j,j) equal to the
/// total escape rate of j. Columns sum to zero.
class Laplacian {
 public:
  explicit Laplacian(Eigen::MatrixXd m) : m_(std::move(m)) {}

  std::size_t size() const { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& matrix() const { return m_; }

  /// Largest |column sum|, for the zero-divergence check.
  double max_column_sum() const;

 private:
  Eigen::MatrixXd m_;
};

Laplacian build_laplacian(const TransitionNetwork& net);

/// det(L[S;S]): determinant after deleting the rows and columns listed in
/// removed. Returns 1 when every index is removed. Assumes the columns of L
/// sum to zero (as built by build_laplacian); only off-diagonal entries are
/// read, and the elimination is subtraction-free.
double principal_minor(const Laplacian& lap, std::span<const StateId> removed);

/// sum_i det(L[i;i]), the total weight of spanning trees rooted at single states.
double tree_normalization(const Laplacian& lap);

}  // namespace cycleflux
