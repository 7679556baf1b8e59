#pragma once

#include <Eigen/Dense>

#include <vector>

#include "fracdpg/assembly.hpp"

namespace fracdpg {

/// Cholesky factors of the blocks of Theta.
class ThetaFactors {
 public:
  /// Throws NotPositiveDefinite naming the first failing element.
  explicit ThetaFactors(const std::vector<Eigen::MatrixXd>& blocks);

  int blocks() const noexcept { return static_cast<int>(factors_.size()); }
  int block_size() const noexcept { return block_size_; }
  /// Lower-triangular L_T with Theta_T = L_T L_T^T.
  const Eigen::MatrixXd& lower(int element) const { return factors_[static_cast<std::size_t>(element)]; }

  /// Theta^{-1} y, block by block.
  Eigen::VectorXd apply_inverse(const Eigen::VectorXd& y) const;
  /// L^{-1} Y for a block row range (rows of one element).
  Eigen::MatrixXd whiten_block(int element, const Eigen::MatrixXd& rows) const;

 private:
  std::vector<Eigen::MatrixXd> factors_;
  int block_size_ = 0;
};

ThetaFactors factor_theta(const std::vector<Eigen::MatrixXd>& blocks);

/// Trial coefficients plus the residual data the estimator needs.
struct DpgSolution {
  Eigen::VectorXd x;               // trial vector in TrialLayout order
  Eigen::VectorXd x_low;           // x + x_low carries the solution to twice working precision
  Eigen::VectorXd residual;        // r = f - B (x + x_low)
  Eigen::VectorXd representer;     // Theta^{-1} r
  std::vector<double> est_squared; // est(T)^2 per element
  double est = 0.0;                // sqrt(sum_T est(T)^2)
  /// ||B^T Theta^{-1} r|| / ||B^T Theta^{-1} f|| (normal-equation optimality).
  double optimality = 0.0;
};

/// Ordered column groups solved for in difference coordinates: inside a
/// chain c_0, c_1, ... the unknowns are x(c_0) and x(c_i) - x(c_{i-1}).
/// Near-constant trace values on graded meshes stay well conditioned.
using ColumnChains = std::vector<std::vector<Eigen::Index>>;

/// Solves B^T Theta^{-1} B x = B^T Theta^{-1} f, then fills the residual,
/// its representer and the element indicators. The Jacobi-scaled normal
/// matrix is factored by dense Cholesky; when its smallest pivot is too
/// small, Householder QR of the whitened B takes over, whose accuracy
/// depends on the square root of the normal-matrix condition number.
/// Corrections are iterated on residuals evaluated in compensated
/// (double-double) arithmetic against x + x_low.
///
/// Throws InfSupFailure when the normal matrix is singular.
DpgSolution solve_normal_equations(const Eigen::MatrixXd& B, const ThetaFactors& theta,
                                   const Eigen::VectorXd& load, const ColumnChains& chains = {});

/// f - B (x_high + x_low) with error-free product and sum transformations.
Eigen::VectorXd compensated_residual(const Eigen::MatrixXd& B, const Eigen::VectorXd& load,
                                     const Eigen::VectorXd& x_high, const Eigen::VectorXd& x_low);

/// est(T)^2 = sum over rows j of T of r_j (Theta^{-1} r)_j, clamped at zero
/// for roundoff down to -1e-12 (more negative values throw NumericalFailure).
std::vector<double> estimate(const Eigen::VectorXd& residual, const Eigen::VectorXd& representer,
                             int block_size);

/// Convenience: factor Theta and solve with sigma_hat as a difference chain.
DpgSolution solve(const SystemMatrices& system);

}  // namespace fracdpg
