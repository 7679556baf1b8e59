#pragma once

#include <Eigen/Dense>

#include "fracdpg/mesh.hpp"
#include "fracdpg/polynomial.hpp"

namespace fracdpg {

/// Diffusion order alpha in (1,2) and the matching integration order
/// beta = 2 - alpha in (0,1).
class FractionalOrder {
 public:
  static FractionalOrder from_alpha(double alpha);
  static FractionalOrder from_beta(double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return 2.0 - alpha_; }

  bool operator==(const FractionalOrder&) const = default;

 private:
  explicit FractionalOrder(double alpha) : alpha_(alpha) {}
  double alpha_;
};

/// Left-sided Riemann-Liouville integral of a power,
/// (D^{-beta} s^mu)(x) = Gamma(mu+1)/Gamma(mu+1+beta) x^{mu+beta}, mu > -1.
double rl_left_power(double beta, double mu, double x);

/// (D^{-beta} s^k)(x) for integer k >= 0 and beta in (0,1).
double rl_left_monomial(double beta, int k, double x);

/// (D^{-beta} sigma)(x) = 1/Gamma(beta) int_0^x (x-s)^{beta-1} sigma(s) ds.
double rl_left_apply(const PiecewisePolynomial& sigma, double beta, double x);

/// (D_1^{-beta} v)(x) = 1/Gamma(beta) int_x^1 (s-x)^{beta-1} v(s) ds.
double rl_right_apply(const PiecewisePolynomial& v, double beta, double x);

/// Matrix C with C(k, j) = int_T (D^{-beta} phi_{S,j})(x) psi'_{T,k}(x) dx,
/// where phi_{S,j} (j <= trial_degree) lives on element S and psi_{T,k}
/// (k <= test_degree) on element T, both in the mapped orthonormal basis.
///
/// The block is identically zero when S lies right of T. Self pairs use exact
/// fractional-monomial moments, adjacent pairs a Duffy split with Gauss-Jacobi
/// in the radial variable, separated pairs tensor Gauss-Legendre rules sized
/// by the element distance.
Eigen::MatrixXd frac_coupling_block(const Mesh& mesh, int source, int target, double beta,
                                    int trial_degree, int test_degree);

/// Single entry of frac_coupling_block.
double frac_coupling_entry(const Mesh& mesh, int source, int trial_index, int target,
                           int test_index, double beta);

}  // namespace fracdpg
