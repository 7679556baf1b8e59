#pragma once

#include <Eigen/Dense>

#include <vector>

#include "fracdpg/mesh.hpp"

namespace fracdpg {

/// Highest polynomial degree supported by the reference basis helpers.
inline constexpr int kMaxDegree = 8;

/// Value and derivative of the orthonormal Legendre polynomial P_k on [0,1]
/// (P_k(t) = sqrt(2k+1) L_k(2t-1), so int_0^1 P_j P_k = delta_jk).
struct BasisValue {
  double value;
  double derivative;
};
BasisValue reference_basis_eval(int k, double t);

/// Values P_0..P_degree at t.
void reference_basis_values(int degree, double t, double* values);
/// Values and derivatives P_0..P_degree at t.
void reference_basis_values(int degree, double t, double* values, double* derivatives);

/// Monomial coefficients of P_k: P_k(t) = sum_j c_j t^j. Exact integers times
/// sqrt(2k+1); k <= kMaxDegree.
std::vector<double> monomial_coefficients(int k);

/// Divided differences (P_k(t) - P_k(r)) / (t - r) for k = 0..degree, via a
/// recurrence that stays accurate as t -> r.
void reference_basis_divided_differences(int degree, double t, double r, double* out);

/// Element-wise polynomials of a fixed degree on a mesh.
///
/// Row T of the coefficient matrix holds the expansion of the restriction to
/// element T in the mapped basis P_k((x - x_T)/h_T).
class PiecewisePolynomial {
 public:
  PiecewisePolynomial(Mesh mesh, int degree);
  PiecewisePolynomial(Mesh mesh, int degree, Eigen::MatrixXd coefficients);

  const Mesh& mesh() const noexcept { return mesh_; }
  int degree() const noexcept { return degree_; }
  const Eigen::MatrixXd& coefficients() const noexcept { return coeffs_; }
  Eigen::MatrixXd& coefficients() noexcept { return coeffs_; }

  /// Evaluates on a given element (x may be an endpoint: one-sided trace).
  double evaluate_on(int element, double x) const;
  double derivative_on(int element, double x) const;
  /// Evaluates on the element returned by Mesh::locate(x).
  double operator()(double x) const;

  /// v(1 - x) on the reflected mesh.
  PiecewisePolynomial reflected() const;

 private:
  Mesh mesh_;
  int degree_;
  Eigen::MatrixXd coeffs_;
};

}  // namespace fracdpg
