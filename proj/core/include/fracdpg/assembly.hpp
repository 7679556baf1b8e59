#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "fracdpg/fractional.hpp"
#include "fracdpg/mesh.hpp"
#include "fracdpg/scalar_function.hpp"

namespace fracdpg {

/// Data of -D D^{alpha-2} D u + b Du + c u = f on (0,1), u(0) = u(1) = 0.
struct ProblemData {
  FractionalOrder order = FractionalOrder::from_alpha(1.5);
  std::function<double(double)> b = [](double) { return 0.0; };
  std::function<double(double)> c = [](double) { return 0.0; };
  ScalarFunction rhs;

  /// Checks c - Db/2 >= 0 on a uniform sample grid (Db by central
  /// differences). Throws InvalidArgument when violated.
  void validate() const;
};

/// Column layout of the trial space U^p x U^q x R^{N+1} x R^{N-1}:
/// [sigma | u | sigma_hat (all nodes) | u_hat (interior nodes)].
class TrialLayout {
 public:
  TrialLayout(int n_elements, int p, int q);

  int elements() const noexcept { return n_; }
  int p() const noexcept { return p_; }
  int q() const noexcept { return q_; }

  int sigma(int element, int j) const { return element * (p_ + 1) + j; }
  int u(int element, int j) const { return n_ * (p_ + 1) + element * (q_ + 1) + j; }
  /// Node index 0..N.
  int sigma_hat(int node) const { return n_ * (p_ + q_ + 2) + node; }
  /// Interior node index 1..N-1.
  int u_hat(int node) const { return n_ * (p_ + q_ + 2) + n_ + 1 + (node - 1); }

  int sigma_count() const noexcept { return n_ * (p_ + 1); }
  /// (p + q + 4) N.
  int size() const noexcept { return n_ * (p_ + q_ + 4); }

 private:
  int n_, p_, q_;
};

/// Row layout of the test space U^m x U^n, grouped by element:
/// rows of element T are [tau_0..tau_m, v_0..v_n].
class TestLayout {
 public:
  TestLayout(int n_elements, int m, int n);

  int elements() const noexcept { return n_elements_; }
  int m() const noexcept { return m_; }
  int n() const noexcept { return n_; }
  int block_size() const noexcept { return m_ + n_ + 2; }

  int block_begin(int element) const { return element * block_size(); }
  int tau(int element, int k) const { return block_begin(element) + k; }
  int v(int element, int k) const { return block_begin(element) + m_ + 1 + k; }

  int size() const noexcept { return n_elements_ * block_size(); }

 private:
  int n_elements_, m_, n_;
};

/// Degrees of trial (p, q) and test (m, n) spaces.
struct Degrees {
  int p = 0;
  int q = 0;
  int m = 2;
  int n = 2;

  void validate() const;
  /// Gauss-Legendre points for coefficient and load terms: 2 max(p,q,m,n) + 6.
  int quadrature_points() const;
};

/// Discrete DPG system: B (test rows x trial columns), block-diagonal Theta,
/// load vector.
struct SystemMatrices {
  TrialLayout trial;
  TestLayout test;
  Eigen::MatrixXd B;
  std::vector<Eigen::MatrixXd> theta_blocks;
  Eigen::VectorXd load;
};

/// B(k, j) = b(u_j, v_k) for the ultra-weak bilinear form
///   (sigma, tau) + (D^{alpha-2} sigma, D_T v) + (b sigma, v) + (u, D_T tau) + (c u, v)
///   + <u_hat, tau^+ - tau^-> + <sigma_hat, v^+ - v^->,
/// with missing exterior traces at x = 0 and x = 1 taken as zero.
Eigen::MatrixXd assemble_B(const Mesh& mesh, const TrialLayout& trial, const TestLayout& test,
                           const ProblemData& data);

/// One SPD block per element: blockdiag(H^1 Gram of U^m, H^{alpha/2} Gram of U^n).
std::vector<Eigen::MatrixXd> assemble_theta(const Mesh& mesh, int m, int n, double alpha);

/// f_k = int f v_k for v-type rows, 0 for tau-type rows.
Eigen::VectorXd assemble_load(const Mesh& mesh, const TestLayout& test, const ProblemData& data,
                              int quadrature_points);

SystemMatrices assemble_system(const Mesh& mesh, const Degrees& degrees, const ProblemData& data);

}  // namespace fracdpg
