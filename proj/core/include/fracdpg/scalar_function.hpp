#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

#include "fracdpg/mesh.hpp"
#include "fracdpg/polynomial.hpp"

namespace fracdpg {

/// coefficient * x^exponent.
struct PowerTerm {
  double coefficient = 0.0;
  double exponent = 0.0;
};

/// Real function on (0,1] of the form
///
///   f(x) = smooth(x) + sum_i c_i x^{mu_i} + gamma * log(x),
///
/// where smooth is analytic on [0,1]. The power and log terms are the
/// singularity descriptor: on the element touching x = 0 they are integrated
/// with exact moments or Gauss-Jacobi rules, everywhere else the function is
/// sampled by Gauss-Legendre rules.
class ScalarFunction {
 public:
  using Smooth = std::function<double(double)>;

  ScalarFunction();
  /// Throws InvalidArgument for non-integrable powers (exponent <= -1).
  ScalarFunction(Smooth smooth, std::vector<PowerTerm> powers = {}, double log_coefficient = 0.0);

  static ScalarFunction constant(double value);
  static ScalarFunction zero() { return constant(0.0); }

  double operator()(double x) const;
  double smooth_part(double x) const { return smooth_(x); }

  const std::vector<PowerTerm>& powers() const noexcept { return powers_; }
  double log_coefficient() const noexcept { return log_coefficient_; }

  /// True if some descriptor term is not smooth at x = 0.
  bool singular_at_origin() const noexcept;
  /// Smallest exponent that is not a nonnegative integer (+inf if none).
  double leading_singular_exponent() const noexcept;

  ScalarFunction scaled(double factor) const;

 private:
  Smooth smooth_;
  std::vector<PowerTerm> powers_;
  double log_coefficient_ = 0.0;
};

/// Quadrature points used for smooth terms on an element.
struct IntegrationOptions {
  int smooth_points = 12;
};

/// int_a^b f(x) P_k((x-a)/(b-a)) dx for k = 0..degree.
Eigen::VectorXd basis_moments(const ScalarFunction& f, double a, double b, int degree,
                              IntegrationOptions options = {});

/// int_a^b f(x) g(x) dx for smooth g (g is sampled, never expanded).
double integrate_product(const ScalarFunction& f, const std::function<double(double)>& g, double a,
                         double b, IntegrationOptions options = {});

/// int_a^b (f(x) - g(x))^2 dx for smooth g, with singular terms of f handled
/// by exact moments, Gauss-Jacobi and graded rules.
double integrate_squared_difference(const ScalarFunction& f, const std::function<double(double)>& g,
                                    double a, double b, IntegrationOptions options = {});

/// L2-orthogonal projection onto element-wise polynomials of the given degree.
PiecewisePolynomial l2_project(const ScalarFunction& f, const Mesh& mesh, int degree,
                               IntegrationOptions options = {});

}  // namespace fracdpg
