#pragma once

#include <vector>

namespace fracdpg {

/// Quadrature rule on the reference interval [0,1] for the weight
/// (1-t)^a t^b. Gauss-Legendre rules have a = b = 0.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double weight_a = 0.0;
  double weight_b = 0.0;
  /// Polynomials up to this degree are integrated exactly against the weight.
  int exactness_degree = 0;

  int size() const noexcept { return static_cast<int>(nodes.size()); }

  /// sum_i w_i f(t_i), i.e. int_0^1 f(t) (1-t)^a t^b dt.
  template <class F>
  double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }

  /// Same rule applied on [lo, hi] (only meaningful for a = b = 0).
  template <class F>
  double integrate(F&& f, double lo, double hi) const {
    const double h = hi - lo;
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(lo + h * nodes[i]);
    return h * sum;
  }
};

/// n-point Gauss-Legendre on [0,1]; exact up to degree 2n-1.
QuadratureRule gauss_legendre(int n);

/// n-point Gauss-Jacobi on [0,1] for the weight (1-t)^a t^b, a, b > -1.
/// Nodes come from the Golub-Welsch eigenproblem, polished by Newton steps on
/// the Jacobi three-term recurrence; weights are normalized to B(a+1, b+1).
QuadratureRule gauss_jacobi(int n, double a, double b);

/// Shared immutable rules. Thread-safe.
const QuadratureRule& cached_gauss_legendre(int n);
const QuadratureRule& cached_gauss_jacobi(int n, double a, double b);

/// int_c^d u^mu u^k du = (d^{mu+k+1} - c^{mu+k+1}) / (mu+k+1), 0 <= c <= d.
double fractional_monomial_integral(double mu, int k, double c, double d);

/// Beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a+b).
double beta_function(double a, double b);

/// Number of Gauss-Legendre points that integrate a function analytic in a
/// neighbourhood of an interval of length h, whose nearest singularity lies at
/// distance dist from the interval, times a polynomial of the given degree,
/// to about machine precision.
int smooth_rule_size(double dist, double h, int polynomial_degree);

}  // namespace fracdpg
