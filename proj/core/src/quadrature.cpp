#include "fracdpg/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "fracdpg/error.hpp"

namespace fracdpg {

namespace {

// P_n^{(a,b)}(x) and its derivative on [-1,1] via the three-term recurrence.
std::pair<double, double> jacobi_with_derivative(int n, double a, double b, double x) {
  if (n == 0) return {1.0, 0.0};
  auto eval = [](int deg, double aa, double bb, double xx) {
    double p0 = 1.0;
    if (deg == 0) return p0;
    double p1 = 0.5 * (aa - bb + (aa + bb + 2.0) * xx);
    for (int k = 2; k <= deg; ++k) {
      const double s = 2.0 * k + aa + bb;
      const double c1 = 2.0 * k * (k + aa + bb) * (s - 2.0);
      const double c2 = (s - 1.0) * (s * (s - 2.0) * xx + aa * aa - bb * bb);
      const double c3 = 2.0 * (k + aa - 1.0) * (k + bb - 1.0) * s;
      const double p2 = (c2 * p1 - c3 * p0) / c1;
      p0 = p1;
      p1 = p2;
    }
    return p1;
  };
  const double value = eval(n, a, b, x);
  const double derivative = 0.5 * (n + a + b + 1.0) * eval(n - 1, a + 1.0, b + 1.0, x);
  return {value, derivative};
}

}  // namespace

QuadratureRule gauss_jacobi(int n, double a, double b) {
  if (n < 1) throw InvalidArgument("quadrature rule needs at least one point");
  if (!(a > -1.0) || !(b > -1.0)) throw InvalidArgument("Gauss-Jacobi exponents must exceed -1");

  // Monic recurrence coefficients on [-1,1] for the weight (1-x)^a (1+x)^b.
  Eigen::VectorXd diag(n);
  Eigen::VectorXd offdiag(std::max(n - 1, 1));
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      diag(0) = (b - a) / (ab + 2.0);
    } else {
      const double s = 2.0 * k + ab;
      diag(k) = (b * b - a * a) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    double beta;
    if (k == 1) {
      beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      const double s = 2.0 * k + ab;
      beta = 4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    offdiag(k - 1) = std::sqrt(beta);
  }

  std::vector<double> x(static_cast<std::size_t>(n));
  if (n == 1) {
    x[0] = diag(0);
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, offdiag.head(n - 1), Eigen::EigenvaluesOnly);
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
  }

  // Newton polish and unnormalized weights 1 / ((1-x^2) P_n'(x)^2).
  std::vector<double> w(static_cast<std::size_t>(n));
  double wsum = 0.0;
  for (int i = 0; i < n; ++i) {
    double xi = x[static_cast<std::size_t>(i)];
    for (int it = 0; it < 3; ++it) {
      const auto [p, dp] = jacobi_with_derivative(n, a, b, xi);
      if (dp == 0.0) break;
      const double step = p / dp;
      xi -= step;
      if (std::abs(step) < 1e-17) break;
    }
    x[static_cast<std::size_t>(i)] = xi;
    const double dp = jacobi_with_derivative(n, a, b, xi).second;
    const double wi = 1.0 / ((1.0 - xi) * (1.0 + xi) * dp * dp);
    w[static_cast<std::size_t>(i)] = wi;
    wsum += wi;
  }

  QuadratureRule rule;
  rule.weight_a = a;
  rule.weight_b = b;
  rule.exactness_degree = 2 * n - 1;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  const double mass = beta_function(a + 1.0, b + 1.0);  // int_0^1 (1-t)^a t^b dt
  for (int i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    rule.nodes[k] = 0.5 * (1.0 + x[k]);
    rule.weights[k] = mass * w[k] / wsum;
  }
  return rule;
}

QuadratureRule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

const QuadratureRule& cached_gauss_jacobi(int n, double a, double b) {
  using Key = std::tuple<int, double, double>;
  static std::mutex mutex;
  static std::map<Key, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[Key{n, a, b}];
  if (!slot) slot = std::make_unique<QuadratureRule>(gauss_jacobi(n, a, b));
  return *slot;
}

const QuadratureRule& cached_gauss_legendre(int n) { return cached_gauss_jacobi(n, 0.0, 0.0); }

double fractional_monomial_integral(double mu, int k, double c, double d) {
  const double e = mu + k + 1.0;
  if (!(e > 0.0)) throw InvalidArgument("fractional_monomial_integral: mu + k must exceed -1");
  if (k < 0) throw InvalidArgument("fractional_monomial_integral: k must be nonnegative");
  if (!(c >= 0.0) || !(d >= c)) throw InvalidArgument("fractional_monomial_integral: need 0 <= c <= d");
  const double upper = std::pow(d, e);
  const double lower = c == 0.0 ? 0.0 : std::pow(c, e);
  return (upper - lower) / e;
}

double beta_function(double a, double b) {
  if (a + b > 150.0) return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
  return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b);
}

int smooth_rule_size(double dist, double h, int polynomial_degree) {
  // Bernstein ellipse through the nearest singularity: error ~ rho^{-2n}.
  const double r = 1.0 + 2.0 * dist / h;
  const double rho = r + std::sqrt(r * r - 1.0);
  const double log_rho = std::log(rho);
  int n = static_cast<int>(std::ceil((37.0 / log_rho + polynomial_degree) / 2.0)) + 1;
  n = std::max(n, polynomial_degree / 2 + 2);
  return std::min(n, 64);
}

}  // namespace fracdpg
