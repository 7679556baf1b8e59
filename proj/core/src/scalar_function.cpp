#include "fracdpg/scalar_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracdpg/error.hpp"
#include "fracdpg/quadrature.hpp"

namespace fracdpg {

namespace {

bool is_smooth_power(double exponent) {
  return exponent >= 0.0 && exponent == std::floor(exponent);
}

// Rule for int_0^1 log(t) phi(t) dt with smooth phi: Gauss-Legendre on the
// dyadic pieces [2^{-k-1}, 2^{-k}], log(t) folded into the weights. The
// neglected piece [0, 2^{-60}] contributes below 1e-16 |phi|.
const QuadratureRule& log_weighted_rule() {
  static const QuadratureRule rule = [] {
    QuadratureRule r;
    const QuadratureRule& gl = cached_gauss_legendre(12);
    double hi = 1.0;
    for (int k = 0; k < 60; ++k) {
      const double lo = 0.5 * hi;
      for (int i = 0; i < gl.size(); ++i) {
        const double t = lo + (hi - lo) * gl.nodes[static_cast<std::size_t>(i)];
        r.nodes.push_back(t);
        r.weights.push_back((hi - lo) * gl.weights[static_cast<std::size_t>(i)] * std::log(t));
      }
      hi = lo;
    }
    r.exactness_degree = 0;
    return r;
  }();
  return rule;
}

constexpr int kSingularPoints = 20;

int far_rule_size(const ScalarFunction& f, double a, double b, int degree, const IntegrationOptions& options) {
  int n = std::max(options.smooth_points, degree / 2 + 2);
  if (f.singular_at_origin()) n = std::max(n, smooth_rule_size(a, b - a, degree));
  return n;
}

}  // namespace

ScalarFunction::ScalarFunction() : smooth_([](double) { return 0.0; }) {}

ScalarFunction::ScalarFunction(Smooth smooth, std::vector<PowerTerm> powers, double log_coefficient)
    : smooth_(std::move(smooth)), powers_(std::move(powers)), log_coefficient_(log_coefficient) {
  if (!smooth_) smooth_ = [](double) { return 0.0; };
  for (const auto& p : powers_) {
    if (!(p.exponent > -1.0))
      throw InvalidArgument("non-integrable singularity: power exponent must exceed -1");
  }
  if (!std::isfinite(log_coefficient_)) throw InvalidArgument("log coefficient must be finite");
}

ScalarFunction ScalarFunction::constant(double value) {
  return ScalarFunction([value](double) { return value; });
}

double ScalarFunction::operator()(double x) const {
  double v = smooth_(x);
  for (const auto& p : powers_) v += p.coefficient * std::pow(x, p.exponent);
  if (log_coefficient_ != 0.0) v += log_coefficient_ * std::log(x);
  return v;
}

bool ScalarFunction::singular_at_origin() const noexcept {
  if (log_coefficient_ != 0.0) return true;
  return std::any_of(powers_.begin(), powers_.end(), [](const PowerTerm& p) {
    return p.coefficient != 0.0 && !is_smooth_power(p.exponent);
  });
}

double ScalarFunction::leading_singular_exponent() const noexcept {
  double lead = std::numeric_limits<double>::infinity();
  for (const auto& p : powers_) {
    if (p.coefficient != 0.0 && !is_smooth_power(p.exponent)) lead = std::min(lead, p.exponent);
  }
  if (log_coefficient_ != 0.0) lead = std::min(lead, 0.0);
  return lead;
}

ScalarFunction ScalarFunction::scaled(double factor) const {
  auto smooth = smooth_;
  std::vector<PowerTerm> powers = powers_;
  for (auto& p : powers) p.coefficient *= factor;
  return ScalarFunction([smooth, factor](double x) { return factor * smooth(x); }, std::move(powers),
                        factor * log_coefficient_);
}

Eigen::VectorXd basis_moments(const ScalarFunction& f, double a, double b, int degree,
                              IntegrationOptions options) {
  const double h = b - a;
  if (!(h > 0.0)) throw InvalidArgument("basis_moments: empty interval");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(degree + 1);
  std::vector<double> vals(static_cast<std::size_t>(degree) + 1);

  if (a == 0.0 && f.singular_at_origin()) {
    const QuadratureRule& gl = cached_gauss_legendre(std::max(options.smooth_points, degree / 2 + 2));
    for (int i = 0; i < gl.size(); ++i) {
      const double t = gl.nodes[static_cast<std::size_t>(i)];
      reference_basis_values(degree, t, vals.data());
      const double w = gl.weights[static_cast<std::size_t>(i)] * h * f.smooth_part(h * t);
      for (int k = 0; k <= degree; ++k) out(k) += w * vals[static_cast<std::size_t>(k)];
    }
    // Exact moments of the descriptor terms against the monomial expansion.
    const double log_h = std::log(h);
    for (int k = 0; k <= degree; ++k) {
      const std::vector<double> c = monomial_coefficients(k);
      for (const auto& p : f.powers()) {
        double s = 0.0;
        for (int j = 0; j <= k; ++j) s += c[static_cast<std::size_t>(j)] * fractional_monomial_integral(p.exponent, j, 0.0, 1.0);
        out(k) += p.coefficient * std::pow(h, p.exponent + 1.0) * s;
      }
      if (f.log_coefficient() != 0.0) {
        // int_0^1 log(h t) t^j dt = log(h)/(j+1) - 1/(j+1)^2
        double s = 0.0;
        for (int j = 0; j <= k; ++j) s += c[static_cast<std::size_t>(j)] * (log_h / (j + 1.0) - 1.0 / ((j + 1.0) * (j + 1.0)));
        out(k) += f.log_coefficient() * h * s;
      }
    }
    return out;
  }

  const QuadratureRule& gl = cached_gauss_legendre(far_rule_size(f, a, b, degree, options));
  for (int i = 0; i < gl.size(); ++i) {
    const double t = gl.nodes[static_cast<std::size_t>(i)];
    reference_basis_values(degree, t, vals.data());
    const double w = gl.weights[static_cast<std::size_t>(i)] * h * f(a + h * t);
    for (int k = 0; k <= degree; ++k) out(k) += w * vals[static_cast<std::size_t>(k)];
  }
  return out;
}

double integrate_product(const ScalarFunction& f, const std::function<double(double)>& g, double a, double b,
                         IntegrationOptions options) {
  const double h = b - a;
  if (!(h > 0.0)) throw InvalidArgument("integrate_product: empty interval");
  if (a == 0.0 && f.singular_at_origin()) {
    const int n = std::max(options.smooth_points, kSingularPoints);
    double sum = cached_gauss_legendre(n).integrate([&](double x) { return f.smooth_part(x) * g(x); }, 0.0, h);
    for (const auto& p : f.powers()) {
      const QuadratureRule& gj = cached_gauss_jacobi(n, 0.0, p.exponent);
      sum += p.coefficient * std::pow(h, p.exponent + 1.0) * gj.integrate([&](double t) { return g(h * t); });
    }
    if (f.log_coefficient() != 0.0) {
      const double plain = cached_gauss_legendre(n).integrate([&](double t) { return g(h * t); });
      const double logw = log_weighted_rule().integrate([&](double t) { return g(h * t); });
      sum += f.log_coefficient() * h * (std::log(h) * plain + logw);
    }
    return sum;
  }
  const QuadratureRule& gl = cached_gauss_legendre(far_rule_size(f, a, b, 0, options));
  return gl.integrate([&](double x) { return f(x) * g(x); }, a, b);
}

double integrate_squared_difference(const ScalarFunction& f, const std::function<double(double)>& g, double a,
                                    double b, IntegrationOptions options) {
  const double h = b - a;
  if (!(h > 0.0)) throw InvalidArgument("integrate_squared_difference: empty interval");
  if (!(a == 0.0 && f.singular_at_origin())) {
    const QuadratureRule& gl = cached_gauss_legendre(far_rule_size(f, a, b, 0, options));
    return gl.integrate(
        [&](double x) {
          const double d = f(x) - g(x);
          return d * d;
        },
        a, b);
  }

  // Geometric grading towards the singularity: no cancellation between the
  // singular and smooth parts even when f - g is tiny.
  const QuadratureRule& gl = cached_gauss_legendre(12);
  const auto sq = [&](double x) {
    const double d = f(x) - g(x);
    return d * d;
  };
  double sum = 0.0;
  double hi = h;
  for (int level = 0; level < 200 && hi > 1e-280; ++level) {
    const double lo = 0.5 * hi;
    sum += gl.integrate(sq, lo, hi);
    hi = lo;
  }
  // Remaining [0, hi]: the power terms dominate there.
  for (const auto& pi : f.powers()) {
    for (const auto& pj : f.powers()) {
      const double e = pi.exponent + pj.exponent + 1.0;
      if (!(e > 0.0)) throw InvalidArgument("function is not square integrable near 0");
      sum += pi.coefficient * pj.coefficient * std::pow(hi, e) / e;
    }
  }
  return std::max(sum, 0.0);
}

PiecewisePolynomial l2_project(const ScalarFunction& f, const Mesh& mesh, int degree, IntegrationOptions options) {
  Eigen::MatrixXd coeffs(mesh.size(), degree + 1);
  for (int e = 0; e < mesh.size(); ++e) {
    const double h = mesh.length(e);
    coeffs.row(e) = basis_moments(f, mesh.left(e), mesh.right(e), degree, options).transpose() / h;
  }
  return PiecewisePolynomial(mesh, degree, std::move(coeffs));
}

}  // namespace fracdpg
