#include "fracdpg/fractional.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "fracdpg/error.hpp"
#include "fracdpg/quadrature.hpp"

namespace fracdpg {

namespace {

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidArgument("fractional order beta must lie in (0,1)");
}

// int over the part of element e on side dir of x (dir = -1: s < x, +1: s > x)
// of |x - s|^{beta-1} f(s) ds.
double side_integral(const PiecewisePolynomial& f, int e, double x, double beta, int dir) {
  const Mesh& mesh = f.mesh();
  const double c = mesh.left(e), d = mesh.right(e), h = d - c;
  double near, far;
  if (dir < 0) {
    if (c >= x) return 0.0;
    near = std::max(0.0, x - d);
    far = x - c;
  } else {
    if (d <= x) return 0.0;
    near = std::max(0.0, c - x);
    far = d - x;
  }
  const int deg = f.degree();

  if (near >= h) {
    const QuadratureRule& gl = cached_gauss_legendre(smooth_rule_size(near, h, deg));
    return gl.integrate([&](double s) { return std::pow(std::abs(x - s), beta - 1.0) * f.evaluate_on(e, s); }, c, d);
  }

  // G(L) = int_0^L z^{beta-1} f_e(x + dir z) dz with the element polynomial
  // extended past its endpoints; exact by Gauss-Jacobi.
  const QuadratureRule& gj = cached_gauss_jacobi(deg / 2 + 1, 0.0, beta - 1.0);
  auto G = [&](double L) {
    if (L <= 0.0) return 0.0;
    return std::pow(L, beta) * gj.integrate([&](double t) { return f.evaluate_on(e, x + dir * L * t); });
  };
  return G(far) - G(near);
}

double apply_side(const PiecewisePolynomial& f, double beta, double x, int dir) {
  check_beta(beta);
  if (x < 0.0 || x > 1.0) throw InvalidArgument("evaluation point must lie in [0,1]");
  double sum = 0.0;
  for (int e = 0; e < f.mesh().size(); ++e) sum += side_integral(f, e, x, beta, dir);
  return sum / std::tgamma(beta);
}

struct BasisTable {
  // values(i, k) = P_k(t_i), derivs(i, k) = P_k'(t_i)
  Eigen::MatrixXd values;
  Eigen::MatrixXd derivs;
};

BasisTable tabulate(const std::vector<double>& points, int degree) {
  BasisTable tab{Eigen::MatrixXd(static_cast<Eigen::Index>(points.size()), degree + 1),
                 Eigen::MatrixXd(static_cast<Eigen::Index>(points.size()), degree + 1)};
  std::array<double, kMaxDegree + 1> v{}, d{};
  for (std::size_t i = 0; i < points.size(); ++i) {
    reference_basis_values(degree, points[i], v.data(), d.data());
    for (int k = 0; k <= degree; ++k) {
      tab.values(static_cast<Eigen::Index>(i), k) = v[static_cast<std::size_t>(k)];
      tab.derivs(static_cast<Eigen::Index>(i), k) = d[static_cast<std::size_t>(k)];
    }
  }
  return tab;
}

// Reference self block: R(k, j) = int_0^1 (D^{-beta} P_j)(t) P_k'(t) dt via
// D^{-beta} t^i = Gamma(i+1)/Gamma(i+1+beta) t^{i+beta}.
Eigen::MatrixXd self_block(double beta, int trial_degree, int test_degree) {
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(test_degree + 1, trial_degree + 1);
  std::vector<double> gamma_ratio(static_cast<std::size_t>(trial_degree) + 1);
  for (int i = 0; i <= trial_degree; ++i)
    gamma_ratio[static_cast<std::size_t>(i)] = std::tgamma(i + 1.0) / std::tgamma(i + 1.0 + beta);
  for (int j = 0; j <= trial_degree; ++j) {
    const std::vector<double> a = monomial_coefficients(j);
    for (int k = 1; k <= test_degree; ++k) {
      const std::vector<double> c = monomial_coefficients(k);
      double sum = 0.0;
      for (int i = 0; i <= j; ++i) {
        for (int l = 0; l < k; ++l) {
          // P_k'(t) = sum_l (l+1) c_{l+1} t^l
          const double dl = (l + 1.0) * c[static_cast<std::size_t>(l) + 1];
          sum += a[static_cast<std::size_t>(i)] * gamma_ratio[static_cast<std::size_t>(i)] * dl *
                 fractional_monomial_integral(i + beta, l, 0.0, 1.0);
        }
      }
      R(k, j) = sum;
    }
  }
  return R;
}

// Source S immediately left of target T. With y = x - a, w = a - s scaled to
// [0,1]^2 the kernel (h_T Y + h_S W)^{beta-1} is singular only at the corner;
// splitting along W = Y and W = Y eta (or Y = W eta) leaves Y^beta (W^beta)
// times a polynomial, integrated exactly by Gauss-Jacobi, and an analytic
// factor in eta handled by Gauss-Legendre.
Eigen::MatrixXd adjacent_block(double hs, double ht, double beta, int p, int n) {
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n + 1, p + 1);
  const int radial = (p + n) / 2 + 1;
  const QuadratureRule& gj = cached_gauss_jacobi(radial, 0.0, beta);
  std::array<double, kMaxDegree + 1> v{}, d{};

  // Region W <= Y.
  {
    const QuadratureRule& gl = cached_gauss_legendre(smooth_rule_size(ht / hs, 1.0, p));
    for (int iy = 0; iy < gj.size(); ++iy) {
      const double Y = gj.nodes[static_cast<std::size_t>(iy)];
      Eigen::VectorXd inner = Eigen::VectorXd::Zero(p + 1);
      for (int ie = 0; ie < gl.size(); ++ie) {
        const double eta = gl.nodes[static_cast<std::size_t>(ie)];
        const double w = gl.weights[static_cast<std::size_t>(ie)] * std::pow(ht + hs * eta, beta - 1.0);
        reference_basis_values(p, 1.0 - Y * eta, v.data());
        for (int j = 0; j <= p; ++j) inner(j) += w * v[static_cast<std::size_t>(j)];
      }
      reference_basis_values(n, Y, v.data(), d.data());
      const double wy = gj.weights[static_cast<std::size_t>(iy)];
      for (int k = 1; k <= n; ++k) C.row(k) += wy * d[static_cast<std::size_t>(k)] * inner.transpose();
    }
  }
  // Region Y <= W.
  {
    const QuadratureRule& gl = cached_gauss_legendre(smooth_rule_size(hs / ht, 1.0, n));
    for (int iw = 0; iw < gj.size(); ++iw) {
      const double W = gj.nodes[static_cast<std::size_t>(iw)];
      Eigen::VectorXd inner = Eigen::VectorXd::Zero(n + 1);
      for (int ie = 0; ie < gl.size(); ++ie) {
        const double eta = gl.nodes[static_cast<std::size_t>(ie)];
        const double w = gl.weights[static_cast<std::size_t>(ie)] * std::pow(ht * eta + hs, beta - 1.0);
        reference_basis_values(n, W * eta, v.data(), d.data());
        for (int k = 1; k <= n; ++k) inner(k) += w * d[static_cast<std::size_t>(k)];
      }
      reference_basis_values(p, 1.0 - W, v.data());
      const double ww = gj.weights[static_cast<std::size_t>(iw)];
      for (int j = 0; j <= p; ++j) C.col(j) += ww * v[static_cast<std::size_t>(j)] * inner;
    }
  }
  return C * (hs / std::tgamma(beta));
}

Eigen::MatrixXd separated_block(const Mesh& mesh, int source, int target, double beta, int p, int n) {
  const double cs = mesh.left(source), hs = mesh.length(source);
  const double ct = mesh.left(target), ht = mesh.length(target);
  const double gap = ct - mesh.right(source);
  const QuadratureRule& rs = cached_gauss_legendre(smooth_rule_size(gap, hs, p));
  const QuadratureRule& rt = cached_gauss_legendre(smooth_rule_size(gap, ht, std::max(n - 1, 0)));
  const BasisTable bs = tabulate(rs.nodes, p);
  const BasisTable bt = tabulate(rt.nodes, n);

  Eigen::MatrixXd K(rt.size(), rs.size());
  for (int i = 0; i < rt.size(); ++i) {
    const double x = ct + ht * rt.nodes[static_cast<std::size_t>(i)];
    for (int j = 0; j < rs.size(); ++j) {
      const double s = cs + hs * rs.nodes[static_cast<std::size_t>(j)];
      K(i, j) = rt.weights[static_cast<std::size_t>(i)] * rs.weights[static_cast<std::size_t>(j)] *
                std::pow(x - s, beta - 1.0);
    }
  }
  return (bt.derivs.transpose() * K * bs.values) * (hs / std::tgamma(beta));
}

}  // namespace

FractionalOrder FractionalOrder::from_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw InvalidArgument("alpha must lie in (1,2)");
  return FractionalOrder(alpha);
}

FractionalOrder FractionalOrder::from_beta(double beta) {
  check_beta(beta);
  return FractionalOrder(2.0 - beta);
}

double rl_left_power(double beta, double mu, double x) {
  if (!(beta > 0.0)) throw InvalidArgument("fractional order must be positive");
  if (!(mu > -1.0)) throw InvalidArgument("power must exceed -1");
  if (x < 0.0) throw InvalidArgument("evaluation point must be nonnegative");
  if (x == 0.0) return 0.0;
  return std::tgamma(mu + 1.0) / std::tgamma(mu + 1.0 + beta) * std::pow(x, mu + beta);
}

double rl_left_monomial(double beta, int k, double x) {
  check_beta(beta);
  if (k < 0) throw InvalidArgument("monomial degree must be nonnegative");
  if (x < 0.0 || x > 1.0) throw InvalidArgument("evaluation point must lie in [0,1]");
  return rl_left_power(beta, static_cast<double>(k), x);
}

double rl_left_apply(const PiecewisePolynomial& sigma, double beta, double x) {
  return apply_side(sigma, beta, x, -1);
}

double rl_right_apply(const PiecewisePolynomial& v, double beta, double x) { return apply_side(v, beta, x, +1); }

Eigen::MatrixXd frac_coupling_block(const Mesh& mesh, int source, int target, double beta, int trial_degree,
                                    int test_degree) {
  check_beta(beta);
  if (source < 0 || target < 0 || source >= mesh.size() || target >= mesh.size())
    throw InvalidArgument("element index out of range");
  if (trial_degree < 0 || trial_degree > kMaxDegree || test_degree < 0 || test_degree > kMaxDegree)
    throw InvalidArgument("degree outside supported range");
  if (source > target || test_degree == 0) return Eigen::MatrixXd::Zero(test_degree + 1, trial_degree + 1);
  if (source == target)
    return std::pow(mesh.length(target), beta) * self_block(beta, trial_degree, test_degree);
  if (source + 1 == target)
    return adjacent_block(mesh.length(source), mesh.length(target), beta, trial_degree, test_degree);
  return separated_block(mesh, source, target, beta, trial_degree, test_degree);
}

double frac_coupling_entry(const Mesh& mesh, int source, int trial_index, int target, int test_index, double beta) {
  if (trial_index < 0 || test_index < 0) throw InvalidArgument("basis index must be nonnegative");
  return frac_coupling_block(mesh, source, target, beta, trial_index, test_index)(test_index, trial_index);
}

}  // namespace fracdpg
