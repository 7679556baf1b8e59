#include "fracdpg/sobolev.hpp"

#include <cmath>
#include <vector>

#include "fracdpg/error.hpp"
#include "fracdpg/polynomial.hpp"
#include "fracdpg/quadrature.hpp"

namespace fracdpg {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) throw InvalidArgument("alpha must lie in (1,2)");
}

void check_degree(int degree) {
  if (degree < 0 || degree > kMaxDegree) throw InvalidArgument("degree outside supported range");
}

long double beta_ld(long double a, long double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// Integer part of the monomial coefficients of P_k (P_k = sqrt(2k+1) * this).
std::vector<long double> integer_coefficients(int k) {
  std::vector<long double> c(static_cast<std::size_t>(k) + 1);
  long double binom_k = 1.0L;   // C(k, j)
  long double binom_kj = 1.0L;  // C(k+j, j)
  for (int j = 0; j <= k; ++j) {
    c[static_cast<std::size_t>(j)] = ((k + j) % 2 == 0 ? 1.0L : -1.0L) * binom_k * binom_kj;
    binom_k = binom_k * (k - j) / (j + 1);
    binom_kj = binom_kj * (k + j + 1) / (j + 1);
  }
  return c;
}

}  // namespace

void TestNormSpec::validate() const {
  check_alpha(alpha);
  check_degree(m);
  check_degree(n);
}

Eigen::MatrixXd slobodeckij_reference_moments(double alpha, int max_degree) {
  check_alpha(alpha);
  if (max_degree < 0) throw InvalidArgument("moment degree must be nonnegative");
  const long double s = 2.0L - alpha;
  Eigen::MatrixXd I(max_degree + 1, max_degree + 1);
  for (int i = 0; i <= max_degree; ++i)
    for (int j = 0; j <= max_degree; ++j)
      I(i, j) = static_cast<double>((beta_ld(j + 1.0L, s) + beta_ld(i + 1.0L, s)) / (i + j + 1.0L + s));
  return I;
}

Eigen::MatrixXd reference_slobodeckij_gram(double alpha, int degree) {
  check_alpha(alpha);
  check_degree(degree);
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(degree + 1, degree + 1);
  if (degree == 0) return G;

  // (P_k(x) - P_k(y)) / (x - y) = sqrt(2k+1) sum_r c_r sum_{i+j=r-1} x^i y^j,
  // so G(k,l) is a finite sum of the moments I(i+i', j+j'). Summed in long
  // double on exact integer coefficients to contain cancellation.
  const int top = 2 * (degree - 1);
  const long double s = 2.0L - alpha;
  std::vector<long double> I(static_cast<std::size_t>((top + 1) * (top + 1)));
  for (int i = 0; i <= top; ++i)
    for (int j = 0; j <= top; ++j)
      I[static_cast<std::size_t>(i * (top + 1) + j)] = (beta_ld(j + 1.0L, s) + beta_ld(i + 1.0L, s)) / (i + j + 1.0L + s);

  // dd[k](i, j): coefficient of x^i y^j in the divided difference of P_k / sqrt(2k+1).
  std::vector<std::vector<long double>> dd(static_cast<std::size_t>(degree) + 1);
  const int width = degree;
  for (int k = 1; k <= degree; ++k) {
    auto& t = dd[static_cast<std::size_t>(k)];
    t.assign(static_cast<std::size_t>(width * width), 0.0L);
    const auto c = integer_coefficients(k);
    for (int r = 1; r <= k; ++r)
      for (int i = 0; i < r; ++i) t[static_cast<std::size_t>(i * width + (r - 1 - i))] += c[static_cast<std::size_t>(r)];
  }
  for (int k = 1; k <= degree; ++k) {
    for (int l = k; l <= degree; ++l) {
      const auto& a = dd[static_cast<std::size_t>(k)];
      const auto& b = dd[static_cast<std::size_t>(l)];
      long double sum = 0.0L;
      for (int i = 0; i < width; ++i)
        for (int j = 0; j + i < width; ++j) {
          const long double ca = a[static_cast<std::size_t>(i * width + j)];
          if (ca == 0.0L) continue;
          for (int i2 = 0; i2 < width; ++i2)
            for (int j2 = 0; j2 + i2 < width; ++j2) {
              const long double cb = b[static_cast<std::size_t>(i2 * width + j2)];
              if (cb == 0.0L) continue;
              sum += ca * cb * I[static_cast<std::size_t>((i + i2) * (top + 1) + (j + j2))];
            }
        }
      const double value = static_cast<double>(sum * std::sqrt((2.0L * k + 1.0L) * (2.0L * l + 1.0L)));
      G(k, l) = value;
      G(l, k) = value;
    }
  }
  return G;
}

Eigen::MatrixXd element_vv_gram(double a, double b, int degree, double alpha) {
  if (!(b > a)) throw InvalidArgument("element must have positive length");
  const double h = b - a;
  Eigen::MatrixXd G = std::pow(h, 1.0 - alpha) * reference_slobodeckij_gram(alpha, degree);
  G.diagonal().array() += h;
  return G;
}

Eigen::MatrixXd element_tt_gram(double a, double b, int degree) {
  if (!(b > a)) throw InvalidArgument("element must have positive length");
  check_degree(degree);
  const double h = b - a;
  const QuadratureRule& gl = cached_gauss_legendre(degree + 1);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(degree + 1, degree + 1);
  std::vector<double> v(static_cast<std::size_t>(degree) + 1), d(v.size());
  for (int q = 0; q < gl.size(); ++q) {
    reference_basis_values(degree, gl.nodes[static_cast<std::size_t>(q)], v.data(), d.data());
    const Eigen::Map<const Eigen::VectorXd> dv(d.data(), degree + 1);
    D.noalias() += gl.weights[static_cast<std::size_t>(q)] * dv * dv.transpose();
  }
  Eigen::MatrixXd G = D / h;
  G.diagonal().array() += h;
  return G;
}

}  // namespace fracdpg
