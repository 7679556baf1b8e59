#include "fracdpg/polynomial.hpp"

#include <array>
#include <cmath>
#include <string>

#include "fracdpg/error.hpp"

namespace fracdpg {

namespace {

void check_degree(int degree) {
  if (degree < 0 || degree > kMaxDegree)
    throw InvalidArgument("polynomial degree " + std::to_string(degree) + " outside [0, " +
                          std::to_string(kMaxDegree) + "]");
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

}  // namespace

void reference_basis_values(int degree, double t, double* values, double* derivatives) {
  // Legendre L_k on [-1,1] with x = 2t - 1; d/dt = 2 d/dx.
  const double x = 2.0 * t - 1.0;
  double l_prev = 1.0, l_cur = x;
  double d_prev = 0.0, d_cur = 1.0;
  for (int k = 0; k <= degree; ++k) {
    double l, d;
    if (k == 0) {
      l = 1.0;
      d = 0.0;
    } else if (k == 1) {
      l = x;
      d = 1.0;
    } else {
      l = ((2.0 * k - 1.0) * x * l_cur - (k - 1.0) * l_prev) / k;
      d = d_prev + (2.0 * k - 1.0) * l_cur;
      l_prev = l_cur;
      l_cur = l;
      d_prev = d_cur;
      d_cur = d;
    }
    const double scale = std::sqrt(2.0 * k + 1.0);
    values[k] = scale * l;
    if (derivatives) derivatives[k] = 2.0 * scale * d;
  }
}

void reference_basis_values(int degree, double t, double* values) {
  reference_basis_values(degree, t, values, nullptr);
}

BasisValue reference_basis_eval(int k, double t) {
  if (k < 0) throw InvalidArgument("basis index must be nonnegative");
  std::vector<double> v(static_cast<std::size_t>(k) + 1), d(static_cast<std::size_t>(k) + 1);
  reference_basis_values(k, t, v.data(), d.data());
  return {v.back(), d.back()};
}

std::vector<double> monomial_coefficients(int k) {
  check_degree(k);
  // Shifted Legendre: L_k(2t-1) = sum_j (-1)^{k+j} C(k,j) C(k+j,j) t^j.
  std::vector<double> c(static_cast<std::size_t>(k) + 1);
  const double scale = std::sqrt(2.0 * k + 1.0);
  for (int j = 0; j <= k; ++j) {
    const double sign = ((k + j) % 2 == 0) ? 1.0 : -1.0;
    c[static_cast<std::size_t>(j)] = scale * sign * binomial(k, j) * binomial(k + j, j);
  }
  return c;
}

void reference_basis_divided_differences(int degree, double t, double r, double* out) {
  // With x, y the [-1,1] images, D_k = (L_k(x) - L_k(y)) / (x - y) satisfies
  // k D_k = (2k-1) (x D_{k-1} + L_{k-1}(y)) - (k-1) D_{k-2}.
  const double x = 2.0 * t - 1.0;
  const double y = 2.0 * r - 1.0;
  double ly_prev = 1.0, ly_cur = y;  // L_{k-2}(y), L_{k-1}(y)
  double d_prev = 0.0, d_cur = 1.0;  // D_{k-2}, D_{k-1}
  for (int k = 0; k <= degree; ++k) {
    double d;
    if (k == 0) {
      d = 0.0;
    } else if (k == 1) {
      d = 1.0;
    } else {
      d = ((2.0 * k - 1.0) * (x * d_cur + ly_cur) - (k - 1.0) * d_prev) / k;
      const double ly = ((2.0 * k - 1.0) * y * ly_cur - (k - 1.0) * ly_prev) / k;
      ly_prev = ly_cur;
      ly_cur = ly;
      d_prev = d_cur;
      d_cur = d;
    }
    // (P_k(t) - P_k(r)) / (t - r) = sqrt(2k+1) * 2 * D_k.
    out[k] = 2.0 * std::sqrt(2.0 * k + 1.0) * d;
  }
}

PiecewisePolynomial::PiecewisePolynomial(Mesh mesh, int degree)
    : PiecewisePolynomial(mesh, degree, Eigen::MatrixXd::Zero(mesh.size(), degree + 1)) {}

PiecewisePolynomial::PiecewisePolynomial(Mesh mesh, int degree, Eigen::MatrixXd coefficients)
    : mesh_(std::move(mesh)), degree_(degree), coeffs_(std::move(coefficients)) {
  check_degree(degree);
  if (coeffs_.rows() != mesh_.size() || coeffs_.cols() != degree + 1)
    throw InvalidArgument("coefficient matrix must be N x (degree+1)");
}

double PiecewisePolynomial::evaluate_on(int element, double x) const {
  std::array<double, kMaxDegree + 1> v{};
  const double t = (x - mesh_.left(element)) / mesh_.length(element);
  reference_basis_values(degree_, t, v.data());
  double sum = 0.0;
  for (int k = 0; k <= degree_; ++k) sum += coeffs_(element, k) * v[static_cast<std::size_t>(k)];
  return sum;
}

double PiecewisePolynomial::derivative_on(int element, double x) const {
  std::array<double, kMaxDegree + 1> v{}, d{};
  const double h = mesh_.length(element);
  const double t = (x - mesh_.left(element)) / h;
  reference_basis_values(degree_, t, v.data(), d.data());
  double sum = 0.0;
  for (int k = 0; k <= degree_; ++k) sum += coeffs_(element, k) * d[static_cast<std::size_t>(k)];
  return sum / h;
}

double PiecewisePolynomial::operator()(double x) const { return evaluate_on(mesh_.locate(x), x); }

PiecewisePolynomial PiecewisePolynomial::reflected() const {
  const int n = mesh_.size();
  Eigen::MatrixXd c(n, degree_ + 1);
  // P_k(1 - t) = (-1)^k P_k(t).
  for (int e = 0; e < n; ++e) {
    for (int k = 0; k <= degree_; ++k) c(e, k) = (k % 2 == 0 ? 1.0 : -1.0) * coeffs_(n - 1 - e, k);
  }
  return PiecewisePolynomial(mesh_.reflected(), degree_, std::move(c));
}

}  // namespace fracdpg
