#include "fracdpg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracdpg/error.hpp"
#include "fracdpg/polynomial.hpp"
#include "fracdpg/quadrature.hpp"
#include "fracdpg/sobolev.hpp"

namespace fracdpg {

void ProblemData::validate() const {
  if (!b || !c) throw InvalidArgument("coefficients b and c must be set");
  constexpr int samples = 1000;
  constexpr double step = 1e-5;
  for (int i = 0; i <= samples; ++i) {
    const double x = std::clamp(static_cast<double>(i) / samples, step, 1.0 - step);
    const double db = (b(x + step) - b(x - step)) / (2.0 * step);
    const double value = c(x) - 0.5 * db;
    if (!std::isfinite(value) || value < -1e-8)
      throw InvalidArgument("c - Db/2 must be nonnegative (violated at x = " + std::to_string(x) + ")");
  }
}

TrialLayout::TrialLayout(int n_elements, int p, int q) : n_(n_elements), p_(p), q_(q) {
  if (n_elements < 1) throw InvalidArgument("trial layout needs at least one element");
  if (p < 0 || q < 0) throw InvalidArgument("trial degrees must be nonnegative");
}

TestLayout::TestLayout(int n_elements, int m, int n) : n_elements_(n_elements), m_(m), n_(n) {
  if (n_elements < 1) throw InvalidArgument("test layout needs at least one element");
  if (m < 0 || n < 0) throw InvalidArgument("test degrees must be nonnegative");
}

void Degrees::validate() const {
  for (int d : {p, q, m, n})
    if (d < 0 || d > kMaxDegree) throw InvalidArgument("degree outside [0, " + std::to_string(kMaxDegree) + "]");
}

int Degrees::quadrature_points() const { return 2 * std::max({p, q, m, n}) + 6; }

namespace {

void check_layouts(const Mesh& mesh, const TrialLayout& trial, const TestLayout& test) {
  if (trial.elements() != mesh.size() || test.elements() != mesh.size())
    throw InvalidArgument("layout element count does not match the mesh");
}

// Element-local terms: (sigma, tau), (b sigma, v), (u, D tau), (c u, v).
void add_local_terms(Eigen::MatrixXd& B, const Mesh& mesh, const TrialLayout& trial, const TestLayout& test,
                     const ProblemData& data, int points) {
  const int p = trial.p(), q = trial.q(), m = test.m(), n = test.n();
  const int top = std::max({p, q, m, n});
  const QuadratureRule& gl = cached_gauss_legendre(points);
  std::vector<double> val(static_cast<std::size_t>(top) + 1), der(val.size());

  // Reference (u, D tau): int_0^1 P_j P_k' dt, independent of h.
  Eigen::MatrixXd u_dtau = Eigen::MatrixXd::Zero(m + 1, q + 1);
  for (int iq = 0; iq < gl.size(); ++iq) {
    reference_basis_values(top, gl.nodes[static_cast<std::size_t>(iq)], val.data(), der.data());
    const double w = gl.weights[static_cast<std::size_t>(iq)];
    for (int k = 0; k <= m; ++k)
      for (int j = 0; j <= q; ++j) u_dtau(k, j) += w * der[static_cast<std::size_t>(k)] * val[static_cast<std::size_t>(j)];
  }

  for (int T = 0; T < mesh.size(); ++T) {
    const double a = mesh.left(T), h = mesh.length(T);
    for (int j = 0; j <= std::min(p, m); ++j) B(test.tau(T, j), trial.sigma(T, j)) = h;
    for (int k = 0; k <= m; ++k)
      for (int j = 0; j <= q; ++j) B(test.tau(T, k), trial.u(T, j)) = u_dtau(k, j);

    for (int iq = 0; iq < gl.size(); ++iq) {
      const double t = gl.nodes[static_cast<std::size_t>(iq)];
      const double x = a + h * t;
      const double w = h * gl.weights[static_cast<std::size_t>(iq)];
      const double bw = w * data.b(x), cw = w * data.c(x);
      reference_basis_values(top, t, val.data());
      for (int k = 0; k <= n; ++k) {
        const double vk = val[static_cast<std::size_t>(k)];
        if (bw != 0.0)
          for (int j = 0; j <= p; ++j) B(test.v(T, k), trial.sigma(T, j)) += bw * vk * val[static_cast<std::size_t>(j)];
        if (cw != 0.0)
          for (int j = 0; j <= q; ++j) B(test.v(T, k), trial.u(T, j)) += cw * vk * val[static_cast<std::size_t>(j)];
      }
    }
  }
}

// Trace terms: coefficient (w(x_i^+) - w(x_i^-)), missing exterior traces zero.
void add_trace_terms(Eigen::MatrixXd& B, const Mesh& mesh, const TrialLayout& trial, const TestLayout& test) {
  const int N = mesh.size();
  const int top = std::max(test.m(), test.n());
  std::vector<double> at0(static_cast<std::size_t>(top) + 1), at1(at0.size());
  reference_basis_values(top, 0.0, at0.data());
  reference_basis_values(top, 1.0, at1.data());
  for (int i = 0; i <= N; ++i) {
    const int right = i;     // element with x_i as left end
    const int left = i - 1;  // element with x_i as right end
    for (int k = 0; k <= test.n(); ++k) {
      if (right < N) B(test.v(right, k), trial.sigma_hat(i)) += at0[static_cast<std::size_t>(k)];
      if (left >= 0) B(test.v(left, k), trial.sigma_hat(i)) -= at1[static_cast<std::size_t>(k)];
    }
    if (i == 0 || i == N) continue;
    for (int k = 0; k <= test.m(); ++k) {
      B(test.tau(right, k), trial.u_hat(i)) += at0[static_cast<std::size_t>(k)];
      B(test.tau(left, k), trial.u_hat(i)) -= at1[static_cast<std::size_t>(k)];
    }
  }
}

// (D^{-beta} sigma, D_T v): source elements left of or equal to the target.
void add_fractional_terms(Eigen::MatrixXd& B, const Mesh& mesh, const TrialLayout& trial, const TestLayout& test,
                          double beta) {
  const int N = mesh.size();
#pragma omp parallel for schedule(dynamic)
  for (int T = 0; T < N; ++T) {
    for (int S = 0; S <= T; ++S) {
      const Eigen::MatrixXd C = frac_coupling_block(mesh, S, T, beta, trial.p(), test.n());
      B.block(test.v(T, 0), trial.sigma(S, 0), test.n() + 1, trial.p() + 1) += C;
    }
  }
}

}  // namespace

Eigen::MatrixXd assemble_B(const Mesh& mesh, const TrialLayout& trial, const TestLayout& test,
                           const ProblemData& data) {
  check_layouts(mesh, trial, test);
  Degrees degrees{trial.p(), trial.q(), test.m(), test.n()};
  degrees.validate();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(test.size(), trial.size());
  add_local_terms(B, mesh, trial, test, data, degrees.quadrature_points());
  add_trace_terms(B, mesh, trial, test);
  add_fractional_terms(B, mesh, trial, test, data.order.beta());
  return B;
}

std::vector<Eigen::MatrixXd> assemble_theta(const Mesh& mesh, int m, int n, double alpha) {
  TestNormSpec{alpha, m, n}.validate();
  const int N = mesh.size();
  const int bs = m + n + 2;
  std::vector<Eigen::MatrixXd> blocks(static_cast<std::size_t>(N));
  const Eigen::MatrixXd ref_tt_d = element_tt_gram(0.0, 1.0, m) - Eigen::MatrixXd::Identity(m + 1, m + 1);
  const Eigen::MatrixXd ref_vv_s = reference_slobodeckij_gram(alpha, n);
  for (int T = 0; T < N; ++T) {
    const double h = mesh.length(T);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(bs, bs);
    G.topLeftCorner(m + 1, m + 1) = ref_tt_d / h;
    G.bottomRightCorner(n + 1, n + 1) = std::pow(h, 1.0 - alpha) * ref_vv_s;
    G.diagonal().array() += h;
    blocks[static_cast<std::size_t>(T)] = std::move(G);
  }
  return blocks;
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const TestLayout& test, const ProblemData& data,
                              int quadrature_points) {
  if (test.elements() != mesh.size()) throw InvalidArgument("layout element count does not match the mesh");
  Eigen::VectorXd load = Eigen::VectorXd::Zero(test.size());
  IntegrationOptions options{quadrature_points};
  for (int T = 0; T < mesh.size(); ++T) {
    const Eigen::VectorXd moments = basis_moments(data.rhs, mesh.left(T), mesh.right(T), test.n(), options);
    load.segment(test.v(T, 0), test.n() + 1) = moments;
  }
  return load;
}

SystemMatrices assemble_system(const Mesh& mesh, const Degrees& degrees, const ProblemData& data) {
  degrees.validate();
  TrialLayout trial(mesh.size(), degrees.p, degrees.q);
  TestLayout test(mesh.size(), degrees.m, degrees.n);
  return SystemMatrices{trial, test, assemble_B(mesh, trial, test, data),
                        assemble_theta(mesh, degrees.m, degrees.n, data.order.alpha()),
                        assemble_load(mesh, test, data, degrees.quadrature_points())};
}

}  // namespace fracdpg
