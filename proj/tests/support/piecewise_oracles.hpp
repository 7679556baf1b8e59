#pragma once

#include <functional>

#include "fracdpg/polynomial.hpp"
#include "support/oracles.hpp"

namespace oracle {

// (D^{-beta} f)(x) for a piecewise polynomial by per-element quadrature.
inline double rl_left_piecewise(const fracdpg::PiecewisePolynomial& f, double beta, double x) {
  double sum = 0.0;
  const fracdpg::Mesh& m = f.mesh();
  for (int e = 0; e < m.size() && m.left(e) < x; ++e)
    sum += rl_left_piece([&](double s) { return f.evaluate_on(e, s); }, beta, m.left(e), m.right(e), x);
  return sum;
}

// Sum over elements e of int_e g(e, x) dx.
inline double piecewise_integral(const fracdpg::Mesh& mesh, const std::function<double(int, double)>& g) {
  double s = 0.0;
  for (int e = 0; e < mesh.size(); ++e) s += integrate([&](double x) { return g(e, x); }, mesh.left(e), mesh.right(e), 1e-14);
  return s;
}

}  // namespace oracle
