#pragma once

#include <Eigen/Dense>

namespace fracdpg {

/// Degrees and order of the broken test space U^m x U^n with the norm
/// ||tau||_{H^1(T)}^2 + ||v||_{H^{alpha/2}(T)}^2.
struct TestNormSpec {
  double alpha;
  int m;  // tau degree
  int n;  // v degree

  void validate() const;
};

/// I(i,j) = int_0^1 int_0^1 x^i y^j |x-y|^{1-alpha} dx dy
///        = [B(j+1, 2-alpha) + B(i+1, 2-alpha)] / (i+j+3-alpha).
Eigen::MatrixXd slobodeckij_reference_moments(double alpha, int max_degree);

/// Slobodeckij seminorm Gram on [0,1] in the orthonormal Legendre basis:
/// G(k,l) = int int (P_k(x)-P_k(y))(P_l(x)-P_l(y)) / |x-y|^{1+alpha}.
Eigen::MatrixXd reference_slobodeckij_gram(double alpha, int degree);

/// H^{alpha/2}(T) Gram matrix on T = [a,b]: h * I + h^{1-alpha} * reference seminorm Gram.
Eigen::MatrixXd element_vv_gram(double a, double b, int degree, double alpha);

/// H^1(T) Gram matrix on T = [a,b]: h * I + (1/h) * reference derivative Gram.
Eigen::MatrixXd element_tt_gram(double a, double b, int degree);

}  // namespace fracdpg
