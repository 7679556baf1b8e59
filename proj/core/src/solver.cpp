#include "fracdpg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fracdpg/error.hpp"

namespace fracdpg {

namespace {

// Below this squared pivot of the unit-diagonal normal matrix the Cholesky
// path hands over to QR; below kQrDiagonalFloor the trial space is rank deficient.
constexpr double kCholeskyPivotFloor = 1e-10;
constexpr double kQrDiagonalFloor = 1e-12;
constexpr int kRefinementSteps = 3;

struct Expansion {
  double hi, lo;
};

inline Expansion two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline Expansion two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

// x = T y: prefix sums along each chain.
void chain_expand(const ColumnChains& chains, Eigen::VectorXd& v) {
  for (const auto& chain : chains)
    for (std::size_t i = 1; i < chain.size(); ++i) v(chain[i]) += v(chain[i - 1]);
}

// B T: suffix sums of columns along each chain.
void chain_columns(const ColumnChains& chains, Eigen::MatrixXd& M) {
  for (const auto& chain : chains)
    for (std::size_t i = chain.size(); i-- > 1;) M.col(chain[i - 1]) += M.col(chain[i]);
}

// W^T W, exploiting that most columns of W touch at most two row blocks.
// Columns spanning more blocks form a dense panel handled by one symmetric
// rank update; the rest are accumulated block by block.
Eigen::MatrixXd normal_matrix(const Eigen::MatrixXd& W, int bs) {
  const Eigen::Index rows = W.rows(), cols = W.cols();
  const int n_blocks = static_cast<int>(rows / bs);
  std::vector<int> wide;
  std::vector<std::vector<int>> locals(static_cast<std::size_t>(n_blocks));
  for (Eigen::Index c = 0; c < cols; ++c) {
    int lo = n_blocks, hi = -1;
    for (int e = 0; e < n_blocks; ++e) {
      if (W.col(c).segment(static_cast<Eigen::Index>(e) * bs, bs).cwiseAbs().maxCoeff() != 0.0) {
        lo = std::min(lo, e);
        hi = e;
      }
    }
    if (hi < 0) continue;
    if (hi - lo > 1) {
      wide.push_back(static_cast<int>(c));
    } else {
      for (int e = lo; e <= hi; ++e) locals[static_cast<std::size_t>(e)].push_back(static_cast<int>(c));
    }
  }

  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(cols, cols);
  const auto n_wide = static_cast<Eigen::Index>(wide.size());
  Eigen::MatrixXd Wd(rows, n_wide);
  for (Eigen::Index j = 0; j < n_wide; ++j) Wd.col(j) = W.col(wide[static_cast<std::size_t>(j)]);
  Eigen::MatrixXd Sdd = Eigen::MatrixXd::Zero(n_wide, n_wide);
  Sdd.selfadjointView<Eigen::Lower>().rankUpdate(Wd.transpose());
  Sdd.triangularView<Eigen::StrictlyUpper>() = Sdd.transpose();
  for (Eigen::Index j = 0; j < n_wide; ++j)
    for (Eigen::Index i = 0; i < n_wide; ++i) S(wide[static_cast<std::size_t>(i)], wide[static_cast<std::size_t>(j)]) = Sdd(i, j);

  for (int e = 0; e < n_blocks; ++e) {
    const auto& loc = locals[static_cast<std::size_t>(e)];
    if (loc.empty()) continue;
    const auto k = static_cast<Eigen::Index>(loc.size());
    const Eigen::Index r0 = static_cast<Eigen::Index>(e) * bs;
    Eigen::MatrixXd X(bs, k);
    for (Eigen::Index j = 0; j < k; ++j) X.col(j) = W.col(loc[static_cast<std::size_t>(j)]).segment(r0, bs);
    const Eigen::MatrixXd XX = X.transpose() * X;
    const Eigen::MatrixXd XD = X.transpose() * Wd.middleRows(r0, bs);
    for (Eigen::Index i = 0; i < k; ++i) {
      const int ci = loc[static_cast<std::size_t>(i)];
      for (Eigen::Index j = 0; j < k; ++j) S(ci, loc[static_cast<std::size_t>(j)]) += XX(i, j);
      for (Eigen::Index j = 0; j < n_wide; ++j) {
        S(ci, wide[static_cast<std::size_t>(j)]) += XD(i, j);
        S(wide[static_cast<std::size_t>(j)], ci) += XD(i, j);
      }
    }
  }
  return S;
}

}  // namespace

ThetaFactors::ThetaFactors(const std::vector<Eigen::MatrixXd>& blocks) {
  if (blocks.empty()) throw InvalidArgument("Theta has no blocks");
  block_size_ = static_cast<int>(blocks.front().rows());
  factors_.resize(blocks.size());
  for (std::size_t e = 0; e < blocks.size(); ++e) {
    const Eigen::MatrixXd& G = blocks[e];
    if (G.rows() != block_size_ || G.cols() != block_size_)
      throw InvalidArgument("Theta blocks must be square and of equal size");
    const Eigen::LLT<Eigen::MatrixXd> llt(G);
    const Eigen::MatrixXd L = llt.matrixL();
    if (llt.info() != Eigen::Success || !L.allFinite() || (L.diagonal().array() <= 0.0).any())
      throw NotPositiveDefinite(static_cast<int>(e), "Cholesky factorization failed");
    // Pivot test on the unit-diagonal block: Theta mixes h and 1/h scales.
    const Eigen::VectorXd d = G.diagonal().cwiseSqrt().cwiseInverse();
    const Eigen::LLT<Eigen::MatrixXd> scaled(d.asDiagonal() * G * d.asDiagonal());
    if (scaled.info() != Eigen::Success || scaled.matrixLLT().diagonal().cwiseAbs2().minCoeff() <= 1e-14)
      throw NotPositiveDefinite(static_cast<int>(e), "numerically singular block");
    factors_[e] = L;
  }
}

Eigen::VectorXd ThetaFactors::apply_inverse(const Eigen::VectorXd& y) const {
  if (y.size() != blocks() * block_size_) throw InvalidArgument("vector length does not match Theta");
  Eigen::VectorXd z(y.size());
  for (int e = 0; e < blocks(); ++e) {
    const auto& L = factors_[static_cast<std::size_t>(e)];
    Eigen::VectorXd s = L.triangularView<Eigen::Lower>().solve(y.segment(e * block_size_, block_size_));
    L.transpose().triangularView<Eigen::Upper>().solveInPlace(s);
    z.segment(e * block_size_, block_size_) = s;
  }
  return z;
}

Eigen::MatrixXd ThetaFactors::whiten_block(int element, const Eigen::MatrixXd& rows) const {
  if (rows.rows() != block_size_) throw InvalidArgument("row block does not match Theta block size");
  return factors_[static_cast<std::size_t>(element)].triangularView<Eigen::Lower>().solve(rows);
}

ThetaFactors factor_theta(const std::vector<Eigen::MatrixXd>& blocks) { return ThetaFactors(blocks); }

std::vector<double> estimate(const Eigen::VectorXd& residual, const Eigen::VectorXd& representer,
                             int block_size) {
  if (block_size <= 0 || residual.size() != representer.size() || residual.size() % block_size != 0)
    throw InvalidArgument("residual, representer and block size are inconsistent");
  const auto blocks = residual.size() / block_size;
  std::vector<double> est_sq(static_cast<std::size_t>(blocks));
  for (Eigen::Index e = 0; e < blocks; ++e) {
    const double value =
        residual.segment(e * block_size, block_size).dot(representer.segment(e * block_size, block_size));
    if (value < -1e-12) throw NumericalFailure("negative element indicator " + std::to_string(value));
    est_sq[static_cast<std::size_t>(e)] = std::max(value, 0.0);
  }
  return est_sq;
}

Eigen::VectorXd compensated_residual(const Eigen::MatrixXd& B, const Eigen::VectorXd& load,
                                     const Eigen::VectorXd& x_high, const Eigen::VectorXd& x_low) {
  if (load.size() != B.rows() || x_high.size() != B.cols() || x_low.size() != B.cols())
    throw InvalidArgument("residual operands have inconsistent dimensions");
  Eigen::VectorXd sum = load;
  Eigen::VectorXd err = Eigen::VectorXd::Zero(B.rows());
  for (Eigen::Index j = 0; j < B.cols(); ++j) {
    const double xh = x_high(j), xl = x_low(j);
    if (xh == 0.0 && xl == 0.0) continue;
    for (Eigen::Index i = 0; i < B.rows(); ++i) {
      const double b = B(i, j);
      if (b == 0.0) continue;
      const Expansion p = two_prod(-b, xh);
      const Expansion s = two_sum(sum(i), p.hi);
      sum(i) = s.hi;
      err(i) += s.lo + p.lo - b * xl;
    }
  }
  return sum + err;
}

DpgSolution solve_normal_equations(const Eigen::MatrixXd& B, const ThetaFactors& theta, const Eigen::VectorXd& load,
                                   const ColumnChains& chains) {
  const Eigen::Index rows = B.rows(), cols = B.cols();
  const int bs = theta.block_size();
  if (rows != static_cast<Eigen::Index>(theta.blocks()) * bs || load.size() != rows)
    throw InvalidArgument("B, Theta and load have inconsistent dimensions");
  if (rows < cols) {
    std::ostringstream msg;
    msg << "test dimension " << rows << " is smaller than trial dimension " << cols;
    throw InfSupFailure(msg.str());
  }

  for (const auto& chain : chains)
    for (Eigen::Index c : chain)
      if (c < 0 || c >= cols) throw InvalidArgument("chain column out of range");

  // W = L^{-1} B T blockwise, so T^T B^T Theta^{-1} B T = W^T W.
  Eigen::MatrixXd W(rows, cols);
#pragma omp parallel for
  for (int e = 0; e < theta.blocks(); ++e) {
    Eigen::MatrixXd block = B.middleRows(e * bs, bs);
    chain_columns(chains, block);
    W.middleRows(e * bs, bs) = theta.whiten_block(e, block);
  }

  Eigen::MatrixXd S = normal_matrix(W, bs);

  Eigen::VectorXd scale = S.diagonal();
  if ((scale.array() <= 0.0).any() || !scale.allFinite()) throw InfSupFailure("trial function with zero energy");
  scale = scale.cwiseSqrt().cwiseInverse();
  S = scale.asDiagonal() * S * scale.asDiagonal();
  Eigen::LLT<Eigen::MatrixXd> llt(S);
  S.resize(0, 0);
  const bool use_cholesky =
      llt.info() == Eigen::Success && llt.matrixLLT().diagonal().cwiseAbs2().minCoeff() > kCholeskyPivotFloor;

  // Fallback: QR of the column-scaled W, accurate up to cond(W) = sqrt(cond(S)).
  Eigen::HouseholderQR<Eigen::MatrixXd> qr;
  if (!use_cholesky) {
    llt = Eigen::LLT<Eigen::MatrixXd>();
    W = W * scale.asDiagonal();
    qr.compute(W);
    W.resize(0, 0);
    const double min_diagonal = qr.matrixQR().diagonal().cwiseAbs().minCoeff();
    if (!(min_diagonal > kQrDiagonalFloor)) {
      std::ostringstream msg;
      msg << "normal matrix is numerically singular (scaled R diagonal " << min_diagonal << ")";
      throw InfSupFailure(msg.str());
    }
  }

  auto whitened = [&](const Eigen::VectorXd& y) {
    Eigen::VectorXd z(rows);
    for (int e = 0; e < theta.blocks(); ++e)
      z.segment(e * bs, bs) = theta.lower(e).triangularView<Eigen::Lower>().solve(y.segment(e * bs, bs));
    return z;
  };
  // Correction in x coordinates for a residual r.
  auto correction = [&](const Eigen::VectorXd& r) -> Eigen::VectorXd {
    Eigen::VectorXd y;
    if (use_cholesky) {
      y = scale.asDiagonal() * llt.solve(scale.asDiagonal() * (W.transpose() * whitened(r)));
    } else {
      const Eigen::VectorXd qtr = qr.householderQ().transpose() * whitened(r);
      y = scale.asDiagonal() *
          qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>().solve(qtr.head(cols));
    }
    chain_expand(chains, y);
    return y;
  };

  Eigen::VectorXd x = correction(load);
  Eigen::VectorXd x_low = Eigen::VectorXd::Zero(cols);
  for (int step = 0; step < kRefinementSteps; ++step) {
    const Eigen::VectorXd delta = correction(compensated_residual(B, load, x, x_low));
    for (Eigen::Index j = 0; j < cols; ++j) {
      const Expansion s = two_sum(x(j), delta(j));
      const double lo = s.lo + x_low(j);
      x(j) = s.hi + lo;
      x_low(j) = lo - (x(j) - s.hi);
    }
  }

  DpgSolution sol;
  sol.x = std::move(x);
  sol.x_low = std::move(x_low);
  sol.residual = compensated_residual(B, load, sol.x, sol.x_low);
  sol.representer = theta.apply_inverse(sol.residual);
  sol.est_squared = estimate(sol.residual, sol.representer, bs);
  double total = 0.0;
  for (double v : sol.est_squared) total += v;
  sol.est = std::sqrt(total);
  const double reference = (B.transpose() * theta.apply_inverse(load)).norm();
  const double stationarity = (B.transpose() * sol.representer).norm();
  sol.optimality = reference > 0.0 ? stationarity / reference : stationarity;
  return sol;
}

DpgSolution solve(const SystemMatrices& system) {
  const ThetaFactors theta(system.theta_blocks);
  const TrialLayout& trial = system.trial;
  std::vector<Eigen::Index> chain;
  for (int i = 0; i <= trial.elements(); ++i) chain.push_back(trial.sigma_hat(i));
  return solve_normal_equations(system.B, theta, system.load, {chain});
}

}  // namespace fracdpg
