#include <gtest/gtest.h>

#include <Eigen/Cholesky>
#include <cmath>

#include "fracdpg/assembly.hpp"
#include "fracdpg/error.hpp"
#include "fracdpg/experiments.hpp"
#include "fracdpg/sobolev.hpp"
#include "support/exact_vector.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace fracdpg;

namespace {

ProblemData constant_data(double alpha, double b, double c, ScalarFunction rhs = ScalarFunction::constant(1.0)) {
  ProblemData data;
  data.order = FractionalOrder::from_alpha(alpha);
  data.b = [b](double) { return b; };
  data.c = [c](double) { return c; };
  data.rhs = std::move(rhs);
  return data;
}

int element_of_row(const TestLayout& test, int row) { return row / test.block_size(); }

}  // namespace

TEST(Layout, Dimensions) {
  gen::Rng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const Mesh mesh = gen::random_mesh(rng, 1, 9);
    const Degrees d{rng.integer(0, 3), rng.integer(0, 3), rng.integer(0, 4), rng.integer(0, 4)};
    const SystemMatrices sys = assemble_system(mesh, d, constant_data(1.5, 0.0, 0.0));
    const int N = mesh.size();
    EXPECT_EQ(sys.B.rows(), (d.m + d.n + 2) * N);
    EXPECT_EQ(sys.B.cols(), (d.p + d.q + 4) * N);
    EXPECT_EQ(sys.load.size(), sys.B.rows());
    EXPECT_EQ(static_cast<int>(sys.theta_blocks.size()), N);
  }
}

TEST(Layout, TrialIndexBlocksAreContiguous) {
  const TrialLayout layout(5, 2, 1);
  EXPECT_EQ(layout.sigma(0, 0), 0);
  EXPECT_EQ(layout.u(0, 0), layout.sigma_count());
  EXPECT_EQ(layout.sigma_hat(0), 5 * 5);
  EXPECT_EQ(layout.u_hat(1), layout.sigma_hat(5) + 1);
  EXPECT_EQ(layout.u_hat(4) + 1, layout.size());
}

TEST(AssembleB, RejectsMismatchedLayouts) {
  const Mesh mesh = uniform_mesh(4);
  EXPECT_THROW(assemble_B(mesh, TrialLayout(3, 0, 0), TestLayout(4, 1, 1), constant_data(1.5, 0, 0)),
               InvalidArgument);
  EXPECT_THROW(assemble_B(mesh, TrialLayout(4, 0, 0), TestLayout(5, 1, 1), constant_data(1.5, 0, 0)),
               InvalidArgument);
}

TEST(AssembleB, ConstantTauAgainstConstantU) {
  const Mesh mesh = uniform_mesh(3);
  const TrialLayout trial(3, 1, 1);
  const TestLayout test(3, 2, 2);
  const Eigen::MatrixXd B = assemble_B(mesh, trial, test, constant_data(1.5, 0.5, 0.5));
  for (int T = 0; T < 3; ++T) EXPECT_EQ(B(test.tau(T, 0), trial.u(T, 0)), 0.0);
}

// Constant tau on the left element has trace 1 at the shared node; the
// u_hat column holds the trace difference (right minus left).
TEST(AssembleB, UHatColumnIsTraceDifference) {
  const Mesh mesh = uniform_mesh(2);
  const TrialLayout trial(2, 0, 0);
  const TestLayout test(2, 1, 1);
  const Eigen::MatrixXd B = assemble_B(mesh, trial, test, constant_data(1.5, 0, 0));
  EXPECT_EQ(B(test.tau(0, 0), trial.u_hat(1)), -1.0);
  EXPECT_EQ(B(test.tau(1, 0), trial.u_hat(1)), 1.0);
  EXPECT_NEAR(B(test.tau(0, 1), trial.u_hat(1)), -std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(B(test.tau(1, 1), trial.u_hat(1)), -std::sqrt(3.0), 1e-15);
  // Boundary sigma_hat: right trace at 0, minus left trace at 1.
  EXPECT_EQ(B(test.v(0, 0), trial.sigma_hat(0)), 1.0);
  EXPECT_EQ(B(test.v(1, 0), trial.sigma_hat(2)), -1.0);
}

TEST(AssembleB, TraceColumnsTouchOnlyNeighbourElements) {
  gen::Rng rng(102);
  for (int trial_no = 0; trial_no < 15; ++trial_no) {
    const Mesh mesh = gen::random_mesh(rng, 2, 10);
    const Degrees d{rng.integer(0, 2), rng.integer(0, 2), rng.integer(1, 4), rng.integer(1, 4)};
    const TrialLayout trial(mesh.size(), d.p, d.q);
    const TestLayout test(mesh.size(), d.m, d.n);
    const Eigen::MatrixXd B = assemble_B(mesh, trial, test, constant_data(1.3, 0.2, 0.4));
    for (int node = 0; node <= mesh.size(); ++node) {
      for (int row = 0; row < B.rows(); ++row) {
        const int T = element_of_row(test, row);
        const bool adjacent = T == node || T == node - 1;
        if (!adjacent) {
          EXPECT_EQ(B(row, trial.sigma_hat(node)), 0.0);
          if (node > 0 && node < mesh.size()) EXPECT_EQ(B(row, trial.u_hat(node)), 0.0);
        }
        // sigma_hat couples to v rows only, u_hat to tau rows only.
        const bool is_tau = row - test.block_begin(T) <= d.m;
        if (is_tau) EXPECT_EQ(B(row, trial.sigma_hat(node)), 0.0);
        if (!is_tau && node > 0 && node < mesh.size()) EXPECT_EQ(B(row, trial.u_hat(node)), 0.0);
      }
    }
  }
}

TEST(AssembleB, SigmaColumnsAreCausal) {
  gen::Rng rng(103);
  for (int trial_no = 0; trial_no < 10; ++trial_no) {
    const Mesh mesh = gen::random_mesh(rng, 2, 9);
    const TrialLayout trial(mesh.size(), 2, 1);
    const TestLayout test(mesh.size(), 3, 3);
    const Eigen::MatrixXd B = assemble_B(mesh, trial, test, constant_data(rng.uniform(1.05, 1.95), 0.3, 0.3));
    for (int S = 0; S < mesh.size(); ++S)
      for (int T = 0; T < S; ++T)
        for (int j = 0; j <= 2; ++j)
          for (int r = 0; r < test.block_size(); ++r) EXPECT_EQ(B(test.block_begin(T) + r, trial.sigma(S, j)), 0.0);
  }
}

TEST(AssembleB, OffDiagonalSigmaBlocksAreCouplingBlocks) {
  gen::Rng rng(104);
  const Mesh mesh = gen::random_mesh(rng, 4, 7);
  const double alpha = 1.35;
  const TrialLayout trial(mesh.size(), 1, 1);
  const TestLayout test(mesh.size(), 2, 3);
  const Eigen::MatrixXd B = assemble_B(mesh, trial, test, constant_data(alpha, 0.0, 0.0));
  for (int T = 0; T < mesh.size(); ++T)
    for (int S = 0; S < T; ++S) {
      const Eigen::MatrixXd C = frac_coupling_block(mesh, S, T, 2.0 - alpha, 1, 3);
      const Eigen::MatrixXd got = B.block(test.v(T, 0), trial.sigma(S, 0), 4, 2);
      EXPECT_LE((got - C).cwiseAbs().maxCoeff(), 1e-15 * C.cwiseAbs().maxCoeff());
      EXPECT_TRUE(B.block(test.tau(T, 0), trial.sigma(S, 0), 3, 2).isZero(0.0));
    }
}

TEST(AssembleB, LocalTermsAgainstQuadratureOracle) {
  gen::Rng rng(105);
  const Mesh mesh = gen::random_mesh(rng, 3, 5);
  const double alpha = 1.6;
  ProblemData data = constant_data(alpha, 0.0, 0.0);
  data.b = [](double x) { return 1.0 + x; };
  data.c = [](double x) { return 2.0 + x * x; };
  const TrialLayout trial(mesh.size(), 2, 2);
  const TestLayout test(mesh.size(), 3, 3);
  const Eigen::MatrixXd B = assemble_B(mesh, trial, test, data);
  for (int T = 0; T < mesh.size(); ++T) {
    const double a = mesh.left(T), b = mesh.right(T);
    for (int k = 0; k <= 3; ++k)
      for (int j = 0; j <= 2; ++j) {
        const double tau_sigma = oracle::integrate_smooth(
            [&](double x) { return oracle::mapped(j, a, b, x) * oracle::mapped(k, a, b, x); }, a, b);
        const double u_dtau = oracle::integrate_smooth(
            [&](double x) { return oracle::mapped(j, a, b, x) * oracle::mapped_derivative(k, a, b, x); }, a, b);
        const double cu_v = oracle::integrate_smooth(
            [&](double x) { return data.c(x) * oracle::mapped(j, a, b, x) * oracle::mapped(k, a, b, x); }, a, b);
        const double frac_self = oracle::coupling_entry(a, b, j, a, b, k, 2.0 - alpha);
        const double bsigma_v = oracle::integrate_smooth(
            [&](double x) { return data.b(x) * oracle::mapped(j, a, b, x) * oracle::mapped(k, a, b, x); }, a, b);
        const double scale = 1.0 + std::abs(u_dtau);
        EXPECT_NEAR(B(test.tau(T, k), trial.sigma(T, j)), tau_sigma, 1e-12 * scale);
        EXPECT_NEAR(B(test.tau(T, k), trial.u(T, j)), u_dtau, 1e-12 * scale);
        EXPECT_NEAR(B(test.v(T, k), trial.u(T, j)), cu_v, 1e-12 * scale);
        EXPECT_NEAR(B(test.v(T, k), trial.sigma(T, j)), bsigma_v + frac_self, 1e-9 * scale);
      }
  }
}

TEST(Consistency, ExampleOneExactSolutionSatisfiesSystem) {
  gen::Rng rng(106);
  const Problem problem = example1();
  for (int trial_no = 0; trial_no < 6; ++trial_no) {
    const Mesh mesh = trial_no == 0 ? uniform_mesh(4) : gen::random_mesh(rng, 2, 12);
    const Degrees d{2, 3, 4, 5};
    const SystemMatrices sys = assemble_system(mesh, d, problem.data);
    const Eigen::VectorXd x = support::exact_trial_vector(mesh, sys.trial, *problem.exact);
    EXPECT_LE((sys.B * x - sys.load).norm(), 1e-9 * sys.load.norm()) << "mesh " << trial_no;
  }
}

TEST(Consistency, FlippedTraceSignBreaksConsistency) {
  const Problem problem = example1();
  const Mesh mesh = uniform_mesh(4);
  const SystemMatrices sys = assemble_system(mesh, {2, 3, 4, 5}, problem.data);
  Eigen::VectorXd x = support::exact_trial_vector(mesh, sys.trial, *problem.exact);
  for (int i = 1; i < 4; ++i) x(sys.trial.u_hat(i)) *= -1.0;
  EXPECT_GT((sys.B * x - sys.load).norm(), 1e-3 * sys.load.norm());
}

TEST(AssembleTheta, SingleElementConstants) {
  const auto blocks = assemble_theta(uniform_mesh(1), 0, 0, 1.5);
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_TRUE(blocks[0].isApprox(Eigen::Matrix2d::Identity(), 1e-15));
  gen::Rng rng(107);
  const Mesh mesh = gen::random_mesh(rng, 3, 6);
  const auto local = assemble_theta(mesh, 0, 0, 1.7);
  for (int T = 0; T < mesh.size(); ++T) {
    EXPECT_NEAR(local[T](0, 0), mesh.length(T), 1e-15);
    EXPECT_NEAR(local[T](1, 1), mesh.length(T), 1e-15);
    EXPECT_EQ(local[T](0, 1), 0.0);
  }
}

TEST(AssembleTheta, EqualElementsGiveEqualBlocks) {
  const auto blocks = assemble_theta(uniform_mesh(2), 3, 4, 1.4);
  EXPECT_LE((blocks[0] - blocks[1]).cwiseAbs().maxCoeff(), 1e-13 * blocks[0].cwiseAbs().maxCoeff());
}

TEST(AssembleTheta, BlocksAreSpdAndSymmetric) {
  gen::Rng rng(108);
  for (int trial_no = 0; trial_no < 20; ++trial_no) {
    const Mesh mesh = gen::random_refined_mesh(rng, rng.integer(1, 8));
    const int m = rng.integer(0, 5), n = rng.integer(0, 5);
    for (const Eigen::MatrixXd& block : assemble_theta(mesh, m, n, rng.uniform(1.05, 1.95))) {
      EXPECT_LE((block - block.transpose()).norm(), 1e-12 * block.norm());
      EXPECT_EQ(Eigen::LLT<Eigen::MatrixXd>(block).info(), Eigen::Success);
      EXPECT_TRUE(block.block(0, m + 1, m + 1, n + 1).isZero(0.0));
    }
  }
}

TEST(AssembleTheta, MatchesQuadratureOracle) {
  gen::Rng rng(109);
  const Mesh mesh = gen::random_mesh(rng, 2, 3);
  const int m = 2, n = 2;
  const double alpha = 1.45;
  const auto blocks = assemble_theta(mesh, m, n, alpha);
  for (int T = 0; T < mesh.size(); ++T) {
    const double a = mesh.left(T), b = mesh.right(T), h = b - a;
    Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(m + n + 2, m + n + 2);
    for (int k = 0; k <= m; ++k)
      for (int l = 0; l <= m; ++l)
        ref(k, l) = oracle::integrate_smooth(
            [&](double x) {
              return oracle::mapped(k, a, b, x) * oracle::mapped(l, a, b, x) +
                     oracle::mapped_derivative(k, a, b, x) * oracle::mapped_derivative(l, a, b, x);
            },
            a, b);
    for (int k = 0; k <= n; ++k)
      for (int l = 0; l <= k; ++l) {
        const double value = (k == l ? h : 0.0) + oracle::slobodeckij_gram_entry(a, b, k, l, alpha);
        ref(m + 1 + k, m + 1 + l) = value;
        ref(m + 1 + l, m + 1 + k) = value;
      }
    EXPECT_LE((blocks[T] - ref).cwiseAbs().maxCoeff(), 1e-8 * ref.cwiseAbs().maxCoeff()) << "element " << T;
  }
}

TEST(AssembleLoad, ConstantRhs) {
  gen::Rng rng(110);
  const Mesh mesh = gen::random_mesh(rng, 3, 6);
  const TestLayout test(mesh.size(), 1, 2);
  const Eigen::VectorXd f = assemble_load(mesh, test, constant_data(1.5, 0, 0), 10);
  for (int T = 0; T < mesh.size(); ++T) {
    EXPECT_NEAR(f(test.v(T, 0)), mesh.length(T), 1e-15);
    EXPECT_NEAR(f(test.v(T, 1)), 0.0, 1e-15);
    EXPECT_NEAR(f(test.v(T, 2)), 0.0, 1e-15);
    EXPECT_EQ(f(test.tau(T, 0)), 0.0);
    EXPECT_EQ(f(test.tau(T, 1)), 0.0);
  }
}

TEST(AssembleLoad, LogarithmOnFirstElement) {
  const Problem problem = example3(1.6);
  for (int N : {1, 3, 64, 1000}) {
    const Mesh mesh = uniform_mesh(N);
    const TestLayout test(N, 0, 0);
    const Eigen::VectorXd f = assemble_load(mesh, test, problem.data, 6);
    const double h = 1.0 / N;
    EXPECT_NEAR(f(test.v(0, 0)), h * (std::log(h) - 1.0), 1e-14 * h * (1.0 - std::log(h)));
  }
}

TEST(AssembleLoad, SingularPowerAgainstOracle) {
  const double lambda = 0.6, alpha = 1.2;
  const Problem problem = example2(lambda, alpha);
  gen::Rng rng(111);
  const Mesh mesh = gen::random_mesh(rng, 3, 6);
  const TestLayout test(mesh.size(), 0, 3);
  const Eigen::VectorXd f = assemble_load(mesh, test, problem.data, 12);
  for (int T = 0; T < 2; ++T) {
    const double a = mesh.left(T), b = mesh.right(T);
    for (int k = 0; k <= 3; ++k) {
      const double ref =
          oracle::integrate([&](double x) { return problem.data.rhs(x) * oracle::mapped(k, a, b, x); }, a, b);
      EXPECT_NEAR(f(test.v(T, k)), ref, 1e-10 * std::abs(ref)) << "element " << T << " k " << k;
    }
  }
}

TEST(ProblemDataValidation, RejectsNegativeReaction) {
  ProblemData data = constant_data(1.5, 0.0, 0.0);
  EXPECT_NO_THROW(data.validate());
  data.b = [](double x) { return x; };
  EXPECT_THROW(data.validate(), InvalidArgument);
  data.c = [](double) { return 0.5; };
  EXPECT_NO_THROW(data.validate());
}
