#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracdpg/assembly.hpp"
#include "fracdpg/mesh.hpp"
#include "fracdpg/scalar_function.hpp"
#include "fracdpg/solver.hpp"

namespace fracdpg {

/// Known exact solution: u, sigma = Du, and the flux trace D^{alpha-2} sigma.
struct ExactBundle {
  ScalarFunction u;
  ScalarFunction sigma;
  std::function<double(double)> frac_trace;
  /// Sobolev regularity exponents of u and sigma (reporting only).
  double u_regularity = 0.0;
  double sigma_regularity = 0.0;
};

struct Problem {
  std::string name;
  ProblemData data;
  std::optional<ExactBundle> exact;
};

/// alpha = 3/2, b = c = 1/2, u(x) = x^2 - x^3.
Problem example1();
/// u(x) = x^lambda - x, b = c = 0; lambda in (1/2, 3/2).
Problem example2(double lambda, double alpha);
/// f(x) = log(x), b = c = 0; exact solution unknown.
Problem example3(double alpha);

struct ErrorNorms {
  double u = 0.0;          // ||u - u_h||
  double sigma = 0.0;      // ||(N h)^{alpha/2-1} (sigma - sigma_h)||, plain L2 on uniform meshes
  double u_hat = 0.0;      // N^{-1/2} |u_hat - u_hat_h|, interior nodes
  double sigma_hat = 0.0;  // N^{-1/2} |sigma_hat - sigma_hat_h|, all nodes
};

/// Error quantities of a discrete solution against the exact bundle.
ErrorNorms error_norms(const Eigen::VectorXd& x, const TrialLayout& layout, const Mesh& mesh,
                       const ExactBundle& exact, double alpha);

/// sigma_h and u_h as piecewise polynomials.
PiecewisePolynomial extract_sigma(const Eigen::VectorXd& x, const TrialLayout& layout, const Mesh& mesh);
PiecewisePolynomial extract_u(const Eigen::VectorXd& x, const TrialLayout& layout, const Mesh& mesh);

/// One row of a convergence table.
struct ConvergenceRecord {
  int step = 0;
  int n_elements = 0;
  int dofs = 0;
  double est = 0.0;
  std::optional<ErrorNorms> errors;
  double seconds = 0.0;
};

/// Mesh and indicators of one loop iteration (for per-step dumps and checks).
struct StepSnapshot {
  Mesh mesh;
  std::vector<double> est_squared;
  MarkedSet marked;
  double optimality = 0.0;
  /// r^T Theta^{-1} r as one global dot product (est_squared sums it blockwise).
  double residual_norm_squared = 0.0;
};

struct ConvergenceOptions {
  Degrees degrees;
  double theta = 1.0;  // 1 = uniform refinement
  int n_steps = 8;
  int initial_elements = 2;
  int dof_budget = 30000;
};

struct ConvergenceHistory {
  std::vector<ConvergenceRecord> records;
  std::vector<StepSnapshot> steps;
};

/// Solve-estimate-mark-refine loop starting from uniform_mesh(initial_elements).
/// Stops after n_steps solves, when the next mesh exceeds the dof budget, or
/// when all indicators vanish. Solver failures are rethrown with the step index.
ConvergenceHistory run_convergence(const Problem& problem, const ConvergenceOptions& options,
                                   const std::function<void(const ConvergenceRecord&)>& on_step = {});

/// Least-squares slope of -log(quantity) against log(N) over the last
/// tail_count records: rate 1 means O(N^{-1}).
double fit_eoc(const std::vector<ConvergenceRecord>& records,
               const std::function<double(const ConvergenceRecord&)>& quantity, int tail_count = 4);

/// Number of trailing records with at least half the final element count
/// (never fewer than 2). On adaptive histories whose error oscillates with
/// period one doubling of N this window averages over a full period.
int last_doubling_count(const std::vector<ConvergenceRecord>& records);

/// Predicted est rate min(p+1, q+1, r, s + 1 - alpha/2) for the given
/// regularities of u (r) and sigma (s).
double predicted_rate(const Degrees& degrees, double alpha, double u_regularity, double sigma_regularity);
/// Why a (p,q,m,n) combination is suspicious (empty if m >= max(p,q)+1 and
/// n >= q+1).
std::string test_degree_warning(const Degrees& degrees);

}  // namespace fracdpg
