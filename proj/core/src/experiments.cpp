#include "fracdpg/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "fracdpg/error.hpp"

namespace fracdpg {

namespace {

// 1/Gamma(z), zero at the poles z = 0, -1, -2, ...
double rgamma(double z) {
  if (z <= 0.0 && z == std::floor(z)) return 0.0;
  return 1.0 / std::tgamma(z);
}

std::vector<PowerTerm> nonzero(std::vector<PowerTerm> terms) {
  std::erase_if(terms, [](const PowerTerm& t) { return t.coefficient == 0.0; });
  return terms;
}

}  // namespace

Problem example1() {
  constexpr double alpha = 1.5;
  Problem problem;
  problem.name = "example1";
  problem.data.order = FractionalOrder::from_alpha(alpha);
  problem.data.b = [](double) { return 0.5; };
  problem.data.c = [](double) { return 0.5; };
  problem.data.rhs = ScalarFunction([](double x) { return x - x * x - 0.5 * x * x * x; },
                                    {{-2.0 * rgamma(3.0 - alpha), 2.0 - alpha}, {6.0 * rgamma(4.0 - alpha), 3.0 - alpha}});

  ExactBundle exact;
  exact.u = ScalarFunction([](double x) { return x * x - x * x * x; });
  exact.sigma = ScalarFunction([](double x) { return 2.0 * x - 3.0 * x * x; });
  exact.frac_trace = [](double x) {
    return 2.0 * rgamma(4.0 - alpha) * std::pow(x, 3.0 - alpha) - 6.0 * rgamma(5.0 - alpha) * std::pow(x, 4.0 - alpha);
  };
  exact.u_regularity = std::numeric_limits<double>::infinity();
  exact.sigma_regularity = std::numeric_limits<double>::infinity();
  problem.exact = std::move(exact);
  return problem;
}

Problem example2(double lambda, double alpha) {
  if (!(lambda > 0.5 && lambda < 1.5)) throw InvalidArgument("lambda must lie in (1/2, 3/2)");
  Problem problem;
  problem.name = "example2";
  problem.data.order = FractionalOrder::from_alpha(alpha);
  const double g = std::tgamma(lambda + 1.0);
  problem.data.rhs = ScalarFunction([](double) { return 0.0; },
                                    nonzero({{-g * rgamma(lambda + 1.0 - alpha), lambda - alpha},
                                             {rgamma(2.0 - alpha), 1.0 - alpha}}));

  ExactBundle exact;
  exact.u = ScalarFunction([](double x) { return -x; }, {{1.0, lambda}});
  exact.sigma = ScalarFunction([](double) { return -1.0; }, {{lambda, lambda - 1.0}});
  exact.frac_trace = [=](double x) {
    return g * rgamma(lambda + 2.0 - alpha) * std::pow(x, lambda + 1.0 - alpha) - rgamma(3.0 - alpha) * std::pow(x, 2.0 - alpha);
  };
  exact.u_regularity = lambda + 0.5;
  exact.sigma_regularity = lambda - 0.5;
  problem.exact = std::move(exact);
  return problem;
}

Problem example3(double alpha) {
  Problem problem;
  problem.name = "example3";
  problem.data.order = FractionalOrder::from_alpha(alpha);
  problem.data.rhs = ScalarFunction([](double) { return 0.0; }, {}, 1.0);
  return problem;
}

PiecewisePolynomial extract_sigma(const Eigen::VectorXd& x, const TrialLayout& layout, const Mesh& mesh) {
  if (x.size() != layout.size() || layout.elements() != mesh.size()) throw InvalidArgument("trial vector does not match layout");
  Eigen::MatrixXd coeffs(mesh.size(), layout.p() + 1);
  for (int T = 0; T < mesh.size(); ++T) coeffs.row(T) = x.segment(layout.sigma(T, 0), layout.p() + 1).transpose();
  return PiecewisePolynomial(mesh, layout.p(), std::move(coeffs));
}

PiecewisePolynomial extract_u(const Eigen::VectorXd& x, const TrialLayout& layout, const Mesh& mesh) {
  if (x.size() != layout.size() || layout.elements() != mesh.size()) throw InvalidArgument("trial vector does not match layout");
  Eigen::MatrixXd coeffs(mesh.size(), layout.q() + 1);
  for (int T = 0; T < mesh.size(); ++T) coeffs.row(T) = x.segment(layout.u(T, 0), layout.q() + 1).transpose();
  return PiecewisePolynomial(mesh, layout.q(), std::move(coeffs));
}

ErrorNorms error_norms(const Eigen::VectorXd& x, const TrialLayout& layout, const Mesh& mesh, const ExactBundle& exact,
                       double alpha) {
  const PiecewisePolynomial sigma_h = extract_sigma(x, layout, mesh);
  const PiecewisePolynomial u_h = extract_u(x, layout, mesh);
  const int N = mesh.size();
  IntegrationOptions options{2 * std::max(layout.p(), layout.q()) + 12};

  double eu = 0.0, es = 0.0;
  for (int T = 0; T < N; ++T) {
    const double a = mesh.left(T), b = mesh.right(T);
    eu += integrate_squared_difference(exact.u, [&](double t) { return u_h.evaluate_on(T, t); }, a, b, options);
    es += std::pow(mesh.length(T), alpha - 2.0) *
          integrate_squared_difference(exact.sigma, [&](double t) { return sigma_h.evaluate_on(T, t); }, a, b, options);
  }
  double euh = 0.0, esh = 0.0;
  for (int i = 1; i < N; ++i) euh += std::pow(exact.u(mesh.node(i)) - x(layout.u_hat(i)), 2);
  for (int i = 0; i <= N; ++i) esh += std::pow(exact.frac_trace(mesh.node(i)) - x(layout.sigma_hat(i)), 2);

  ErrorNorms e;
  e.u = std::sqrt(eu);
  e.sigma = std::pow(static_cast<double>(N), alpha / 2.0 - 1.0) * std::sqrt(es);
  e.u_hat = std::sqrt(euh / N);
  e.sigma_hat = std::sqrt(esh / N);
  return e;
}

ConvergenceHistory run_convergence(const Problem& problem, const ConvergenceOptions& options,
                                   const std::function<void(const ConvergenceRecord&)>& on_step) {
  options.degrees.validate();
  if (!(options.theta > 0.0 && options.theta <= 1.0)) throw InvalidArgument("theta must lie in (0,1]");
  if (options.n_steps < 1) throw InvalidArgument("at least one step is required");
  problem.data.validate();
  const int per_element = options.degrees.p + options.degrees.q + 4;

  ConvergenceHistory history;
  Mesh mesh = uniform_mesh(options.initial_elements);
  if (mesh.size() * per_element > options.dof_budget) throw InvalidArgument("initial mesh exceeds the dof budget");

  for (int step = 0; step < options.n_steps; ++step) {
    const auto start = std::chrono::steady_clock::now();
    const SystemMatrices system = assemble_system(mesh, options.degrees, problem.data);
    DpgSolution sol;
    try {
      sol = solve(system);
    } catch (const InfSupFailure& e) {
      std::string what = e.what();
      const std::string prefix = "discrete inf-sup failure: ";
      if (what.starts_with(prefix)) what.erase(0, prefix.size());
      throw InfSupFailure("step " + std::to_string(step) + ": " + what);
    } catch (const NumericalFailure& e) {
      throw NumericalFailure("step " + std::to_string(step) + ": " + e.what());
    }

    ConvergenceRecord record;
    record.step = step;
    record.n_elements = mesh.size();
    record.dofs = system.trial.size();
    record.est = sol.est;
    if (problem.exact)
      record.errors = error_norms(sol.x, system.trial, mesh, *problem.exact, problem.data.order.alpha());
    record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    history.records.push_back(record);

    MarkedSet marked = options.theta == 1.0 ? mark_all(mesh) : doerfler_mark(sol.est_squared, options.theta);
    if (options.theta == 1.0 && sol.est == 0.0) marked = MarkedSet{{}, true};
    history.steps.push_back(
        StepSnapshot{mesh, sol.est_squared, marked, sol.optimality, sol.residual.dot(sol.representer)});
    if (on_step) on_step(record);

    if (marked.converged || step + 1 == options.n_steps) break;
    Mesh next = refine(mesh, marked);
    if (next.size() * per_element > options.dof_budget) break;
    mesh = std::move(next);
  }
  return history;
}

double fit_eoc(const std::vector<ConvergenceRecord>& records,
               const std::function<double(const ConvergenceRecord&)>& quantity, int tail_count) {
  if (tail_count < 2) throw InvalidArgument("tail count must be at least 2");
  if (records.size() < 2) throw InvalidArgument("at least two records are required");
  const std::size_t count = std::min(records.size(), static_cast<std::size_t>(tail_count));
  const std::size_t first = records.size() - count;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = first; i < records.size(); ++i) {
    const double q = quantity(records[i]);
    if (!(q > 0.0) || !std::isfinite(q)) throw InvalidArgument("quantities must be positive and finite");
    if (records[i].n_elements < 1) throw InvalidArgument("element counts must be positive");
    const double lx = std::log(static_cast<double>(records[i].n_elements));
    const double ly = std::log(q);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(count);
  const double denom = n * sxx - sx * sx;
  if (!(denom > 0.0)) throw InvalidArgument("element counts must vary over the fitted records");
  return 0.0 - (n * sxy - sx * sy) / denom;
}

int last_doubling_count(const std::vector<ConvergenceRecord>& records) {
  if (records.size() < 2) throw InvalidArgument("at least two records are required");
  const int last = records.back().n_elements;
  int count = 0;
  for (auto it = records.rbegin(); it != records.rend() && 2 * it->n_elements >= last; ++it) ++count;
  return std::max(count, 2);
}

double predicted_rate(const Degrees& degrees, double alpha, double u_regularity, double sigma_regularity) {
  return std::min({degrees.p + 1.0, degrees.q + 1.0, u_regularity, sigma_regularity + 1.0 - alpha / 2.0});
}

std::string test_degree_warning(const Degrees& degrees) {
  std::string msg;
  if (degrees.m < degrees.p + 1)
    msg += "tau degree m=" + std::to_string(degrees.m) + " is below p+1=" + std::to_string(degrees.p + 1) + "; ";
  if (degrees.n < degrees.q + 1)
    msg += "v degree n=" + std::to_string(degrees.n) + " is below q+1=" + std::to_string(degrees.q + 1) + "; ";
  // u is tested only through D tau, a polynomial of degree m-1.
  if (degrees.m < degrees.q + 1)
    msg += "tau degree m=" + std::to_string(degrees.m) + " is below q+1=" + std::to_string(degrees.q + 1) + "; ";
  if (!msg.empty()) msg += "the discrete problem may not be well posed";
  return msg;
}

}  // namespace fracdpg
