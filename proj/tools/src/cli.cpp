#include "fracdpg_cli/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "fracdpg/error.hpp"
#include "fracdpg/experiments.hpp"
#include "fracdpg/parallel.hpp"

namespace fracdpg::cli {

namespace {

constexpr int kDigits = std::numeric_limits<double>::max_digits10;

std::string number(double value) {
  std::ostringstream os;
  os << std::setprecision(kDigits) << value;
  return os.str();
}

Problem make_problem(const RunConfig& c) {
  switch (c.example) {
    case 1: return example1();
    case 2: return example2(c.lambda, c.alpha);
    default: return example3(c.alpha);
  }
}

void write_mesh(const std::filesystem::path& path, const StepSnapshot& step) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path.string());
  out << std::setprecision(kDigits) << "x_left,x_right,est_T\n";
  for (int T = 0; T < step.mesh.size(); ++T)
    out << step.mesh.left(T) << ',' << step.mesh.right(T) << ','
        << std::sqrt(step.est_squared[static_cast<std::size_t>(T)]) << '\n';
}

}  // namespace

double default_alpha(int example) {
  switch (example) {
    case 1: return 1.5;
    case 2: return 1.2;
    default: return 1.6;
  }
}

void validate(const RunConfig& c) {
  if (c.example < 1 || c.example > 3) throw UsageError("example must be 1, 2 or 3");
  if (!(c.alpha > 1.0 && c.alpha < 2.0)) throw UsageError("alpha must lie in (1,2)");
  if (c.example == 1 && c.alpha != 1.5) throw UsageError("example 1 is defined for alpha = 1.5 only");
  if (c.example == 2 && !(c.lambda > 0.5 && c.lambda < 1.5)) throw UsageError("lambda must lie in (1/2, 3/2)");
  for (int d : {c.p, c.q, c.m, c.n})
    if (d < 0 || d > kMaxDegree) throw UsageError("degrees must lie in [0, " + std::to_string(kMaxDegree) + "]");
  if (!(c.theta > 0.0 && c.theta <= 1.0)) throw UsageError("theta must lie in (0,1]");
  if (c.n0 < 1) throw UsageError("N0 must be positive");
  if (c.max_steps < 1) throw UsageError("max-steps must be positive");
  if (c.dof_budget < (c.p + c.q + 4) * c.n0) throw UsageError("dof budget is smaller than the initial mesh");
  if (c.tail == 1 || c.tail < 0) throw UsageError("tail must be 0 (last doubling of N) or at least 2");
  if (c.output.empty()) throw UsageError("output directory must not be empty");
}

std::optional<RunConfig> parse_config(const std::vector<std::string>& args, std::ostream& out) {
  RunConfig c;
  std::optional<double> alpha;
  CLI::App app{"Ultra-weak DPG convergence experiments for fractional advection-diffusion", "fracdpg"};
  app.set_config("--config", "", "File of `key = value` lines; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.add_option("--example", c.example, "Example id (1, 2 or 3)")->required();
  app.add_option("--alpha", alpha, "Diffusion order in (1,2)");
  app.add_option("--lambda", c.lambda, "Solution exponent of example 2")->capture_default_str();
  app.add_option("--p", c.p, "Degree of sigma")->capture_default_str();
  app.add_option("--q", c.q, "Degree of u")->capture_default_str();
  app.add_option("--m", c.m, "Degree of tau")->capture_default_str();
  app.add_option("--n", c.n, "Degree of v")->capture_default_str();
  app.add_option("--theta", c.theta, "Marking parameter; 1 means uniform refinement")->capture_default_str();
  app.add_option("--N0", c.n0, "Elements of the initial uniform mesh")->capture_default_str();
  app.add_option("--max-steps", c.max_steps, "Number of solves")->capture_default_str();
  app.add_option("--dof-budget", c.dof_budget, "Stop before exceeding this many trial unknowns")->capture_default_str();
  app.add_option("--tail", c.tail, "Records used for the EOC fit; 0 fits the last doubling of N")->capture_default_str();
  app.add_option("--output", c.output, "Output directory")->capture_default_str();
  app.add_flag("--serial", c.serial, "Single thread, no timing column: byte-identical output");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  c.alpha = alpha.value_or(default_alpha(c.example));
  validate(c);
  return c;
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream os;
  os << "example = " << c.example << '\n'
     << "alpha = " << number(c.alpha) << '\n'
     << "lambda = " << number(c.lambda) << '\n'
     << "p = " << c.p << '\n'
     << "q = " << c.q << '\n'
     << "m = " << c.m << '\n'
     << "n = " << c.n << '\n'
     << "theta = " << number(c.theta) << '\n'
     << "N0 = " << c.n0 << '\n'
     << "max-steps = " << c.max_steps << '\n'
     << "dof-budget = " << c.dof_budget << '\n'
     << "tail = " << c.tail << '\n'
     << "serial = " << (c.serial ? "true" : "false") << '\n'
     << "output = " << std::quoted(c.output) << '\n';
  return os.str();
}

int run(const RunConfig& config, std::ostream& log, std::ostream& err) {
  validate(config);
  apply_thread_env();
  if (config.serial) set_thread_count(1);

  const Problem problem = make_problem(config);
  ConvergenceOptions options;
  options.degrees = Degrees{config.p, config.q, config.m, config.n};
  options.theta = config.theta;
  options.n_steps = config.max_steps;
  options.initial_elements = config.n0;
  options.dof_budget = config.dof_budget;
  if (const std::string warning = test_degree_warning(options.degrees); !warning.empty())
    err << "warning: " << warning << '\n';

  const std::filesystem::path dir(config.output);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory " + dir.string() + ": " + ec.message());

  const ConvergenceHistory history = run_convergence(problem, options, [&](const ConvergenceRecord& r) {
    log << "step " << r.step << ": N = " << r.n_elements << ", dofs = " << r.dofs << ", est = " << number(r.est) << '\n';
  });
  for (std::size_t k = 0; k < history.steps.size(); ++k)
    write_mesh(dir / ("mesh_" + std::to_string(k) + ".csv"), history.steps[k]);

  {
    std::ofstream csv(dir / "convergence.csv");
    if (!csv) throw UsageError("cannot write convergence.csv");
    csv << std::setprecision(kDigits) << "step,N,dofs,est,err_u,err_sigma,err_uhat,err_sigmahat,seconds\n";
    for (const auto& r : history.records) {
      csv << r.step << ',' << r.n_elements << ',' << r.dofs << ',' << r.est << ',';
      if (r.errors)
        csv << r.errors->u << ',' << r.errors->sigma << ',' << r.errors->u_hat << ',' << r.errors->sigma_hat << ',';
      else
        csv << ",,,,";
      if (!config.serial) csv << r.seconds;
      csv << '\n';
    }
  }

  {
    std::ofstream cfg(dir / "config.txt");
    if (!cfg) throw UsageError("cannot write config.txt");
    cfg << emit_config(config);
  }
  std::ofstream summary(dir / "summary.txt");
  if (!summary) throw UsageError("cannot write summary.txt");
  const auto eoc = [&](const char* name, const std::function<double(const ConvergenceRecord&)>& quantity) {
    summary << "eoc_" << name << " = ";
    try {
      summary << std::fixed << std::setprecision(4) << fit_eoc(history.records, quantity,
                                                                   config.tail == 0 ? last_doubling_count(history.records) : config.tail) << '\n';
    } catch (const InvalidArgument&) {
      summary << "n/a\n";
    }
    summary << std::defaultfloat;
  };
  eoc("est", [](const ConvergenceRecord& r) { return r.est; });
  if (problem.exact) {
    eoc("err_u", [](const ConvergenceRecord& r) { return r.errors->u; });
    eoc("err_sigma", [](const ConvergenceRecord& r) { return r.errors->sigma; });
    eoc("err_uhat", [](const ConvergenceRecord& r) { return r.errors->u_hat; });
    eoc("err_sigmahat", [](const ConvergenceRecord& r) { return r.errors->sigma_hat; });
  }
  log << "wrote " << history.records.size() << " steps to " << dir.string() << '\n';
  return 0;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const std::optional<RunConfig> config = parse_config(args, out);
    if (!config) return 0;
    return run(*config, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace fracdpg::cli
