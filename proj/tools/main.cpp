// dpick: interpolation on the annulus from the command line.
//
// Exit codes: 0 success or feasible, 1 example-suite failure, 2 invalid
// input, 3 infeasible, 4 undecided.

#include <CLI11.hpp>
#include <iostream>

#include "commands.hpp"
#include "dpick/errors.hpp"

namespace {

void add_tolerances(CLI::App* cmd, dpick::cli::Flags& f, double& tol_feas, double& tol_cert,
                    double& tol_r, int& max_iter) {
  cmd->add_option("--tol-feas", tol_feas, "identity residual accepted as feasible (default 1e-9)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol-cert", tol_cert, "required certificate violation (default 1e-8)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol-r", tol_r, "bisection width for r* (default 1e-4)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", max_iter, "alternating projection cap (default 50000)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "seed for every randomized step (default 0)");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace dpick::cli;
  CLI::App app{"Pick interpolation on the annulus with Douglas-Paulsen kernels"};
  app.require_subcommand(1);

  Flags flags;
  double tol_feas = 0.0;
  double tol_cert = 0.0;
  double tol_r = 0.0;
  int max_iter = 0;
  std::string path;

  auto* solve = app.add_subcommand("solve", "decide solvability; prints a JSON verdict");
  solve->add_option("problem", path, "problem file (JSON)")->required();
  add_tolerances(solve, flags, tol_feas, tol_cert, tol_r, max_iter);

  auto* realize = app.add_subcommand("realize", "solve, then print a unitary realization");
  realize->add_option("problem", path, "problem file (JSON)")->required();
  add_tolerances(realize, flags, tol_feas, tol_cert, tol_r, max_iter);

  bool at_rstar = false;
  auto* extremal = app.add_subcommand("extremal", "extremal radius and extremality witness");
  extremal->add_option("problem", path, "problem file (JSON)")->required();
  extremal->add_flag("--at-rstar", at_rstar, "first rescale the targets to the extremal radius");
  add_tolerances(extremal, flags, tol_feas, tol_cert, tol_r, max_iter);

  std::string function;
  double delta = 0.25;
  auto* dpnorm = app.add_subcommand("dpnorm", "lower estimate of the dp-norm of a function");
  dpnorm->add_option("function", function,
                     "id | moebius:a | sym | half-sym | gn:n | poly:c0,c1,...")
      ->required();
  dpnorm->add_option("--delta", delta, "inner radius (default 0.25)");
  dpnorm->add_option("--budget", flags.budget, "random samples before refinement (default 2000)")
      ->check(CLI::PositiveNumber);
  dpnorm->add_option("--seed", flags.seed, "seed (default 0)");

  std::string case_id = "all";
  double case_delta = 0.0;
  auto* examples = app.add_subcommand("examples", "run the worked-example regression table");
  examples->add_option("--case", case_id, "all | 2.5 | 5.4 | 5.5 | 5.6 (default all)");
  auto* case_delta_opt =
      examples->add_option("--delta", case_delta, "single delta for the 5.4 or 5.5 case");
  examples->add_option("--budget", flags.budget, "dp-norm samples (default 2000)")
      ->check(CLI::PositiveNumber);
  add_tolerances(examples, flags, tol_feas, tol_cert, tol_r, max_iter);

  SweepSpec sweep_spec;
  std::string range;
  auto* sweep = app.add_subcommand(
      "sweep",
      "tabulate a parameter; CSV columns: <parameter>, det_pick (classical Pick determinant), "
      "pick_min_eig, verdict, residual, iterations[, r_star]");
  sweep->add_option("problem", sweep_spec.path, "problem file (JSON); omit with --case");
  sweep->add_option("--case", sweep_spec.case_id, "5.4 | 5.5: regenerate example data per delta");
  sweep->add_option("--parameter", sweep_spec.parameter, "delta | scale (default delta)");
  sweep->add_option("--range", range, "FROM:TO")->required();
  sweep->add_option("--steps", sweep_spec.steps, "number of grid points; 0 gives the header only")
      ->required();
  sweep->add_flag("--rstar", sweep_spec.with_rstar, "also compute the extremal radius");
  sweep->add_option("--format", flags.format, "csv | json (default csv)");
  add_tolerances(sweep, flags, tol_feas, tol_cert, tol_r, max_iter);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidInput;
  }

  // Only flags given on the command line override file values.
  for (auto* cmd : {solve, realize, extremal, examples, sweep}) {
    if (!cmd->parsed()) continue;
    if (cmd->count("--tol-feas") > 0) flags.tol_feas = tol_feas;
    if (cmd->count("--tol-cert") > 0) flags.tol_cert = tol_cert;
    if (cmd->count("--tol-r") > 0) flags.tol_r = tol_r;
    if (cmd->count("--max-iter") > 0) flags.max_iterations = max_iter;
  }

  try {
    if (solve->parsed()) return cmd_solve(path, flags, std::cout);
    if (realize->parsed()) return cmd_realize(path, flags, std::cout);
    if (extremal->parsed()) return cmd_extremal(path, at_rstar, flags, std::cout);
    if (dpnorm->parsed()) return cmd_dpnorm(function, delta, flags, std::cout);
    if (examples->parsed()) {
      std::optional<double> d;
      if (case_delta_opt->count() > 0) d = case_delta;
      return cmd_examples(case_id, d, flags, std::cout);
    }
    if (sweep->parsed()) {
      if (sweep->count("--format") == 0) flags.format = "csv";
      const auto colon = range.find(':');
      if (colon == std::string::npos) throw dpick::InvalidInput("--range must be FROM:TO");
      try {
        sweep_spec.from = std::stod(range.substr(0, colon));
        sweep_spec.to = std::stod(range.substr(colon + 1));
      } catch (const std::exception&) {
        throw dpick::InvalidInput("--range must be FROM:TO with numbers");
      }
      return cmd_sweep(sweep_spec, flags, std::cout);
    }
  } catch (const dpick::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const dpick::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidInput;
  }
  return kInvalidInput;
}
