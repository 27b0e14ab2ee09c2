#include "commands.hpp"

#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <locale>
#include <random>
#include <sstream>

#include "dpick/errors.hpp"
#include "dpick/functions.hpp"
#include "dpick/operators.hpp"
#include "dpick/problem_io.hpp"
#include "dpick/realization.hpp"

namespace dpick::cli {

namespace {

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Feasible: return kOk;
    case Verdict::Infeasible: return kInfeasible;
    case Verdict::Undecided: return kUndecided;
  }
  return kUndecided;
}

cplx sample_annulus(std::mt19937_64& rng, double delta) {
  std::uniform_real_distribution<double> rad(delta, 1.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  double r = rad(rng);
  if (!(r > delta)) r = 0.5 * (1.0 + delta);
  return std::polar(r, ang(rng));
}

double classical_pick_det(const PickProblem& p) {
  return pick_matrix(p.z(), szego_kernel(p.lambda())).matrix().determinant().real();
}

double classical_pick_min_eig(const PickProblem& p) {
  return min_eigenvalue(pick_matrix(p.z(), szego_kernel(p.lambda())));
}

std::string csv_number(double v) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(12) << v;
  return s.str();
}

}  // namespace

FeasibilityOptions apply_flags(FeasibilityOptions opts, const Flags& f) {
  if (f.tol_feas) opts.tol_feas = *f.tol_feas;
  if (f.tol_cert) opts.tol_cert = *f.tol_cert;
  if (f.tol_r) opts.tol_r = *f.tol_r;
  if (f.max_iterations) opts.max_iterations = *f.max_iterations;
  opts.seed = f.seed;
  return opts;
}

PickProblem example_54(double delta) {
  const double c = delta + 0.25;
  return PickProblem(delta, {0.5, -0.5}, {c, -c});
}

PickProblem example_55(double delta) {
  const double l = 0.5 * (delta + std::sqrt(delta));
  const double z = 0.5 * (l + delta / l);
  return PickProblem(delta, {l, -l}, {z, -z});
}

int cmd_solve(const std::string& path, const Flags& f, std::ostream& out) {
  const auto file = load_problem(path);
  const auto w = solve_feasibility(file.problem, apply_flags(file.options, f));
  out << witness_to_json(w).dump(2) << "\n";
  return verdict_exit(w.verdict);
}

int cmd_realize(const std::string& path, const Flags& f, std::ostream& out) {
  const auto file = load_problem(path);
  const auto& p = file.problem;
  const auto w = solve_feasibility(p, apply_flags(file.options, f));
  if (w.verdict != Verdict::Feasible) {
    out << witness_to_json(w).dump(2) << "\n";
    return verdict_exit(w.verdict);
  }
  const Realization r = build_realization(p, *w.A, *w.B);
  const auto interp = verify_interpolation(r, p, 1e-8);
  std::mt19937_64 rng(f.seed);
  double model = 0.0;
  double cond = 1.0;
  for (int k = 0; k < 100; ++k) {
    const cplx l = sample_annulus(rng, p.delta());
    const cplx m = sample_annulus(rng, p.delta());
    model = std::max(model, model_residual(r, p.delta(), l, m));
    cond = std::max(cond, eval_phi(r, p.delta(), l).condition);
  }
  Json j;
  j["realization"] = realization_to_json(r);
  j["verification"]["max_interp_err"] = interp.max_error;
  j["verification"]["max_model_residual"] = model;
  j["verification"]["colligation_unitarity"] = colligation_unitarity(r);
  j["verification"]["dimension_bound"] = r.dim() <= 2 * p.size();
  if (cond > kConditionWarning) j["verification"]["max_condition"] = cond;
  j["solve"]["residual"] = w.residual;
  j["solve"]["iterations"] = w.iterations;
  out << j.dump(2) << "\n";
  return kOk;
}

int cmd_extremal(const std::string& path, bool at_rstar, const Flags& f, std::ostream& out) {
  const auto file = load_problem(path);
  const auto opts = apply_flags(file.options, f);
  PickProblem p = file.problem;
  Json j;
  if (at_rstar) {
    const auto rr = extremal_radius(p, opts);
    if (rr.unbounded) {
      j["r_star"] = "unbounded";
      j["extremal"] = false;
      out << j.dump(2) << "\n";
      return kOk;
    }
    j["scaled_by"] = rr.r_star;
    p = p.scaled(rr.r_star);
  }
  ExtremalReport rep;
  try {
    rep = is_extremal(p, opts);
  } catch (const NotSolvable& e) {
    j["solvable"] = false;
    j["extremal"] = false;
    j["message"] = e.what();
    out << j.dump(2) << "\n";
    return kInfeasible;
  }
  j["solvable"] = true;
  if (rep.unbounded) {
    j["r_star"] = "unbounded";
  } else {
    j["r_star"] = rep.r_star;
    j["r_lower"] = rep.r_lower;
    j["r_upper"] = rep.r_upper;
  }
  j["extremal"] = rep.extremal;
  if (rep.witness_kernel) {
    j["witness"] = kernel_to_json(*rep.witness_kernel);
    j["witness"]["pick_min_eig"] = rep.witness_min_eig;
    j["witness"]["rank_defect"] = rep.rank_defect;
    if (rep.null_vector) j["witness"]["null_vector"] = to_json(*rep.null_vector);
    try {
      const auto eo = extremal_operator(p, *rep.witness_kernel, p.z());
      j["phi_T_norm"] = eo.phi_norm;
      j["maximizing_ratio"] = eo.ratio;
    } catch (const NotExtremalWitness& e) {
      j["phi_T_norm_error"] = e.what();
    }
  }
  out << j.dump(2) << "\n";
  return kOk;
}

int cmd_dpnorm(const std::string& function, double delta, const Flags& f, std::ostream& out) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("--delta must lie in (0, 1)");
  const auto fn = parse_function(function, delta);
  const auto est = dp_norm_estimate(fn.f, delta, f.budget, f.seed);
  const double sup = sup_grid(fn.f, delta);
  const auto mem = dp_membership_general({est.witness, delta});
  Json j;
  j["function"] = fn.spec;
  j["delta"] = delta;
  j["budget"] = f.budget;
  j["seed"] = f.seed;
  j["lower_bound"] = est.lower_bound;
  j["sup_norm_grid"] = sup;
  j["ratio"] = sup > 0.0 ? Json(est.lower_bound / sup) : Json(nullptr);
  j["samples"] = est.samples;
  j["rejected"] = est.rejected;
  j["evaluations"] = est.evaluations;
  j["witness"] = to_json(est.witness);
  j["witness_norm"] = mem.norm;
  j["witness_inverse_norm"] = mem.inverse_norm;
  out << j.dump(2) << "\n";
  return kOk;
}

int cmd_sweep(const SweepSpec& s, const Flags& f, std::ostream& out) {
  if (s.parameter != "delta" && s.parameter != "scale") {
    throw InvalidInput("--parameter must be delta or scale");
  }
  if (s.steps < 0) throw InvalidInput("--steps must be nonnegative");
  if (s.path.empty() == s.case_id.empty()) {
    throw InvalidInput("sweep needs exactly one of a problem file or --case");
  }
  if (!s.case_id.empty() && s.case_id != "5.4" && s.case_id != "5.5") {
    throw InvalidInput("sweep --case must be 5.4 or 5.5");
  }
  std::optional<ProblemFile> file;
  if (!s.path.empty()) file = load_problem(s.path);
  const auto opts = apply_flags(file ? file->options : FeasibilityOptions{}, f);

  const bool csv = f.format == "csv";
  if (!csv && f.format != "json") throw InvalidInput("--format must be json or csv");
  Json rows = Json::array();
  if (csv) {
    out << s.parameter << ",det_pick,pick_min_eig,verdict,residual,iterations";
    if (s.with_rstar) out << ",r_star";
    out << "\n";
  }

  for (int k = 0; k < s.steps; ++k) {
    const double t = s.steps == 1 ? s.from : s.from + (s.to - s.from) * k / (s.steps - 1);
    std::optional<PickProblem> p;
    try {
      if (s.parameter == "delta") {
        if (s.case_id == "5.4") {
          p = example_54(t);
        } else if (s.case_id == "5.5") {
          p = example_55(t);
        } else {
          p = PickProblem(t, file->problem.lambda(), file->problem.z());
        }
      } else {
        const PickProblem base = file ? file->problem
                                 : s.case_id == "5.4" ? example_54(0.3)
                                                      : example_55(0.25);
        p = base.scaled(t);
      }
    } catch (const InvalidInput&) {
      p.reset();
    }

    Json row;
    row[s.parameter] = t;
    if (!p) {
      row["verdict"] = "invalid";
      if (csv) out << csv_number(t) << ",,,invalid,," << (s.with_rstar ? ",\n" : "\n");
      rows.push_back(row);
      continue;
    }
    const double det = classical_pick_det(*p);
    const double me = classical_pick_min_eig(*p);
    const auto w = solve_feasibility(*p, opts);
    row["det_pick"] = det;
    row["pick_min_eig"] = me;
    row["verdict"] = to_string(w.verdict);
    row["residual"] = std::isfinite(w.residual) ? Json(w.residual) : Json(nullptr);
    row["iterations"] = w.iterations;
    std::string rstar_text;
    if (s.with_rstar) {
      const auto rr = extremal_radius(*p, opts);
      row["r_star"] = rr.unbounded ? Json("unbounded") : Json(rr.r_star);
      rstar_text = rr.unbounded ? "unbounded" : csv_number(rr.r_star);
    }
    if (csv) {
      out << csv_number(t) << "," << csv_number(det) << "," << csv_number(me) << ","
          << to_string(w.verdict) << ","
          << (std::isfinite(w.residual) ? csv_number(w.residual) : std::string("inf")) << ","
          << w.iterations;
      if (s.with_rstar) out << "," << rstar_text;
      out << "\n";
    }
    rows.push_back(row);
  }
  if (!csv) out << rows.dump(2) << "\n";
  return kOk;
}

}  // namespace dpick::cli
