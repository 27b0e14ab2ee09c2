// Acceptance run: one PASS/FAIL line per criterion. Tolerances are pinned
// here; reference values come from the oracles in support.hpp or from
// closed forms written out below.

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

#include "dpick/feasibility.hpp"
#include "dpick/functions.hpp"
#include "dpick/operators.hpp"
#include "dpick/realization.hpp"
#include "support.hpp"

using namespace dpick;

namespace {

constexpr double kDetTol = 1e-10;
constexpr double kResidualTol = 1e-8;
constexpr double kInterpTol = 1e-8;
constexpr double kModelTol = 1e-8;
constexpr double kUnitarityTol = 1e-10;
constexpr double kRadiusTol = 1e-3;
constexpr double kPhiNormTol = 1e-5;
constexpr double kGapLower = 1.30;
constexpr double kDpUpper = 2.0 + 1e-6;
constexpr double kCert2Bound = -0.5;
constexpr double kSupLowerSlack = 1e-3;
constexpr double kSupUpperSlack = 1e-6;
constexpr double kOracleSeconds = 60.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int prec = 6) {
  std::ostringstream s;
  s << std::setprecision(prec) << v;
  return s.str();
}

PickProblem ex54(double d) { return PickProblem(d, {0.5, -0.5}, {d + 0.25, -(d + 0.25)}); }

PickProblem ex55(double d) {
  const double l = 0.5 * (d + std::sqrt(d));
  const double z = 0.5 * (l + d / l);
  return PickProblem(d, {l, -l}, {z, -z});
}

double classical_det(const PickProblem& p) {
  const auto n = p.size();
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cplx li = p.lambda()[i], lj = p.lambda()[j], zi = p.z()[i], zj = p.z()[j];
      m(i, j) = (1.0 - std::conj(zi) * zj) / (1.0 - std::conj(li) * lj);
    }
  return m.determinant().real();
}

double classical_min_eig(const PickProblem& p) {
  const auto n = p.size();
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const cplx li = p.lambda()[i], lj = p.lambda()[j], zi = p.z()[i], zj = p.z()[j];
      m(i, j) = (1.0 - std::conj(zi) * zj) / (1.0 - std::conj(li) * lj);
    }
  return oracle::min_eig(m);
}

Outcome c1_det_closed_form() {
  std::string detail;
  bool ok = true;
  for (double d : {0.1, 0.25, 0.3, 0.45}) {
    const double closed =
        (256.0 / 225.0) * (d * d + d / 2.0 - 3.0 / 16.0) * (d * d + d / 2.0 - 63.0 / 16.0);
    const double det = pick_matrix(ex54(d).z(), szego_kernel(ex54(d).lambda())).matrix().determinant().real();
    const int sign = std::abs(det) <= kDetTol ? 0 : (det > 0 ? 1 : -1);
    const int expect = d < 0.25 ? 1 : (d == 0.25 ? 0 : -1);
    ok = ok && std::abs(det - closed) <= kDetTol && std::abs(det - classical_det(ex54(d))) <= kDetTol &&
         sign == expect;
    detail += "d=" + fmt(d) + ":" + fmt(det, 10) + " ";
  }
  return {ok, detail};
}

Outcome c2_separation() {
  std::string detail;
  bool ok = true;
  auto check = [&](const PickProblem& p, const std::string& tag) {
    const auto w = solve_feasibility(p);
    const double me = classical_min_eig(p);
    ok = ok && w.verdict == Verdict::Feasible && w.residual <= kResidualTol && me < 0.0;
    detail += tag + " res " + fmt(w.residual, 2) + " eig " + fmt(me, 3) + "; ";
  };
  check(ex54(0.3), "5.4@0.3");
  for (double d : {0.1, 0.25, 0.5, 0.9}) check(ex55(d), "5.5@" + fmt(d));
  return {ok, detail};
}

Outcome c3_oracle_agreement() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(42);
  const double deltas[3] = {0.1, 0.25, 0.4};
  int total = 0, disagree = 0, undecided = 0, feasible = 0;
  for (int k = 0; k < 210; ++k) {
    const double d = deltas[k % 3];
    const Nodes l = oracle::nodes(rng, 2, d);
    const Nodes z{oracle::in_disc(rng, 1.0), oracle::in_disc(rng, 1.0)};
    const bool expect = oracle::n2_solvable(l[0], l[1], z[0], z[1], d);
    const auto w = solve_feasibility(PickProblem(d, l, z));
    ++total;
    if (w.verdict == Verdict::Undecided) ++undecided;
    if (w.verdict == Verdict::Feasible) ++feasible;
    if (w.verdict == Verdict::Undecided || (w.verdict == Verdict::Feasible) != expect) ++disagree;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {disagree == 0 && total >= 200 && secs < kOracleSeconds,
          fmt(total) + " instances (" + fmt(feasible) + " feasible), " + fmt(disagree) +
              " disagreements, " + fmt(undecided) + " undecided, " + fmt(secs, 3) + " s"};
}

Outcome c4_realization() {
  double interp = 0.0, model = 0.0, unit = 0.0;
  bool dims = true;
  int count = 0;
  auto run = [&](const PickProblem& p) {
    const auto w = solve_feasibility(p);
    if (w.verdict != Verdict::Feasible) return false;
    const auto r = build_realization(p, *w.A, *w.B);
    interp = std::max(interp, verify_interpolation(r, p, kInterpTol).max_error);
    std::mt19937_64 rng(1000 + count);
    for (int k = 0; k < 100; ++k) {
      const cplx a = oracle::node(rng, p.delta());
      const cplx b = oracle::node(rng, p.delta());
      model = std::max(model, model_residual(r, p.delta(), a, b));
    }
    unit = std::max(unit, colligation_unitarity(r));
    dims = dims && r.dim() <= 2 * p.size();
    ++count;
    return true;
  };
  bool examples = run(ex54(0.3)) && run(ex55(0.25));
  std::mt19937_64 rng(3);
  int seeded = 0;
  for (int tries = 0; seeded < 25 && tries < 500; ++tries) {
    const int n = 1 + seeded % 4;
    const double d = 0.1 + 0.4 * std::uniform_real_distribution<double>(0, 1)(rng);
    Nodes z;
    for (int i = 0; i < n; ++i) z.push_back(oracle::in_disc(rng, 0.5));
    const PickProblem p(d, oracle::nodes(rng, n, d), z);
    if (run(p)) ++seeded;
  }
  const bool ok = examples && seeded == 25 && interp <= kInterpTol && model <= kModelTol &&
                  unit <= kUnitarityTol && dims;
  return {ok, fmt(count) + " realizations, interp " + fmt(interp, 2) + ", model " + fmt(model, 2) +
                  ", unitarity " + fmt(unit, 2) + (dims ? ", dim <= 2n" : ", DIMENSION BOUND BROKEN")};
}

Outcome c5_extremal() {
  const PickProblem p = ex54(0.3);
  const double expect = oracle::n2_symmetric_rstar(0.55, oracle::w_max(0.5, -0.5, 0.3));
  const auto rr = extremal_radius(p);
  const bool r_ok = !rr.unbounded && std::abs(rr.r_star - expect) <= kRadiusTol;
  const PickProblem q = p.scaled(rr.r_star);
  const auto rep = is_extremal(q);
  bool ok = r_ok && rep.extremal && rep.witness_kernel.has_value();
  std::string detail = "r* " + fmt(rr.r_star, 8) + " (oracle " + fmt(expect, 8) + ")";
  if (ok) {
    const int rank = numerical_rank(pick_matrix(q.z(), rep.witness_kernel->g()), 1e-6);
    const auto eo = extremal_operator(q, *rep.witness_kernel, q.z());
    ok = rank < 2 && std::abs(eo.phi_norm - 1.0) <= kPhiNormTol;
    detail += ", rank " + fmt(rank) + ", ||phi(T)|| " + fmt(eo.phi_norm, 10);
  }
  return {ok, detail};
}

Outcome c6_gap() {
  const double d = 0.25;
  const auto f = parse_function("sym", d);
  const auto e = dp_norm_estimate(f.f, d);
  const double sup = sup_grid(f.f, d);
  const bool member = dp_membership_general({e.witness, d}, 1e-8).member;
  return {e.lower_bound >= kGapLower && e.lower_bound <= kDpUpper && member && sup < kGapLower,
          "achieved " + fmt(e.lower_bound, 15) + ", sup grid " + fmt(sup, 10) + ", witness " +
              fmt(e.witness.rows()) + "x" + fmt(e.witness.cols())};
}

Outcome c7_second_certificate() {
  const double d = 0.25;
  const Nodes l{0.375, -0.375};
  const auto rep = dp_kernel_membership(szego_kernel(l), l, d);
  // [[a, b], [b, a]] has min eigenvalue a - b
  const double a = (1.0 - d * d / 0.140625) / (1.0 - 0.140625);
  const double b = (1.0 + d * d / 0.140625) / (1.0 + 0.140625);
  const bool ok = !rep.member && rep.failing_condition == FailingCondition::second &&
                  rep.min_eig_cert2 <= kCert2Bound && std::abs(rep.min_eig_cert2 - (a - b)) <= 1e-12;
  return {ok, "failing " + to_string(rep.failing_condition) + ", min eig " + fmt(rep.min_eig_cert2, 6) +
                  " (hand " + fmt(a - b, 6) + ")"};
}

Outcome c8_properties() {
  std::string detail;
  bool ok = true;

  // Solver soundness and exclusivity.
  {
    std::mt19937_64 rng(800);
    int feas = 0, infeas = 0, und = 0, bad = 0;
    for (int k = 0; k < 100; ++k) {
      const int n = 2 + k % 3;
      const double d = 0.15 + 0.3 * std::uniform_real_distribution<double>(0, 1)(rng);
      Nodes z;
      for (int i = 0; i < n; ++i) z.push_back(oracle::in_disc(rng, 0.9));
      const PickProblem p(d, oracle::nodes(rng, n, d), z);
      const auto w = solve_feasibility(p);
      if (w.verdict == Verdict::Feasible) {
        ++feas;
        const bool sound = identity_residual(p, *w.A, *w.B) <= FeasibilityOptions{}.tol_feas &&
                           oracle::min_eig(w.A->matrix()) >= -kPsdTol &&
                           oracle::min_eig(w.B->matrix()) >= -kPsdTol;
        const auto g = certificate_search(p);
        const bool excl = !g || oracle::min_eig(pick_matrix(p.z(), g->g()).matrix()) > -1e-6;
        if (!sound || !excl) ++bad;
      } else if (w.verdict == Verdict::Infeasible) {
        ++infeas;
        const bool valid = w.certificate &&
                           dp_kernel_membership(w.certificate->g(), p.lambda(), d).member &&
                           oracle::min_eig(pick_matrix(p.z(), w.certificate->g()).matrix()) < -1e-8 &&
                           !w.A.has_value();
        if (!valid) ++bad;
      } else {
        ++und;
      }
    }
    ok = ok && bad == 0;
    detail += "solver " + fmt(feas) + "F/" + fmt(infeas) + "I/" + fmt(und) + "U bad " + fmt(bad);
  }

  // Normalization idempotence.
  {
    std::mt19937_64 rng(801);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
      const int n = 1 + k % 6;
      const ComplexMatrix x = oracle::gaussian(rng, n, n);
      const auto once = normalize_kernel(HermitianMatrix(x * x.adjoint() + 1e-3 * ComplexMatrix::Identity(n, n)));
      worst = std::max(worst, (normalize_kernel(once.h).h.matrix() - once.h.matrix()).norm());
    }
    ok = ok && worst <= 1e-13;
    detail += "; normalize " + fmt(worst, 2);
  }

  // Kernel <-> operator.
  {
    std::mt19937_64 rng(802);
    int done = 0, bad = 0;
    for (int tries = 0; done < 100 && tries < 5000; ++tries) {
      const int n = 2 + tries % 4;
      const double d = 0.3;
      const Nodes l = oracle::nodes(rng, n, d, 0.02);
      const HermitianMatrix g(0.1 * oracle::hermitian(rng, n) + ComplexMatrix::Identity(n, n));
      if (!dp_kernel_membership(g, l, d).member) continue;
      ++done;
      const auto t = operator_from_kernel(DPSzegoKernel::verify(g, l, d));
      const auto back = kernel_from_operator(t);
      const auto m = dp_membership_general({t.matrix(), d}, 1e-8);
      if (back.g().matrix() != g.matrix() || t.norm() > 1.0 + 1e-8 || t.inverse_norm() > 1.0 + 1e-8 ||
          std::abs(m.norm - t.norm()) > 1e-8) {
        ++bad;
      }
    }
    ok = ok && done == 100 && bad == 0;
    detail += "; roundtrip " + fmt(done) + " bad " + fmt(bad);
  }

  // Nearest PSD point.
  {
    std::mt19937_64 rng(803);
    int bad = 0;
    for (int k = 0; k < 100; ++k) {
      const int n = 2 + k % 4;
      const HermitianMatrix h(oracle::hermitian(rng, n));
      const auto p = psd_project(h);
      const double best = (h.matrix() - p.matrix()).norm();
      if (oracle::min_eig(p.matrix()) < -1e-12) ++bad;
      for (int j = 0; j < 100; ++j) {
        const ComplexMatrix y = oracle::gaussian(rng, n, 1 + j % n) * 0.5;
        if ((h.matrix() - y * y.adjoint()).norm() < best - 1e-12) ++bad;
      }
    }
    ok = ok && bad == 0;
    detail += "; nearest " + fmt(bad) + " violations";
  }

  // Universal bounds.
  {
    std::mt19937_64 rng(804);
    double worst_dps = 0.0, worst_cg = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double d = 0.15 + 0.5 * std::uniform_real_distribution<double>(0, 1)(rng);
      std::string spec;
      switch (k % 4) {
        case 0: spec = "sym"; break;
        case 1: spec = "gn:" + std::to_string(1 + k % 5); break;
        case 2: spec = "moebius:" + fmt(0.9 * std::uniform_real_distribution<double>(-1, 1)(rng), 4); break;
        default: {
          spec = "poly:";
          for (int i = 0; i < 4; ++i) {
            spec += (i ? "," : "") + fmt(std::uniform_real_distribution<double>(-1, 1)(rng), 4);
          }
        }
      }
      const auto f = parse_function(spec, d);
      const auto e = dp_norm_estimate(f.f, d, 60, static_cast<std::uint64_t>(k));
      const double sup = sup_grid(f.f, d, 60, 120);
      worst_dps = std::max(worst_dps, e.lower_bound / ((2.0 + (1.0 + d) / (1.0 - d)) * sup));
      worst_cg = std::max(worst_cg, e.lower_bound / ((1.0 + std::sqrt(2.0)) * sup));
    }
    ok = ok && worst_dps <= 1.0 + 1e-6 && worst_cg <= 1.0 + 1e-6;
    detail += "; bound ratio " + fmt(worst_dps, 4) + " (1+sqrt2: " + fmt(worst_cg, 4) + ")";
  }
  return {ok, detail};
}

Outcome c9_disc_analytic() {
  const double d = 0.25;
  std::string detail;
  bool ok = true;
  for (const char* spec : {"id", "moebius:0.3"}) {
    const auto f = parse_function(spec, d);
    const auto e = dp_norm_estimate(f.f, d);
    const double sup = sup_grid(f.f, d);
    ok = ok && e.lower_bound >= sup - kSupLowerSlack && e.lower_bound <= sup + kSupUpperSlack;
    detail += std::string(spec) + " " + fmt(e.lower_bound, 10) + " vs sup " + fmt(sup, 10) + "; ";
  }
  return {ok, detail};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"det P(d) closed form and case signs", c1_det_closed_form},
      {"DP-solvable while classical Pick fails", c2_separation},
      {"two-point oracle agreement", c3_oracle_agreement},
      {"realization pipeline", c4_realization},
      {"extremal radius and extremal operator", c5_extremal},
      {"dp norm exceeds sup norm for z + d/z", c6_gap},
      {"Szego localization fails second certificate", c7_second_certificate},
      {"property suites", c8_properties},
      {"dp norm equals sup norm for disc functions", c9_disc_analytic},
  };
  int failed = 0;
  int index = 1;
  for (const auto& [name, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << index << " " << name << " | " << o.detail << " ["
              << fmt(secs, 3) << " s]" << std::endl;
    if (!o.pass) ++failed;
    ++index;
  }
  std::cout << (9 - failed) << "/9 criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
