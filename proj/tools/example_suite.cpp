// Regression table over the worked examples. Each row is an independent
// check with its own pinned tolerance.

#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <vector>

#include "commands.hpp"
#include "dpick/errors.hpp"
#include "dpick/functions.hpp"
#include "dpick/operators.hpp"
#include "dpick/realization.hpp"

namespace dpick::cli {

namespace {

struct Row {
  std::string id;
  std::string check;
  bool passed = false;
  std::string detail;
};

std::string num(double v, int prec = 6) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << std::setprecision(prec) << v;
  return s.str();
}

class Table {
 public:
  void add(const std::string& id, const std::string& check,
           const std::function<std::pair<bool, std::string>()>& body) {
    Row r{id, check, false, ""};
    try {
      std::tie(r.passed, r.detail) = body();
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    rows_.push_back(r);
  }

  int print(std::ostream& out) const {
    int failed = 0;
    out << std::left << std::setw(6) << "case" << std::setw(64) << "check" << std::setw(8)
        << "result" << "detail\n";
    for (const auto& r : rows_) {
      out << std::left << std::setw(6) << r.id << std::setw(64) << r.check << std::setw(8)
          << (r.passed ? "PASS" : "FAIL") << r.detail << "\n";
      if (!r.passed) ++failed;
    }
    out << rows_.size() - failed << "/" << rows_.size() << " passed\n";
    return failed == 0 ? kOk : kSuiteFailure;
  }

 private:
  std::vector<Row> rows_;
};

double closed_form_det(double d) {
  return (256.0 / 225.0) * (d * d + 0.5 * d - 3.0 / 16.0) * (d * d + 0.5 * d - 63.0 / 16.0);
}

void rows_25(Table& t, const FeasibilityOptions&, const Flags& f) {
  const double d = 0.25;
  const auto sym = parse_function("sym", d);
  t.add("2.5", "X=[[0.5,0.75],[0,-0.5]] is DP and ||X + d X^-1|| = 2", [&] {
    ComplexMatrix x(2, 2);
    x << 0.5, 0.75, 0.0, -0.5;
    const auto m = dp_membership_general({x, d});
    const double n = spectral_norm(x + d * x.inverse());
    return std::pair{m.member && std::abs(n - 2.0) <= 1e-12, "norm " + num(n, 15)};
  });
  t.add("2.5", "sup over annulus grid of |z + d/z| = 1 + d", [&] {
    const double s = sup_grid(sym.f, d);
    return std::pair{std::abs(s - 1.25) <= 1e-6, "sup " + num(s, 12)};
  });
  t.add("2.5", "dp-norm estimate in [1.30, 2 + 1e-6]", [&] {
    const auto e = dp_norm_estimate(sym.f, d, f.budget, f.seed);
    return std::pair{e.lower_bound >= 1.30 && e.lower_bound <= 2.0 + 1e-6,
                     "estimate " + num(e.lower_bound, 12)};
  });
  t.add("2.5", "z + d/z is symmetric under z -> d/z", [&] {
    const double dev = check_symmetric(sym.f, d, 1000, f.seed);
    return std::pair{dev <= 1e-14, "max deviation " + num(dev, 3)};
  });
}

void rows_54(Table& t, double d, const FeasibilityOptions& opts) {
  const std::string id = "5.4";
  const std::string at = " (d=" + num(d) + ")";
  const PickProblem p = example_54(d);
  const double det =
      pick_matrix(p.z(), szego_kernel(p.lambda())).matrix().determinant().real();
  t.add(id, "classical det P matches closed form" + at, [&] {
    return std::pair{std::abs(det - closed_form_det(d)) <= 1e-10, "det " + num(det, 10)};
  });
  const int expected_sign = d < 0.25 ? 1 : d == 0.25 ? 0 : -1;
  const int sign = std::abs(det) <= 1e-10 ? 0 : det > 0.0 ? 1 : -1;
  const std::string label = expected_sign > 0   ? "case (i): det P > 0, disc problem solvable"
                            : expected_sign == 0 ? "case (ii): det P = 0, unique solution f(l)=l"
                                                 : "case (iii): det P < 0, disc problem unsolvable";
  t.add(id, label + at, [&] { return std::pair{sign == expected_sign, "sign " + num(sign)}; });

  t.add(id, "DP problem solvable with residual <= 1e-8" + at, [&] {
    const auto w = solve_feasibility(p, opts);
    return std::pair{w.verdict == Verdict::Feasible && w.residual <= 1e-8,
                     to_string(w.verdict) + " residual " + num(w.residual, 3)};
  });
  t.add(id, "realization interpolates to 1e-8" + at, [&] {
    const auto w = solve_feasibility(p, opts);
    if (w.verdict != Verdict::Feasible) return std::pair{false, to_string(w.verdict)};
    const auto r = build_realization(p, *w.A, *w.B);
    const auto rep = verify_interpolation(r, p, 1e-8);
    bool ok = rep.passed && colligation_unitarity(r) <= 1e-10;
    std::string extra;
    if (expected_sign == 0) {
      // z = l: the data are interpolated by f(l) = l
      ok = ok && p.z() == p.lambda();
      extra = ", z = lambda";
    }
    return std::pair{ok, "max error " + num(rep.max_error, 3) + extra};
  });
}

void rows_54_radius(Table& t, const FeasibilityOptions& opts) {
  const PickProblem p = example_54(0.3);
  t.add("5.4", "targets scaled by 1.2 are refuted by a kernel (d=0.3)", [&] {
    const auto w = solve_feasibility(p.scaled(1.2), opts);
    return std::pair{w.verdict == Verdict::Infeasible && w.certificate.has_value(),
                     to_string(w.verdict) + " pick min eig " + num(w.certificate_min_eig)};
  });
  t.add("5.4", "extremal radius r* = 12/11 within 1e-3 (d=0.3)", [&] {
    const auto rr = extremal_radius(p, opts);
    return std::pair{!rr.unbounded && std::abs(rr.r_star - 12.0 / 11.0) <= 1e-3,
                     "r* " + num(rr.r_star, 10)};
  });
  t.add("5.4", "data scaled to r* extremal, ||phi(T)|| = 1 (d=0.3)", [&] {
    const auto rr = extremal_radius(p, opts);
    const PickProblem q = p.scaled(rr.r_star);
    const auto rep = is_extremal(q, opts);
    if (!rep.extremal || !rep.witness_kernel) return std::pair{false, std::string("no witness")};
    const auto eo = extremal_operator(q, *rep.witness_kernel, q.z());
    return std::pair{std::abs(eo.phi_norm - 1.0) <= 1e-5,
                     "||phi(T)|| " + num(eo.phi_norm, 10) + " rank defect " +
                         num(rep.rank_defect)};
  });
}

void rows_55(Table& t, double d, const FeasibilityOptions& opts) {
  const std::string at = " (d=" + num(d) + ")";
  const PickProblem p = example_55(d);
  t.add("5.5", "target matches sqrt(d)(5+2sqrt(d)+d)/(4(1+sqrt(d)))" + at, [&] {
    const double s = std::sqrt(d);
    const double closed = s * (5.0 + 2.0 * s + d) / (4.0 * (1.0 + s));
    return std::pair{std::abs(p.z()[0].real() - closed) <= 1e-14, "z1 " + num(closed, 12)};
  });
  t.add("5.5", "classical Pick matrix not PSD" + at, [&] {
    const double me = min_eigenvalue(pick_matrix(p.z(), szego_kernel(p.lambda())));
    return std::pair{me < 0.0, "min eig " + num(me)};
  });
  t.add("5.5", "DP problem solvable and realized to 1e-8" + at, [&] {
    const auto w = solve_feasibility(p, opts);
    if (w.verdict != Verdict::Feasible || w.residual > 1e-8) {
      return std::pair{false, to_string(w.verdict) + " residual " + num(w.residual, 3)};
    }
    const auto r = build_realization(p, *w.A, *w.B);
    const auto rep = verify_interpolation(r, p, 1e-8);
    return std::pair{rep.passed, "residual " + num(w.residual, 3) + " max error " +
                                     num(rep.max_error, 3)};
  });
}

void rows_56(Table& t) {
  const double d = 0.25;
  const double l = 0.5 * (d + std::sqrt(d));
  const Nodes nodes{l, -l};
  t.add("5.6", "Szego localization fails the second certificate", [&] {
    const auto rep = dp_kernel_membership(szego_kernel(nodes), nodes, d);
    return std::pair{!rep.member && rep.failing_condition == FailingCondition::second &&
                         rep.min_eig_cert2 <= -0.5,
                     "failing " + to_string(rep.failing_condition) + " min eig " +
                         num(rep.min_eig_cert2)};
  });
}

}  // namespace

int cmd_examples(const std::string& case_id, std::optional<double> delta, const Flags& f,
                 std::ostream& out) {
  const bool all = case_id == "all";
  if (!all && case_id != "2.5" && case_id != "5.4" && case_id != "5.5" && case_id != "5.6") {
    throw InvalidInput("unknown case '" + case_id + "' (expected all, 2.5, 5.4, 5.5 or 5.6)");
  }
  if (delta && all) throw InvalidInput("--delta needs --case");
  const auto opts = apply_flags(FeasibilityOptions{}, f);
  Table t;
  if (all || case_id == "2.5") rows_25(t, opts, f);
  if (all || case_id == "5.4") {
    if (delta) {
      rows_54(t, *delta, opts);
    } else {
      for (double d : {0.1, 0.25, 0.3, 0.45}) rows_54(t, d, opts);
      rows_54_radius(t, opts);
    }
  }
  if (all || case_id == "5.5") {
    if (delta) {
      rows_55(t, *delta, opts);
    } else {
      for (double d : {0.1, 0.25, 0.5, 0.9}) rows_55(t, d, opts);
    }
  }
  if (all || case_id == "5.6") rows_56(t);
  return t.print(out);
}

}  // namespace dpick::cli
