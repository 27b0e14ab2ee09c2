#include "dpick/feasibility.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "dpick/errors.hpp"
#include "dpick/kernel_search.hpp"

namespace dpick {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Feasible: return "Feasible";
    case Verdict::Infeasible: return "Infeasible";
    case Verdict::Undecided: return "Undecided";
  }
  return "Unknown";
}

namespace {

ComplexMatrix target_matrix(const Nodes& z) {
  const int n = static_cast<int>(z.size());
  ComplexMatrix t(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) t(i, j) = 1.0 - std::conj(z[i]) * z[j];
  }
  return t;
}

struct Constraint {
  ComplexMatrix c1;
  ComplexMatrix c2;
  ComplexMatrix target;
  Eigen::MatrixXd denom;  // |c1|^2 + |c2|^2
};

Constraint make_constraint(const PickProblem& p) {
  Constraint c{first_weights(p.lambda()), second_weights(p.lambda(), p.delta()),
               target_matrix(p.z()), {}};
  c.denom = c.c1.cwiseAbs2() + c.c2.cwiseAbs2();
  for (Eigen::Index j = 0; j < c.denom.cols(); ++j) {
    for (Eigen::Index i = 0; i < c.denom.rows(); ++i) {
      if (!(c.denom(i, j) > 0.0)) {
        throw DegenerateConstraint("affine constraint vanishes at entry (" + std::to_string(i) +
                                   ", " + std::to_string(j) + ")");
      }
    }
  }
  return c;
}

ComplexMatrix constraint_residual(const Constraint& c, const ComplexMatrix& a,
                                  const ComplexMatrix& b) {
  return c.c1.cwiseProduct(a) + c.c2.cwiseProduct(b) - c.target;
}

// Turns the multiplier of the affine projection into a unit-diagonal
// kernel candidate. At a best-approximation pair the multiplier T has
// conj(C_k) o T >= 0, so conj(T) satisfies both certificate conditions
// and 1^* [(1 - conj(z_i) z_j) conj(T_ij)] 1 < 0. Before convergence the
// conditions hold only approximately; a multiple of I (whose certificates
// are positive diagonal) restores them. The limit may be singular, so the
// shift is sized from the actual deficit rather than fixed.
std::optional<HermitianMatrix> multiplier_kernel(const ComplexMatrix& multiplier,
                                                 const Constraint& c) {
  const int n = static_cast<int>(multiplier.rows());
  ComplexMatrix g = multiplier.conjugate();
  const double scale = g.norm();
  if (!(scale > 0.0) || !all_finite(g)) return std::nullopt;
  g /= scale;
  double shift = std::max(0.0, -min_eigenvalue(HermitianMatrix(g)));
  for (const ComplexMatrix* w : {&c.c1, &c.c2}) {
    const double deficit = -min_eigenvalue(HermitianMatrix(ComplexMatrix(w->cwiseProduct(g))));
    const double dmin = w->diagonal().real().minCoeff();
    if (deficit > 0.0) shift = std::max(shift, deficit / dmin);
  }
  g += (shift * (1.0 + 1e-6) + 1e-10) * ComplexMatrix::Identity(n, n);
  return normalize_kernel(HermitianMatrix(g)).h;
}

constexpr double kPolishTarget = 1e-14;

struct PolishResult {
  ComplexMatrix a;
  ComplexMatrix b;
  double residual = 0.0;
};

Eigen::VectorXd pack_residual(const ComplexMatrix& r) {
  const Eigen::Index n = r.rows();
  Eigen::VectorXd v(n * n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) v(k++) = r(i, i).real();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      // Off-diagonal entries appear twice in the Frobenius norm.
      v(k++) = std::sqrt(2.0) * r(i, j).real();
      v(k++) = std::sqrt(2.0) * r(i, j).imag();
    }
  }
  return v;
}

ComplexMatrix full_factor(const ComplexMatrix& h) {
  const auto ed = hermitian_eig(HermitianMatrix(h));
  return ed.eigenvectors * ed.eigenvalues.cwiseMax(0.0).cwiseSqrt().cast<cplx>().asDiagonal();
}

PolishResult polish_factorized(const Constraint& c, const ComplexMatrix& a0, const ComplexMatrix& b0,
                               double target, int max_iter) {
  const Eigen::Index n = a0.rows();
  std::array<ComplexMatrix, 2> f{full_factor(a0), full_factor(b0)};
  const std::array<const ComplexMatrix*, 2> w{&c.c1, &c.c2};
  auto residual_of = [&](const std::array<ComplexMatrix, 2>& ff) {
    return ComplexMatrix(c.c1.cwiseProduct(ff[0] * ff[0].adjoint()) +
                         c.c2.cwiseProduct(ff[1] * ff[1].adjoint()) - c.target);
  };

  ComplexMatrix r = residual_of(f);
  double res = r.norm();
  double mu = 1e-3 * std::max(1.0, res);
  const Eigen::Index params = 4 * n * n;
  Eigen::MatrixXd jac(n * n, params);

  for (int it = 0; it < max_iter && res > target; ++it) {
    // Column for a real or imaginary unit perturbation of factor entry (k, l).
    Eigen::Index col = 0;
    for (int blk = 0; blk < 2; ++blk) {
      for (int part = 0; part < 2; ++part) {
        const cplx e = part == 0 ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
        for (Eigen::Index l = 0; l < n; ++l) {
          for (Eigen::Index k = 0; k < n; ++k) {
            ComplexMatrix d = ComplexMatrix::Zero(n, n);
            d.row(k) += e * f[blk].col(l).adjoint();
            d.col(k) += std::conj(e) * f[blk].col(l);
            jac.col(col++) = pack_residual(w[blk]->cwiseProduct(d));
          }
        }
      }
    }
    const Eigen::VectorXd rv = pack_residual(r);
    bool improved = false;
    for (int tries = 0; tries < 12 && !improved; ++tries) {
      Eigen::MatrixXd normal = jac * jac.transpose();
      normal.diagonal().array() += mu;
      const Eigen::VectorXd step = -jac.transpose() * normal.ldlt().solve(rv);
      auto trial = f;
      Eigen::Index k = 0;
      for (int blk = 0; blk < 2; ++blk) {
        for (int part = 0; part < 2; ++part) {
          const cplx e = part == 0 ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
          for (Eigen::Index l = 0; l < n; ++l) {
            for (Eigen::Index kk = 0; kk < n; ++kk) trial[blk](kk, l) += e * step(k++);
          }
        }
      }
      const ComplexMatrix rt = residual_of(trial);
      const double rn = rt.norm();
      if (rn < res) {
        f = std::move(trial);
        r = rt;
        res = rn;
        mu = std::max(mu / 5.0, 1e-15);
        improved = true;
      } else {
        mu *= 8.0;
      }
    }
    if (!improved) break;
  }
  return {f[0] * f[0].adjoint(), f[1] * f[1].adjoint(), res};
}

std::optional<DPSzegoKernel> accept_certificate(const PickProblem& p, const HermitianMatrix& g,
                                                double tol_cert, double* min_eig_out) {
  const double m = min_eigenvalue(pick_matrix(p.z(), g));
  if (!(m < -tol_cert)) return std::nullopt;
  const auto report = dp_kernel_membership(g, p.lambda(), p.delta());
  if (!report.member) return std::nullopt;
  if (min_eig_out) *min_eig_out = m;
  return DPSzegoKernel::verify(g, p.lambda(), p.delta());
}

}  // namespace

double identity_residual(const PickProblem& p, const HermitianMatrix& a, const HermitianMatrix& b) {
  const auto c = make_constraint(p);
  return constraint_residual(c, a.matrix(), b.matrix()).norm();
}

std::pair<HermitianMatrix, HermitianMatrix> affine_project(const HermitianMatrix& a,
                                                           const HermitianMatrix& b,
                                                           const PickProblem& p) {
  if (a.size() != p.size() || b.size() != p.size()) {
    throw InvalidInput("affine_project: matrix size does not match the problem");
  }
  const auto c = make_constraint(p);
  const ComplexMatrix t = constraint_residual(c, a.matrix(), b.matrix())
                              .cwiseQuotient(c.denom.cast<cplx>());
  return {HermitianMatrix(ComplexMatrix(a.matrix() - c.c1.conjugate().cwiseProduct(t))),
          HermitianMatrix(ComplexMatrix(b.matrix() - c.c2.conjugate().cwiseProduct(t)))};
}

std::optional<DPSzegoKernel> certificate_search(const PickProblem& p,
                                                const FeasibilityOptions& opts,
                                                const std::vector<HermitianMatrix>& extra_starts) {
  const int n = p.size();
  const KernelSpace space(p.lambda(), p.delta());
  const auto objective = negative_min_eig_objective(p.z());

  std::vector<HermitianMatrix> starts;
  starts.push_back(HermitianMatrix::identity(n));
  for (const auto& s : extra_starts) {
    if (s.size() == n) starts.push_back(s);
  }
  std::mt19937_64 rng(opts.seed);
  for (int k = 0; k < opts.cert_starts; ++k) starts.push_back(space.random_start(rng));

  // Starts run in index order; the first start reaching the required
  // violation wins, which keeps the result independent of timing.
  for (const auto& s : starts) {
    const auto res = kernel_ascent(space, objective, s, opts.cert_iterations);
    if (auto cert = accept_certificate(p, res.g, opts.tol_cert, nullptr)) return cert;
  }
  return std::nullopt;
}

NormMaximizer maximize_gram_norm(const PickProblem& p, const FeasibilityOptions& opts,
                                 const std::vector<HermitianMatrix>& extra_starts) {
  const int n = p.size();
  const KernelSpace space(p.lambda(), p.delta());
  const auto objective = gram_norm_sq_objective(p.z());

  std::vector<HermitianMatrix> starts;
  starts.push_back(HermitianMatrix::identity(n));
  for (const auto& s : extra_starts) {
    if (s.size() == n) starts.push_back(s);
  }
  std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ULL);
  for (int k = 0; k < opts.cert_starts; ++k) starts.push_back(space.random_start(rng));

  NormMaximizer best{HermitianMatrix::identity(n), -1.0};
  for (const auto& s : starts) {
    const auto res = kernel_ascent(space, objective, s, 4 * opts.cert_iterations);
    const double norm = std::sqrt(std::max(0.0, res.value));
    if (norm > best.norm) best = {res.g, norm};
  }
  return best;
}

FeasibilityWitness solve_feasibility(const PickProblem& p, const FeasibilityOptions& opts) {
  const int n = p.size();
  const auto c = make_constraint(p);
  const KernelSpace space(p.lambda(), p.delta());
  FeasibilityWitness w;

  // Targets outside the closed disc are refuted by g = I.
  {
    double m = 0.0;
    if (auto cert = accept_certificate(p, HermitianMatrix::identity(n), opts.tol_cert, &m)) {
      w.verdict = Verdict::Infeasible;
      w.certificate = std::move(cert);
      w.certificate_min_eig = m;
      w.residual = std::numeric_limits<double>::infinity();
      return w;
    }
  }

  ComplexMatrix a = ComplexMatrix::Zero(n, n);
  ComplexMatrix b = ComplexMatrix::Zero(n, n);
  ComplexMatrix pa = ComplexMatrix::Zero(n, n);
  ComplexMatrix pb = ComplexMatrix::Zero(n, n);
  ComplexMatrix multiplier = ComplexMatrix::Zero(n, n);

  // Certificate and polish attempts at 200, 1000 and every 2500 iterations.
  auto checkpoint = [](int it) { return it == 200 || it == 1000 || it % 2500 == 0; };

  for (int it = 1; it <= opts.max_iterations; ++it) {
    // Cone step with Dykstra correction.
    const HermitianMatrix ya = psd_project(HermitianMatrix(ComplexMatrix(a + pa)));
    const HermitianMatrix yb = psd_project(HermitianMatrix(ComplexMatrix(b + pb)));
    pa = a + pa - ya.matrix();
    pb = b + pb - yb.matrix();

    const ComplexMatrix r = constraint_residual(c, ya.matrix(), yb.matrix());
    w.residual = r.norm();
    w.iterations = it;
    if (w.residual <= opts.tol_feas) {
      // Tighten the witness; keep the Dykstra point if polishing does not help.
      const auto pol = polish_factorized(c, ya.matrix(), yb.matrix(), kPolishTarget, 30);
      w.verdict = Verdict::Feasible;
      if (pol.residual < w.residual) {
        w.A = HermitianMatrix(pol.a);
        w.B = HermitianMatrix(pol.b);
        w.residual = pol.residual;
      } else {
        w.A = ya;
        w.B = yb;
      }
      return w;
    }

    // Affine step; the affine set needs no correction term.
    multiplier = r.cwiseQuotient(c.denom.cast<cplx>());
    a = ya.matrix() - c.c1.conjugate().cwiseProduct(multiplier);
    b = yb.matrix() - c.c2.conjugate().cwiseProduct(multiplier);

    if (checkpoint(it)) {
      // Dykstra can crawl on strictly feasible but ill-conditioned data;
      // a factorized Newton polish from the current cone point finishes it.
      const auto pol = polish_factorized(c, ya.matrix(), yb.matrix(), kPolishTarget, 60);
      if (pol.residual <= opts.tol_feas) {
        w.verdict = Verdict::Feasible;
        w.A = HermitianMatrix(pol.a);
        w.B = HermitianMatrix(pol.b);
        w.residual = pol.residual;
        return w;
      }
      if (auto g = multiplier_kernel(multiplier, c)) {
        double m = 0.0;
        if (auto cert = accept_certificate(p, *g, opts.tol_cert, &m)) {
          w.verdict = Verdict::Infeasible;
          w.certificate = std::move(cert);
          w.certificate_min_eig = m;
          return w;
        }
        // Short local polish from the multiplier direction.
        const auto res = kernel_ascent(space, negative_min_eig_objective(p.z()), *g, 60);
        if (auto cert = accept_certificate(p, res.g, opts.tol_cert, &m)) {
          w.verdict = Verdict::Infeasible;
          w.certificate = std::move(cert);
          w.certificate_min_eig = m;
          return w;
        }
      }
    }
  }

  std::vector<HermitianMatrix> extra;
  if (auto g = multiplier_kernel(multiplier, c)) extra.push_back(*g);
  if (auto cert = certificate_search(p, opts, extra)) {
    w.verdict = Verdict::Infeasible;
    w.certificate_min_eig = min_eigenvalue(pick_matrix(p.z(), cert->g()));
    w.certificate = std::move(cert);
    return w;
  }
  w.verdict = Verdict::Undecided;
  return w;
}

RadiusResult extremal_radius(const PickProblem& p, const FeasibilityOptions& opts) {
  RadiusResult out;
  const bool all_zero =
      std::all_of(p.z().begin(), p.z().end(), [](cplx v) { return v == cplx(0.0, 0.0); });
  if (all_zero) {
    out.unbounded = true;
    out.r_star = std::numeric_limits<double>::infinity();
    out.lower = opts.r_cap;
    out.upper = std::numeric_limits<double>::infinity();
    return out;
  }

  std::vector<HermitianMatrix> kernels_seen;
  auto feasible_at = [&](double r) {
    const auto w = solve_feasibility(p.scaled(r), opts);
    out.trace.push_back({r, w.verdict});
    if (w.certificate) kernels_seen.push_back(w.certificate->g());
    return w.verdict == Verdict::Feasible;
  };

  double lo = 0.0;
  double hi = 1.0;
  while (feasible_at(hi)) {
    lo = hi;
    if (hi >= opts.r_cap) {
      out.unbounded = true;
      out.r_star = std::numeric_limits<double>::infinity();
      out.lower = lo;
      out.upper = std::numeric_limits<double>::infinity();
      return out;
    }
    hi = std::min(2.0 * hi, opts.r_cap);
  }
  while (hi - lo > opts.tol_r) {
    const double mid = 0.5 * (lo + hi);
    if (feasible_at(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.lower = lo;
  out.upper = hi;
  out.r_star = 0.5 * (lo + hi);

  // The best kernel bounds r* from above: any g gives r* <= 1 / ||diag(z)||_g.
  const auto best = maximize_gram_norm(p, opts, kernels_seen);
  if (best.norm > 0.0) {
    const double bound = 1.0 / best.norm;
    if (bound <= hi + opts.tol_r) {
      out.upper = std::max(bound, lo);
      out.r_star = out.upper;
      if (dp_kernel_membership(best.g, p.lambda(), p.delta()).member) {
        out.witness = DPSzegoKernel::verify(best.g, p.lambda(), p.delta());
      }
    }
  }
  return out;
}

ExtremalReport is_extremal(const PickProblem& p, const FeasibilityOptions& opts) {
  const auto rr = extremal_radius(p, opts);
  ExtremalReport rep;
  rep.unbounded = rr.unbounded;
  rep.r_star = rr.r_star;
  rep.r_lower = rr.lower;
  rep.r_upper = rr.upper;
  if (rr.unbounded) return rep;
  if (rr.r_star < 1.0 - opts.tol_r) {
    throw NotSolvable("problem is not solvable (extremal radius " + std::to_string(rr.r_star) +
                      " < 1)");
  }
  rep.extremal = std::abs(rr.r_star - 1.0) <= opts.tol_r;
  if (!rep.extremal) return rep;

  // Witness: kernel maximizing the norm of diag(z), seeded by certificates
  // found slightly beyond the boundary.
  std::vector<HermitianMatrix> starts;
  if (rr.witness) starts.push_back(rr.witness->g());
  if (auto cert = certificate_search(p.scaled(1.0 + 10.0 * opts.tol_r), opts)) {
    starts.push_back(cert->g());
  }
  const auto best = maximize_gram_norm(p, opts, starts);
  if (!dp_kernel_membership(best.g, p.lambda(), p.delta()).member) return rep;
  rep.witness_kernel = DPSzegoKernel::verify(best.g, p.lambda(), p.delta());
  const HermitianMatrix pm = pick_matrix(p.z(), best.g);
  const auto ed = hermitian_eig(pm);
  const int n = p.size();
  rep.witness_min_eig = ed.eigenvalues(n - 1);
  rep.null_vector = ComplexVector(ed.eigenvectors.col(n - 1));
  rep.rank_defect = n - numerical_rank(pm);
  return rep;
}

double pair_ratio(cplx v1, cplx v2) {
  return std::sqrt((1.0 - std::norm(v1)) * (1.0 - std::norm(v2))) /
         std::abs(1.0 - std::conj(v1) * v2);
}

bool n2_oracle(const PickProblem& p) {
  if (p.size() != 2) throw InvalidInput("n2_oracle requires exactly two nodes");
  const auto& l = p.lambda();
  const auto& z = p.z();
  const double d = p.delta();
  const double w_max = std::min(pair_ratio(l[0], l[1]), pair_ratio(d / l[0], d / l[1]));
  const double a1 = 1.0 - std::norm(z[0]);
  const double a2 = 1.0 - std::norm(z[1]);
  return a1 >= 0.0 && a2 >= 0.0 &&
         a1 * a2 >= std::norm(1.0 - std::conj(z[0]) * z[1]) * w_max * w_max;
}

}  // namespace dpick
