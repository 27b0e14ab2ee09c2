#include "dpick/realization.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "dpick/errors.hpp"

namespace dpick {

namespace {

constexpr double kFactorRelTol = 1e-8;
constexpr double kRangeRelTol = 1e-9;

ComplexMatrix pad_rows(const ComplexMatrix& m, Eigen::Index rows) {
  ComplexMatrix out = ComplexMatrix::Zero(rows, m.cols());
  out.topRows(m.rows()) = m;
  return out;
}

double isometry_defect(const ComplexMatrix& v) {
  return (v.adjoint() * v - ComplexMatrix::Identity(v.cols(), v.cols())).norm();
}

// diag(l I_r1, (delta / l) I_r2)
ComplexVector e_diag(int r1, int r2, double delta, cplx lambda) {
  ComplexVector e(r1 + r2);
  e.head(r1).setConstant(lambda);
  e.tail(r2).setConstant(delta / lambda);
  return e;
}

}  // namespace

ComplexMatrix Realization::colligation() const {
  const int m = dim();
  ComplexMatrix l(m + 1, m + 1);
  l(0, 0) = a;
  if (m > 0) {
    l.block(0, 1, 1, m) = beta.adjoint();
    l.block(1, 0, m, 1) = gamma;
    l.block(1, 1, m, m) = D;
  }
  return l;
}

double colligation_unitarity(const Realization& r) {
  const ComplexMatrix l = r.colligation();
  return isometry_defect(l);
}

ComplexMatrix extend_to_unitary(const ComplexMatrix& domain_basis, const ComplexMatrix& image) {
  if (domain_basis.cols() != image.cols()) {
    throw InvalidInput("extend_to_unitary: basis and image have different column counts");
  }
  const double dd = isometry_defect(domain_basis);
  const double di = isometry_defect(image);
  if (dd > kIsometryTol || di > kIsometryTol) {
    std::ostringstream msg;
    msg << "extend_to_unitary: map is not isometric (defect " << std::max(dd, di) << ")";
    throw NotIsometric(msg.str());
  }
  const Eigen::Index n = std::max(domain_basis.rows(), image.rows());
  const ComplexMatrix q = pad_rows(domain_basis, n);
  const ComplexMatrix v = pad_rows(image, n);
  return v * q.adjoint() + orthonormal_complement(v) * orthonormal_complement(q).adjoint();
}

Realization build_realization(const PickProblem& p, const HermitianMatrix& a,
                              const HermitianMatrix& b) {
  const int n = p.size();
  if (a.size() != n || b.size() != n) {
    throw InvalidInput("build_realization: witness size does not match the problem");
  }
  const auto& lambda = p.lambda();
  const auto& z = p.z();
  const double delta = p.delta();

  // Columns x_j, y_j with X^* X = A, Y^* Y = B.
  const ComplexMatrix x = psd_factor(a, kFactorRelTol);
  const ComplexMatrix y = psd_factor(b, kFactorRelTol);
  const int r1 = static_cast<int>(x.rows());
  const int r2 = static_cast<int>(y.rows());
  const int m = 1 + r1 + r2;

  // u_j = (1, l_j x_j, (delta / l_j) y_j),  w_j = (z_j, x_j, y_j).
  ComplexMatrix u(m, n);
  ComplexMatrix w(m, n);
  for (int j = 0; j < n; ++j) {
    u(0, j) = 1.0;
    w(0, j) = z[j];
    if (r1 > 0) {
      u.block(1, j, r1, 1) = lambda[j] * x.col(j);
      w.block(1, j, r1, 1) = x.col(j);
    }
    if (r2 > 0) {
      u.block(1 + r1, j, r2, 1) = (delta / lambda[j]) * y.col(j);
      w.block(1 + r1, j, r2, 1) = y.col(j);
    }
  }

  const ComplexMatrix gu = u.adjoint() * u;
  const ComplexMatrix gw = w.adjoint() * w;
  const double mismatch = (gu - gw).norm() / std::max(1.0, gu.norm());
  if (mismatch > kGramianMismatchTol) {
    std::ostringstream msg;
    msg << "gramians of the two vector families differ by " << mismatch;
    throw InconsistentWitness(msg.str());
  }

  // L on range(U): L p_k = W q_k / s_k for the singular triples of U.
  Eigen::JacobiSVD<ComplexMatrix> svd(u, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  Eigen::Index k = 0;
  while (k < s.size() && s(k) > kRangeRelTol * s(0)) ++k;
  const ComplexMatrix basis = svd.matrixU().leftCols(k);
  ComplexMatrix mapped = w * svd.matrixV().leftCols(k);
  for (Eigen::Index c = 0; c < k; ++c) mapped.col(c) /= s(c);

  // Nearest isometry (polar factor) absorbs factorization noise.
  Eigen::JacobiSVD<ComplexMatrix> polar(mapped, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const ComplexMatrix image = polar.matrixU() * polar.matrixV().adjoint();

  const ComplexMatrix l = extend_to_unitary(basis, image);

  Realization r;
  r.r1 = r1;
  r.r2 = r2;
  r.delta = delta;
  r.a = l(0, 0);
  r.beta = l.block(0, 1, 1, m - 1).adjoint();
  r.gamma = l.block(1, 0, m - 1, 1);
  r.D = l.block(1, 1, m - 1, m - 1);
  return r;
}

ModelEvaluation eval_phi(const Realization& r, double delta, cplx lambda) {
  const double mod = std::abs(lambda);
  if (!(mod > delta && mod < 1.0)) {
    std::ostringstream msg;
    msg << "point " << lambda << " is outside the annulus " << delta << " < |z| < 1";
    throw OutsideDomain(msg.str());
  }
  ModelEvaluation ev;
  ev.lambda = lambda;
  const int m = r.dim();
  if (m == 0) {
    ev.u = ComplexVector(0);
    ev.phi = r.a;
    return ev;
  }
  const ComplexVector e = e_diag(r.r1, r.r2, delta, lambda);
  const ComplexMatrix lhs = ComplexMatrix::Identity(m, m) - r.D * e.asDiagonal();
  Eigen::PartialPivLU<ComplexMatrix> lu(lhs);
  ev.u = lu.solve(r.gamma);
  ev.condition = 1.0 / lu.rcond();
  ev.phi = r.a + r.beta.dot(ComplexVector(e.cwiseProduct(ev.u)));
  return ev;
}

double model_residual(const Realization& r, double delta, cplx lambda, cplx mu) {
  const auto el = eval_phi(r, delta, lambda);
  const auto em = eval_phi(r, delta, mu);
  const cplx lhs = 1.0 - std::conj(em.phi) * el.phi;
  cplx rhs = 0.0;
  if (r.dim() > 0) {
    const ComplexVector e_l = e_diag(r.r1, r.r2, delta, lambda);
    const ComplexVector e_m = e_diag(r.r1, r.r2, delta, mu);
    const ComplexVector w = el.u - e_m.conjugate().cwiseProduct(e_l).cwiseProduct(el.u);
    rhs = em.u.dot(w);
  }
  return std::abs(lhs - rhs);
}

InterpolationReport verify_interpolation(const Realization& r, const PickProblem& p, double tol) {
  InterpolationReport rep;
  for (int j = 0; j < p.size(); ++j) {
    const double err = std::abs(eval_phi(r, p.delta(), p.lambda()[j]).phi - p.z()[j]);
    rep.errors.push_back(err);
    rep.max_error = std::max(rep.max_error, err);
  }
  rep.passed = rep.max_error <= tol;
  return rep;
}

}  // namespace dpick
