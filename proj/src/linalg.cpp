#include "dpick/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dpick/errors.hpp"

namespace dpick {

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    }
  }
  return true;
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidInput("HermitianMatrix: matrix is not square");
  if (!all_finite(m)) throw InvalidInput("HermitianMatrix: non-finite entry");
  const Eigen::Index n = m.rows();
  m_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    m_(i, i) = cplx(m(i, i).real(), 0.0);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m_(i, j) = v;
      m_(j, i) = std::conj(v);
    }
  }
}

HermitianMatrix HermitianMatrix::identity(int n) {
  return HermitianMatrix(ComplexMatrix::Identity(n, n));
}

HermitianMatrix HermitianMatrix::zero(int n) {
  return HermitianMatrix(ComplexMatrix::Zero(n, n));
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  const Eigen::Index n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return std::sqrt(s);
}

// One complex Jacobi rotation annihilating a(p,q). The rotation is
// J = diag(1, conj(e)) * [[c, s], [-s, c]] on the (p,q) plane, where
// e = a(p,q)/|a(p,q)| makes the pivot real before the real rotation.
void rotate(ComplexMatrix& a, ComplexMatrix& v, Eigen::Index p, Eigen::Index q) {
  const cplx apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const cplx e = apq / mag;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * mag);
  double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
  if (theta < 0.0) t = -t;
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const cplx jpp = c;
  const cplx jpq = s;
  const cplx jqp = -s * std::conj(e);
  const cplx jqq = c * std::conj(e);

  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const cplx akp = a(k, p);
    const cplx akq = a(k, q);
    a(k, p) = akp * jpp + akq * jqp;
    a(k, q) = akp * jpq + akq * jqq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const cplx apk = a(p, k);
    const cplx aqk = a(q, k);
    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (Eigen::Index k = 0; k < n; ++k) {
    const cplx vkp = v(k, p);
    const cplx vkq = v(k, q);
    v(k, p) = vkp * jpp + vkq * jqp;
    v(k, q) = vkp * jpq + vkq * jqq;
  }
}

}  // namespace

EigenDecomposition hermitian_eig(const HermitianMatrix& h) {
  const int n = h.size();
  if (n < 1) throw InvalidInput("hermitian_eig: empty matrix");
  if (!all_finite(h.matrix())) throw InvalidInput("hermitian_eig: non-finite entry");

  ComplexMatrix a = h.matrix();
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double scale = a.norm();
  const double target = 1e-14 * scale;

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_diagonal_norm(a) <= target) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        // Skip pivots that are negligible against both diagonal entries.
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;
        const double dp = std::abs(a(p, p).real());
        const double dq = std::abs(a(q, q).real());
        if (sweep > 3 && dp + 1e3 * mag == dp && dq + 1e3 * mag == dq) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        rotate(a, v, p, q);
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return a(x, x).real() > a(y, y).real(); });

  EigenDecomposition out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.eigenvalues(k) = a(order[k], order[k]).real();
    out.eigenvectors.col(k) = v.col(order[k]);
  }
  return out;
}

double min_eigenvalue(const HermitianMatrix& h) {
  const auto ed = hermitian_eig(h);
  return ed.eigenvalues(ed.eigenvalues.size() - 1);
}

double max_eigenvalue(const HermitianMatrix& h) { return hermitian_eig(h).eigenvalues(0); }

HermitianMatrix psd_project(const HermitianMatrix& h) {
  const auto ed = hermitian_eig(h);
  const RealVector clipped = ed.eigenvalues.cwiseMax(0.0);
  const ComplexMatrix& v = ed.eigenvectors;
  return HermitianMatrix(v * clipped.cast<cplx>().asDiagonal() * v.adjoint());
}

bool is_psd(const HermitianMatrix& h, double tol) { return min_eigenvalue(h) >= -tol; }

ComplexMatrix gramian_factor(const HermitianMatrix& g, double tol) {
  const auto ed = hermitian_eig(g);
  const int n = g.size();
  if (ed.eigenvalues(n - 1) <= tol) {
    throw NotPositiveDefinite("gramian_factor: smallest eigenvalue " +
                              std::to_string(ed.eigenvalues(n - 1)) + " is not above tolerance");
  }
  // Columns of Lambda^{1/2} V^*: (E^* E)(i,j) = sum_k V(i,k) lambda_k conj(V(j,k)) = g(i,j).
  const RealVector root = ed.eigenvalues.cwiseSqrt();
  return root.cast<cplx>().asDiagonal() * ed.eigenvectors.adjoint();
}

HermitianMatrix gramian(const ComplexMatrix& e) { return HermitianMatrix(e.adjoint() * e); }

int numerical_rank(const HermitianMatrix& h, double tol) {
  const auto ed = hermitian_eig(h);
  const double cutoff = tol * std::max(1.0, std::abs(ed.eigenvalues(0)));
  int r = 0;
  for (Eigen::Index k = 0; k < ed.eigenvalues.size(); ++k) {
    if (std::abs(ed.eigenvalues(k)) > cutoff) ++r;
  }
  return r;
}

ComplexMatrix psd_factor(const HermitianMatrix& h, double rel_tol) {
  const auto ed = hermitian_eig(h);
  const double cutoff = rel_tol * std::max(1.0, ed.eigenvalues(0));
  int r = 0;
  while (r < h.size() && ed.eigenvalues(r) > cutoff) ++r;
  ComplexMatrix x(r, h.size());
  for (int k = 0; k < r; ++k) {
    x.row(k) = std::sqrt(ed.eigenvalues(k)) * ed.eigenvectors.col(k).adjoint();
  }
  return x;
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  const ComplexMatrix mm = m.rows() >= m.cols() ? ComplexMatrix(m.adjoint() * m)
                                                : ComplexMatrix(m * m.adjoint());
  return std::sqrt(std::max(0.0, max_eigenvalue(HermitianMatrix(mm))));
}

ComplexMatrix orthonormal_complement(const ComplexMatrix& q) {
  const Eigen::Index m = q.rows();
  const Eigen::Index k = q.cols();
  if (k >= m) return ComplexMatrix(m, 0);
  const ComplexMatrix proj = ComplexMatrix::Identity(m, m) - q * q.adjoint();
  const auto ed = hermitian_eig(HermitianMatrix(proj));
  ComplexMatrix out = ed.eigenvectors.leftCols(m - k);
  // Re-orthonormalize against q to remove eigen-solver drift.
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    ComplexVector col = out.col(c);
    for (int pass = 0; pass < 2; ++pass) {
      col -= q * (q.adjoint() * col);
      col -= out.leftCols(c) * (out.leftCols(c).adjoint() * col);
    }
    out.col(c) = col / col.norm();
  }
  return out;
}

ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InvalidInput("hadamard: size mismatch");
  }
  return a.cwiseProduct(b);
}

}  // namespace dpick
