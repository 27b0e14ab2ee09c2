#pragma once

// Dense complex Hermitian linear algebra with explicit tolerances.
//
// Storage is Eigen; the Hermitian eigensolver is a cyclic complex Jacobi
// iteration so results are deterministic and independent of LAPACK.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace dpick {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kPsdTol = 1e-9;
inline constexpr double kRankTol = 1e-8;
inline constexpr double kReconstructionTol = 1e-10;

/// Square complex matrix that is exactly Hermitian.
///
/// Construction replaces the input by (H + H*)/2, so the stored entries
/// satisfy h(i,j) == conj(h(j,i)) bit for bit and the diagonal is real.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m);

  static HermitianMatrix identity(int n);
  static HermitianMatrix zero(int n);

  int size() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  cplx operator()(int i, int j) const { return m_(i, j); }

  double frobenius_norm() const { return m_.norm(); }

 private:
  ComplexMatrix m_;
};

struct EigenDecomposition {
  RealVector eigenvalues;     // descending
  ComplexMatrix eigenvectors;  // unitary, columns match eigenvalues
};

EigenDecomposition hermitian_eig(const HermitianMatrix& h);

double min_eigenvalue(const HermitianMatrix& h);
double max_eigenvalue(const HermitianMatrix& h);

/// Frobenius-nearest positive semidefinite matrix: V max(Lambda, 0) V*.
HermitianMatrix psd_project(const HermitianMatrix& h);

/// True iff the smallest eigenvalue is >= -tol.
bool is_psd(const HermitianMatrix& h, double tol = kPsdTol);

/// Vectors e_1..e_n (returned as the columns of the result) whose gramian
/// is g, i.e. <e_j, e_i> = e_i^* e_j = g(i,j). Throws NotPositiveDefinite
/// when the smallest eigenvalue of g is not above tol.
ComplexMatrix gramian_factor(const HermitianMatrix& g, double tol = kPsdTol);

/// Gramian [<e_j, e_i>] of the columns of e.
HermitianMatrix gramian(const ComplexMatrix& e);

/// Number of eigenvalues with |lambda| > tol * max(1, |lambda_max|).
int numerical_rank(const HermitianMatrix& h, double tol = kRankTol);

/// Factor a PSD matrix as X^* X with X of size r x n, keeping only the
/// eigenvalues above rel_tol * max(1, lambda_max). r may be zero.
ComplexMatrix psd_factor(const HermitianMatrix& h, double rel_tol);

/// Largest singular value of a general complex matrix.
double spectral_norm(const ComplexMatrix& m);

/// Orthonormal basis (columns) of the orthogonal complement of the column
/// span of q, which must already have orthonormal columns.
ComplexMatrix orthonormal_complement(const ComplexMatrix& q);

/// Hadamard (entrywise) product.
ComplexMatrix hadamard(const ComplexMatrix& a, const ComplexMatrix& b);

bool all_finite(const ComplexMatrix& m);

}  // namespace dpick
