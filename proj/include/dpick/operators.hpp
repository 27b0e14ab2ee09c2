#pragma once

// Operators X with ||X|| <= 1, ||delta X^{-1}|| <= 1 and spectrum in the
// annulus, their functional calculus, and lower estimates of
//   ||f||_dp = sup ||f(X)||  over all such X.

#include <cstdint>
#include <optional>
#include <vector>

#include "dpick/functions.hpp"
#include "dpick/kernels.hpp"

namespace dpick {

inline constexpr double kOperatorTol = 1e-8;
inline constexpr double kEigenvectorCondLimit = 1e10;
inline constexpr double kNullTol = 1e-6;

/// T e_j = lambda_j e_j on the space where <e_j, e_i> = gramian_ij.
class DPOperator {
 public:
  /// Throws NotDPOperator when ||T|| or ||delta T^{-1}|| exceeds 1 + tol.
  DPOperator(Nodes eigenvalues, HermitianMatrix gramian, double delta, double tol = kOperatorTol);

  const Nodes& eigenvalues() const { return eigenvalues_; }
  const HermitianMatrix& gramian() const { return gramian_; }
  double delta() const { return delta_; }
  int size() const { return static_cast<int>(eigenvalues_.size()); }

  double norm() const { return norm_; }
  /// ||delta T^{-1}||
  double inverse_norm() const { return inverse_norm_; }
  /// Columns e_j expressed in an orthonormal basis (E^* E = gramian).
  const ComplexMatrix& basis() const { return basis_; }
  /// Matrix of T in that orthonormal basis.
  ComplexMatrix matrix() const;

 private:
  Nodes eigenvalues_;
  HermitianMatrix gramian_;
  double delta_;
  ComplexMatrix basis_;
  double norm_ = 0.0;
  double inverse_norm_ = 0.0;
};

struct GeneralOperator {
  ComplexMatrix matrix;
  double delta = 0.0;
};

DPOperator operator_from_kernel(const DPSzegoKernel& g);
DPSzegoKernel kernel_from_operator(const DPOperator& t);

struct OperatorMembership {
  bool member = false;
  double norm = 0.0;
  /// ||delta X^{-1}||, infinite for singular X.
  double inverse_norm = 0.0;
  std::vector<cplx> eigenvalues;
  bool spectrum_in_annulus = false;
};

OperatorMembership dp_membership_general(const GeneralOperator& x, double tol = kOperatorTol);

/// ||phi(T)|| where phi(T) e_j = values_j e_j.
double apply_function_norm(const DPOperator& t, const std::vector<cplx>& values);

/// f(X) = V diag(f(mu)) V^{-1} for diagonalizable X; nullopt when the
/// eigenvector matrix has condition number above 1e10.
std::optional<ComplexMatrix> apply_function(const ScalarFunction& f, const ComplexMatrix& x);

struct DPNormEstimate {
  double lower_bound = 0.0;
  ComplexMatrix witness;
  int samples = 0;     // accepted random samples
  int rejected = 0;    // samples dropped by the spectrum or conditioning checks
  int evaluations = 0; // including local refinement
};

/// Seeded random search plus Nelder-Mead refinement; every evaluated X is a
/// member, so the result is a lower bound for the dp-norm.
DPNormEstimate dp_norm_estimate(const ScalarFunction& f, double delta, int budget = 2000,
                                std::uint64_t seed = 0);

/// max |f| over a polar grid of the annulus whose radii reach to within
/// 1e-9 of both boundary circles.
double sup_grid(const ScalarFunction& f, double delta, int radial = 200, int angular = 400);

struct ExtremalOperator {
  DPOperator t;
  /// Maximizing vector in the orthonormal basis of T.
  ComplexVector x;
  /// Coefficients xi of x = sum xi_j e_j.
  ComplexVector xi;
  double phi_norm = 0.0;
  /// ||phi(T) x|| / ||x||
  double ratio = 0.0;
};

/// Throws NotExtremalWitness when pick_matrix(values, g) has no null
/// vector within 1e-6.
ExtremalOperator extremal_operator(const PickProblem& p, const DPSzegoKernel& g,
                                   const std::vector<cplx>& values);

/// max over seeded samples of |f(delta / l) - f(l)|.
double check_symmetric(const ScalarFunction& f, double delta, int samples = 1000,
                       std::uint64_t seed = 0);

}  // namespace dpick
