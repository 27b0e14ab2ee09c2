#pragma once

// Transfer-function realizations of annulus interpolants.
//
// A unitary colligation L = [[a, beta^*], [gamma, D]] on C + M, with
// M = M1 + M2 of dimensions r1, r2, defines
//   phi(l) = a + <E(l) u(l), beta>,   u(l) = (1 - D E(l))^{-1} gamma,
// where E(l) = diag(l I_r1, (delta / l) I_r2).

#include <vector>

#include "dpick/kernels.hpp"
#include "dpick/linalg.hpp"

namespace dpick {

inline constexpr double kGramianMismatchTol = 1e-6;
inline constexpr double kIsometryTol = 1e-10;

struct Realization {
  cplx a{0.0, 0.0};
  ComplexVector beta;
  ComplexVector gamma;
  ComplexMatrix D;
  int r1 = 0;
  int r2 = 0;
  double delta = 0.0;

  int dim() const { return r1 + r2; }
  /// The colligation [[a, beta^*], [gamma, D]].
  ComplexMatrix colligation() const;
};

/// ||L^* L - I||_F for the colligation.
double colligation_unitarity(const Realization& r);

/// Realization from a feasible pair (A, B). Throws InconsistentWitness if
/// the two vector families have gramians differing by more than 1e-6.
Realization build_realization(const PickProblem& p, const HermitianMatrix& a,
                              const HermitianMatrix& b);

/// Square unitary U with U q_k = v_k, where the columns q_k of
/// domain_basis are orthonormal and image has orthonormal columns too.
/// The two may live in spaces of different dimension; the smaller one is
/// padded with zeros. Remaining basis vectors are matched in order of the
/// orthonormal complements. Throws NotIsometric.
ComplexMatrix extend_to_unitary(const ComplexMatrix& domain_basis, const ComplexMatrix& image);

struct ModelEvaluation {
  cplx lambda{0.0, 0.0};
  ComplexVector u;
  cplx phi{0.0, 0.0};
  /// Condition estimate of 1 - D E(lambda) (1 / rcond).
  double condition = 1.0;
};

inline constexpr double kConditionWarning = 1e8;

/// Throws OutsideDomain unless delta < |lambda| < 1.
ModelEvaluation eval_phi(const Realization& r, double delta, cplx lambda);

/// |(1 - conj(phi(mu)) phi(l)) - <(1 - E(mu)^* E(l)) u(l), u(mu)>|.
double model_residual(const Realization& r, double delta, cplx lambda, cplx mu);

struct InterpolationReport {
  std::vector<double> errors;  // |phi(lambda_j) - z_j|
  double max_error = 0.0;
  bool passed = false;
};

InterpolationReport verify_interpolation(const Realization& r, const PickProblem& p, double tol);

}  // namespace dpick
