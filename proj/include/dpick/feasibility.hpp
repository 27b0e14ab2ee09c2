#pragma once

// Solvability of DP Pick problems.
//
// Primal side: find PSD matrices A, B with
//   1 - conj(z_i) z_j = (1 - conj(l_i) l_j) a_ij + (1 - delta^2 / (conj(l_i) l_j)) b_ij
// by Dykstra's alternating projections between the affine set above and
// the cone PSD x PSD. Dual side: a DP Szego kernel g whose Pick matrix
// [(1 - conj(z_i) z_j) g_ij] has a negative eigenvalue certifies that no
// solution exists.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dpick/kernels.hpp"

namespace dpick {

struct FeasibilityOptions {
  double tol_feas = 1e-9;   // Frobenius norm of the identity residual
  double tol_cert = 1e-8;   // required violation of a certificate
  double tol_r = 1e-4;      // bisection width for the extremal radius
  double r_cap = 10.0;
  int max_iterations = 50000;
  int cert_starts = 16;
  int cert_iterations = 400;
  std::uint64_t seed = 0;
};

enum class Verdict { Feasible, Infeasible, Undecided };
std::string to_string(Verdict v);

struct FeasibilityWitness {
  Verdict verdict = Verdict::Undecided;
  std::optional<HermitianMatrix> A;
  std::optional<HermitianMatrix> B;
  std::optional<DPSzegoKernel> certificate;
  double residual = 0.0;
  int iterations = 0;
  /// Smallest eigenvalue of the certificate's Pick matrix (when present).
  double certificate_min_eig = 0.0;
};

/// Frobenius norm of C1 o A + C2 o B - [1 - conj(z_i) z_j].
double identity_residual(const PickProblem& p, const HermitianMatrix& a, const HermitianMatrix& b);

FeasibilityWitness solve_feasibility(const PickProblem& p, const FeasibilityOptions& opts = {});

/// Entrywise orthogonal projection onto the affine constraint set.
std::pair<HermitianMatrix, HermitianMatrix> affine_project(const HermitianMatrix& a,
                                                           const HermitianMatrix& b,
                                                           const PickProblem& p);

/// Normalized kernel whose Pick matrix has min eigenvalue < -tol_cert, or
/// nullopt. Extra starting kernels (unit diagonal) may be supplied.
std::optional<DPSzegoKernel> certificate_search(const PickProblem& p,
                                                const FeasibilityOptions& opts = {},
                                                const std::vector<HermitianMatrix>& extra_starts = {});

/// Normalized kernel maximizing the norm of diag(z) in the gramian metric,
/// found by multi-start local ascent. 1 / sqrt(value) bounds the extremal
/// radius from above.
struct NormMaximizer {
  HermitianMatrix g;
  double norm = 0.0;  // sqrt of the maximized value
};
NormMaximizer maximize_gram_norm(const PickProblem& p, const FeasibilityOptions& opts = {},
                                 const std::vector<HermitianMatrix>& extra_starts = {});

struct BisectionStep {
  double r = 0.0;
  Verdict verdict = Verdict::Undecided;
};

/// r* = sup{r >= 0 : (lambda, r z) solvable}.
struct RadiusResult {
  bool unbounded = false;
  double r_star = 0.0;
  double lower = 0.0;  // largest radius with a primal witness
  double upper = 0.0;  // smallest radius known not to be feasible
  std::optional<DPSzegoKernel> witness;  // kernel attaining the upper bound, if found
  std::vector<BisectionStep> trace;
};

RadiusResult extremal_radius(const PickProblem& p, const FeasibilityOptions& opts = {});

struct ExtremalReport {
  bool unbounded = false;
  double r_star = 0.0;
  double r_lower = 0.0;
  double r_upper = 0.0;
  bool extremal = false;
  std::optional<DPSzegoKernel> witness_kernel;
  std::optional<ComplexVector> null_vector;
  int rank_defect = 0;
  /// Smallest eigenvalue of pick_matrix(z, witness) (when a witness exists).
  double witness_min_eig = 0.0;
};

/// Throws NotSolvable when the problem is certified unsolvable.
ExtremalReport is_extremal(const PickProblem& p, const FeasibilityOptions& opts = {});

/// Closed-form decision for two nodes.
bool n2_oracle(const PickProblem& p);

/// sqrt((1 - |v1|^2)(1 - |v2|^2)) / |1 - conj(v1) v2|.
double pair_ratio(cplx v1, cplx v2);

}  // namespace dpick
