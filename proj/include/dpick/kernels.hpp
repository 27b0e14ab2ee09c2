#pragma once

// Pick matrices and kernels on the annulus R_delta = {delta < |z| < 1}.

#include <optional>
#include <string>
#include <vector>

#include "dpick/linalg.hpp"

namespace dpick {

using Nodes = std::vector<cplx>;

inline constexpr double kMembershipTol = 1e-9;

/// Interpolation data: distinct nodes lambda_j in R_delta and targets z_j.
class PickProblem {
 public:
  PickProblem(double delta, Nodes lambda, Nodes z);

  double delta() const { return delta_; }
  const Nodes& lambda() const { return lambda_; }
  const Nodes& z() const { return z_; }
  int size() const { return static_cast<int>(lambda_.size()); }

  /// Same nodes, targets multiplied by r.
  PickProblem scaled(double r) const;

 private:
  double delta_;
  Nodes lambda_;
  Nodes z_;
};

/// Throws InvalidInput unless 0 < delta < 1 and the nodes are finite,
/// pairwise distinct and inside the open annulus.
void validate_nodes(const Nodes& lambda, double delta);

/// [(1 - conj(v_i) v_j) g_ij].
HermitianMatrix pick_matrix(const Nodes& values, const HermitianMatrix& g);

/// The two Schur-product matrices [(1 - conj(l_i) l_j) g_ij] and
/// [(1 - (delta/conj(l_i))(delta/l_j)) g_ij].
struct CertificatePair {
  HermitianMatrix first;
  HermitianMatrix second;
};
CertificatePair dp_certificates(const HermitianMatrix& g, const Nodes& lambda, double delta);

/// Entrywise weights of the two certificates: C1 = [1 - conj(l_i) l_j],
/// C2 = [1 - delta^2 / (conj(l_i) l_j)].
ComplexMatrix first_weights(const Nodes& lambda);
ComplexMatrix second_weights(const Nodes& lambda, double delta);

enum class FailingCondition { none, not_pd, first, second };
std::string to_string(FailingCondition c);

struct MembershipReport {
  bool member = false;
  double min_eig_g = 0.0;
  double min_eig_cert1 = 0.0;
  double min_eig_cert2 = 0.0;
  FailingCondition failing_condition = FailingCondition::not_pd;
};

/// Positive definiteness threshold for a kernel: 1e-12 * trace(g) / n.
double pd_threshold(const HermitianMatrix& g);

MembershipReport dp_kernel_membership(const HermitianMatrix& g, const Nodes& lambda,
                                      double delta, double tol = kMembershipTol);

/// A positive definite matrix whose two certificates are PSD. Instances
/// can only be obtained through verify(), which checks membership.
class DPSzegoKernel {
 public:
  static DPSzegoKernel verify(const HermitianMatrix& g, const Nodes& lambda, double delta,
                              double tol = kMembershipTol);

  const HermitianMatrix& g() const { return g_; }
  const Nodes& lambda() const { return lambda_; }
  double delta() const { return delta_; }
  const CertificatePair& certificates() const { return certs_; }
  const MembershipReport& report() const { return report_; }
  int size() const { return g_.size(); }

 private:
  DPSzegoKernel(HermitianMatrix g, Nodes lambda, double delta, CertificatePair certs,
                MembershipReport report);

  HermitianMatrix g_;
  Nodes lambda_;
  double delta_;
  CertificatePair certs_;
  MembershipReport report_;
};

/// h = C^* g C with C = diag(1/c_i), c_i = sqrt(g_ii) (or 1 when g_ii = 0).
struct NormalizedKernel {
  HermitianMatrix h;
  RealVector c_inverse;  // diagonal of C
};
NormalizedKernel normalize_kernel(const HermitianMatrix& g);

/// Localization of the Sarason family
/// g_rho(l_i, l_j) = sum_m (conj(l_i) l_j)^m / (rho + delta^(2m)),
/// truncated to m in [-M, M] with a geometric tail bound below tail_tol.
HermitianMatrix sarason_kernel(const Nodes& lambda, double rho, double delta,
                               double tail_tol = 1e-15);
/// Truncation order M used by sarason_kernel for the same arguments.
int sarason_truncation(const Nodes& lambda, double rho, double delta, double tail_tol);
/// Explicit truncation, used to compare partial sums.
HermitianMatrix sarason_partial_sum(const Nodes& lambda, double rho, double delta, int order);

/// Szego kernel localization [1 / (1 - conj(l_i) l_j)] on nodes in the disc.
HermitianMatrix szego_kernel(const Nodes& lambda);

}  // namespace dpick
