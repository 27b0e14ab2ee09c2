#include "dpick/kernels.hpp"

#include <cmath>
#include <utility>

#include "dpick/errors.hpp"

namespace dpick {

namespace {

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

void validate_nodes(const Nodes& lambda, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidInput("delta must lie in (0, 1), got " + std::to_string(delta));
  }
  if (lambda.empty()) throw InvalidInput("at least one node is required");
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    if (!finite(lambda[j])) throw InvalidInput("lambda[" + std::to_string(j) + "] is not finite");
    const double r = std::abs(lambda[j]);
    if (!(r > delta && r < 1.0)) {
      throw InvalidInput("lambda[" + std::to_string(j) + "] lies outside the annulus");
    }
    for (std::size_t i = 0; i < j; ++i) {
      if (std::abs(lambda[i] - lambda[j]) <= 1e-12) {
        throw InvalidInput("nodes " + std::to_string(i) + " and " + std::to_string(j) +
                           " coincide");
      }
    }
  }
}

PickProblem::PickProblem(double delta, Nodes lambda, Nodes z)
    : delta_(delta), lambda_(std::move(lambda)), z_(std::move(z)) {
  validate_nodes(lambda_, delta_);
  if (z_.size() != lambda_.size()) {
    throw InvalidInput("lambda and z have different lengths");
  }
  for (std::size_t j = 0; j < z_.size(); ++j) {
    if (!finite(z_[j])) throw InvalidInput("z[" + std::to_string(j) + "] is not finite");
  }
}

PickProblem PickProblem::scaled(double r) const {
  Nodes z = z_;
  for (auto& v : z) v *= r;
  return PickProblem(delta_, lambda_, std::move(z));
}

HermitianMatrix pick_matrix(const Nodes& values, const HermitianMatrix& g) {
  const int n = g.size();
  if (static_cast<int>(values.size()) != n) {
    throw InvalidInput("pick_matrix: " + std::to_string(values.size()) + " values for a " +
                       std::to_string(n) + "x" + std::to_string(n) + " kernel");
  }
  ComplexMatrix p(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      p(i, j) = (1.0 - std::conj(values[i]) * values[j]) * g(i, j);
    }
  }
  return HermitianMatrix(p);
}

ComplexMatrix first_weights(const Nodes& lambda) {
  const int n = static_cast<int>(lambda.size());
  ComplexMatrix c(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) c(i, j) = 1.0 - std::conj(lambda[i]) * lambda[j];
  }
  return c;
}

ComplexMatrix second_weights(const Nodes& lambda, double delta) {
  const int n = static_cast<int>(lambda.size());
  ComplexMatrix c(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      c(i, j) = 1.0 - (delta / std::conj(lambda[i])) * (delta / lambda[j]);
    }
  }
  return c;
}

CertificatePair dp_certificates(const HermitianMatrix& g, const Nodes& lambda, double delta) {
  if (static_cast<int>(lambda.size()) != g.size()) {
    throw InvalidInput("dp_certificates: node count does not match kernel size");
  }
  return {HermitianMatrix(hadamard(first_weights(lambda), g.matrix())),
          HermitianMatrix(hadamard(second_weights(lambda, delta), g.matrix()))};
}

std::string to_string(FailingCondition c) {
  switch (c) {
    case FailingCondition::none: return "none";
    case FailingCondition::not_pd: return "not_pd";
    case FailingCondition::first: return "first";
    case FailingCondition::second: return "second";
  }
  return "unknown";
}

double pd_threshold(const HermitianMatrix& g) {
  const double trace = g.matrix().diagonal().real().sum();
  return 1e-12 * trace / g.size();
}

MembershipReport dp_kernel_membership(const HermitianMatrix& g, const Nodes& lambda, double delta,
                                      double tol) {
  validate_nodes(lambda, delta);
  const auto certs = dp_certificates(g, lambda, delta);
  MembershipReport r;
  r.min_eig_g = min_eigenvalue(g);
  r.min_eig_cert1 = min_eigenvalue(certs.first);
  r.min_eig_cert2 = min_eigenvalue(certs.second);
  if (!(r.min_eig_g > pd_threshold(g)) || !(r.min_eig_g > 0.0)) {
    r.failing_condition = FailingCondition::not_pd;
  } else if (r.min_eig_cert1 < -tol) {
    r.failing_condition = FailingCondition::first;
  } else if (r.min_eig_cert2 < -tol) {
    r.failing_condition = FailingCondition::second;
  } else {
    r.failing_condition = FailingCondition::none;
  }
  r.member = r.failing_condition == FailingCondition::none;
  return r;
}

DPSzegoKernel::DPSzegoKernel(HermitianMatrix g, Nodes lambda, double delta, CertificatePair certs,
                             MembershipReport report)
    : g_(std::move(g)),
      lambda_(std::move(lambda)),
      delta_(delta),
      certs_(std::move(certs)),
      report_(report) {}

DPSzegoKernel DPSzegoKernel::verify(const HermitianMatrix& g, const Nodes& lambda, double delta,
                                    double tol) {
  const auto report = dp_kernel_membership(g, lambda, delta, tol);
  if (!report.member) {
    throw NotDPKernel("matrix is not a DP Szego kernel for the nodes (failing condition: " +
                      to_string(report.failing_condition) + ")");
  }
  return DPSzegoKernel(g, lambda, delta, dp_certificates(g, lambda, delta), report);
}

NormalizedKernel normalize_kernel(const HermitianMatrix& g) {
  const int n = g.size();
  RealVector cinv(n);
  for (int i = 0; i < n; ++i) {
    const double gii = g(i, i).real();
    if (gii < 0.0) throw InvalidInput("normalize_kernel: negative diagonal entry");
    cinv(i) = gii != 0.0 ? 1.0 / std::sqrt(gii) : 1.0;
  }
  ComplexMatrix h = cinv.cast<cplx>().asDiagonal() * g.matrix() * cinv.cast<cplx>().asDiagonal();
  for (int i = 0; i < n; ++i) {
    if (g(i, i).real() != 0.0) h(i, i) = 1.0;
  }
  return {HermitianMatrix(h), cinv};
}

namespace {

double sarason_ratio(const Nodes& lambda, double delta) {
  double r = 0.0;
  for (const auto& li : lambda) {
    for (const auto& lj : lambda) {
      const double p = std::abs(li) * std::abs(lj);
      r = std::max(r, std::max(p, delta * delta / p));
    }
  }
  return r;
}

}  // namespace

int sarason_truncation(const Nodes& lambda, double rho, double delta, double tail_tol) {
  if (!(rho > 0.0)) throw InvalidInput("sarason_kernel: rho must be positive");
  if (!(tail_tol > 0.0)) throw InvalidInput("sarason_kernel: tail tolerance must be positive");
  validate_nodes(lambda, delta);
  const double r = sarason_ratio(lambda, delta);
  const double front = (1.0 + 1.0 / rho) / (1.0 - r);
  // front * r^(M+1) < tail_tol
  int m = 0;
  double rp = r;
  while (front * rp >= tail_tol) {
    rp *= r;
    ++m;
    if (m > 100000) throw InvalidInput("sarason_kernel: truncation order does not converge");
  }
  return m;
}

HermitianMatrix sarason_partial_sum(const Nodes& lambda, double rho, double delta, int order) {
  if (!(rho > 0.0)) throw InvalidInput("sarason_kernel: rho must be positive");
  validate_nodes(lambda, delta);
  const int n = static_cast<int>(lambda.size());
  ComplexMatrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const cplx w = std::conj(lambda[i]) * lambda[j];
      const cplx winv = delta * delta / w;
      cplx sum = 1.0 / (rho + 1.0);
      cplx wp = 1.0;
      cplx wq = 1.0;
      double d2m = 1.0;
      for (int m = 1; m <= order; ++m) {
        wp *= w;
        wq *= winv;
        d2m *= delta * delta;
        sum += wp / (rho + d2m);
        // (conj(l_i) l_j)^(-m) / (rho + delta^(-2m)) = (delta^2 / w)^m / (rho delta^(2m) + 1)
        sum += wq / (rho * d2m + 1.0);
      }
      g(i, j) = sum;
    }
  }
  return HermitianMatrix(g);
}

HermitianMatrix sarason_kernel(const Nodes& lambda, double rho, double delta, double tail_tol) {
  return sarason_partial_sum(lambda, rho, delta,
                             sarason_truncation(lambda, rho, delta, tail_tol));
}

HermitianMatrix szego_kernel(const Nodes& lambda) {
  const int n = static_cast<int>(lambda.size());
  if (n == 0) throw InvalidInput("szego_kernel: no nodes");
  for (const auto& l : lambda) {
    if (!finite(l) || !(std::abs(l) < 1.0)) throw InvalidInput("szego_kernel: node outside the disc");
  }
  ComplexMatrix s(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) s(i, j) = 1.0 / (1.0 - std::conj(lambda[i]) * lambda[j]);
  }
  return HermitianMatrix(s);
}

}  // namespace dpick
