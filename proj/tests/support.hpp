#pragma once

// Test-side oracles. Nothing here calls into the solver code paths under
// test: eigenvalues come from Eigen's own solver, the n = 2 decisions from
// hand-derived 2x2 determinant conditions.

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "dpick/kernels.hpp"

namespace oracle {

using dpick::cplx;
using dpick::ComplexMatrix;
using dpick::Nodes;

inline Eigen::VectorXd eigenvalues(const ComplexMatrix& h) {
  const ComplexMatrix sym = 0.5 * (h + h.adjoint());
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(sym, Eigen::EigenvaluesOnly).eigenvalues();
}

inline double min_eig(const ComplexMatrix& h) { return eigenvalues(h).minCoeff(); }

inline double max_sv(const ComplexMatrix& m) {
  return Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()(0);
}

// sqrt((1 - |v1|^2)(1 - |v2|^2)) / |1 - conj(v1) v2|
inline double rho(cplx v1, cplx v2) {
  return std::sqrt((1.0 - std::norm(v1)) * (1.0 - std::norm(v2))) /
         std::abs(1.0 - std::conj(v1) * v2);
}

// Largest |g12| of a normalized 2-point DP kernel: each certificate is
// [[a, c g12], [conj(c g12), b]] and is PSD iff |c|^2 |g12|^2 <= ab.
inline double w_max(cplx l1, cplx l2, double delta) {
  return std::min(rho(l1, l2), rho(delta / l1, delta / l2));
}

// Two-point problem is solvable iff the Pick matrix is PSD for every
// normalized kernel, i.e. |z_j| <= 1 and rho(z) >= w_max.
inline bool n2_solvable(cplx l1, cplx l2, cplx z1, cplx z2, double delta) {
  if (std::abs(z1) > 1.0 || std::abs(z2) > 1.0) return false;
  return rho(z1, z2) >= w_max(l1, l2, delta);
}

// Extremal radius for real symmetric data l = (c, -c), z = (s, -s):
// rho(r z) = (1 - r^2 s^2) / (1 + r^2 s^2) = w  =>  r = sqrt((1 - w)/(1 + w)) / s.
inline double n2_symmetric_rstar(double s, double w) { return std::sqrt((1.0 - w) / (1.0 + w)) / s; }

inline cplx node(std::mt19937_64& rng, double delta) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = delta + (1.0 - delta) * (0.02 + 0.96 * u(rng));
  return std::polar(r, 2.0 * M_PI * u(rng));
}

inline Nodes nodes(std::mt19937_64& rng, int n, double delta, double min_gap = 0.05) {
  Nodes out;
  while (static_cast<int>(out.size()) < n) {
    const cplx c = node(rng, delta);
    bool ok = true;
    for (const auto& o : out) ok = ok && std::abs(o - c) >= min_gap;
    if (ok) out.push_back(c);
  }
  return out;
}

inline cplx in_disc(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(radius * u(rng), 2.0 * M_PI * u(rng));
}

inline ComplexMatrix gaussian(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g;
  ComplexMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = {g(rng), g(rng)};
  return m;
}

inline ComplexMatrix hermitian(std::mt19937_64& rng, int n) {
  const ComplexMatrix m = gaussian(rng, n, n);
  return 0.5 * (m + m.adjoint());
}

inline ComplexMatrix unitary(std::mt19937_64& rng, int n) {
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian(rng, n, n));
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

}  // namespace oracle
