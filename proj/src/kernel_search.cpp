#include "dpick/kernel_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpick/errors.hpp"

namespace dpick {

KernelSpace::KernelSpace(Nodes lambda, double delta)
    : lambda_(std::move(lambda)), delta_(delta) {
  validate_nodes(lambda_, delta_);
  w1_ = first_weights(lambda_);
  w2_ = second_weights(lambda_, delta_);
  const int n = size();
  d1_inv_sqrt_.resize(n);
  d2_inv_sqrt_.resize(n);
  for (int i = 0; i < n; ++i) {
    d1_inv_sqrt_(i) = 1.0 / std::sqrt(w1_(i, i).real());
    d2_inv_sqrt_(i) = 1.0 / std::sqrt(w2_(i, i).real());
  }
}

namespace {

// Largest eigenvalue of -D^{-1/2} (W o Delta) D^{-1/2}; the certificate
// D + t (W o Delta) stays PSD for t <= 1 / mu when mu > 0.
double blocking_rate(const ComplexMatrix& w, const RealVector& d_inv_sqrt,
                     const ComplexMatrix& delta_g) {
  const ComplexMatrix e = w.cwiseProduct(delta_g);
  const ComplexMatrix s = -(d_inv_sqrt.cast<cplx>().asDiagonal() * e *
                            d_inv_sqrt.cast<cplx>().asDiagonal());
  return max_eigenvalue(HermitianMatrix(s));
}

}  // namespace

HermitianMatrix KernelSpace::retract(const HermitianMatrix& g) const {
  const int n = size();
  ComplexMatrix dg = g.matrix() - ComplexMatrix::Identity(n, n);
  for (int i = 0; i < n; ++i) dg(i, i) = 0.0;
  if (n == 1 || dg.norm() == 0.0) return HermitianMatrix::identity(n);

  double t = 1.0;
  const double mu1 = blocking_rate(w1_, d1_inv_sqrt_, dg);
  const double mu2 = blocking_rate(w2_, d2_inv_sqrt_, dg);
  const double mu0 = max_eigenvalue(HermitianMatrix(ComplexMatrix(-dg)));
  if (mu1 > 0.0) t = std::min(t, 1.0 / mu1);
  if (mu2 > 0.0) t = std::min(t, 1.0 / mu2);
  // g itself must stay strictly positive definite.
  if (mu0 > 0.0) t = std::min(t, (1.0 - 1e-9) / mu0);
  return HermitianMatrix(ComplexMatrix(ComplexMatrix::Identity(n, n) + t * dg));
}

HermitianMatrix KernelSpace::pull_toward(const HermitianMatrix& g, int cycles) const {
  const int n = size();
  ComplexMatrix cur = g.matrix();
  for (int c = 0; c < cycles; ++c) {
    for (const ComplexMatrix* w : {&w1_, &w2_}) {
      const HermitianMatrix cert(w->cwiseProduct(cur));
      if (min_eigenvalue(cert) >= 0.0) continue;
      cur = psd_project(cert).matrix().cwiseQuotient(*w);
      for (int i = 0; i < n; ++i) cur(i, i) = 1.0;
    }
  }
  return HermitianMatrix(cur);
}

HermitianMatrix KernelSpace::random_start(std::mt19937_64& rng) const {
  const int n = size();
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g = ComplexMatrix::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const cplx v(normal(rng), normal(rng));
      g(i, j) = v;
      g(j, i) = std::conj(v);
    }
  }
  return retract(pull_toward(HermitianMatrix(g)));
}

double gram_norm_sq(const Nodes& z, const HermitianMatrix& g) {
  const int n = g.size();
  const auto ed = hermitian_eig(g);
  // g^{-1/2} M^* g M g^{-1/2}, M = diag(z)
  RealVector inv_root(n);
  for (int k = 0; k < n; ++k) inv_root(k) = 1.0 / std::sqrt(std::max(ed.eigenvalues(k), 1e-300));
  const ComplexMatrix g_inv_half =
      ed.eigenvectors * inv_root.cast<cplx>().asDiagonal() * ed.eigenvectors.adjoint();
  ComplexVector zv(n);
  for (int i = 0; i < n; ++i) zv(i) = z[i];
  const ComplexMatrix mgm = zv.conjugate().asDiagonal() * g.matrix() * zv.asDiagonal();
  return max_eigenvalue(HermitianMatrix(ComplexMatrix(g_inv_half * mgm * g_inv_half)));
}

KernelObjective negative_min_eig_objective(const Nodes& z) {
  KernelObjective obj;
  obj.value = [z](const HermitianMatrix& g) { return -min_eigenvalue(pick_matrix(z, g)); };
  obj.gradient = [z](const HermitianMatrix& g) {
    const int n = g.size();
    const auto ed = hermitian_eig(pick_matrix(z, g));
    const ComplexVector v = ed.eigenvectors.col(n - 1);
    ComplexMatrix grad(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const cplx zij = 1.0 - std::conj(z[i]) * z[j];
        grad(i, j) = -(v(i) * std::conj(zij) * std::conj(v(j)));
      }
    }
    return grad;
  };
  return obj;
}

KernelObjective gram_norm_sq_objective(const Nodes& z) {
  KernelObjective obj;
  obj.value = [z](const HermitianMatrix& g) { return gram_norm_sq(z, g); };
  obj.gradient = [z](const HermitianMatrix& g) {
    const int n = g.size();
    const auto ed = hermitian_eig(g);
    RealVector inv_root(n);
    for (int k = 0; k < n; ++k) inv_root(k) = 1.0 / std::sqrt(std::max(ed.eigenvalues(k), 1e-300));
    const ComplexMatrix g_inv_half =
        ed.eigenvectors * inv_root.cast<cplx>().asDiagonal() * ed.eigenvectors.adjoint();
    ComplexVector zv(n);
    for (int i = 0; i < n; ++i) zv(i) = z[i];
    const ComplexMatrix mgm = zv.conjugate().asDiagonal() * g.matrix() * zv.asDiagonal();
    const auto top = hermitian_eig(HermitianMatrix(ComplexMatrix(g_inv_half * mgm * g_inv_half)));
    const double nsq = top.eigenvalues(0);
    // x = g^{-1/2} w has x^* g x = 1; y = M x.
    const ComplexVector x = g_inv_half * top.eigenvectors.col(0);
    const ComplexVector y = zv.asDiagonal() * x;
    return ComplexMatrix(y * y.adjoint() - nsq * x * x.adjoint());
  };
  return obj;
}

AscentResult kernel_ascent(const KernelSpace& space, const KernelObjective& obj,
                           const HermitianMatrix& start, int max_iter) {
  const int n = space.size();
  AscentResult res{space.retract(start), 0.0, 0};
  res.value = obj.value(res.g);
  if (n == 1) return res;

  double step = 0.25;
  int stalls = 0;
  for (int it = 0; it < max_iter; ++it) {
    res.iterations = it + 1;
    ComplexMatrix grad = obj.gradient(res.g);
    for (int i = 0; i < n; ++i) grad(i, i) = 0.0;
    const double gnorm = grad.norm();
    if (!(gnorm > 1e-300)) break;
    grad /= gnorm;

    bool accepted = false;
    while (step > 1e-13) {
      const HermitianMatrix trial(ComplexMatrix(res.g.matrix() + step * grad));
      const HermitianMatrix cand = space.retract(space.pull_toward(trial));
      const double v = obj.value(cand);
      if (v > res.value + 1e-15 * std::max(1.0, std::abs(res.value))) {
        const double gain = v - res.value;
        res.g = cand;
        res.value = v;
        accepted = true;
        step = std::min(1.0, step * 2.0);
        stalls = gain < 1e-13 * std::max(1.0, std::abs(v)) ? stalls + 1 : 0;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || stalls >= 5) break;
  }
  return res;
}

}  // namespace dpick
