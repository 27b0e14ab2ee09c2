#pragma once

// Local search over normalized DP Szego kernels for fixed nodes.
//
// The search space is K = {g Hermitian, g_ii = 1, g > 0,
// C1 o g >= 0, C2 o g >= 0}, which is convex, compact and contains I in
// its relative interior. Iterates are kept inside K by a radial retraction
// toward I whose step length is computed in closed form.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "dpick/kernels.hpp"

namespace dpick {

class KernelSpace {
 public:
  KernelSpace(Nodes lambda, double delta);

  const Nodes& lambda() const { return lambda_; }
  double delta() const { return delta_; }
  int size() const { return static_cast<int>(lambda_.size()); }

  /// Largest t in [0, 1] such that I + t (g - I) lies in K (g must have
  /// unit diagonal); returns that point.
  HermitianMatrix retract(const HermitianMatrix& g) const;

  /// A few cycles of eigenvalue clipping of each certificate followed by
  /// a diagonal reset. Pulls an exterior point toward K without
  /// guaranteeing membership; always follow with retract().
  HermitianMatrix pull_toward(const HermitianMatrix& g, int cycles = 3) const;

  /// Random unit-diagonal Hermitian start mapped into K.
  HermitianMatrix random_start(std::mt19937_64& rng) const;

 private:
  Nodes lambda_;
  double delta_;
  ComplexMatrix w1_;
  ComplexMatrix w2_;
  RealVector d1_inv_sqrt_;
  RealVector d2_inv_sqrt_;
};

/// Smooth-almost-everywhere objective to be maximized over K.
struct KernelObjective {
  std::function<double(const HermitianMatrix&)> value;
  /// Hermitian matrix G with d value = Re sum conj(G_ij) dg_ij.
  std::function<ComplexMatrix(const HermitianMatrix&)> gradient;
};

/// -min_eig([(1 - conj(z_i) z_j) g_ij]).
KernelObjective negative_min_eig_objective(const Nodes& z);

/// Squared norm of diag(z) in the inner product with gramian g, i.e. the
/// largest mu^2 with det(M^* g M - mu^2 g) = 0 for M = diag(z).
KernelObjective gram_norm_sq_objective(const Nodes& z);

/// Squared norm of diag(z) acting on the space with gramian g.
double gram_norm_sq(const Nodes& z, const HermitianMatrix& g);

struct AscentResult {
  HermitianMatrix g;
  double value = 0.0;
  int iterations = 0;
};

AscentResult kernel_ascent(const KernelSpace& space, const KernelObjective& obj,
                           const HermitianMatrix& start, int max_iter = 400);

}  // namespace dpick
