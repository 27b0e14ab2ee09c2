#include "dpick/operators.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "dpick/errors.hpp"
#include "dpick/kernel_search.hpp"

namespace dpick {

namespace {

ComplexVector as_vector(const std::vector<cplx>& v) {
  ComplexVector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

// E diag(values) E^{-1}
ComplexMatrix congruent_diagonal(const ComplexMatrix& e, const ComplexVector& values) {
  Eigen::PartialPivLU<ComplexMatrix> lu(e);
  return e * values.asDiagonal() * lu.inverse();
}

}  // namespace

DPOperator::DPOperator(Nodes eigenvalues, HermitianMatrix gramian, double delta, double tol)
    : eigenvalues_(std::move(eigenvalues)), gramian_(std::move(gramian)), delta_(delta) {
  try {
    validate_nodes(eigenvalues_, delta_);
  } catch (const InvalidInput& e) {
    throw NotDPOperator(std::string("eigenvalues: ") + e.what());
  }
  if (gramian_.size() != size()) throw NotDPOperator("gramian size does not match eigenvalues");
  try {
    basis_ = gramian_factor(gramian_);
  } catch (const NotPositiveDefinite& e) {
    throw NotDPOperator(std::string("gramian: ") + e.what());
  }
  const ComplexVector lam = as_vector(eigenvalues_);
  const ComplexVector inv = ComplexVector(lam.cwiseInverse()) * delta_;
  norm_ = spectral_norm(congruent_diagonal(basis_, lam));
  inverse_norm_ = spectral_norm(congruent_diagonal(basis_, inv));
  if (!(norm_ <= 1.0 + tol) || !(inverse_norm_ <= 1.0 + tol)) {
    std::ostringstream msg;
    msg << "not a DP operator: ||T|| = " << norm_ << ", ||delta T^-1|| = " << inverse_norm_;
    throw NotDPOperator(msg.str());
  }
}

ComplexMatrix DPOperator::matrix() const {
  return congruent_diagonal(basis_, as_vector(eigenvalues_));
}

DPOperator operator_from_kernel(const DPSzegoKernel& g) {
  try {
    return DPOperator(g.lambda(), g.g(), g.delta());
  } catch (const NotDPOperator& e) {
    throw NotDPKernel(e.what());
  }
}

DPSzegoKernel kernel_from_operator(const DPOperator& t) {
  if (!(t.norm() <= 1.0 + kOperatorTol) || !(t.inverse_norm() <= 1.0 + kOperatorTol)) {
    throw NotDPOperator("operator norms exceed 1");
  }
  try {
    return DPSzegoKernel::verify(t.gramian(), t.eigenvalues(), t.delta());
  } catch (const NotDPKernel& e) {
    throw NotDPOperator(e.what());
  }
}

OperatorMembership dp_membership_general(const GeneralOperator& x, double tol) {
  const ComplexMatrix& m = x.matrix;
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidInput("dp_membership_general: matrix must be square and nonempty");
  }
  OperatorMembership out;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& s = svd.singularValues();
  out.norm = s(0);
  const double smin = s(s.size() - 1);
  out.inverse_norm = smin > 0.0 ? x.delta / smin : std::numeric_limits<double>::infinity();

  Eigen::ComplexEigenSolver<ComplexMatrix> es(m, false);
  out.spectrum_in_annulus = true;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const cplx mu = es.eigenvalues()(i);
    out.eigenvalues.push_back(mu);
    const double r = std::abs(mu);
    if (!(r > x.delta && r < 1.0)) out.spectrum_in_annulus = false;
  }
  out.member = out.norm <= 1.0 + tol && out.inverse_norm <= 1.0 + tol && out.spectrum_in_annulus;
  return out;
}

double apply_function_norm(const DPOperator& t, const std::vector<cplx>& values) {
  if (static_cast<int>(values.size()) != t.size()) {
    throw InvalidInput("apply_function_norm: expected " + std::to_string(t.size()) + " values, got " +
                       std::to_string(values.size()));
  }
  return spectral_norm(congruent_diagonal(t.basis(), as_vector(values)));
}

std::optional<ComplexMatrix> apply_function(const ScalarFunction& f, const ComplexMatrix& x) {
  Eigen::ComplexEigenSolver<ComplexMatrix> es(x);
  if (es.info() != Eigen::Success) return std::nullopt;
  const ComplexMatrix& v = es.eigenvectors();
  Eigen::JacobiSVD<ComplexMatrix> svd(v);
  const auto& s = svd.singularValues();
  const double cond = s(0) / s(s.size() - 1);
  if (!(cond <= kEigenvectorCondLimit)) return std::nullopt;
  ComplexVector fv(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) fv(i) = f(es.eigenvalues()(i));
  Eigen::PartialPivLU<ComplexMatrix> lu(v);
  ComplexMatrix out = v * fv.asDiagonal() * lu.inverse();
  if (!all_finite(out)) return std::nullopt;
  return out;
}

namespace {

struct Candidate {
  double value = -1.0;
  ComplexMatrix x;
};

class Sampler {
 public:
  Sampler(const ScalarFunction& f, double delta, std::uint64_t seed)
      : f_(f), delta_(delta), rng_(seed) {}

  // ||f(X)|| for members X, nullopt otherwise.
  std::optional<double> value(const ComplexMatrix& x) {
    ++evaluations;
    if (!dp_membership_general({x, delta_}).member) return std::nullopt;
    const auto fx = apply_function(f_, x);
    if (!fx) return std::nullopt;
    return spectral_norm(*fx);
  }

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }

  // Radius in (delta, 1), a third of the time pushed toward a boundary circle.
  double radius() {
    const double kind = uniform(0.0, 1.0);
    const double gap = std::pow(10.0, -uniform(1.0, 9.0));
    if (kind < 1.0 / 6.0) return 1.0 - gap;
    if (kind < 1.0 / 3.0) return delta_ * (1.0 + gap);
    return uniform(delta_, 1.0);
  }

  ComplexMatrix random_unitary(int n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix g(n, n);
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) g(i, j) = cplx(normal(rng_), normal(rng_));
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    return qr.householderQ();
  }

  // Kernel-derived diagonalizable member with random nodes.
  std::optional<Candidate> kernel_sample() {
    const int n = 2 + static_cast<int>(uniform(0.0, 5.0));
    Nodes nodes;
    while (static_cast<int>(nodes.size()) < n) {
      const cplx l = std::polar(radius(), uniform(0.0, 2.0 * M_PI));
      const bool apart = std::all_of(nodes.begin(), nodes.end(),
                                     [&](cplx m) { return std::abs(m - l) > 1e-6; });
      if (apart) nodes.push_back(l);
    }
    const KernelSpace space(nodes, delta_);
    const HermitianMatrix g = space.random_start(rng_);
    try {
      const DPOperator t(nodes, g, delta_);
      const ComplexMatrix x = t.matrix();
      ++evaluations;
      if (!dp_membership_general({x, delta_}).member) return std::nullopt;
      std::vector<cplx> fv;
      for (const auto& l : nodes) fv.push_back(f_(l));
      return Candidate{apply_function_norm(t, fv), x};
    } catch (const NotDPOperator&) {
      return std::nullopt;
    }
  }

  // U diag(s) V^* with singular values in [delta, 1].
  std::optional<Candidate> general_sample(int n) {
    RealVector s(n);
    for (int i = 0; i < n; ++i) {
      const double kind = uniform(0.0, 1.0);
      s(i) = kind < 0.25 ? 1.0 : kind < 0.5 ? delta_ : uniform(delta_, 1.0);
    }
    const ComplexMatrix x = random_unitary(n) * s.cast<cplx>().asDiagonal() * random_unitary(n).adjoint();
    const auto v = value(x);
    if (!v) return std::nullopt;
    return Candidate{*v, x};
  }

  // Singular values clipped into [delta, 1]: the nearest matrix obeying
  // both norm bounds.
  ComplexMatrix clip(const ComplexMatrix& m) const {
    Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RealVector s = svd.singularValues().cwiseMax(delta_).cwiseMin(1.0);
    return svd.matrixU() * s.cast<cplx>().asDiagonal() * svd.matrixV().adjoint();
  }

  Candidate refine(const Candidate& start, int max_evals);

  int evaluations = 0;

 private:
  const ScalarFunction& f_;
  double delta_;
  std::mt19937_64 rng_;
};

Eigen::VectorXd to_params(const ComplexMatrix& x) {
  Eigen::VectorXd p(2 * x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    p(2 * i) = x(i).real();
    p(2 * i + 1) = x(i).imag();
  }
  return p;
}

ComplexMatrix from_params(const Eigen::VectorXd& p, Eigen::Index n) {
  ComplexMatrix x(n, n);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = cplx(p(2 * i), p(2 * i + 1));
  return x;
}

// Nelder-Mead (minimizing -||f(X)||) over matrix entries, with restarts
// from the best vertex at a smaller scale.
Candidate Sampler::refine(const Candidate& start, int max_evals) {
  const Eigen::Index n = start.x.rows();
  const Eigen::Index dim = 2 * n * n;
  Candidate best = start;
  auto cost = [&](const Eigen::VectorXd& p, ComplexMatrix* xout) {
    const ComplexMatrix x = clip(from_params(p, n));
    if (xout) *xout = x;
    const auto v = value(x);
    return v ? -*v : std::numeric_limits<double>::infinity();
  };

  int used = 0;
  double scale = 0.1;
  while (used < max_evals && scale > 1e-7) {
    std::vector<Eigen::VectorXd> simplex(dim + 1, to_params(best.x));
    std::vector<double> fval(dim + 1);
    for (Eigen::Index k = 0; k < dim; ++k) simplex[k + 1](k) += scale;
    for (Eigen::Index k = 0; k <= dim; ++k) fval[k] = cost(simplex[k], nullptr);
    used += static_cast<int>(dim + 1);

    const int round_budget = std::min(max_evals - used, static_cast<int>(200 * dim));
    int round_used = 0;
    std::vector<std::size_t> order(dim + 1);
    while (round_used < round_budget) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t i, std::size_t j) { return fval[i] < fval[j]; });
      const std::size_t lo = order.front();
      const std::size_t hi = order.back();
      const std::size_t second = order[order.size() - 2];
      if (std::isfinite(fval[hi]) && fval[hi] - fval[lo] < 1e-13) break;

      Eigen::VectorXd centroid = Eigen::VectorXd::Zero(dim);
      for (std::size_t k = 0; k + 1 < order.size(); ++k) centroid += simplex[order[k]];
      centroid /= static_cast<double>(dim);

      const Eigen::VectorXd refl = centroid + (centroid - simplex[hi]);
      const double fr = cost(refl, nullptr);
      ++round_used;
      if (fr < fval[lo]) {
        const Eigen::VectorXd exp = centroid + 2.0 * (centroid - simplex[hi]);
        const double fe = cost(exp, nullptr);
        ++round_used;
        if (fe < fr) {
          simplex[hi] = exp;
          fval[hi] = fe;
        } else {
          simplex[hi] = refl;
          fval[hi] = fr;
        }
      } else if (fr < fval[second]) {
        simplex[hi] = refl;
        fval[hi] = fr;
      } else {
        const Eigen::VectorXd con = centroid + 0.5 * (simplex[hi] - centroid);
        const double fc = cost(con, nullptr);
        ++round_used;
        if (fc < fval[hi]) {
          simplex[hi] = con;
          fval[hi] = fc;
        } else {
          for (std::size_t k = 0; k <= static_cast<std::size_t>(dim); ++k) {
            if (k == lo) continue;
            simplex[k] = simplex[lo] + 0.5 * (simplex[k] - simplex[lo]);
            fval[k] = cost(simplex[k], nullptr);
          }
          round_used += static_cast<int>(dim);
        }
      }
    }
    used += round_used;

    const auto it = std::min_element(fval.begin(), fval.end());
    ComplexMatrix x;
    const double c = cost(simplex[static_cast<std::size_t>(it - fval.begin())], &x);
    ++used;
    if (std::isfinite(c) && -c > best.value) best = {-c, x};
    scale *= 0.1;
  }
  return best;
}

}  // namespace

DPNormEstimate dp_norm_estimate(const ScalarFunction& f, double delta, int budget,
                                std::uint64_t seed) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("delta must lie in (0, 1)");
  if (budget < 1) throw InvalidInput("budget must be positive");
  Sampler sampler(f, delta, seed);
  DPNormEstimate out;
  std::vector<Candidate> pool;

  for (int k = 0; k < budget; ++k) {
    std::optional<Candidate> c;
    switch (k % 5) {
      case 0:
      case 1: c = sampler.kernel_sample(); break;
      case 2:
      case 3: c = sampler.general_sample(2); break;
      default: c = sampler.general_sample(4); break;
    }
    if (c) {
      ++out.samples;
      pool.push_back(std::move(*c));
    } else {
      ++out.rejected;
    }
  }

  std::stable_sort(pool.begin(), pool.end(),
                   [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
  Candidate best = pool.empty() ? Candidate{} : pool.front();
  const std::size_t refine_count = std::min<std::size_t>(5, pool.size());
  for (std::size_t i = 0; i < refine_count; ++i) {
    const Candidate c = sampler.refine(pool[i], budget);
    if (c.value > best.value) best = c;
  }

  out.lower_bound = std::max(0.0, best.value);
  out.witness = best.x;
  out.evaluations = sampler.evaluations;
  return out;
}

double sup_grid(const ScalarFunction& f, double delta, int radial, int angular) {
  if (radial < 2 || angular < 1) throw InvalidInput("sup_grid: grid too small");
  std::vector<double> radii;
  for (int i = 0; i < radial; ++i) {
    radii.push_back(delta + (1.0 - delta) * static_cast<double>(i) / (radial - 1));
  }
  radii.front() = delta + 1e-9;
  radii.back() = 1.0 - 1e-9;
  for (int j = 1; j <= 8; ++j) {
    radii.push_back(1.0 - std::pow(10.0, -j));
    radii.push_back(delta + std::pow(10.0, -j) * (1.0 - delta));
  }
  double sup = 0.0;
  for (const double r : radii) {
    for (int k = 0; k < angular; ++k) {
      sup = std::max(sup, std::abs(f(std::polar(r, 2.0 * M_PI * k / angular))));
    }
  }
  return sup;
}

ExtremalOperator extremal_operator(const PickProblem& p, const DPSzegoKernel& g,
                                   const std::vector<cplx>& values) {
  const int n = p.size();
  if (g.size() != n || static_cast<int>(values.size()) != n) {
    throw InvalidInput("extremal_operator: kernel, problem and values sizes differ");
  }
  const auto ed = hermitian_eig(pick_matrix(values, g.g()));
  const double m = ed.eigenvalues(n - 1);
  if (std::abs(m) > kNullTol * std::max(1.0, std::abs(ed.eigenvalues(0)))) {
    std::ostringstream msg;
    msg << "pick matrix is not singular (smallest eigenvalue " << m << ")";
    throw NotExtremalWitness(msg.str());
  }
  const DPOperator t = operator_from_kernel(g);
  const ComplexVector xi = ed.eigenvectors.col(n - 1);
  const ComplexVector x = t.basis() * xi;
  const ComplexMatrix phi = congruent_diagonal(t.basis(), as_vector(values));
  const double ratio = (phi * x).norm() / x.norm();
  return {t, x, xi, apply_function_norm(t, values), ratio};
}

double check_symmetric(const ScalarFunction& f, double delta, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rad(delta, 1.0);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double r = rad(rng);
    const cplx l = std::polar(r > delta ? r : 0.5 * (1.0 + delta), ang(rng));
    worst = std::max(worst, std::abs(f(delta / l) - f(l)));
  }
  return worst;
}

}  // namespace dpick
