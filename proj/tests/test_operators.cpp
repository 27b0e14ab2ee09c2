#include <doctest.h>

#include "dpick/errors.hpp"
#include "dpick/functions.hpp"
#include "dpick/operators.hpp"
#include "support.hpp"

using namespace dpick;

namespace {

HermitianMatrix normalized2(cplx g12) {
  ComplexMatrix g(2, 2);
  g << 1.0, g12, std::conj(g12), 1.0;
  return HermitianMatrix(g);
}

// Norm of T e_j = l_j e_j from an independent Cholesky factor of the gramian.
double norm_via_cholesky(const Nodes& l, const HermitianMatrix& g) {
  const ComplexMatrix r = g.matrix().llt().matrixU();  // g = R^* R
  ComplexMatrix d = ComplexMatrix::Zero(l.size(), l.size());
  for (std::size_t i = 0; i < l.size(); ++i) d(i, i) = l[i];
  return oracle::max_sv(r * d * r.inverse());
}

}  // namespace

TEST_CASE("dp_membership_general") {
  ComplexMatrix x(2, 2);
  x << 0.5, 0.0, 0.0, -0.5;
  CHECK(dp_membership_general({x, 0.25}).member);

  x << 0.5, 0.9, 0.0, 0.5;
  auto m = dp_membership_general({x, 0.25});
  CHECK_FALSE(m.member);
  // X^* X has trace 1.31 and determinant 0.0625
  const double top = std::sqrt(0.5 * (1.31 + std::sqrt(1.31 * 1.31 - 0.25)));
  CHECK(std::abs(m.norm - top) <= 1e-12);
  CHECK(std::abs(m.norm - 1.1227) <= 1e-4);

  x << 0.5, 0.0, 0.0, 0.1;
  m = dp_membership_general({x, 0.25});
  CHECK_FALSE(m.member);
  CHECK_FALSE(m.spectrum_in_annulus);

  x << 0.5, 0.0, 0.0, 0.0;
  m = dp_membership_general({x, 0.25});
  CHECK_FALSE(m.member);
  CHECK(std::isinf(m.inverse_norm));
}

TEST_CASE("operator_from_kernel and kernel_from_operator") {
  SUBCASE("scalar") {
    const auto g = DPSzegoKernel::verify(HermitianMatrix::identity(1), {0.5}, 0.25);
    const auto t = operator_from_kernel(g);
    CHECK(std::abs(t.norm() - 0.5) <= 1e-15);
    CHECK(std::abs(t.inverse_norm() - 0.5) <= 1e-15);
    const auto back = kernel_from_operator(t);
    CHECK(back.g().matrix() == g.g().matrix());
  }
  SUBCASE("binding kernel for the two-point data") {
    const double w = oracle::w_max(0.5, -0.5, 0.3);
    const Nodes l{0.5, -0.5};
    const auto g = DPSzegoKernel::verify(normalized2(w), l, 0.3);
    const auto t = operator_from_kernel(g);
    CHECK(std::abs(t.inverse_norm() - 1.0) <= 1e-6);
    CHECK(t.norm() < 1.0 - 1e-3);
    CHECK(std::abs(t.norm() - norm_via_cholesky(l, g.g())) <= 1e-12);
    CHECK(kernel_from_operator(t).g().matrix() == g.g().matrix());
  }
  SUBCASE("non-members are rejected") {
    const Nodes l{0.5, -0.5};
    CHECK_THROWS_AS(DPOperator(l, normalized2(0.9), 0.3), NotDPOperator);
  }
  SUBCASE("seeded roundtrips") {
    std::mt19937_64 rng(50);
    int done = 0;
    for (int k = 0; k < 200 && done < 30; ++k) {
      const Nodes l = oracle::nodes(rng, 3, 0.3);
      const HermitianMatrix g(0.15 * oracle::hermitian(rng, 3) + ComplexMatrix::Identity(3, 3));
      if (!dp_kernel_membership(g, l, 0.3).member) continue;
      ++done;
      const auto t = operator_from_kernel(DPSzegoKernel::verify(g, l, 0.3));
      CHECK(kernel_from_operator(t).g().matrix() == g.matrix());
      CHECK((t.basis().adjoint() * t.basis() - g.matrix()).norm() <= 1e-10);
      CHECK(std::abs(t.norm() - norm_via_cholesky(l, g)) <= 1e-9);
      CHECK(std::abs(t.norm() - dp_membership_general({t.matrix(), 0.3}).norm) <= 1e-8);
      std::vector<cplx> vals(l.begin(), l.end());
      CHECK(std::abs(apply_function_norm(t, vals) - t.norm()) <= 1e-8);
    }
    CHECK(done == 30);
  }
}

TEST_CASE("apply_function_norm") {
  const Nodes l{0.5, cplx(0, 0.6), -0.7};
  const auto t = operator_from_kernel(DPSzegoKernel::verify(HermitianMatrix::identity(3), l, 0.3));
  CHECK(std::abs(apply_function_norm(t, {0.1, cplx(0, -0.8), 0.3}) - 0.8) <= 1e-14);
  CHECK_THROWS_AS(apply_function_norm(t, {0.1}), InvalidInput);

  std::mt19937_64 rng(51);
  for (int k = 0; k < 20; ++k) {
    const Nodes l2 = oracle::nodes(rng, 3, 0.3);
    const HermitianMatrix g(0.1 * oracle::hermitian(rng, 3) + ComplexMatrix::Identity(3, 3));
    if (!dp_kernel_membership(g, l2, 0.3).member) continue;
    const auto t2 = operator_from_kernel(DPSzegoKernel::verify(g, l2, 0.3));
    const cplx c(0.3, -0.4);
    CHECK(std::abs(apply_function_norm(t2, {c, c, c}) - 0.5) <= 1e-12);
  }
}

TEST_CASE("apply_function") {
  std::mt19937_64 rng(52);
  const ComplexMatrix x = 0.3 * oracle::gaussian(rng, 3, 3);
  const auto f = parse_function("poly:0.5,1,2", 0.25);
  const auto fx = apply_function(f.f, x);
  REQUIRE(fx.has_value());
  const ComplexMatrix direct = 0.5 * ComplexMatrix::Identity(3, 3) + x + 2.0 * x * x;
  CHECK((*fx - direct).norm() <= 1e-12);

  ComplexMatrix j(2, 2);
  j << 0.5, 1.0, 0.0, 0.5 + 1e-13;
  CHECK_FALSE(apply_function(f.f, j).has_value());
}

TEST_CASE("dp_norm_estimate") {
  SUBCASE("constant function") {
    const auto e = dp_norm_estimate([](cplx) { return cplx(0.3, 0.4); }, 0.25, 50, 3);
    CHECK(e.lower_bound == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("witness is a member and reproduces the bound") {
    const auto f = parse_function("half-sym", 0.25);
    const auto e = dp_norm_estimate(f.f, 0.25, 200, 4);
    CHECK(dp_membership_general({e.witness, 0.25}, 1e-8).member);
    const auto fx = apply_function(f.f, e.witness);
    REQUIRE(fx.has_value());
    CHECK(std::abs(spectral_norm(*fx) - e.lower_bound) <= 1e-9);
    CHECK(e.lower_bound <= 1.0 + 1e-6);
  }
  SUBCASE("same seed, same result") {
    const auto f = parse_function("gn:2", 0.3);
    const auto a = dp_norm_estimate(f.f, 0.3, 100, 9);
    const auto b = dp_norm_estimate(f.f, 0.3, 100, 9);
    CHECK(a.lower_bound == b.lower_bound);
    CHECK(a.witness == b.witness);
  }
}

TEST_CASE("sup_grid") {
  CHECK(std::abs(sup_grid(parse_function("sym", 0.25).f, 0.25) - 1.25) <= 1e-6);
  CHECK(std::abs(sup_grid(parse_function("id", 0.25).f, 0.25) - 1.0) <= 1e-8);
}

TEST_CASE("extremal_operator") {
  SUBCASE("unimodular scalar") {
    const PickProblem p(0.25, {0.5}, {1.0});
    const auto g = DPSzegoKernel::verify(HermitianMatrix::identity(1), {0.5}, 0.25);
    const auto eo = extremal_operator(p, g, p.z());
    CHECK(std::abs(eo.phi_norm - 1.0) <= 1e-15);
    CHECK(std::abs(eo.ratio - 1.0) <= 1e-15);
  }
  SUBCASE("non-singular Pick matrix") {
    const PickProblem p(0.3, {0.5, -0.5}, {0.55, -0.55});
    const auto g = DPSzegoKernel::verify(HermitianMatrix::identity(2), p.lambda(), 0.3);
    CHECK_THROWS_AS(extremal_operator(p, g, p.z()), NotExtremalWitness);
  }
  SUBCASE("two-point data at the extremal radius") {
    const double w = oracle::w_max(0.5, -0.5, 0.3);
    const double s = 0.55 * oracle::n2_symmetric_rstar(0.55, w);
    const PickProblem p(0.3, {0.5, -0.5}, {s, -s});
    const auto g = DPSzegoKernel::verify(normalized2(w), p.lambda(), 0.3);
    const auto eo = extremal_operator(p, g, p.z());
    CHECK(std::abs(eo.phi_norm - 1.0) <= 1e-6);
    CHECK(std::abs(eo.ratio - 1.0) <= 1e-6);
  }
}

TEST_CASE("check_symmetric") {
  const double d = 0.25;
  CHECK(check_symmetric(parse_function("sym", d).f, d) <= 1e-14);
  CHECK(check_symmetric(parse_function("gn:3", d).f, d) <= 1e-12);
  CHECK(check_symmetric(parse_function("id", d).f, d) > 0.5);
  CHECK(std::abs(std::abs(d / 0.9 - 0.9) - 0.6222) <= 1e-4);
}
