#include <doctest.h>

#include <cmath>

#include <boost/math/special_functions/binomial.hpp>

#include "gibbsk/error.hpp"
#include "gibbsk/functionals.hpp"
#include "gibbsk/quantization.hpp"
#include "gibbsk/rng.hpp"

using namespace gibbsk;

namespace {

const ReferenceData kRef = ReferenceData::standard(1, 48, 96);

std::vector<Vec3> random_points(std::uint64_t seed, int n) {
  const Philox4x32 gen(seed);
  std::vector<Vec3> out;
  for (int i = 0; i < n; ++i) {
    const auto u = gen.uniform2(static_cast<std::uint64_t>(i), 0);
    out.push_back(from_angles(std::acos(1 - 2 * u[0]), 2 * std::numbers::pi * u[1]));
  }
  return out;
}

}  // namespace

TEST_SUITE("sections") {
  TEST_CASE("dimension and binomial partition of unity") {
    for (auto [m, k] : {std::pair{1, 1}, std::pair{2, 3}, std::pair{3, 2}}) {
      const SectionBasis basis = section_basis(m, k);
      const int d = m * k;
      CHECK(basis.dimension() == d + 1);
      const Eigen::VectorXcd v = basis.evaluate(from_angles(1.2, 0.4));
      double s = 0;
      for (int j = 0; j <= d; ++j) s += boost::math::binomial_coefficient<double>(d, j) * std::norm(v[j]);
      CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
    }
  }

  TEST_CASE("singular transforms are rejected") {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(3, 3);
    a.col(2) = a.col(1);
    CHECK_THROWS_AS(SectionBasis(1, 2, a), InputError);
    CHECK_THROWS_AS(SectionBasis(1, 2, Eigen::MatrixXcd::Identity(2, 2)), InputError);
  }
}

TEST_SUITE("gram") {
  TEST_CASE("monomial Gram matrix at phi = 0 is diag(j!(d-j)!/(d+1)!)") {
    const ReferenceData ref = ReferenceData::standard(2, 48, 96);
    const SectionBasis basis = section_basis(2, 2);
    const GramMatrix h = gram_matrix(Potential::zero(), Density::uniform(), basis, ref);
    const int d = 4;
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j) {
        const double expect = i == j ? 1.0 / ((d + 1) * boost::math::binomial_coefficient<double>(d, j)) : 0.0;
        CHECK(std::abs(h.entries(i, j) - expect) < 1e-14);
      }
  }

  TEST_CASE("Gram matrices are Hermitian positive definite") {
    const Potential phi = random_potential(4, kRef);
    const GramMatrix h = gram_matrix(phi, Density::uniform(), section_basis(1, 4), kRef);
    CHECK((h.entries - h.entries.adjoint()).norm() == 0.0);
    CHECK(h.entries.selfadjointView<Eigen::Lower>().eigenvalues().minCoeff() > 0.0);
  }

  TEST_CASE("hermitian_log_det refuses indefinite input") {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Identity(2, 2);
    a(1, 1) = -1.0;
    CHECK_THROWS_AS(hermitian_log_det(a), NumericError);
    CHECK(hermitian_log_det(4.0 * Eigen::MatrixXcd::Identity(3, 3)) == doctest::Approx(3 * std::log(4.0)));
  }

  TEST_CASE("normalized basis: identity Gram matrix and E_k(0) = 0") {
    for (int k : {1, 3, 6}) {
      const SectionBasis basis = normalized_basis(1, k, kRef);
      const GramMatrix h = gram_matrix(Potential::zero(), Density::uniform(), basis, kRef);
      CHECK((h.entries - Eigen::MatrixXcd::Identity(k + 1, k + 1)).norm() < 1e-12);
      CHECK(std::abs(energy_k(Potential::zero(), basis, kRef)) < 1e-13);
    }
  }

  TEST_CASE("E_k moves by c under phi + c") {
    const SectionBasis basis = normalized_basis(1, 4, kRef);
    const Potential phi = random_potential(9, kRef);
    CHECK(energy_k(phi.shifted(0.3), basis, kRef) == doctest::Approx(energy_k(phi, basis, kRef) + 0.3).epsilon(1e-12));
  }

  TEST_CASE("quantized energy approaches E") {
    const Potential phi = random_potential(2, kRef);
    const double e = energy(phi, kRef);
    double prev = INFINITY;
    for (int k : {2, 4, 8, 16}) {
      const double err = std::abs(energy_k(phi, normalized_basis(1, k, kRef), kRef) - e);
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 1e-2);
  }
}

TEST_SUITE("slater") {
  TEST_CASE("two points: |det S|^2 is the chordal half-distance") {
    const SectionBasis basis = section_basis(1, 1);
    const std::vector<Vec3> pts = random_points(3, 2);
    const double expect = std::log(chordal_half(pts[0], pts[1]));
    CHECK(slater_log_det(pts, Potential::zero(), basis) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(slater_log_det_product(pts, basis) == doctest::Approx(expect).epsilon(1e-12));
  }

  TEST_CASE("product formula agrees with the LU determinant") {
    for (auto [m, k] : {std::pair{1, 3}, std::pair{2, 2}, std::pair{3, 3}}) {
      const SectionBasis basis = section_basis(m, k);
      const std::vector<Vec3> pts = random_points(static_cast<std::uint64_t>(10 * m + k), basis.dimension());
      CHECK(slater_log_det(pts, Potential::zero(), basis) ==
            doctest::Approx(slater_log_det_product(pts, basis)).epsilon(1e-10));
    }
  }

  TEST_CASE("product formula is permutation invariant to the last bit") {
    const SectionBasis basis = section_basis(1, 4);
    std::vector<Vec3> pts = random_points(17, 5);
    const double a = slater_log_det_product(pts, basis);
    std::reverse(pts.begin(), pts.end());
    std::swap(pts[1], pts[3]);
    CHECK(slater_log_det_product(pts, basis) == a);
  }

  TEST_CASE("coincident points give -inf") {
    const SectionBasis basis = section_basis(1, 2);
    std::vector<Vec3> pts = random_points(5, 3);
    pts[2] = pts[0];
    CHECK(std::isinf(slater_log_det(pts, Potential::zero(), basis)));
    CHECK(std::isinf(slater_log_det_product(pts, basis)));
  }

  TEST_CASE("potential weight e^{-k phi} per point") {
    const SectionBasis basis = section_basis(1, 2);
    const std::vector<Vec3> pts = random_points(8, 3);
    const Potential phi = random_potential(1, kRef);
    double w = 0;
    for (const Vec3& x : pts) w += phi.value(x);
    CHECK(slater_log_det(pts, phi, basis) ==
          doctest::Approx(slater_log_det(pts, Potential::zero(), basis) - 2 * w).epsilon(1e-12));
  }
}

TEST_SUITE("determinant identity") {
  TEST_CASE("tensor quadrature: ||det S||^2 = N! det H") {
    // the identity holds for any discrete measure; N = 4 runs on a coarser rule
    for (auto [k, polar] : {std::pair{1, 16}, std::pair{2, 16}, std::pair{3, 8}}) {
      const SphereQuadrature q = build_quadrature(polar, 2 * polar, kRef.model);
      const SectionBasis basis = section_basis(1, k);
      for (std::uint64_t s : {0, 1}) {
        const Potential phi = s == 0 ? Potential::zero() : random_potential(s, kRef);
        const DetIdentityCheck check = det_identity_tensor(phi, basis, q, kRef);
        CHECK(check.relative_error < 1e-10);
        const ReferenceData on_q{kRef.model, q, kRef.volume};
        const double det_h = std::exp(hermitian_log_det(gram_matrix(phi, Density::uniform(), basis, on_q).entries));
        CHECK(check.rhs == doctest::Approx(std::tgamma(k + 2.0) * det_h).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("tensor mode refuses N > 4") {
    const SphereQuadrature q = build_quadrature(4, 8, kRef.model);
    CHECK_THROWS_AS(det_identity_tensor(Potential::zero(), section_basis(1, 4), q, kRef), InputError);
  }

  TEST_CASE("Monte-Carlo mode agrees within its error bar") {
    const Potential phi = random_potential(6, kRef);
    const DetIdentityCheck check = det_identity_mc(phi, section_basis(1, 4), kRef, 200000, 3);
    CHECK(std::abs(check.lhs - check.rhs) < 4 * check.standard_error);
  }

  TEST_CASE("approximate Ding at phi = 0 with the normalized basis vanishes") {
    const SectionBasis basis = normalized_basis(1, 3, kRef);
    CHECK(std::abs(approx_ding(Potential::zero(), 0.5, Density::uniform(), basis, kRef)) < 1e-12);
  }
}
