#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "gibbsk/error.hpp"
#include "gibbsk/functionals.hpp"

using namespace gibbsk;
using std::numbers::pi;

namespace {

const ReferenceData kRef = ReferenceData::standard(1, 48, 96);

Potential zonal(int l, double a, int lmax = 4) {
  SphericalExpansion c(lmax);
  c.set_coefficient(l, 0, a);
  return Potential(c);
}

// (1/2) ∫_{-1}^{1} h(t) dt, the ω/V average of a zonal function of t = cos θ
template <class F>
double zonal_average(F h) {
  return 0.5 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(h, -1.0, 1.0, 12, 1e-14);
}

}  // namespace

TEST_SUITE("functionals") {
  TEST_CASE("E and J of a zonal harmonic in closed form") {
    // ∫ φ ω_φ = (1/V) ∫ φ Δφ ω = -l(l+1) a² / 4π on the unit sphere
    for (int l : {1, 2, 3}) {
      const double a = 0.05;
      const Potential phi = zonal(l, a);
      const double e = -l * (l + 1) * a * a / (8 * pi);
      CHECK(energy(phi, kRef) == doctest::Approx(e).epsilon(1e-12));
      CHECK(j_functional(phi, kRef) == doctest::Approx(-e).epsilon(1e-12));
    }
  }

  TEST_CASE("entropy of a degree-one potential against a 1-D integral") {
    const double a = 0.5, c = std::sqrt(3 / (4 * pi));
    const Potential phi = zonal(1, a);
    const double exact = zonal_average([&](double t) {
      const double u = 1 - 2 * a * c * t;
      return u * std::log(u);
    });
    CHECK(entropy(phi, Density::uniform(), kRef) == doctest::Approx(exact).epsilon(1e-10));
  }

  TEST_CASE("Ding functional of a degree-one potential in closed form") {
    const double a = 0.3, c = std::sqrt(3 / (4 * pi));
    const Potential phi = zonal(1, a);
    for (double g : {0.2, 1.0, 2.0}) {
      const double x = g * a * c;
      const double log_int = std::log(std::sinh(x) / x);
      CHECK(log_exp_integral(phi, g, Density::uniform(), kRef) == doctest::Approx(log_int).epsilon(1e-11));
      CHECK(ding(phi, g, Density::uniform(), kRef) ==
            doctest::Approx(-energy(phi, kRef) - log_int / g).epsilon(1e-11));
    }
  }

  TEST_CASE("phi = 0 makes every functional vanish") {
    const Potential zero = Potential::zero(4);
    CHECK(energy(zero, kRef) == 0.0);
    CHECK(j_functional(zero, kRef) == 0.0);
    CHECK(std::abs(entropy(zero, Density::uniform(), kRef)) < 1e-15);
    CHECK(std::abs(ding(zero, 0.5, Density::uniform(), kRef)) < 1e-13);
  }

  TEST_CASE("constant shifts: E moves by c, J, M and D are invariant") {
    const Potential phi = random_potential(3, kRef);
    const Potential psi = phi.shifted(0.7);
    CHECK(energy(psi, kRef) == doctest::Approx(energy(phi, kRef) + 0.7).epsilon(1e-12));
    CHECK(j_functional(psi, kRef) == doctest::Approx(j_functional(phi, kRef)).epsilon(1e-9));
    CHECK(ding(psi, 0.5, Density::uniform(), kRef) ==
          doctest::Approx(ding(phi, 0.5, Density::uniform(), kRef)).epsilon(1e-9));
    const OneOneForm eta = OneOneForm::zero();
    CHECK(mabuchi(psi, Density::uniform(), eta, kRef).total ==
          doctest::Approx(mabuchi(phi, Density::uniform(), eta, kRef).total).epsilon(1e-9));
  }

  TEST_CASE("J_chi is linear in chi and J_omega equals J in dimension one") {
    const Potential phi = random_potential(8, kRef);
    const OneOneForm omega = OneOneForm::kahler(kRef.model);
    SphericalExpansion g(2);
    g.set_coefficient(0, 0, 0.4);
    g.set_coefficient(2, 1, 0.2);
    const OneOneForm chi(g, kRef.quad.integrate([&](const Vec3& x) { return g.evaluate(x); }));
    CHECK(j_chi(phi, 2.0 * chi + omega, kRef) ==
          doctest::Approx(2 * j_chi(phi, chi, kRef) + j_chi(phi, omega, kRef)).epsilon(1e-12));
    CHECK(j_chi(phi, omega, kRef) == doctest::Approx(j_functional(phi, kRef)).epsilon(1e-12));
    CHECK(j_omega_closed_form(phi, kRef) == doctest::Approx(j_functional(phi, kRef)).epsilon(1e-10));
  }

  TEST_CASE("J is nonnegative on random potentials") {
    for (std::uint64_t s = 0; s < 20; ++s) CHECK(j_functional(random_potential(s, kRef), kRef) >= 0.0);
  }

  TEST_CASE("Legendre duality: lower bounds never exceed the entropy") {
    const Potential phi = random_potential(21, kRef);
    const double ent = entropy(phi, Density::uniform(), kRef);
    for (int i = 0; i < 10; ++i) {
      const double lb = entropy_lower_bound(
          phi, Density::uniform(), [&](const Vec3& x) { return std::sin(i * x[0]) + 0.3 * i * x[2]; }, kRef);
      CHECK(lb <= ent + 1e-12);
    }
    const double best = entropy_lower_bound(
        phi, Density::uniform(), entropy_optimal_test_function(phi, Density::uniform(), kRef), kRef);
    CHECK(best == doctest::Approx(ent).epsilon(1e-10));
  }

  TEST_CASE("entropy rejects densities that are not probability measures") {
    // f = 1 against a reference quadrature of the wrong total mass
    ReferenceData bad{kRef.model, build_quadrature(48, 96, PolarizedModel(2)), Density::uniform()};
    CHECK_THROWS_AS(entropy(Potential::zero(2), Density::uniform(), bad), InputError);
  }

  TEST_CASE("Mabuchi-Ding margin is nonnegative, smooth and conic") {
    const Vec3 north(0, 0, 1);
    const Density fc = conic_density(std::span(&north, 1), 0.5, kRef);
    const OneOneForm eta = eta_form(std::span(&north, 1), 0.5, kRef.model);
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Potential phi = random_potential(s, kRef);
      for (double g : {0.2, 0.5, 1.0}) {
        CHECK(mabuchi_ding_margin(phi, g, Density::uniform(), OneOneForm::zero(), kRef) >= -1e-12);
        CHECK(mabuchi_ding_margin(phi, g, fc, eta, kRef) >= -1e-12);
      }
    }
  }

  TEST_CASE("report bundles the functionals") {
    const Potential phi = random_potential(2, kRef);
    const FunctionalReport r = evaluate_report(phi, 0.5, 1.0, Density::uniform(), OneOneForm::zero(),
                                               {OneOneForm::kahler(kRef.model)}, kRef);
    CHECK(r.E == energy(phi, kRef));
    REQUIRE(r.J_chi.size() == 1);
    CHECK(r.J_chi[0] == doctest::Approx(r.J));
    CHECK(r.M.total == doctest::Approx(r.M.entropy + r.M.j_twist));
    CHECK(r.margin >= 0.0);
  }
}

TEST_SUITE("fitted constants") {
  TEST_CASE("endpoint extrapolation") {
    CHECK(extrapolated_sup({3.0}) == 3.0);
    CHECK(extrapolated_sup({7, 1, 2, 3, 4, 5, 6}) == 12.0);
    CHECK(extrapolated_sup({1.0, 2.0}) == 3.0);
    CHECK_THROWS_AS(extrapolated_sup({}), InputError);
  }

  TEST_CASE("fit on a small family") {
    PotentialFamilyOptions po;
    po.lmax = 6;
    const PotentialFamily fam = random_family(12, 5, kRef, po);
    FitOptions fo;
    fo.k = 3;
    const ConstantsFit fit = fit_constants(fam.members, fo, kRef, "test");
    CHECK(fit.family_size == 12);
    // J_ω = J here, so A = 1 is always feasible
    CHECK(fit.A >= 1.0);
    CHECK(std::fmod(fit.A * 64, 1.0) == 0.0);
    CHECK(fit.C >= 0.0);
    CHECK(fit.C0 >= 0.0);
    CHECK(fit.C1 >= 0.0);
    CHECK(fit.c == 0.0);
    for (const Potential& phi : fam.members)
      CHECK(j_chi(phi, OneOneForm::kahler(kRef.model), kRef) >= fit.A * j_functional(phi, kRef) - fit.B - 1e-12);
  }

  TEST_CASE("empty family is an input error") {
    CHECK_THROWS_AS(fit_constants({}, FitOptions{}, kRef), InputError);
  }
}

TEST_SUITE("coercivity") {
  TEST_CASE("tags round-trip") {
    for (FunctionalTag t : {FunctionalTag::j, FunctionalTag::j_omega, FunctionalTag::mabuchi, FunctionalTag::ding})
      CHECK(parse_functional_tag(to_string(t)) == t);
    CHECK_FALSE(parse_functional_tag("X").has_value());
  }

  TEST_CASE("J against itself has slope one") {
    std::vector<Potential> fam;
    for (double t : {0.2, 0.5, 1.0}) fam.push_back(random_potential(1, kRef).scaled(t));
    const CoercivityReport r = coercivity_probe(FunctionalTag::j, fam, kRef);
    CHECK(r.slope == doctest::Approx(1.0));
    CHECK(r.intercept == doctest::Approx(0.0).epsilon(1e-12));
  }

  TEST_CASE("degenerate J range") {
    const std::vector<Potential> one{random_potential(1, kRef)};
    CHECK_THROWS_AS(coercivity_probe(FunctionalTag::mabuchi, one, kRef), InputError);
  }
}
