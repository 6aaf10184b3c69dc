#include <doctest.h>

#include <cmath>

#include "gibbsk/error.hpp"
#include "gibbsk/io.hpp"
#include "gibbsk/parallel.hpp"
#include "gibbsk/verify.hpp"

using namespace gibbsk;

namespace {

const ReferenceData kRef = ReferenceData::standard(1, 32, 64);

struct WorkerGuard {
  explicit WorkerGuard(std::size_t n) { set_worker_override(n); }
  ~WorkerGuard() { set_worker_override(0); }
};

}  // namespace

TEST_SUITE("suite result") {
  TEST_CASE("finalize takes the minimum margin") {
    SuiteResult r;
    r.tolerance = 0.1;
    r.records = {{1, "a", 0.5, {}}, {2, "b", -0.05, {}}, {3, "c", 2.0, {}}};
    r.finalize();
    CHECK(r.worst_margin == -0.05);
    CHECK(r.pass);
    r.records[1].margin = -0.2;
    r.finalize();
    CHECK_FALSE(r.pass);
    r.records[0].margin = NAN;
    r.finalize();
    CHECK_FALSE(r.pass);
  }

  TEST_CASE("summary lookup") {
    SuiteResult r;
    r.summary = {{"x", 1.5}};
    CHECK(r.summary_value("x") == 1.5);
    CHECK_FALSE(r.summary_value("y").has_value());
  }

  TEST_CASE("suite names") {
    CHECK(suite_names().size() == 6);
    CHECK(suite_names().front() == "identities");
  }
}

TEST_SUITE("suites") {
  TEST_CASE("identities pass on a fine grid and fail with advice on a coarse one") {
    IdentitiesOptions o;
    o.cases = 4;
    o.det_cases = 1;
    const SuiteResult r = suite_identities(kRef, o);
    CHECK(r.pass);
    CHECK(r.cases == 4);
    CHECK(r.advice.empty());
    const SuiteResult coarse = suite_identities(ReferenceData::standard(1, 8, 16), o);
    CHECK_FALSE(coarse.pass);
    CHECK(coarse.advice.find("refine") != std::string::npos);
  }

  TEST_CASE("inequality suite: phi = 0 is the first case and the margins hold") {
    MabuchiDingOptions o;
    o.cases = 4;
    const SuiteResult r = suite_mabuchi_ding(kRef, o);
    CHECK(r.pass);
    REQUIRE_FALSE(r.records.empty());
    CHECK(std::abs(r.records.front().margin) < 1e-12);
  }

  TEST_CASE("Gibbs upper bound on a small family") {
    GibbsBoundOptions o;
    o.k = 2;
    o.potentials = 3;
    o.samples = 50000;
    const SuiteResult r = suite_gibbs_bound(kRef, o);
    CHECK(r.pass);
    CHECK(r.tolerance == 3.0);
    CHECK(r.records.size() == 3);
  }

  TEST_CASE("Gibbs upper bound refuses a divergent Z") {
    GibbsBoundOptions o;
    o.k = 1;
    o.tau = 3.0;
    o.gamma = 0.4;
    o.potentials = 1;
    o.samples = 1000;
    CHECK_THROWS_WITH_AS(suite_gibbs_bound(kRef, o), doctest::Contains("not below gamma_k"), InputError);
    o.tau = 0.1;
    o.gamma = 0.5;
    CHECK_THROWS_AS(suite_gibbs_bound(kRef, o), InputError);
  }

  TEST_CASE("Gibbs upper bound checks the L^p integrability of f") {
    // k = 3, tau = 1, gamma = 1/2 gives p = 3/2, and f_b is in L^p iff p(1 - b) < 1
    const Vec3 north(0, 0, 1);
    GibbsBoundOptions o;
    o.samples = 1000;
    o.potentials = 1;
    o.f = conic_density(std::span(&north, 1), 0.3, kRef);
    CHECK_THROWS_WITH_AS(suite_gibbs_bound(kRef, o), doctest::Contains("L^p"), InputError);
  }

  TEST_CASE("fitted-constant suite on a small family") {
    FittedConstantsOptions o;
    o.ks = {2, 3};
    o.family = 6;
    o.holdout = 4;
    o.samples = 20000;
    o.lmax = 6;
    const FittedConstantsResult r = suite_fitted_constants(kRef, o);
    CHECK(std::isfinite(r.c1));
    CHECK(r.c1 >= 0.0);
    CHECK(r.per_k_c1.size() == 2);
    CHECK(r.fits.size() == 2);
    CHECK(r.variation >= 0.0);
    CHECK(r.variation <= 1.0);
    CHECK(r.suite.pass);
  }

  TEST_CASE("quantized energy convergence") {
    BergmanOptions o;
    o.cases = 2;
    o.ks = {2, 4, 8};
    o.terminal_tolerance = 5e-2;
    const SuiteResult r = suite_bergman(kRef, o);
    CHECK(r.pass);
  }

  TEST_CASE("Legendre suite, uniform and conic") {
    LegendreOptions o;
    o.cases = 3;
    o.probes = 5;
    CHECK(suite_legendre(kRef, o).pass);
  }

  TEST_CASE("suites do not depend on the worker count") {
    IdentitiesOptions o;
    o.cases = 3;
    o.det_cases = 1;
    std::string a, b;
    {
      WorkerGuard w(1);
      a = to_json(suite_identities(kRef, o));
    }
    {
      WorkerGuard w(3);
      b = to_json(suite_identities(kRef, o));
    }
    CHECK(a == b);
  }
}
