#include <doctest.h>

#include <cmath>

#include "gibbsk/error.hpp"
#include "gibbsk/gibbs.hpp"
#include "gibbsk/parallel.hpp"
#include "gibbsk/rng.hpp"

using namespace gibbsk;

namespace {

const ReferenceData kRef = ReferenceData::standard(1, 16, 32);

struct WorkerGuard {
  explicit WorkerGuard(std::size_t n) { set_worker_override(n); }
  ~WorkerGuard() { set_worker_override(0); }
};

}  // namespace

TEST_SUITE("sampler") {
  TEST_CASE("configurations are a pure function of (seed, index)") {
    const ConfigurationSampler s(3, Density::uniform(), kRef, 42);
    std::vector<Vec3> a(3), b(3), c(3);
    s.draw(10, a);
    s.draw(3, c);
    s.draw(10, b);
    for (int i = 0; i < 3; ++i) CHECK(a[i] == b[i]);
    CHECK(a[0] != c[0]);
  }

  TEST_CASE("uniform draws have zero log weight and unit length") {
    const ConfigurationSampler s(2, Density::uniform(), kRef, 1);
    std::vector<Vec3> x(2);
    for (std::uint64_t i = 0; i < 50; ++i) {
      CHECK(s.draw(i, x) == 0.0);
      CHECK(x[0].norm() == doctest::Approx(1.0));
    }
  }

  TEST_CASE("one-point conic draws follow f_b: E[s] = b/(1+b)") {
    const Vec3 north(0, 0, 1);
    const double b = 0.5;
    const Density f = conic_density(std::span(&north, 1), b, kRef);
    const std::vector<Configuration> cfg = sample_configurations(40000, 1, f, kRef, 9);
    double mean = 0, w = 0;
    for (const Configuration& c : cfg) {
      const double wt = std::exp(c.log_weight);
      mean += wt * chordal_half(c.points[0], north);
      w += wt;
    }
    mean /= w;
    // sd of s under the law is about 0.3
    CHECK(mean == doctest::Approx(b / (1 + b)).epsilon(4 * 0.3 / std::sqrt(40000.0) / (b / (1 + b))));
  }

  TEST_CASE("bad sizes") {
    CHECK_THROWS_AS(ConfigurationSampler(0, Density::uniform(), kRef, 1), InputError);
    const ConfigurationSampler s(2, Density::uniform(), kRef, 1);
    std::vector<Vec3> x(3);
    CHECK_THROWS_AS(s.draw(0, x), InputError);
  }
}

TEST_SUITE("partition") {
  TEST_CASE("Z(0) = 1 exactly with zero error") {
    for (auto [m, k] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 1}}) {
      const ReferenceData ref = ReferenceData::standard(m, 16, 32);
      const MCEstimate e = partition_mc(0.0, section_basis(m, k), Density::uniform(), ref, 5000, 3);
      CHECK(e.mean == 1.0);
      CHECK(e.standard_error == 0.0);
      CHECK_FALSE(e.diverged);
    }
  }

  TEST_CASE("m = k = 1: Z(gamma) = 1/(1 - gamma)") {
    // |det S|^2 = s, and s is uniform on [0, 1] for independent uniform points
    const LogTerms t = sample_log_terms(section_basis(1, 1), Density::uniform(), kRef, 200000, 5);
    for (double g : {0.2, 0.4}) {
      const MCEstimate e = estimate_partition(t, g);
      CHECK(std::abs(e.mean - 1 / (1 - g)) < 4 * e.standard_error);
      CHECK_FALSE(e.diverged);
    }
  }

  TEST_CASE("terms do not depend on the worker count") {
    LogTerms a, b;
    {
      WorkerGuard w(1);
      a = sample_log_terms(section_basis(1, 3), Density::uniform(), kRef, 20000, 11);
    }
    {
      WorkerGuard w(3);
      b = sample_log_terms(section_basis(1, 3), Density::uniform(), kRef, 20000, 11);
    }
    CHECK(a.log_det == b.log_det);
    CHECK(a.log_weight == b.log_weight);
  }

  TEST_CASE("divergence scan: monotone flags and grid validation") {
    const LogTerms t = sample_log_terms(section_basis(1, 1), Density::uniform(), kRef, 100000, 2);
    const std::vector<double> grid{0.3, 0.6, 0.9, 1.2, 1.5, 2.0};
    const std::vector<MCEstimate> scan = divergence_scan(t, grid);
    REQUIRE(scan.size() == grid.size());
    for (std::size_t i = 1; i < scan.size(); ++i) CHECK((!scan[i - 1].diverged || scan[i].diverged));
    CHECK_FALSE(scan.front().diverged);
    CHECK(scan.back().diverged);
    const std::vector<double> bad{0.5, 0.4};
    CHECK_THROWS_AS(divergence_scan(t, bad), InputError);
    CHECK_THROWS_AS(estimate_partition(t, -1.0), InputError);
  }
}

TEST_SUITE("threshold") {
  TEST_CASE("exact threshold 2k/(mk+1)") {
    CHECK(gamma_k_exact_p1(1, 1).value == 1.0);
    CHECK(gamma_k_exact_p1(2, 1).value == doctest::Approx(2.0 / 3));
    CHECK(gamma_k_exact_p1(1, 3).value == doctest::Approx(1.5));
    CHECK(gamma_k_exact_p1(3, 4).value == doctest::Approx(8.0 / 13));
    // k → ∞ limit 2/m, the Fano value 1 for m = 2
    CHECK(gamma_k_exact_p1(2, 1000).value == doctest::Approx(1.0).epsilon(1e-3));
    const Vec3 north(0, 0, 1);
    CHECK_THROWS_AS(gamma_k_exact_p1(1, 1, conic_density(std::span(&north, 1), 0.5, kRef)), InputError);
    CHECK_THROWS_AS(gamma_k_exact_p1(0, 1), InputError);
  }

  TEST_CASE("Hill estimator on exact Pareto samples") {
    const Philox4x32 gen(77);
    const double alpha = 1.7;
    std::vector<double> logs(100000);
    for (std::size_t i = 0; i < logs.size(); ++i) logs[i] = -std::log(gen.uniform2(i, 0)[0]) / alpha;
    const HillEstimate h = hill_estimate(logs, {}, 0.02);
    CHECK(h.tail_count == 2000);
    CHECK(std::abs(h.alpha - alpha) < 3 * h.standard_error);
  }

  TEST_CASE("tail estimate for m = k = 1 brackets 1") {
    std::vector<double> grid;
    for (int i = 1; i <= 15; ++i) grid.push_back(0.1 * i);
    const GammaEstimate g = gamma_k_tail_estimate(section_basis(1, 1), Density::uniform(), kRef, 300000, 7, grid);
    CHECK(g.lower <= 1.0);
    CHECK(g.upper >= 1.0);
    CHECK(g.value == doctest::Approx(1.0).epsilon(0.15));
    CHECK(g.lower <= g.value);
    CHECK(g.value <= g.upper);
  }

  TEST_CASE("a conic weight lowers the threshold") {
    const Vec3 north(0, 0, 1);
    const Density f = conic_density(std::span(&north, 1), 0.5, kRef);
    std::vector<double> grid;
    for (int i = 1; i <= 15; ++i) grid.push_back(0.1 * i);
    const GammaEstimate g = gamma_k_tail_estimate(section_basis(1, 1), f, kRef, 300000, 7, grid);
    CHECK(g.value < 1.0);
  }

  TEST_CASE("too few samples for the tail") {
    const std::vector<double> grid{0.5, 1.0};
    CHECK_THROWS_AS(gamma_k_tail_estimate(section_basis(1, 1), Density::uniform(), kRef, 1000, 7, grid),
                    NumericError);
  }
}
