#pragma once

// Seeded suites over the identities, inequalities, and fitted-constant
// sweeps. Every suite is deterministic given its options and reference data.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gibbsk/functionals.hpp"
#include "gibbsk/geometry.hpp"
#include "gibbsk/gibbs.hpp"

namespace gibbsk {

struct CaseRecord {
  std::uint64_t seed = 0;
  std::string inputs;  // short digest of the case inputs
  double margin = 0.0;
  std::vector<std::pair<std::string, double>> values;
};

struct SuiteResult {
  std::string name;
  std::size_t cases = 0;
  double worst_margin = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string units;
  std::string advice;
  std::vector<std::pair<std::string, double>> summary;
  std::vector<CaseRecord> records;

  /// Sets worst_margin and pass from the records.
  void finalize();
  std::optional<double> summary_value(const std::string& key) const;
};

struct IdentitiesOptions {
  std::size_t cases = 100;
  std::uint64_t seed = 7;
  int lmax = 8;
  std::size_t legendre_probes = 5;  // random test functions per case
  std::size_t det_cases = 3;         // cases that also run the tensor determinant check
  int det_polar = 16;
  int det_azimuth = 32;
  double j_omega_tolerance = 1e-8;
  double legendre_excess_tolerance = 1e-6;
  double legendre_gap_tolerance = 1e-4;
  double det_tolerance = 1e-6;
};
/// J_ω on q against the closed form on an exact refinement,
/// Legendre duality of the entropy, and ‖det S‖² = N! det H on a tensor grid.
/// Margins are 1 - violation/tolerance per check, minimised.
SuiteResult suite_identities(const ReferenceData& ref, const IdentitiesOptions& options = {});

struct MabuchiDingOptions {
  std::size_t cases = 100;
  std::uint64_t seed = 7;
  int lmax = 8;
  std::vector<double> gammas{0.2, 0.5, 1.0};
  bool conic = true;      // also run f_b with one cone point at the north pole
  double cone_angle = 0.5;
  double tolerance = 1e-6;
};
SuiteResult suite_mabuchi_ding(const ReferenceData& ref, const MabuchiDingOptions& options = {});

struct GibbsBoundOptions {
  int k = 3;
  double tau = 1.0;
  double gamma = 0.5;
  Density f = Density::uniform();
  std::size_t potentials = 20;
  std::size_t samples = 1000000;
  std::uint64_t seed = 7;
  int lmax = 8;
};
/// Margin (RHS - LHS) / SE of the Z term, tolerance 3. The RHS uses exact
/// log N!; the stated (1/k) log N form is reported alongside.
SuiteResult suite_gibbs_bound(const ReferenceData& ref, const GibbsBoundOptions& options = {});

struct FittedConstantsOptions {
  std::vector<int> ks{2, 3, 4};
  double tau = 1.0;
  double gamma = 0.5;
  Density f = Density::uniform();
  OneOneForm eta = OneOneForm::zero();
  std::size_t family = 100;
  std::size_t holdout = 100;
  std::size_t samples = 1000000;
  std::uint64_t seed = 7;
  int lmax = 8;
  double tolerance = 1e-6;
};

struct FittedConstantsResult {
  SuiteResult suite;
  std::vector<ConstantsFit> fits;   // per k, C1 field holds the per-k fit
  std::vector<double> per_k_c1;
  double c1 = 0.0;                  // single constant over all k
  double variation = 0.0;           // (max - min) / max over k, 0 if max = 0
};

/// Fits C1 from the Ding lower bound and quantized Ding residuals on a family for each
/// k, takes the largest, and re-checks both inequalities on a held-out
/// family. Margins are raw slack plus 3 MC standard errors.
FittedConstantsResult suite_fitted_constants(const ReferenceData& ref, const FittedConstantsOptions& options = {});

struct BergmanOptions {
  std::size_t cases = 10;
  std::uint64_t seed = 7;
  int lmax = 8;
  std::vector<int> ks{2, 4, 8, 16};
  double terminal_tolerance = 1e-2;
};
/// |(E_k(φ) - E_k(0)) - E(φ)| strictly decreasing in k with a small terminal
/// value. Margin: min of relative decrements and 1 - terminal/tolerance.
SuiteResult suite_bergman(const ReferenceData& ref, const BergmanOptions& options = {});

struct LegendreOptions {
  std::size_t cases = 50;
  std::uint64_t seed = 7;
  int lmax = 8;
  std::size_t probes = 20;
  Density f = Density::uniform();
  double excess_tolerance = 1e-6;
  double gap_tolerance = 1e-4;
};
SuiteResult suite_legendre(const ReferenceData& ref, const LegendreOptions& options = {});

/// Random continuous test function for the Legendre bound.
SphericalExpansion random_test_function(std::uint64_t seed, int lmax, double scale);

/// Suite names in run order.
const std::vector<std::string>& suite_names();

}  // namespace gibbsk
