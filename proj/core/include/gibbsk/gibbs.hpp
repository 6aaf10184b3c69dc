#pragma once

// Monte-Carlo estimation of Z_{N,f}(-γ) = ∫ |det S^(k)|^{-2γ/k} dV_f^{⊗N} and
// of the microscopic stability threshold γ_k.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gibbsk/geometry.hpp"
#include "gibbsk/quantization.hpp"

namespace gibbsk {

/// Draws N-point configurations from dV^{⊗N} (uniform ω/V times the smooth
/// reference weight), or for conic f from f dV exactly (one cone point) or
/// from a mixture of single-point laws (several). Every configuration is a
/// pure function of (seed, index).
class ConfigurationSampler {
 public:
  ConfigurationSampler(int n_points, const Density& f, const ReferenceData& ref, std::uint64_t seed);

  int points() const { return n_points_; }
  std::uint64_t seed() const { return seed_; }
  /// Fills out[0..N) and returns log of the importance weight Π f(x_i) g(x_i) / proposal.
  double draw(std::uint64_t index, std::span<Vec3> out) const;

 private:
  Vec3 draw_point(std::uint64_t index, std::uint64_t slot, double& log_weight) const;

  int n_points_;
  std::uint64_t seed_;
  Density f_;
  Density volume_;
  double log_inv_z_ = 0.0;  // -log Z of the conic density
  std::vector<std::pair<Vec3, Vec3>> frames_;
};

struct Configuration {
  std::vector<Vec3> points;
  double log_weight = 0.0;
};
std::vector<Configuration> sample_configurations(std::size_t n, int n_points, const Density& f,
                                                 const ReferenceData& ref, std::uint64_t seed);

/// Per-sample log|det S|^2_{h^k} and log importance weight.
struct LogTerms {
  int k = 1;
  int n_points = 2;
  std::uint64_t seed = 0;
  std::vector<double> log_det;
  std::vector<double> log_weight;
};
LogTerms sample_log_terms(const SectionBasis& basis, const Density& f, const ReferenceData& ref,
                          std::size_t n_samples, std::uint64_t seed);

struct DivergenceOptions {
  double max_share = 0.5;          // flag when the largest term exceeds this share...
  std::size_t min_samples = 100000;  // ...at this sample count or more
  double hill_fraction = 0.01;     // top fraction used by the Hill estimator
};

struct MCEstimate {
  double mean = 0.0;
  double standard_error = 0.0;
  double log_mean = 0.0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  double gamma = 0.0;
  bool diverged = false;
  double max_share = 0.0;
  double tail_index = 0.0;      // Hill estimate for the terms; +inf when bounded
  double tail_index_se = 0.0;
};

MCEstimate estimate_partition(const LogTerms& terms, double gamma, const DivergenceOptions& options = {});

/// Z_{N,f}(-γ) with N = dim of the basis.
MCEstimate partition_mc(double gamma, const SectionBasis& basis, const Density& f, const ReferenceData& ref,
                        std::size_t n_samples, std::uint64_t seed, const DivergenceOptions& options = {});

/// Estimates along an increasing γ grid; diverged flags made monotone.
std::vector<MCEstimate> divergence_scan(const LogTerms& terms, std::span<const double> gammas,
                                        const DivergenceOptions& options = {});

struct HillEstimate {
  double alpha = 0.0;
  double standard_error = 0.0;
  std::size_t tail_count = 0;
};
/// Weighted Hill estimator on the largest values (log domain input).
HillEstimate hill_estimate(std::span<const double> log_values, std::span<const double> log_weights,
                           double fraction);

enum class GammaMethod { exact_exponent, tail_index, divergence_scan };
std::string to_string(GammaMethod m);

struct GammaEstimate {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  GammaMethod method = GammaMethod::exact_exponent;
  int k = 1;
  int m = 1;
  std::string density;
  double hill = 0.0;  // raw tail-index estimate at the default fraction
  double bootstrap_lower = 0.0;
  double bootstrap_upper = 0.0;
  double band_lower = 0.0;  // Hill ± 2 se envelope over the band fractions
  double band_upper = 0.0;
  std::optional<double> scan_bound;  // first strongly diverged grid point
  std::vector<MCEstimate> scan;
};

/// γ_k = 2k/(mk+1) on P^1 with f = 1. A cluster of p points at scale r
/// gives |det S|^{-2γ/k} ~ r^{-γp(p-1)/k} against volume ~ r^{2(p-1)}, so
/// γ_k = min_p 2k/p = 2k/N. InputError for f ≠ 1.
GammaEstimate gamma_k_exact_p1(int m, int k, const Density& f = Density::uniform());

struct TailOptions {
  double hill_fraction = 0.01;
  double bootstrap_fraction = 0.05;
  int bootstrap_rounds = 200;
  double confidence = 0.95;
  std::size_t min_tail = 50;
  std::vector<double> band_fractions{0.01, 0.005, 0.0025, 0.001};
  DivergenceOptions divergence;
};

/// Hill estimate of the tail index of 1/W, W = |det S|^{2/k}, under
/// dV_f^{⊗N}. The interval is the union of a bootstrap percentile interval
/// and the Hill ± 2 se band over smaller tail fractions, which absorbs the
/// slowly decaying second-order bias. A grid point counts as strongly
/// diverged when the dominance flag is set and the term tail index is below
/// 1; the scan replaces the Hill value when the Hill value lies beyond the
/// first such point.
GammaEstimate gamma_k_tail_estimate(const SectionBasis& basis, const Density& f, const ReferenceData& ref,
                                    std::size_t n_samples, std::uint64_t seed, std::span<const double> gamma_grid,
                                    const TailOptions& options = {});

std::string describe(const Density& f);

}  // namespace gibbsk
