#pragma once

// Model geometry of (P^1, O(m)): Kähler potentials, (1,1)-forms written as
// g·ω, probability densities (smooth or conic), and the reference data every
// functional is evaluated against.
//
// Conventions: ω_φ = ω + dd^c φ with dd^c normalised so that the curvature of
// h e^{-φ} is ω_φ. On the unit sphere this gives ω_φ/ω = 1 + Δφ/m, Δ the
// round Laplacian, and Ric(ω/V) = (2/m) ω.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "gibbsk/harmonics.hpp"
#include "gibbsk/model.hpp"
#include "gibbsk/quadrature.hpp"

namespace gibbsk {

class Potential {
 public:
  Potential() = default;
  explicit Potential(SphericalExpansion coefficients) : coeffs_(std::move(coefficients)) {}
  static Potential zero(int lmax = 0) { return Potential(SphericalExpansion(lmax)); }

  const SphericalExpansion& expansion() const { return coeffs_; }
  int lmax() const { return coeffs_.lmax(); }
  double value(const Vec3& x) const { return coeffs_.evaluate(x); }
  /// ω_φ/ω at a single point.
  double ratio(const Vec3& x, const PolarizedModel& model) const;

  Potential shifted(double kappa) const;
  Potential scaled(double t) const;
  Potential rotated_about_pole(double angle) const;

 private:
  SphericalExpansion coeffs_;
};

/// φ and ω_φ/ω tabulated at a node set.
struct PotentialOnNodes {
  std::vector<double> phi;
  std::vector<double> ratio;
};
PotentialOnNodes sample_potential(const Potential& phi, std::span<const Vec3> nodes, const PolarizedModel& model);

/// ω_φ/ω at the quadrature nodes; DomainError naming the worst node when
/// the potential is not Kähler there.
std::vector<double> omega_phi_ratio(const Potential& phi, const SphereQuadrature& q, const PolarizedModel& model);
bool is_admissible(const Potential& phi, const SphereQuadrature& q, const PolarizedModel& model);

/// A closed real (1,1)-form χ = g·ω with g a spherical-harmonic series.
class OneOneForm {
 public:
  OneOneForm(SphericalExpansion density, double mass) : density_(std::move(density)), mass_(mass) {}
  static OneOneForm kahler(const PolarizedModel& model);
  static OneOneForm zero() { return {SphericalExpansion(0), 0.0}; }

  const SphericalExpansion& density() const { return density_; }
  double value(const Vec3& x) const { return density_.evaluate(x); }
  /// ∫ χ.
  double mass() const { return mass_; }
  /// n ∫χ∧ω^{n-1} / ∫ω^n with n = 1.
  double average(const PolarizedModel& model) const { return mass_ / model.volume(); }

  OneOneForm& operator+=(const OneOneForm& o);
  friend OneOneForm operator+(OneOneForm a, const OneOneForm& b) { return a += b; }
  friend OneOneForm operator*(double s, OneOneForm a) {
    a.density_ *= s;
    a.mass_ *= s;
    return a;
  }
  friend OneOneForm operator-(const OneOneForm& a) { return -1.0 * a; }

 private:
  SphericalExpansion density_;
  double mass_;
};

/// A probability density f relative to the reference measure dV.
/// smooth: f = exp(ψ)/Z; conic: f = Π_i |s_{p_i}|^{-2(1-b)} / Z with the
/// Fubini–Study metric |s_p(x)|^2 = (1 - x·p)/2 on each O(1) factor.
class Density {
 public:
  enum class Kind { smooth, conic };

  static Density uniform();

  Kind kind() const { return kind_; }
  bool is_uniform() const { return uniform_; }
  double value(const Vec3& x) const;
  double log_value(const Vec3& x) const;
  /// Unnormalised density (without 1/Z).
  double raw_value(const Vec3& x) const;
  double log_normalization() const { return log_norm_; }
  double normalization() const;

  const SphericalExpansion& log_density() const { return log_density_; }
  const std::vector<Vec3>& cone_points() const { return points_; }
  double cone_angle() const { return b_; }
  double exponent() const { return 1.0 - b_; }
  int divisor_degree() const { return static_cast<int>(points_.size()); }
  /// Node set adapted to the cone points; null for smooth densities.
  const SphereQuadrature* adapted_nodes() const { return nodes_.get(); }
  /// True when f ∈ L^p(dV), i.e. p(1-b) < 1 for the conic kind.
  bool in_lp(double p) const;

 private:
  friend Density smooth_density(SphericalExpansion, const PolarizedModel&, const SphereQuadrature&, const Density&);
  friend Density conic_density(std::span<const Vec3>, double, const PolarizedModel&, const Density&,
                               const ConicQuadratureOptions&);

  Kind kind_ = Kind::smooth;
  bool uniform_ = true;
  SphericalExpansion log_density_;
  std::vector<Vec3> points_;
  double b_ = 1.0;
  double log_norm_ = 0.0;
  std::shared_ptr<const SphereQuadrature> nodes_;
};

/// f = exp(ψ)/Z normalised so that ∫ f d(reference) = 1 on the quadrature.
Density smooth_density(SphericalExpansion log_density, const PolarizedModel& model, const SphereQuadrature& q,
                       const Density& reference);

/// Fixed data shared by every functional: the model, its quadrature, and the
/// smooth probability measure dV (as a density relative to ω/V).
struct ReferenceData {
  PolarizedModel model;
  SphereQuadrature quad;
  Density volume = Density::uniform();

  static ReferenceData standard(int m, int n_polar = 64, int n_azimuth = 128);
};

/// Conic density with cone angle 2πb at the given points. b = 1 returns the
/// uniform density. InputError on duplicate points or b outside (0, 1].
Density conic_density(std::span<const Vec3> points, double b, const PolarizedModel& model,
                      const Density& reference, const ConicQuadratureOptions& options = {});
inline Density conic_density(std::span<const Vec3> points, double b, const ReferenceData& ref,
                             const ConicQuadratureOptions& options = {}) {
  return conic_density(points, b, ref.model, ref.volume, options);
}

/// Nodes with masses such that Σ mass_i h(x_i) ≈ ∫ h f dV.
struct WeightedNodes {
  std::span<const Vec3> nodes;
  std::vector<double> mass;
};
WeightedNodes probability_nodes(const Density& f, const ReferenceData& ref);

/// ∫ f^p dV; DomainError when f ∉ L^p.
double lp_integral(const Density& f, double p, const ReferenceData& ref);

/// Ric dV = -dd^c log(dV) as g·ω; mass 2. DomainError for conic input.
OneOneForm ricci_density(const Density& volume, const PolarizedModel& model);

/// η_b = (1 - b) · curvature of the FS reference metric on O(D), D = Σ p_i.
OneOneForm eta_form(std::span<const Vec3> points, double b, const PolarizedModel& model);

/// Validates a cone-point list: unit length (after normalisation) and distinct.
std::vector<Vec3> validated_cone_points(std::span<const Vec3> points);

}  // namespace gibbsk

namespace gibbsk {

struct PotentialFamilyOptions {
  int lmax = 8;
  int min_degree = 1;        // lowest harmonic degree with random content
  double decay = 2.0;        // coefficient scale (l + 1)^{-decay}
  double min_ratio_low = 0.1;   // min ω_φ/ω over the quadrature drawn uniformly
  double min_ratio_high = 0.9;  // from [low, high]
};

/// Seeded random Kähler potential: Gaussian coefficients with power-law decay,
/// scaled so that the minimum of ω_φ/ω on the reference quadrature hits a
/// seeded target. Mean zero.
Potential random_potential(std::uint64_t seed, const ReferenceData& ref, const PotentialFamilyOptions& options = {});

struct PotentialFamily {
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> member_seeds;
  std::vector<Potential> members;
};
PotentialFamily random_family(std::size_t count, std::uint64_t seed, const ReferenceData& ref,
                              const PotentialFamilyOptions& options = {});

}  // namespace gibbsk
