#pragma once

#include <complex>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "gibbsk/model.hpp"
#include "gibbsk/sphere.hpp"

namespace gibbsk {

/// Gauss–Legendre nodes and weights on [-1, 1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

/// Immutable node/weight set. Weights carry units of ω-area, so Σ w h(x)
/// approximates ∫ h ω and Σ w = V for the product rule.
class SphereQuadrature {
 public:
  enum class Kind { product, conic };

  SphereQuadrature(std::vector<Vec3> nodes, std::vector<double> weights, int exactness, Kind kind,
                   double volume);

  std::size_t size() const { return nodes_.size(); }
  std::span<const Vec3> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  const Vec3& node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }
  std::complex<double> stereographic_node(std::size_t i) const { return stereographic(nodes_[i]); }

  /// Highest harmonic degree integrated exactly; -1 for adapted (conic) sets.
  int exactness() const { return exactness_; }
  Kind kind() const { return kind_; }
  double volume() const { return volume_; }
  double total_weight() const;

  /// Σ w_i h(x_i).
  double integrate(const std::function<double(const Vec3&)>& h) const;
  double integrate_values(std::span<const double> values) const;

 private:
  std::vector<Vec3> nodes_;
  std::vector<double> weights_;
  int exactness_;
  Kind kind_;
  double volume_;
};

/// Gauss–Legendre in cos θ times a uniform azimuthal rule, scaled to total mass V.
/// Exact for harmonics of degree <= min(2 n_polar - 1, n_azimuth - 1).
SphereQuadrature build_quadrature(int n_polar, int n_azimuth, const PolarizedModel& model);

struct ConicQuadratureOptions {
  int radial_order = 16;     // GL nodes per dyadic panel
  int azimuth = 48;          // azimuthal nodes per panel
  int initial_panels = 8;
  int panel_step = 4;
  int max_panels = 240;
  double tolerance = 1e-10;  // relative change between successive refinements
};

/// Node set adapted to integrands with singularity Π_i |s_{p_i}|^{-2β} at the
/// cone points: a smooth partition of unity assigns each region to one point,
/// integrated in polar coordinates about it on dyadic radial panels, with a
/// closed-form node for the innermost disc. Panels are added until
/// Σ w · probe changes by less than the tolerance. Throws NumericError when
/// refinement does not converge.
SphereQuadrature conic_quadrature(std::span<const Vec3> points, double beta, const PolarizedModel& model,
                                  const std::function<double(const Vec3&)>& probe,
                                  const ConicQuadratureOptions& options = {});

}  // namespace gibbsk
