#pragma once

// Real orthonormal spherical harmonics on the unit sphere (∫ Y² dA = 1),
// Condon–Shortley phase included so that Y_{l,0} matches std::sph_legendre.
// Index layout: l*l + l + j for j in [-l, l]; j > 0 cosine, j < 0 sine.

#include <span>
#include <vector>

#include "gibbsk/sphere.hpp"

namespace gibbsk {

constexpr int harmonic_count(int lmax) { return (lmax + 1) * (lmax + 1); }
constexpr int harmonic_index(int l, int j) { return l * l + l + j; }
constexpr int harmonic_degree(int index) {
  int l = 0;
  while ((l + 1) * (l + 1) <= index) ++l;
  return l;
}

/// Fills out[0 .. harmonic_count(lmax)) with Y_{l,j}(x).
void real_harmonics(const Vec3& x, int lmax, std::span<double> out);

/// A finite real spherical-harmonic series  Σ c_{l,j} Y_{l,j}.
class SphericalExpansion {
 public:
  SphericalExpansion() : SphericalExpansion(0) {}
  explicit SphericalExpansion(int lmax);
  SphericalExpansion(int lmax, std::vector<double> coefficients);

  static SphericalExpansion constant(double value, int lmax = 0);

  int lmax() const { return lmax_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  double coefficient(int l, int j) const { return coeffs_[harmonic_index(l, j)]; }
  void set_coefficient(int l, int j, double value) { coeffs_[harmonic_index(l, j)] = value; }

  double evaluate(const Vec3& x) const;
  /// Round-sphere Laplacian, exact: Δ Y_l = -l(l+1) Y_l.
  SphericalExpansion laplacian() const;
  /// Average over the sphere (the l = 0 component).
  double mean() const;

  /// Rotation by angle a about the polar axis: f'(x) = f(R_a^{-1} x).
  SphericalExpansion rotated_about_pole(double angle) const;
  SphericalExpansion resized(int lmax) const;

  SphericalExpansion& operator+=(const SphericalExpansion& other);
  SphericalExpansion& operator*=(double s);
  friend SphericalExpansion operator+(SphericalExpansion a, const SphericalExpansion& b) { return a += b; }
  friend SphericalExpansion operator*(double s, SphericalExpansion a) { return a *= s; }

 private:
  int lmax_;
  std::vector<double> coeffs_;
};

/// Values of an expansion at many points, sharing one harmonic evaluation per point.
std::vector<double> evaluate_at(const SphericalExpansion& f, std::span<const Vec3> points);

}  // namespace gibbsk
