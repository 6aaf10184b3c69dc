#pragma once

// Points of P^1 realised as unit vectors of S^2. The affine chart z = 0 sits
// at the north pole (0, 0, 1); stereographic z = (x + iy) / (1 + x3).

#include <Eigen/Core>
#include <complex>
#include <utility>

namespace gibbsk {

using Vec3 = Eigen::Vector3d;

Vec3 from_angles(double theta, double azimuth);
Vec3 from_stereographic(std::complex<double> z);
std::complex<double> stereographic(const Vec3& x);

/// Homogeneous coordinates (cos(θ/2), sin(θ/2) e^{iϕ}) normalised to unit
/// length; the FS-weighted monomial z^j reads beta^j alpha^{d-j}.
struct Spinor {
  std::complex<double> alpha;
  std::complex<double> beta;
};
Spinor spinor(const Vec3& x);

/// (1 - x.y)/2, the squared FS norm of the section of O(1) vanishing at y.
/// Computed as |x - y|^2 / 4 to keep relative accuracy near the diagonal.
inline double chordal_half(const Vec3& x, const Vec3& y) { return 0.25 * (x - y).squaredNorm(); }

/// Orthonormal (e1, e2) completing p to a right-handed frame.
std::pair<Vec3, Vec3> tangent_frame(const Vec3& p);

/// Point at geodesic distance theta from p along azimuth phi in p's frame.
Vec3 polar_offset(const Vec3& p, const std::pair<Vec3, Vec3>& frame, double theta, double phi);

}  // namespace gibbsk
