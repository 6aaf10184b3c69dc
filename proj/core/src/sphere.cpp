#include "gibbsk/sphere.hpp"

#include <Eigen/Geometry>

#include <cmath>

namespace gibbsk {

Vec3 from_angles(double theta, double azimuth) {
  const double s = std::sin(theta);
  return {s * std::cos(azimuth), s * std::sin(azimuth), std::cos(theta)};
}

Vec3 from_stereographic(std::complex<double> z) {
  const double r2 = std::norm(z);
  const double d = 1.0 + r2;
  return {2.0 * z.real() / d, 2.0 * z.imag() / d, (1.0 - r2) / d};
}

std::complex<double> stereographic(const Vec3& x) {
  return {x[0] / (1.0 + x[2]), x[1] / (1.0 + x[2])};
}

Spinor spinor(const Vec3& x) {
  const double c = std::sqrt(std::max(0.0, 0.5 * (1.0 + x[2])));
  const std::complex<double> w(x[0], x[1]);
  if (c > 0.5) return {c, w / (2.0 * c)};
  const double s = std::sqrt(std::max(0.0, 0.5 * (1.0 - x[2])));
  const double r = std::abs(w);
  return {c, r > 0.0 ? s * w / r : std::complex<double>(s, 0.0)};
}

std::pair<Vec3, Vec3> tangent_frame(const Vec3& p) {
  const Vec3 helper = std::abs(p[2]) < 0.9 ? Vec3(0, 0, 1) : Vec3(1, 0, 0);
  Vec3 e1 = helper.cross(p).normalized();
  Vec3 e2 = p.cross(e1);
  return {e1, e2};
}

Vec3 polar_offset(const Vec3& p, const std::pair<Vec3, Vec3>& frame, double theta, double phi) {
  const double s = std::sin(theta);
  return std::cos(theta) * p + s * (std::cos(phi) * frame.first + std::sin(phi) * frame.second);
}

}  // namespace gibbsk
