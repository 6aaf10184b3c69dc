#include "gibbsk/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gibbsk/error.hpp"

namespace gibbsk {

void real_harmonics(const Vec3& x, int lmax, std::span<double> out) {
  if (static_cast<int>(out.size()) < harmonic_count(lmax)) throw InputError("real_harmonics: output too small");
  const double t = std::clamp(x[2], -1.0, 1.0);
  const double rho = std::hypot(x[0], x[1]);
  const double sin_theta = rho;
  const double cp = rho > 0.0 ? x[0] / rho : 1.0;
  const double sp = rho > 0.0 ? x[1] / rho : 0.0;

  // Normalised associated Legendre values for the current order j, degrees j..lmax.
  std::vector<double> col(static_cast<std::size_t>(lmax) + 1);
  double diag = 1.0 / std::sqrt(4.0 * std::numbers::pi);  // P̄_j^j
  double cos_j = 1.0, sin_j = 0.0;                       // cos(jϕ), sin(jϕ)
  for (int j = 0; j <= lmax; ++j) {
    if (j > 0) {
      diag *= -std::sqrt((2.0 * j + 1.0) / (2.0 * j)) * sin_theta;
      const double c = cos_j * cp - sin_j * sp;
      sin_j = sin_j * cp + cos_j * sp;
      cos_j = c;
    }
    col[j] = diag;
    if (j + 1 <= lmax) col[j + 1] = std::sqrt(2.0 * j + 3.0) * t * diag;
    for (int l = j + 2; l <= lmax; ++l) {
      const double l2 = static_cast<double>(l) * l, j2 = static_cast<double>(j) * j;
      const double a = std::sqrt((4.0 * l2 - 1.0) / (l2 - j2));
      const double lm = l - 1.0;
      const double b = std::sqrt((lm * lm - j2) / (4.0 * lm * lm - 1.0));
      col[l] = a * (t * col[l - 1] - b * col[l - 2]);
    }
    for (int l = j; l <= lmax; ++l) {
      if (j == 0) {
        out[harmonic_index(l, 0)] = col[l];
      } else {
        out[harmonic_index(l, j)] = std::numbers::sqrt2 * col[l] * cos_j;
        out[harmonic_index(l, -j)] = std::numbers::sqrt2 * col[l] * sin_j;
      }
    }
  }
}

SphericalExpansion::SphericalExpansion(int lmax)
    : lmax_(lmax), coeffs_(static_cast<std::size_t>(harmonic_count(lmax)), 0.0) {
  if (lmax < 0) throw InputError("SphericalExpansion: negative lmax");
}

SphericalExpansion::SphericalExpansion(int lmax, std::vector<double> coefficients)
    : lmax_(lmax), coeffs_(std::move(coefficients)) {
  if (lmax < 0) throw InputError("SphericalExpansion: negative lmax");
  if (static_cast<int>(coeffs_.size()) != harmonic_count(lmax))
    throw InputError("SphericalExpansion: expected " + std::to_string(harmonic_count(lmax)) +
                     " coefficients, got " + std::to_string(coeffs_.size()));
}

SphericalExpansion SphericalExpansion::constant(double value, int lmax) {
  SphericalExpansion e(lmax);
  e.coeffs_[0] = value * std::sqrt(4.0 * std::numbers::pi);
  return e;
}

double SphericalExpansion::evaluate(const Vec3& x) const {
  std::vector<double> y(coeffs_.size());
  real_harmonics(x, lmax_, y);
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += coeffs_[i] * y[i];
  return s;
}

SphericalExpansion SphericalExpansion::laplacian() const {
  SphericalExpansion out(lmax_);
  for (int l = 0; l <= lmax_; ++l)
    for (int j = -l; j <= l; ++j) out.set_coefficient(l, j, -l * (l + 1.0) * coefficient(l, j));
  return out;
}

double SphericalExpansion::mean() const { return coeffs_[0] / std::sqrt(4.0 * std::numbers::pi); }

SphericalExpansion SphericalExpansion::rotated_about_pole(double angle) const {
  SphericalExpansion out = *this;
  for (int l = 1; l <= lmax_; ++l) {
    for (int j = 1; j <= l; ++j) {
      const double c = coefficient(l, j), s = coefficient(l, -j);
      const double ca = std::cos(j * angle), sa = std::sin(j * angle);
      out.set_coefficient(l, j, c * ca - s * sa);
      out.set_coefficient(l, -j, c * sa + s * ca);
    }
  }
  return out;
}

SphericalExpansion SphericalExpansion::resized(int lmax) const {
  SphericalExpansion out(lmax);
  const int keep = std::min(lmax, lmax_);
  for (int i = 0; i < harmonic_count(keep); ++i) out.coeffs_[i] = coeffs_[i];
  return out;
}

SphericalExpansion& SphericalExpansion::operator+=(const SphericalExpansion& other) {
  if (other.lmax_ > lmax_) *this = resized(other.lmax_);
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SphericalExpansion& SphericalExpansion::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  return *this;
}

std::vector<double> evaluate_at(const SphericalExpansion& f, std::span<const Vec3> points) {
  const std::size_t h = f.coefficients().size();
  std::vector<double> y(h), out(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    real_harmonics(points[p], f.lmax(), y);
    double s = 0.0;
    for (std::size_t i = 0; i < h; ++i) s += f.coefficients()[i] * y[i];
    out[p] = s;
  }
  return out;
}

}  // namespace gibbsk
