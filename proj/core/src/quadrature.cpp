#include "gibbsk/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gibbsk/error.hpp"

namespace gibbsk {

std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  if (n < 1) throw InputError("gauss_legendre: n must be >= 1");
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  return {x, w};
}

SphereQuadrature::SphereQuadrature(std::vector<Vec3> nodes, std::vector<double> weights, int exactness,
                                   Kind kind, double volume)
    : nodes_(std::move(nodes)), weights_(std::move(weights)), exactness_(exactness), kind_(kind),
      volume_(volume) {
  if (nodes_.size() != weights_.size()) throw InputError("SphereQuadrature: nodes/weights size mismatch");
  for (double w : weights_)
    if (!(w > 0.0)) throw InputError("SphereQuadrature: weights must be positive");
}

double SphereQuadrature::total_weight() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

double SphereQuadrature::integrate(const std::function<double(const Vec3&)>& h) const {
  double s = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * h(nodes_[i]);
  return s;
}

double SphereQuadrature::integrate_values(std::span<const double> values) const {
  if (values.size() != weights_.size()) throw InputError("integrate_values: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += weights_[i] * values[i];
  return s;
}

SphereQuadrature build_quadrature(int n_polar, int n_azimuth, const PolarizedModel& model) {
  if (n_polar < 2 || n_azimuth < 2) throw InputError("build_quadrature: n_polar and n_azimuth must be >= 2");
  if (static_cast<long long>(n_polar) * n_azimuth > (1LL << 24))
    throw InputError("build_quadrature: node count " + std::to_string(static_cast<long long>(n_polar) * n_azimuth) +
                     " exceeds 2^24");
  const auto [t, wt] = gauss_legendre(n_polar);
  const double V = model.volume();
  const double dphi = 2.0 * std::numbers::pi / n_azimuth;
  std::vector<Vec3> nodes;
  std::vector<double> weights;
  nodes.reserve(static_cast<std::size_t>(n_polar) * n_azimuth);
  weights.reserve(nodes.capacity());
  for (int i = 0; i < n_polar; ++i) {
    const double r = std::sqrt(std::max(0.0, 1.0 - t[i] * t[i]));
    for (int a = 0; a < n_azimuth; ++a) {
      const double phi = dphi * a;
      nodes.emplace_back(r * std::cos(phi), r * std::sin(phi), t[i]);
      // dA = dt dphi; ω = V dA / 4π
      weights.push_back(wt[i] * dphi * V / (4.0 * std::numbers::pi));
    }
  }
  const int exact = std::min(2 * n_polar - 1, n_azimuth - 1);
  return {std::move(nodes), std::move(weights), exact, SphereQuadrature::Kind::product, V};
}

namespace {

SphereQuadrature conic_nodes(std::span<const Vec3> points, double beta, const PolarizedModel& model,
                             int panels, const ConicQuadratureOptions& opt) {
  const double V = model.volume();
  const auto [gx, gw] = gauss_legendre(opt.radial_order);
  const double dphi = 2.0 * std::numbers::pi / opt.azimuth;
  constexpr int kPartitionPower = 3;

  auto partition = [&](std::size_t owner, const Vec3& x) {
    if (points.size() == 1) return 1.0;
    // w_i = Π_{j≠i} s_j^q / Σ_l Π_{j≠l} s_j^q, smooth and equal to 1 at p_i
    double num = 0.0, den = 0.0;
    for (std::size_t l = 0; l < points.size(); ++l) {
      double prod = 1.0;
      for (std::size_t j = 0; j < points.size(); ++j)
        if (j != l) prod *= std::pow(chordal_half(x, points[j]), kPartitionPower);
      den += prod;
      if (l == owner) num = prod;
    }
    return num / den;
  };

  std::vector<Vec3> nodes;
  std::vector<double> weights;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Vec3& p = points[i];
    const auto frame = tangent_frame(p);
    for (int panel = 0; panel < panels; ++panel) {
      const double b = std::numbers::pi / std::ldexp(1.0, panel);
      const double a = 0.5 * b;
      for (int r = 0; r < opt.radial_order; ++r) {
        const double theta = 0.5 * (a + b) + 0.5 * (b - a) * gx[r];
        const double radial = 0.5 * (b - a) * gw[r] * std::sin(theta) * dphi * V / (4.0 * std::numbers::pi);
        for (int k = 0; k < opt.azimuth; ++k) {
          const Vec3 x = polar_offset(p, frame, theta, dphi * k);
          const double w = radial * partition(i, x);
          if (w > 0.0) {
            nodes.push_back(x);
            weights.push_back(w);
          }
        }
      }
    }
    // Innermost disc of radius r: one node at r/2 weighted so that it integrates
    // (θ/2)^{-2β} exactly; the integrand is ≈ const · s_p^{-β} there.
    const double r = std::numbers::pi / std::ldexp(1.0, panels);
    const double mid = 0.5 * r;
    const double exact = (V / 2.0) * std::pow(2.0, 2.0 * beta) * std::pow(r, 2.0 - 2.0 * beta) / (2.0 - 2.0 * beta);
    const double w = exact * std::pow(std::sin(0.5 * mid), 2.0 * beta);
    nodes.push_back(polar_offset(p, frame, mid, 0.0));
    weights.push_back(w);
  }
  return {std::move(nodes), std::move(weights), -1, SphereQuadrature::Kind::conic, V};
}

}  // namespace

SphereQuadrature conic_quadrature(std::span<const Vec3> points, double beta, const PolarizedModel& model,
                                  const std::function<double(const Vec3&)>& probe,
                                  const ConicQuadratureOptions& options) {
  if (points.empty()) throw InputError("conic_quadrature: no cone points");
  if (!(beta < 1.0)) throw InputError("conic_quadrature: exponent beta must be < 1 for integrability");
  int panels = options.initial_panels;
  SphereQuadrature current = conic_nodes(points, beta, model, panels, options);
  double previous = current.integrate(probe);
  while (panels + options.panel_step <= options.max_panels) {
    panels += options.panel_step;
    SphereQuadrature refined = conic_nodes(points, beta, model, panels, options);
    const double value = refined.integrate(probe);
    if (!std::isfinite(value)) throw NumericError("conic_quadrature: non-finite integral");
    const bool converged = std::abs(value - previous) <= options.tolerance * std::abs(value);
    current = std::move(refined);
    previous = value;
    if (converged) return current;
  }
  throw NumericError("conic_quadrature: radial refinement did not converge within " +
                     std::to_string(options.max_panels) + " panels");
}

}  // namespace gibbsk
