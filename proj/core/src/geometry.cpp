#include "gibbsk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gibbsk/error.hpp"

namespace gibbsk {

// ---------------------------------------------------------------- Potential

double Potential::ratio(const Vec3& x, const PolarizedModel& model) const {
  return 1.0 + coeffs_.laplacian().evaluate(x) / model.volume();
}

Potential Potential::shifted(double kappa) const {
  return Potential(coeffs_ + SphericalExpansion::constant(kappa));
}

Potential Potential::scaled(double t) const { return Potential(t * coeffs_); }

Potential Potential::rotated_about_pole(double angle) const { return Potential(coeffs_.rotated_about_pole(angle)); }

PotentialOnNodes sample_potential(const Potential& phi, std::span<const Vec3> nodes, const PolarizedModel& model) {
  const SphericalExpansion& c = phi.expansion();
  const int lmax = c.lmax();
  const auto h = static_cast<std::size_t>(harmonic_count(lmax));
  std::vector<double> eig(h);
  for (std::size_t i = 0; i < h; ++i) {
    const int l = harmonic_degree(static_cast<int>(i));
    eig[i] = -l * (l + 1.0) / model.volume();
  }
  PotentialOnNodes out{std::vector<double>(nodes.size()), std::vector<double>(nodes.size())};
  std::vector<double> y(h);
  for (std::size_t p = 0; p < nodes.size(); ++p) {
    real_harmonics(nodes[p], lmax, y);
    double v = 0.0, lap = 0.0;
    for (std::size_t i = 0; i < h; ++i) {
      v += c.coefficients()[i] * y[i];
      lap += eig[i] * c.coefficients()[i] * y[i];
    }
    out.phi[p] = v;
    out.ratio[p] = 1.0 + lap;
  }
  return out;
}

std::vector<double> omega_phi_ratio(const Potential& phi, const SphereQuadrature& q, const PolarizedModel& model) {
  PotentialOnNodes s = sample_potential(phi, q.nodes(), model);
  const auto worst = std::min_element(s.ratio.begin(), s.ratio.end());
  if (worst != s.ratio.end() && !(*worst > 0.0)) {
    const auto i = static_cast<std::size_t>(worst - s.ratio.begin());
    const Vec3& x = q.node(i);
    std::ostringstream msg;
    msg << "potential is not Kähler: ω_φ/ω = " << *worst << " at node " << i << " (" << x[0] << ", " << x[1]
        << ", " << x[2] << ")";
    throw DomainError(msg.str());
  }
  return std::move(s.ratio);
}

bool is_admissible(const Potential& phi, const SphereQuadrature& q, const PolarizedModel& model) {
  const PotentialOnNodes s = sample_potential(phi, q.nodes(), model);
  return std::all_of(s.ratio.begin(), s.ratio.end(), [](double u) { return u > 0.0; });
}

// --------------------------------------------------------------- OneOneForm

OneOneForm OneOneForm::kahler(const PolarizedModel& model) {
  return {SphericalExpansion::constant(1.0), model.volume()};
}

OneOneForm& OneOneForm::operator+=(const OneOneForm& o) {
  density_ += o.density_;
  mass_ += o.mass_;
  return *this;
}

// ------------------------------------------------------------------ Density

Density Density::uniform() { return Density{}; }

double Density::raw_value(const Vec3& x) const {
  if (uniform_) return 1.0;
  if (kind_ == Kind::smooth) return std::exp(log_density_.evaluate(x));
  double prod = 1.0;
  for (const Vec3& p : points_) prod *= chordal_half(x, p);
  return std::pow(prod, -(1.0 - b_));
}

double Density::value(const Vec3& x) const {
  if (uniform_) return 1.0;
  return std::exp(log_value(x));
}

double Density::log_value(const Vec3& x) const {
  if (uniform_) return 0.0;
  if (kind_ == Kind::smooth) return log_density_.evaluate(x) - log_norm_;
  double s = 0.0;
  for (const Vec3& p : points_) s += std::log(chordal_half(x, p));
  return -(1.0 - b_) * s - log_norm_;
}

double Density::normalization() const { return std::exp(log_norm_); }

bool Density::in_lp(double p) const {
  if (kind_ == Kind::smooth) return true;
  return p * (1.0 - b_) < 1.0;
}

Density smooth_density(SphericalExpansion log_density, const PolarizedModel& model, const SphereQuadrature& q,
                       const Density& reference) {
  Density d;
  d.kind_ = Density::Kind::smooth;
  d.uniform_ = std::all_of(log_density.coefficients().begin(), log_density.coefficients().end(),
                           [](double c) { return c == 0.0; });
  if (d.uniform_) return Density::uniform();
  d.log_density_ = std::move(log_density);
  const std::vector<double> psi = evaluate_at(d.log_density_, q.nodes());
  const double shift = *std::max_element(psi.begin(), psi.end());
  double z = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    z += q.weight(i) * std::exp(psi[i] - shift) * reference.value(q.node(i));
  d.log_norm_ = shift + std::log(z / model.volume());
  return d;
}

ReferenceData ReferenceData::standard(int m, int n_polar, int n_azimuth) {
  PolarizedModel model(m);
  return {model, build_quadrature(n_polar, n_azimuth, model), Density::uniform()};
}

std::vector<Vec3> validated_cone_points(std::span<const Vec3> points) {
  std::vector<Vec3> out;
  for (const Vec3& p : points) {
    const double n = p.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw InputError("cone point has zero or non-finite length");
    out.push_back(p / n);
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j)
      if (chordal_half(out[i], out[j]) < 1e-20)
        throw InputError("duplicate cone points " + std::to_string(i) + " and " + std::to_string(j));
  return out;
}

Density conic_density(std::span<const Vec3> points, double b, const PolarizedModel& model, const Density& reference,
                      const ConicQuadratureOptions& options) {
  if (!(b > 0.0 && b <= 1.0)) throw InputError("conic_density: cone angle parameter b must lie in (0, 1]");
  std::vector<Vec3> pts = validated_cone_points(points);
  if (b == 1.0 || pts.empty()) return Density::uniform();
  Density d;
  d.kind_ = Density::Kind::conic;
  d.uniform_ = false;
  d.points_ = std::move(pts);
  d.b_ = b;
  auto raw_times_reference = [&](const Vec3& x) { return d.raw_value(x) * reference.value(x); };
  d.nodes_ = std::make_shared<const SphereQuadrature>(
      conic_quadrature(d.points_, 1.0 - b, model, raw_times_reference, options));
  const double z = d.nodes_->integrate(raw_times_reference) / model.volume();
  if (!(z > 0.0) || !std::isfinite(z)) throw NumericError("conic_density: normalisation integral is not finite");
  d.log_norm_ = std::log(z);
  return d;
}

WeightedNodes probability_nodes(const Density& f, const ReferenceData& ref) {
  const SphereQuadrature& q = f.adapted_nodes() ? *f.adapted_nodes() : ref.quad;
  WeightedNodes out{q.nodes(), std::vector<double>(q.size())};
  const double inv_v = 1.0 / ref.model.volume();
  for (std::size_t i = 0; i < q.size(); ++i)
    out.mass[i] = q.weight(i) * inv_v * f.value(q.node(i)) * ref.volume.value(q.node(i));
  return out;
}

double lp_integral(const Density& f, double p, const ReferenceData& ref) {
  if (!(p > 0.0)) throw InputError("lp_integral: exponent must be positive");
  if (!f.in_lp(p)) {
    std::ostringstream msg;
    msg << "density is not in L^" << p << ": p(1-b) = " << p * f.exponent() << " >= 1";
    throw DomainError(msg.str());
  }
  if (f.is_uniform()) return 1.0;
  const double inv_v = 1.0 / ref.model.volume();
  if (f.kind() == Density::Kind::smooth) {
    double s = 0.0;
    for (std::size_t i = 0; i < ref.quad.size(); ++i)
      s += ref.quad.weight(i) * inv_v * std::pow(f.value(ref.quad.node(i)), p) * ref.volume.value(ref.quad.node(i));
    return s;
  }
  // f^p has exponent p(1-b): it needs its own adapted node set.
  auto integrand = [&](const Vec3& x) { return std::exp(p * f.log_value(x)) * ref.volume.value(x); };
  const SphereQuadrature q = conic_quadrature(f.cone_points(), p * f.exponent(), ref.model, integrand);
  return q.integrate(integrand) * inv_v;
}

OneOneForm ricci_density(const Density& volume, const PolarizedModel& model) {
  if (volume.kind() == Density::Kind::conic)
    throw DomainError("ricci_density: Ricci form of a conic measure is not supported");
  const double m = model.volume();
  // Ric(g ω/V) = Ric(ω) - dd^c log g = (2/m) ω - (Δ log g / m) ω
  SphericalExpansion g = SphericalExpansion::constant(2.0 / m);
  if (!volume.is_uniform()) g += (-1.0 / m) * volume.log_density().laplacian();
  return {g, 2.0};
}

OneOneForm eta_form(std::span<const Vec3> points, double b, const PolarizedModel& model) {
  if (!(b > 0.0 && b <= 1.0)) throw InputError("eta_form: cone angle parameter b must lie in (0, 1]");
  const std::vector<Vec3> pts = validated_cone_points(points);
  const double degree = static_cast<double>(pts.size());
  // each FS factor on O(1) has curvature ω_FS = ω/m
  return {SphericalExpansion::constant((1.0 - b) * degree / model.volume()), (1.0 - b) * degree};
}

}  // namespace gibbsk

#include "gibbsk/rng.hpp"

namespace gibbsk {

Potential random_potential(std::uint64_t seed, const ReferenceData& ref, const PotentialFamilyOptions& options) {
  if (options.lmax < 1 || options.min_degree < 1 || options.min_degree > options.lmax)
    throw InputError("random_potential: need 1 <= min_degree <= lmax");
  const Philox4x32 gen(seed);
  SphericalExpansion c(options.lmax);
  std::uint64_t counter = 0;
  for (int l = options.min_degree; l <= options.lmax; ++l) {
    const double scale = std::pow(l + 1.0, -options.decay);
    for (int j = -l; j <= l; j += 2) {
      const auto z = normal2(gen, counter++, 0);
      c.set_coefficient(l, j, scale * z[0]);
      if (j + 1 <= l) c.set_coefficient(l, j + 1, scale * z[1]);
    }
  }
  const double target = options.min_ratio_low +
                        (options.min_ratio_high - options.min_ratio_low) * gen.uniform2(counter, 1)[0];
  const std::vector<double> lap = evaluate_at(c.laplacian(), ref.quad.nodes());
  const double most_negative = *std::min_element(lap.begin(), lap.end()) / ref.model.volume();
  if (!(most_negative < 0.0)) return Potential(c);
  return Potential((1.0 - target) / -most_negative * c);
}

PotentialFamily random_family(std::size_t count, std::uint64_t seed, const ReferenceData& ref,
                              const PotentialFamilyOptions& options) {
  PotentialFamily fam;
  fam.seed = seed;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = mix_seed(seed, i);
    fam.member_seeds.push_back(s);
    fam.members.push_back(random_potential(s, ref, options));
  }
  return fam;
}

}  // namespace gibbsk
