#include "gibbsk/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gibbsk/error.hpp"

namespace gibbsk {

namespace {

struct Sampled {
  PotentialOnNodes s;
  const SphereQuadrature* q;
};

Sampled sample(const Potential& phi, const ReferenceData& ref) {
  Sampled out{sample_potential(phi, ref.quad.nodes(), ref.model), &ref.quad};
  for (std::size_t i = 0; i < out.s.ratio.size(); ++i)
    if (!(out.s.ratio[i] > 0.0)) omega_phi_ratio(phi, ref.quad, ref.model);  // throws with the worst node
  return out;
}

// (1/2V) ∫ φ (1 + u) ω on sampled data
double energy_sampled(const Sampled& d, double volume) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.s.phi.size(); ++i) s += d.q->weight(i) * d.s.phi[i] * (1.0 + d.s.ratio[i]);
  return s / (2.0 * volume);
}

double mean_sampled(const Sampled& d, double volume) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.s.phi.size(); ++i) s += d.q->weight(i) * d.s.phi[i];
  return s / volume;
}

double mean_phi_u(const Sampled& d, double volume) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.s.phi.size(); ++i) s += d.q->weight(i) * d.s.phi[i] * d.s.ratio[i];
  return s / volume;
}

const SphereQuadrature& nodes_for(const Density& f, const ReferenceData& ref) {
  return f.adapted_nodes() ? *f.adapted_nodes() : ref.quad;
}

void check_probability(const Density& f, const ReferenceData& ref) {
  const WeightedNodes mu = probability_nodes(f, ref);
  double total = 0.0;
  for (double v : mu.mass) total += v;
  if (std::abs(total - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "density is not a probability density on the quadrature: integral = " << total;
    throw InputError(msg.str());
  }
}

}  // namespace

double energy(const Potential& phi, const ReferenceData& ref) {
  return energy_sampled(sample(phi, ref), ref.model.volume());
}

double j_functional(const Potential& phi, const ReferenceData& ref) {
  const Sampled d = sample(phi, ref);
  return mean_sampled(d, ref.model.volume()) - energy_sampled(d, ref.model.volume());
}

double j_chi(const Potential& phi, const OneOneForm& chi, const ReferenceData& ref) {
  const Sampled d = sample(phi, ref);
  const std::vector<double> g = evaluate_at(chi.density(), ref.quad.nodes());
  const double v = ref.model.volume();
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += ref.quad.weight(i) * d.s.phi[i] * g[i];
  return s / v - chi.average(ref.model) * energy_sampled(d, v);
}

double j_omega_closed_form(const Potential& phi, const ReferenceData& ref) {
  const Sampled d = sample(phi, ref);
  const double v = ref.model.volume();
  return energy_sampled(d, v) - mean_phi_u(d, v);
}

double entropy(const Potential& phi, const Density& f, const ReferenceData& ref) {
  check_probability(f, ref);
  const SphereQuadrature& q = nodes_for(f, ref);
  const PotentialOnNodes s = sample_potential(phi, q.nodes(), ref.model);
  const double inv_v = 1.0 / ref.model.volume();
  double ent = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double u = s.ratio[i];
    if (!(u > 0.0)) omega_phi_ratio(phi, ref.quad, ref.model);
    if (!(u > 0.0)) throw DomainError("entropy: ω_φ is not positive on the adapted node set");
    const double log_mu = f.log_value(q.node(i)) + std::log(ref.volume.value(q.node(i)));
    ent += q.weight(i) * inv_v * u * (std::log(u) - log_mu);
  }
  return ent;
}

double entropy_lower_bound(const Potential& phi, const Density& f, const std::function<double(const Vec3&)>& a,
                           const ReferenceData& ref) {
  const SphereQuadrature& q = nodes_for(f, ref);
  const PotentialOnNodes s = sample_potential(phi, q.nodes(), ref.model);
  const WeightedNodes mu = probability_nodes(f, ref);
  const double inv_v = 1.0 / ref.model.volume();
  std::vector<double> av(q.size());
  double pairing = 0.0;
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < q.size(); ++i) {
    av[i] = a(q.node(i));
    pairing += q.weight(i) * inv_v * s.ratio[i] * av[i];
    shift = std::max(shift, av[i]);
  }
  double z = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) z += mu.mass[i] * std::exp(av[i] - shift);
  return pairing - (shift + std::log(z));
}

std::function<double(const Vec3&)> entropy_optimal_test_function(const Potential& phi, const Density& f,
                                                                 const ReferenceData& ref) {
  return [phi, f, model = ref.model, volume = ref.volume](const Vec3& x) {
    return std::log(phi.ratio(x, model)) - f.log_value(x) - std::log(volume.value(x));
  };
}

MabuchiParts mabuchi(const Potential& phi, const Density& f, const OneOneForm& eta, const ReferenceData& ref) {
  MabuchiParts p;
  p.entropy = entropy(phi, f, ref);
  p.j_twist = j_chi(phi, -ricci_density(ref.volume, ref.model) + eta, ref);
  p.total = p.entropy + p.j_twist;
  return p;
}

double log_exp_integral(const Potential& phi, double gamma, const Density& f, const ReferenceData& ref) {
  const WeightedNodes mu = probability_nodes(f, ref);
  const PotentialOnNodes s = sample_potential(phi, mu.nodes, ref.model);
  double shift = -std::numeric_limits<double>::infinity();
  for (double v : s.phi) shift = std::max(shift, -gamma * v);
  double z = 0.0;
  for (std::size_t i = 0; i < s.phi.size(); ++i) z += mu.mass[i] * std::exp(-gamma * s.phi[i] - shift);
  return shift + std::log(z);
}

double ding(const Potential& phi, double gamma, const Density& f, const ReferenceData& ref) {
  if (!(gamma > 0.0)) throw InputError("ding: gamma must be positive");
  return -energy(phi, ref) - log_exp_integral(phi, gamma, f, ref) / gamma;
}

double mabuchi_ding_margin(const Potential& phi, double gamma, const Density& f, const OneOneForm& eta,
                           const ReferenceData& ref) {
  const MabuchiParts m = mabuchi(phi, f, eta, ref);
  const OneOneForm chi = -ricci_density(ref.volume, ref.model) + eta + gamma * OneOneForm::kahler(ref.model);
  return m.total - gamma * ding(phi, gamma, f, ref) - j_chi(phi, chi, ref);
}

FunctionalReport evaluate_report(const Potential& phi, double gamma, double tau, const Density& f,
                                 const OneOneForm& eta, const std::vector<OneOneForm>& chis, const ReferenceData& ref) {
  if (!(tau > 0.0)) throw InputError("evaluate_report: tau must be positive");
  FunctionalReport r;
  r.gamma = gamma;
  r.tau = tau;
  r.E = energy(phi, ref);
  r.J = j_functional(phi, ref);
  for (const OneOneForm& chi : chis) r.J_chi.push_back(j_chi(phi, chi, ref));
  r.M = mabuchi(phi, f, eta, ref);
  r.Ent = r.M.entropy;
  r.D = ding(phi, gamma, f, ref);
  r.margin = mabuchi_ding_margin(phi, gamma, f, eta, ref);
  return r;
}

// ------------------------------------------------------------------ fitting

double extrapolated_sup(std::vector<double> r) {
  if (r.empty()) throw InputError("extrapolated_sup: empty residual list");
  std::sort(r.begin(), r.end());
  const std::size_t n = r.size();
  if (n == 1) return r[0];
  const std::size_t j = std::min<std::size_t>(5, n - 1);
  return r[n - 1] + (r[n - 1] - r[n - 1 - j]);
}

double sup_potential(const Potential& phi, const ReferenceData& ref) {
  const std::vector<double> v = evaluate_at(phi.expansion(), ref.quad.nodes());
  return *std::max_element(v.begin(), v.end());
}

double energy_sup_residual(const Potential& phi, const ReferenceData& ref) {
  const Sampled d = sample(phi, ref);
  const double v = ref.model.volume();
  const double e = energy_sampled(d, v);
  const double j = mean_sampled(d, v) - e;
  return -e + sup_potential(phi, ref) - j;
}

double quantized_energy_residual(const Potential& phi, const SectionBasis& basis, double c, const ReferenceData& ref) {
  const double k = basis.k();
  const double eps = c / k;
  if (!(eps < 1.0)) throw InputError("quantized_energy_residual: need k > c");
  const double e = energy(phi, ref);
  const double num = -energy_k(phi.scaled(1.0 - eps), basis, ref) / (1.0 - eps) + e;
  const double den = -e + sup_potential(phi, ref);
  if (den < 1e-12) return num <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
  return k * num / den;
}

double quantized_ding_residual(const Potential& phi, const SectionBasis& basis, double gamma, double c, const Density& f,
                       const ReferenceData& ref) {
  const double k = basis.k();
  const double g_eps = (1.0 - c / k) * gamma;
  if (!(g_eps > 0.0)) throw InputError("quantized_ding_residual: need k > c");
  const double lhs = gamma * approx_ding(phi, gamma, f, basis, ref);
  const double rhs = g_eps * ding(phi, g_eps, f, ref);
  const double jw = j_chi(phi, OneOneForm::kahler(ref.model), ref);
  return (lhs - rhs) / (g_eps * (1.0 + jw / k));
}

ConstantsFit fit_constants(const std::vector<Potential>& family, const FitOptions& options, const ReferenceData& ref,
                           std::string descriptor) {
  if (family.empty()) throw InputError("fit_constants: empty potential family");
  ConstantsFit fit;
  fit.family_size = family.size();
  fit.family = std::move(descriptor);

  const std::vector<double> g = evaluate_at(ricci_density(ref.volume, ref.model).density(), ref.quad.nodes());
  fit.c = std::max(0.0, -*std::min_element(g.begin(), g.end()));

  std::vector<double> jv, jw, r_energy;
  const OneOneForm omega = OneOneForm::kahler(ref.model);
  for (const Potential& phi : family) {
    jv.push_back(j_functional(phi, ref));
    jw.push_back(j_chi(phi, omega, ref));
    r_energy.push_back(energy_sup_residual(phi, ref));
  }

  // A on the grid 1/64, largest feasible at the smallest B that admits A > 0
  constexpr double kQuantum = 1.0 / 64.0;
  constexpr double kMaxA = 64.0;
  fit.A = 0.0;
  fit.B = options.b_grid.empty() ? 1.0 : options.b_grid.back();
  for (double b : options.b_grid) {
    double a = kMaxA;
    for (std::size_t i = 0; i < family.size(); ++i)
      if (jv[i] > 1e-14) a = std::min(a, (jw[i] + b) / jv[i]);
    a = std::floor(a / kQuantum) * kQuantum;
    if (a > 0.0) {
      fit.A = a;
      fit.B = b;
      break;
    }
  }

  fit.sup_energy_residual = *std::max_element(r_energy.begin(), r_energy.end());
  fit.C = std::max(0.0, extrapolated_sup(r_energy));

  if (options.k > 0) {
    if (!(options.k > fit.c)) throw InputError("fit_constants: need k > c for the C0 / C1 fits");
    const SectionBasis basis = normalized_basis(ref.model.degree(), options.k, ref);
    std::vector<double> r_qenergy, r_qding;
    for (const Potential& phi : family) {
      r_qenergy.push_back(quantized_energy_residual(phi, basis, fit.c, ref));
      r_qding.push_back(quantized_ding_residual(phi, basis, options.gamma, fit.c, options.f, ref));
    }
    fit.sup_quantized_energy_residual = *std::max_element(r_qenergy.begin(), r_qenergy.end());
    fit.sup_quantized_ding_residual = *std::max_element(r_qding.begin(), r_qding.end());
    fit.C0 = std::max(0.0, extrapolated_sup(r_qenergy));
    fit.C1 = std::max(0.0, extrapolated_sup(r_qding));
  }
  return fit;
}

// -------------------------------------------------------------- coercivity

std::optional<FunctionalTag> parse_functional_tag(const std::string& s) {
  if (s == "J") return FunctionalTag::j;
  if (s == "J_omega") return FunctionalTag::j_omega;
  if (s == "M") return FunctionalTag::mabuchi;
  if (s == "D") return FunctionalTag::ding;
  return std::nullopt;
}

std::string to_string(FunctionalTag tag) {
  switch (tag) {
    case FunctionalTag::j: return "J";
    case FunctionalTag::j_omega: return "J_omega";
    case FunctionalTag::mabuchi: return "M";
    case FunctionalTag::ding: return "D";
  }
  return "?";
}

CoercivityReport coercivity_probe(FunctionalTag tag, const std::vector<Potential>& family, const ReferenceData& ref,
                                  const Density& f, const OneOneForm& eta, double gamma) {
  CoercivityReport r;
  r.tag = tag;
  const OneOneForm omega = OneOneForm::kahler(ref.model);
  for (const Potential& phi : family) {
    const double j = j_functional(phi, ref);
    double v = 0.0;
    switch (tag) {
      case FunctionalTag::j: v = j; break;
      case FunctionalTag::j_omega: v = j_chi(phi, omega, ref); break;
      case FunctionalTag::mabuchi: v = mabuchi(phi, f, eta, ref).total; break;
      case FunctionalTag::ding: v = ding(phi, gamma, f, ref); break;
    }
    r.J.push_back(j);
    r.F.push_back(v);
  }
  if (r.J.size() < 2) throw InputError("coercivity_probe: need at least two potentials");
  r.j_min = *std::min_element(r.J.begin(), r.J.end());
  r.j_max = *std::max_element(r.J.begin(), r.J.end());
  if (!(r.j_max - r.j_min > 1e-9 * std::max(1.0, r.j_max)))
    throw InputError("coercivity_probe: degenerate J range over the family");

  std::vector<std::size_t> order(r.J.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return r.J[a] != r.J[b] ? r.J[a] < r.J[b] : r.F[a] < r.F[b];
  });
  // Andrew's monotone chain, lower hull
  std::vector<std::size_t> hull;
  auto cross = [&](std::size_t o, std::size_t a, std::size_t b) {
    return (r.J[a] - r.J[o]) * (r.F[b] - r.F[o]) - (r.F[a] - r.F[o]) * (r.J[b] - r.J[o]);
  };
  for (std::size_t i : order) {
    if (!hull.empty() && r.J[hull.back()] == r.J[i]) continue;  // keep the lower F at equal J
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), i) <= 0.0) hull.pop_back();
    hull.push_back(i);
  }
  r.hull_points = hull.size();
  const std::size_t a = hull[hull.size() - 2];
  const std::size_t b = hull.back();
  r.slope = (r.F[b] - r.F[a]) / (r.J[b] - r.J[a]);
  r.intercept = r.F[b] - r.slope * r.J[b];
  return r;
}

}  // namespace gibbsk
