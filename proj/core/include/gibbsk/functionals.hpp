#pragma once

// Energy functionals on H(L) for (P^1, O(m)), n = 1:
//   E(φ)   = (1/2V) ∫ φ (ω + ω_φ)
//   J(φ)   = (1/V) ∫ φ ω - E(φ)
//   J_χ(φ) = (1/V) ∫ φ χ - (χ̄/2V) ∫ φ (ω + ω_φ)
//   Ent    = ∫ log(ω_φ / (V f dV)) ω_φ / V
//   M      = Ent + J_{-Ric dV + η}
//   D      = -E - (1/γ) log ∫ e^{-γφ} f dV

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gibbsk/geometry.hpp"
#include "gibbsk/quantization.hpp"

namespace gibbsk {

double energy(const Potential& phi, const ReferenceData& ref);
double j_functional(const Potential& phi, const ReferenceData& ref);
double j_chi(const Potential& phi, const OneOneForm& chi, const ReferenceData& ref);
/// E(φ) - (1/V) ∫ φ ω_φ, the closed form of J_ω.
double j_omega_closed_form(const Potential& phi, const ReferenceData& ref);

double entropy(const Potential& phi, const Density& f, const ReferenceData& ref);
/// ∫ a dν - log ∫ e^a f dV with ν = ω_φ/V; never exceeds the entropy.
double entropy_lower_bound(const Potential& phi, const Density& f, const std::function<double(const Vec3&)>& a,
                           const ReferenceData& ref);
/// The maximiser a = log(ν / (f dV)).
std::function<double(const Vec3&)> entropy_optimal_test_function(const Potential& phi, const Density& f,
                                                                 const ReferenceData& ref);

struct MabuchiParts {
  double entropy = 0.0;
  double j_twist = 0.0;  // J_{-Ric dV + η}
  double total = 0.0;    // entropy + j_twist
};
MabuchiParts mabuchi(const Potential& phi, const Density& f, const OneOneForm& eta, const ReferenceData& ref);

/// log ∫ e^{-γφ} f dV with a max shift.
double log_exp_integral(const Potential& phi, double gamma, const Density& f, const ReferenceData& ref);
double ding(const Potential& phi, double gamma, const Density& f, const ReferenceData& ref);

/// M_{f,η}(φ) - γ D_{-γ,f}(φ) - J_{-Ric dV + η + γω}(φ); nonnegative.
double mabuchi_ding_margin(const Potential& phi, double gamma, const Density& f, const OneOneForm& eta,
                           const ReferenceData& ref);

struct Tolerances {
  double identity = 1e-9;
  double inequality = 1e-6;
  double singular = 1e-4;
};

struct FunctionalReport {
  double E = 0.0;
  double J = 0.0;
  std::vector<double> J_chi;
  double Ent = 0.0;
  MabuchiParts M;
  double D = 0.0;
  double gamma = 1.0;
  double tau = 1.0;
  double margin = 0.0;  // mabuchi_ding_margin
  Tolerances tolerances;
};

FunctionalReport evaluate_report(const Potential& phi, double gamma, double tau, const Density& f,
                                 const OneOneForm& eta, const std::vector<OneOneForm>& chis, const ReferenceData& ref);

struct FitOptions {
  int k = 0;            // quantization level for C0 / C1; 0 skips them
  double gamma = 0.5;   // for the quantized Ding residual
  Density f = Density::uniform();
  std::vector<double> b_grid{1e-3, 1e-2, 1e-1, 1.0};
};

struct ConstantsFit {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double C0 = 0.0;
  double C1 = 0.0;
  double c = 0.0;
  // raw sup of each residual over the family, before extrapolation and clipping
  double sup_energy_residual = 0.0;
  double sup_quantized_energy_residual = 0.0;
  double sup_quantized_ding_residual = 0.0;
  std::size_t family_size = 0;
  std::string family;
};

/// Smallest constants that make
///   J_ω ≥ A J - B,  -E + sup φ ≤ J + C,  the quantized energy bound with C0,
///   the quantized Ding bound with C1
/// hold on the family, padded by the gap between the two largest order
/// statistics. c = max(0, -min g_ric).
ConstantsFit fit_constants(const std::vector<Potential>& family, const FitOptions& options, const ReferenceData& ref,
                           std::string descriptor = "");

/// Endpoint extrapolation of a sample maximum: r_(n) + (r_(n) - r_(n-j)),
/// j = min(5, n - 1).
double extrapolated_sup(std::vector<double> residuals);

/// Per-potential residuals used by fit_constants.
double energy_sup_residual(const Potential& phi, const ReferenceData& ref);
/// k (-E_k(φ_ε)/(1-ε) + E(φ)) / (-E(φ) + sup φ), φ_ε = (1-ε)φ, ε = c/k.
double quantized_energy_residual(const Potential& phi, const SectionBasis& basis, double c, const ReferenceData& ref);
/// (γ D_k(φ) - γ_ε D_{-γ_ε}(φ)) / (γ_ε (1 + J_ω(φ)/k)), γ_ε = (1-c/k)γ.
double quantized_ding_residual(const Potential& phi, const SectionBasis& basis, double gamma, double c, const Density& f,
                       const ReferenceData& ref);

/// sup φ over the quadrature nodes.
double sup_potential(const Potential& phi, const ReferenceData& ref);

enum class FunctionalTag { j, j_omega, mabuchi, ding };
std::optional<FunctionalTag> parse_functional_tag(const std::string& s);
std::string to_string(FunctionalTag tag);

struct CoercivityReport {
  FunctionalTag tag = FunctionalTag::j;
  double slope = 0.0;
  double intercept = 0.0;
  double j_min = 0.0;
  double j_max = 0.0;
  std::size_t hull_points = 0;
  std::vector<double> J;
  std::vector<double> F;
};

/// Lower convex envelope of (J, F) over the family; reports the segment
/// reaching the largest J. InputError when the J range is degenerate.
CoercivityReport coercivity_probe(FunctionalTag tag, const std::vector<Potential>& family, const ReferenceData& ref,
                                  const Density& f = Density::uniform(), const OneOneForm& eta = OneOneForm::zero(),
                                  double gamma = 1.0);

}  // namespace gibbsk
