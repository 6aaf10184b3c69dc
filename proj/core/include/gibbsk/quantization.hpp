#pragma once

// Quantized objects at level k: bases of H^0(P^1, O(mk)), Gram matrices
// H^(k)(φ, μ), the determinant energy E_k, Slater determinants.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "gibbsk/geometry.hpp"

namespace gibbsk {

/// Basis s_i = Σ_j A_ij z^j of H^0(P^1, O(mk)), N = mk + 1. With A = I this
/// is the monomial basis; pointwise norms use the FS metric h^k, so
/// |z^j|^2_{h^k} = |z|^{2j} / (1 + |z|^2)^{mk}.
class SectionBasis {
 public:
  SectionBasis(int m, int k);
  SectionBasis(int m, int k, Eigen::MatrixXcd transform);

  int m() const { return m_; }
  int k() const { return k_; }
  int dimension() const { return n_; }
  int degree() const { return m_ * k_; }
  const Eigen::MatrixXcd& transform() const { return transform_; }
  bool is_monomial() const { return monomial_; }
  /// log |det A|^2.
  double log_abs_det_transform() const { return log_det_transform_; }

  /// Unit-norm frame values: entry i is s_i(x) divided by a local frame of
  /// h^k-length one, so |value_i|^2 = |s_i(x)|^2_{h^k}.
  Eigen::VectorXcd evaluate(const Vec3& x) const;
  /// Monomial value at a stereographic coordinate: z^j (no weight).
  std::complex<double> monomial(std::size_t j, std::complex<double> z) const;

  SectionBasis with_transform(const Eigen::MatrixXcd& a) const;

 private:
  int m_, k_, n_;
  Eigen::MatrixXcd transform_;
  bool monomial_;
  double log_det_transform_;
};

SectionBasis section_basis(int m, int k);

struct GramMatrix {
  Eigen::MatrixXcd entries;
  int k = 0;
  std::string potential_descriptor;
  std::string measure_descriptor;
};

/// H_ij = ∫ (s_i, s_j)_{(h e^{-φ})^k} dμ with μ = f dV. NumericError if the
/// result is not positive definite (quadrature too coarse).
GramMatrix gram_matrix(const Potential& phi, const Density& mu, const SectionBasis& basis, const ReferenceData& ref);
/// Same, on an explicit node set with probability masses.
GramMatrix gram_matrix(const Potential& phi, const WeightedNodes& mu, const SectionBasis& basis,
                       const PolarizedModel& model);

/// log det of a Hermitian positive definite matrix via Cholesky with a pivot
/// threshold; NumericError on failure.
double hermitian_log_det(const Eigen::MatrixXcd& h);

/// E_k(φ) = -(1/(kN)) log det H^(k)(φ, dV).
double energy_k(const Potential& phi, const SectionBasis& basis, const ReferenceData& ref);

/// D_{k,-γ,f}(φ) = -E_k(φ) - (1/γ) log ∫ e^{-γφ} dV_f.
double approx_ding(const Potential& phi, double gamma, const Density& f, const SectionBasis& basis,
                   const ReferenceData& ref);

/// Basis orthonormal for H^(k)(0, dV), so E_k(0) = 0.
SectionBasis normalized_basis(int m, int k, const ReferenceData& ref);

/// log |det S^(k)(x_1..x_N)|^2 in the metric (h e^{-φ})^k, by LU of the
/// evaluation matrix. -infinity when two points coincide.
double slater_log_det(std::span<const Vec3> points, const Potential& phi, const SectionBasis& basis);

/// log |det S|^2_{h^k} for the given basis from the Vandermonde product
/// Π_{i<j} (1 - x_i·x_j)/2 plus log|det A|^2. Points are put in a canonical
/// order first, so any permutation gives the bit-identical value.
double slater_log_det_product(std::span<const Vec3> points, const SectionBasis& basis);

struct DetIdentityCheck {
  double lhs = 0.0;        // ‖det S‖^2_{L^2}
  double rhs = 0.0;        // N! det H
  double relative_error = 0.0;
  double standard_error = 0.0;  // MC mode only
  std::size_t evaluations = 0;
};

/// ‖det S^(k)‖^2_{L^2(h e^{-φ}, dV^{⊗N})} against N! det H^(k)(φ, dV) with
/// the N-fold tensor power of q (N <= 4; InputError otherwise).
DetIdentityCheck det_identity_tensor(const Potential& phi, const SectionBasis& basis, const SphereQuadrature& q,
                           const ReferenceData& ref);
/// Monte-Carlo version of the left side, any N.
DetIdentityCheck det_identity_mc(const Potential& phi, const SectionBasis& basis, const ReferenceData& ref,
                       std::size_t samples, std::uint64_t seed);

}  // namespace gibbsk
