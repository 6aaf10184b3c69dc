#include "gibbsk/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gibbsk/error.hpp"
#include "gibbsk/parallel.hpp"
#include "gibbsk/rng.hpp"

namespace gibbsk {

namespace {

constexpr double kPivotThreshold = 1e-14;

Vec3 uniform_point(const Philox4x32& gen, std::uint64_t sample, std::uint64_t slot) {
  const auto [u, v] = gen.uniform2(sample, slot);
  const double t = 2.0 * u - 1.0;
  const double r = std::sqrt(std::max(0.0, 1.0 - t * t));
  const double a = 2.0 * std::numbers::pi * v;
  return {r * std::cos(a), r * std::sin(a), t};
}

bool lex_less(const Vec3& a, const Vec3& b) {
  if (a[0] != b[0]) return a[0] < b[0];
  if (a[1] != b[1]) return a[1] < b[1];
  return a[2] < b[2];
}

}  // namespace

// ------------------------------------------------------------ SectionBasis

SectionBasis::SectionBasis(int m, int k) : SectionBasis(m, k, Eigen::MatrixXcd()) {}

SectionBasis::SectionBasis(int m, int k, Eigen::MatrixXcd transform) : m_(m), k_(k) {
  if (m < 1 || k < 1) throw InputError("section_basis: m and k must be >= 1");
  if (static_cast<long long>(m) * k > 4096) throw InputError("section_basis: degree mk exceeds 4096");
  n_ = m * k + 1;
  if (transform.size() == 0) {
    transform_ = Eigen::MatrixXcd::Identity(n_, n_);
    monomial_ = true;
    log_det_transform_ = 0.0;
    return;
  }
  if (transform.rows() != n_ || transform.cols() != n_)
    throw InputError("section_basis: transform must be N x N with N = mk + 1");
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(transform);
  double log_det = 0.0;
  for (int i = 0; i < n_; ++i) log_det += 2.0 * std::log(std::abs(lu.matrixLU()(i, i)));
  if (!std::isfinite(log_det)) throw InputError("section_basis: transform is singular");
  transform_ = std::move(transform);
  monomial_ = transform_.isIdentity(0.0);
  log_det_transform_ = log_det;
}

Eigen::VectorXcd SectionBasis::evaluate(const Vec3& x) const {
  const Spinor sp = spinor(x);
  const int d = degree();
  Eigen::VectorXcd v(n_);
  // β^j α^{d-j}, built from both ends to avoid 0^0 issues at the poles
  std::vector<std::complex<double>> beta_pow(n_), alpha_pow(n_);
  beta_pow[0] = alpha_pow[0] = 1.0;
  for (int j = 1; j < n_; ++j) {
    beta_pow[j] = beta_pow[j - 1] * sp.beta;
    alpha_pow[j] = alpha_pow[j - 1] * sp.alpha;
  }
  for (int j = 0; j < n_; ++j) v[j] = beta_pow[j] * alpha_pow[d - j];
  if (monomial_) return v;
  return transform_ * v;
}

std::complex<double> SectionBasis::monomial(std::size_t j, std::complex<double> z) const {
  return std::pow(z, static_cast<int>(j));
}

SectionBasis SectionBasis::with_transform(const Eigen::MatrixXcd& a) const {
  return SectionBasis(m_, k_, a * transform_);
}

SectionBasis section_basis(int m, int k) { return SectionBasis(m, k); }

// ------------------------------------------------------------ Gram matrices

GramMatrix gram_matrix(const Potential& phi, const WeightedNodes& mu, const SectionBasis& basis,
                       const PolarizedModel& model) {
  const int n = basis.dimension();
  const std::size_t nodes = mu.nodes.size();
  const PotentialOnNodes s = sample_potential(phi, mu.nodes, model);
  Eigen::MatrixXcd frame(n, static_cast<Eigen::Index>(nodes));
  for (std::size_t p = 0; p < nodes; ++p) {
    const double scale = std::sqrt(mu.mass[p] * std::exp(-basis.k() * s.phi[p]));
    frame.col(static_cast<Eigen::Index>(p)) = scale * basis.evaluate(mu.nodes[p]);
  }
  GramMatrix g;
  g.k = basis.k();
  g.entries = frame * frame.adjoint();
  g.entries = 0.5 * (g.entries + g.entries.adjoint()).eval();
  hermitian_log_det(g.entries);  // definiteness check
  return g;
}

GramMatrix gram_matrix(const Potential& phi, const Density& mu, const SectionBasis& basis, const ReferenceData& ref) {
  if (!is_admissible(phi, ref.quad, ref.model)) omega_phi_ratio(phi, ref.quad, ref.model);
  GramMatrix g = gram_matrix(phi, probability_nodes(mu, ref), basis, ref.model);
  std::ostringstream pd, md;
  pd << "lmax=" << phi.lmax();
  md << (mu.is_uniform() ? "dV" : mu.kind() == Density::Kind::conic ? "conic f dV" : "smooth f dV");
  g.potential_descriptor = pd.str();
  g.measure_descriptor = md.str();
  return g;
}

double hermitian_log_det(const Eigen::MatrixXcd& h) {
  const Eigen::LLT<Eigen::MatrixXcd> llt(h);
  if (llt.info() != Eigen::Success)
    throw NumericError("Gram matrix is not positive definite; refine the quadrature");
  const auto& l = llt.matrixLLT();
  const double scale = h.diagonal().real().maxCoeff();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    const double pivot = std::real(l(i, i));
    if (!(pivot * pivot > kPivotThreshold * scale))
      throw NumericError("Gram matrix pivot below threshold; refine the quadrature");
    log_det += 2.0 * std::log(pivot);
  }
  return log_det;
}

double energy_k(const Potential& phi, const SectionBasis& basis, const ReferenceData& ref) {
  const GramMatrix g = gram_matrix(phi, Density::uniform(), basis, ref);
  return -hermitian_log_det(g.entries) / (basis.k() * static_cast<double>(basis.dimension()));
}

double approx_ding(const Potential& phi, double gamma, const Density& f, const SectionBasis& basis,
                   const ReferenceData& ref) {
  if (!(gamma > 0.0)) throw InputError("approx_ding: gamma must be positive");
  const WeightedNodes mu = probability_nodes(f, ref);
  const PotentialOnNodes s = sample_potential(phi, mu.nodes, ref.model);
  double shift = -std::numeric_limits<double>::infinity();
  for (double v : s.phi) shift = std::max(shift, -gamma * v);
  double sum = 0.0;
  for (std::size_t i = 0; i < s.phi.size(); ++i) sum += mu.mass[i] * std::exp(-gamma * s.phi[i] - shift);
  return -energy_k(phi, basis, ref) - (shift + std::log(sum)) / gamma;
}

SectionBasis normalized_basis(int m, int k, const ReferenceData& ref) {
  const SectionBasis mono(m, k);
  const GramMatrix g = gram_matrix(Potential::zero(), Density::uniform(), mono, ref);
  const Eigen::LLT<Eigen::MatrixXcd> llt(g.entries);
  const Eigen::MatrixXcd lower = llt.matrixL();
  const Eigen::MatrixXcd a =
      lower.triangularView<Eigen::Lower>().solve(Eigen::MatrixXcd::Identity(mono.dimension(), mono.dimension()));
  return SectionBasis(m, k, a);
}

// ------------------------------------------------------ Slater determinants

double slater_log_det(std::span<const Vec3> points, const Potential& phi, const SectionBasis& basis) {
  const int n = basis.dimension();
  if (static_cast<int>(points.size()) != n)
    throw InputError("slater_log_det: expected " + std::to_string(n) + " points");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (points[i] == points[j]) return -std::numeric_limits<double>::infinity();
  Eigen::MatrixXcd m(n, n);
  double weight = 0.0;
  for (int j = 0; j < n; ++j) {
    m.col(j) = basis.evaluate(points[static_cast<std::size_t>(j)]);
    weight -= basis.k() * phi.value(points[static_cast<std::size_t>(j)]);
  }
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  double log_det = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = std::abs(lu.matrixLU()(i, i));
    if (a == 0.0) return -std::numeric_limits<double>::infinity();
    log_det += 2.0 * std::log(a);
  }
  return log_det + weight;
}

double slater_log_det_product(std::span<const Vec3> points, const SectionBasis& basis) {
  const int n = basis.dimension();
  if (static_cast<int>(points.size()) != n)
    throw InputError("slater_log_det_product: expected " + std::to_string(n) + " points");
  std::array<Vec3, 64> local;
  std::vector<Vec3> heap;
  std::span<Vec3> sorted;
  if (points.size() <= local.size()) {
    std::copy(points.begin(), points.end(), local.begin());
    sorted = std::span<Vec3>(local.data(), points.size());
  } else {
    heap.assign(points.begin(), points.end());
    sorted = heap;
  }
  std::sort(sorted.begin(), sorted.end(), lex_less);
  double s = basis.log_abs_det_transform();
  for (std::size_t i = 0; i < sorted.size(); ++i)
    for (std::size_t j = i + 1; j < sorted.size(); ++j) s += std::log(chordal_half(sorted[i], sorted[j]));
  return s;
}

// --------------------------------------------------- determinant identity

namespace {

double abs_det2(const std::array<const std::complex<double>*, 4>& c, int n) {
  using C = std::complex<double>;
  switch (n) {
    case 1: return std::norm(c[0][0]);
    case 2: return std::norm(c[0][0] * c[1][1] - c[1][0] * c[0][1]);
    case 3: {
      const C d = c[0][0] * (c[1][1] * c[2][2] - c[2][1] * c[1][2]) -
                  c[1][0] * (c[0][1] * c[2][2] - c[2][1] * c[0][2]) +
                  c[2][0] * (c[0][1] * c[1][2] - c[1][1] * c[0][2]);
      return std::norm(d);
    }
    default: {
      // Laplace expansion along rows 0,1 / 2,3 (columns are c[j])
      auto m2 = [&](int r0, int r1, int a, int b) { return c[a][r0] * c[b][r1] - c[b][r0] * c[a][r1]; };
      const C d = m2(0, 1, 0, 1) * m2(2, 3, 2, 3) - m2(0, 1, 0, 2) * m2(2, 3, 1, 3) +
                  m2(0, 1, 0, 3) * m2(2, 3, 1, 2) + m2(0, 1, 1, 2) * m2(2, 3, 0, 3) -
                  m2(0, 1, 1, 3) * m2(2, 3, 0, 2) + m2(0, 1, 2, 3) * m2(2, 3, 0, 1);
      return std::norm(d);
    }
  }
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace

DetIdentityCheck det_identity_tensor(const Potential& phi, const SectionBasis& basis, const SphereQuadrature& q,
                           const ReferenceData& ref) {
  const int n = basis.dimension();
  if (n > 4) throw InputError("det_identity_tensor: tensor quadrature supports N <= 4, got N = " + std::to_string(n));
  WeightedNodes mu{q.nodes(), std::vector<double>(q.size())};
  for (std::size_t i = 0; i < q.size(); ++i)
    mu.mass[i] = q.weight(i) / ref.model.volume() * ref.volume.value(q.node(i));
  const PotentialOnNodes s = sample_potential(phi, q.nodes(), ref.model);
  const std::size_t m = q.size();
  std::vector<std::complex<double>> frame(m * static_cast<std::size_t>(n));
  for (std::size_t p = 0; p < m; ++p) {
    const Eigen::VectorXcd v = basis.evaluate(q.node(p));
    const double scale = std::sqrt(mu.mass[p] * std::exp(-basis.k() * s.phi[p]));
    for (int i = 0; i < n; ++i) frame[p * n + i] = scale * v[i];
  }
  // Σ over ordered N-tuples = N! Σ over strictly increasing ones
  double sum = 0.0;
  std::size_t evals = 0;
  std::array<const std::complex<double>*, 4> cols{};
  std::array<std::size_t, 4> idx{};
  for (int i = 0; i < n; ++i) idx[i] = static_cast<std::size_t>(i);
  if (m >= static_cast<std::size_t>(n)) {
    while (true) {
      for (int i = 0; i < n; ++i) cols[i] = &frame[idx[i] * n];
      sum += abs_det2(cols, n);
      ++evals;
      int pos = n - 1;
      while (pos >= 0 && idx[pos] == m - static_cast<std::size_t>(n - pos)) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int i = pos + 1; i < n; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
  DetIdentityCheck out;
  out.lhs = std::exp(log_factorial(n)) * sum;
  const GramMatrix g = gram_matrix(phi, mu, basis, ref.model);
  out.rhs = std::exp(log_factorial(n) + hermitian_log_det(g.entries));
  out.relative_error = std::abs(out.lhs / out.rhs - 1.0);
  out.evaluations = evals;
  return out;
}

DetIdentityCheck det_identity_mc(const Potential& phi, const SectionBasis& basis, const ReferenceData& ref,
                       std::size_t samples, std::uint64_t seed) {
  if (samples < 2) throw InputError("det_identity_mc: need at least 2 samples");
  const int n = basis.dimension();
  const Philox4x32 gen(seed);
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = chunk_count(samples, kChunk);
  std::vector<double> sums(chunks), sums2(chunks);
  for_each_chunk(samples, kChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::vector<Vec3> pts(static_cast<std::size_t>(n));
    double s = 0.0, s2 = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      double log_g = 0.0;
      for (int j = 0; j < n; ++j) {
        pts[j] = uniform_point(gen, i, static_cast<std::uint64_t>(j));
        log_g += std::log(ref.volume.value(pts[j]));
      }
      const double v = std::exp(slater_log_det(pts, phi, basis) + log_g);
      s += v;
      s2 += v * v;
    }
    sums[c] = s;
    sums2[c] = s2;
  });
  double s = 0.0, s2 = 0.0;
  for (std::size_t c = 0; c < chunks; ++c) {
    s += sums[c];
    s2 += sums2[c];
  }
  const double nn = static_cast<double>(samples);
  const double mean = s / nn;
  const double var = std::max(0.0, (s2 - s * s / nn) / (nn - 1.0));
  DetIdentityCheck out;
  out.lhs = mean;
  out.standard_error = std::sqrt(var / nn);
  const GramMatrix g = gram_matrix(phi, Density::uniform(), basis, ref);
  out.rhs = std::exp(log_factorial(n) + hermitian_log_det(g.entries));
  out.relative_error = std::abs(out.lhs / out.rhs - 1.0);
  out.evaluations = samples;
  return out;
}

}  // namespace gibbsk
