#include "gibbsk/gibbs.hpp"

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

constexpr std::size_t kChunk = 8192;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string describe(const Density& f) {
  if (f.is_uniform()) return "uniform";
  std::ostringstream out;
  if (f.kind() == Density::Kind::smooth) {
    out << "smooth(lmax=" << f.log_density().lmax() << ")";
  } else {
    out << "conic(b=" << f.cone_angle() << ", points=" << f.cone_points().size() << ")";
  }
  return out.str();
}

// ------------------------------------------------------------------ sampler

ConfigurationSampler::ConfigurationSampler(int n_points, const Density& f, const ReferenceData& ref,
                                           std::uint64_t seed)
    : n_points_(n_points), seed_(seed), f_(f), volume_(ref.volume) {
  if (n_points < 1) throw InputError("sampler: need at least one point per configuration");
  if (f.kind() == Density::Kind::conic && !f.is_uniform()) {
    log_inv_z_ = -f.log_normalization();
    for (const Vec3& p : f.cone_points()) frames_.push_back(tangent_frame(p));
  }
}

Vec3 ConfigurationSampler::draw_point(std::uint64_t index, std::uint64_t slot, double& log_weight) const {
  const Philox4x32 gen(seed_);
  const auto [u, v] = gen.uniform2(index, 2 * slot);
  const double azimuth = 2.0 * std::numbers::pi * v;
  Vec3 x;
  if (frames_.empty()) {
    const double t = 2.0 * u - 1.0;
    const double r = std::sqrt(std::max(0.0, 1.0 - t * t));
    x = Vec3(r * std::cos(azimuth), r * std::sin(azimuth), t);
    if (!f_.is_uniform()) log_weight += f_.log_value(x);
  } else {
    // single-point law: s = (1 - x·p)/2 has density b s^{b-1} on (0, 1).
    // With one cone point this is f itself and the weight is exactly 1.
    const double b = f_.cone_angle();
    const std::vector<Vec3>& pts = f_.cone_points();
    std::size_t comp = 0;
    if (pts.size() > 1) {
      const double w = gen.uniform2(index, 2 * slot + 1)[0];
      comp = std::min(pts.size() - 1, static_cast<std::size_t>(w * static_cast<double>(pts.size())));
    }
    const double s = std::pow(u, 1.0 / b);
    const double theta = 2.0 * std::asin(std::min(1.0, std::sqrt(s)));
    x = polar_offset(pts[comp], frames_[comp], theta, azimuth);
    if (pts.size() > 1) {
      // f / mixture, both relative to ω/V
      double log_f = 0.0;
      double mix = 0.0;
      for (const Vec3& p : pts) {
        const double sp = chordal_half(x, p);
        log_f += -(1.0 - b) * std::log(sp);
        mix += b * std::pow(sp, -(1.0 - b));
      }
      log_weight += log_f + log_inv_z_ - std::log(mix / static_cast<double>(pts.size()));
    }
  }
  if (!volume_.is_uniform()) log_weight += std::log(volume_.value(x));
  return x;
}

double ConfigurationSampler::draw(std::uint64_t index, std::span<Vec3> out) const {
  if (static_cast<int>(out.size()) != n_points_) throw InputError("sampler: output span has the wrong size");
  double log_weight = 0.0;
  for (int j = 0; j < n_points_; ++j) out[j] = draw_point(index, static_cast<std::uint64_t>(j), log_weight);
  return log_weight;
}

std::vector<Configuration> sample_configurations(std::size_t n, int n_points, const Density& f,
                                                 const ReferenceData& ref, std::uint64_t seed) {
  const ConfigurationSampler sampler(n_points, f, ref, seed);
  std::vector<Configuration> out(n);
  for_each_chunk(n, kChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i].points.resize(static_cast<std::size_t>(n_points));
      out[i].log_weight = sampler.draw(i, out[i].points);
    }
  });
  return out;
}

LogTerms sample_log_terms(const SectionBasis& basis, const Density& f, const ReferenceData& ref,
                          std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw InputError("partition estimate: need at least one sample");
  const int n = basis.dimension();
  const ConfigurationSampler sampler(n, f, ref, seed);
  LogTerms t;
  t.k = basis.k();
  t.n_points = n;
  t.seed = seed;
  t.log_det.resize(n_samples);
  t.log_weight.resize(n_samples);
  for_each_chunk(n_samples, kChunk, [&](std::size_t, std::size_t begin, std::size_t end) {
    std::vector<Vec3> pts(static_cast<std::size_t>(n));
    for (std::size_t i = begin; i < end; ++i) {
      t.log_weight[i] = sampler.draw(i, pts);
      t.log_det[i] = slater_log_det_product(pts, basis);
    }
  });
  return t;
}

// ---------------------------------------------------------------- estimates

HillEstimate hill_estimate(std::span<const double> log_values, std::span<const double> log_weights,
                           double fraction) {
  const std::size_t n = log_values.size();
  HillEstimate h;
  const auto top = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  if (top < 2 || top >= n) return h;
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  auto greater = [&](std::size_t a, std::size_t b) {
    return log_values[a] != log_values[b] ? log_values[a] > log_values[b] : a < b;
  };
  std::nth_element(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(top), idx.end(), greater);
  std::sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(top), greater);
  const double threshold = log_values[idx[top]];
  const bool weighted = !log_weights.empty();
  double wmax = -kInf;
  if (weighted)
    for (std::size_t j = 0; j < top; ++j) wmax = std::max(wmax, log_weights[idx[j]]);
  double sw = 0.0, swl = 0.0;
  for (std::size_t j = 0; j < top; ++j) {
    const double w = weighted ? std::exp(log_weights[idx[j]] - wmax) : 1.0;
    sw += w;
    swl += w * (log_values[idx[j]] - threshold);
  }
  h.tail_count = top;
  h.alpha = swl > 0.0 ? sw / swl : kInf;
  h.standard_error = h.alpha / std::sqrt(static_cast<double>(top));
  return h;
}

MCEstimate estimate_partition(const LogTerms& terms, double gamma, const DivergenceOptions& options) {
  if (!(gamma >= 0.0)) throw InputError("partition estimate: gamma must be >= 0");
  const std::size_t n = terms.log_det.size();
  const double scale = gamma / terms.k;
  std::vector<double> lt(n);
  double shift = -kInf;
  for (std::size_t i = 0; i < n; ++i) {
    lt[i] = (gamma == 0.0 ? 0.0 : -scale * terms.log_det[i]) + terms.log_weight[i];
    shift = std::max(shift, lt[i]);
  }
  double s = 0.0, s2 = 0.0, mx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::exp(lt[i] - shift);
    s += v;
    s2 += v * v;
    mx = std::max(mx, v);
  }
  MCEstimate e;
  e.gamma = gamma;
  e.n_samples = n;
  e.seed = terms.seed;
  const double nn = static_cast<double>(n);
  const double mean_scaled = s / nn;
  e.log_mean = shift + std::log(mean_scaled);
  e.mean = std::exp(e.log_mean);
  const double var_scaled = n > 1 ? std::max(0.0, (s2 - s * mean_scaled) / (nn - 1.0)) : 0.0;
  e.standard_error = std::exp(shift) * std::sqrt(var_scaled / nn);
  e.max_share = mx / s;
  const HillEstimate h = hill_estimate(lt, {}, options.hill_fraction);
  e.tail_index = h.alpha;
  e.tail_index_se = h.standard_error;
  const bool dominated = n >= options.min_samples && e.max_share > options.max_share;
  const bool heavy = h.tail_count > 0 && std::isfinite(h.alpha) && h.alpha + 2.0 * h.standard_error < 1.0;
  e.diverged = dominated || heavy;
  return e;
}

MCEstimate partition_mc(double gamma, const SectionBasis& basis, const Density& f, const ReferenceData& ref,
                        std::size_t n_samples, std::uint64_t seed, const DivergenceOptions& options) {
  if (!(gamma >= 0.0)) throw InputError("partition_mc: gamma must be >= 0");
  return estimate_partition(sample_log_terms(basis, f, ref, n_samples, seed), gamma, options);
}

std::vector<MCEstimate> divergence_scan(const LogTerms& terms, std::span<const double> gammas,
                                        const DivergenceOptions& options) {
  for (std::size_t i = 0; i < gammas.size(); ++i) {
    if (!(gammas[i] > 0.0)) throw InputError("divergence scan: grid values must be positive");
    if (i > 0 && !(gammas[i] > gammas[i - 1])) throw InputError("divergence scan: grid must be increasing");
  }
  std::vector<MCEstimate> out;
  bool diverged = false;
  for (double g : gammas) {
    MCEstimate e = estimate_partition(terms, g, options);
    diverged = diverged || e.diverged;
    e.diverged = diverged;
    out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------- threshold

std::string to_string(GammaMethod m) {
  switch (m) {
    case GammaMethod::exact_exponent: return "exact-exponent";
    case GammaMethod::tail_index: return "tail-index";
    case GammaMethod::divergence_scan: return "divergence-scan";
  }
  return "?";
}

GammaEstimate gamma_k_exact_p1(int m, int k, const Density& f) {
  if (m < 1 || k < 1) throw InputError("gamma_k_exact_p1: m and k must be >= 1");
  if (!f.is_uniform()) throw InputError("gamma_k_exact_p1: only the uniform density has an exact formula");
  GammaEstimate g;
  g.m = m;
  g.k = k;
  g.value = 2.0 * k / (static_cast<double>(m) * k + 1.0);
  g.lower = g.upper = g.hill = g.value;
  g.method = GammaMethod::exact_exponent;
  g.density = describe(f);
  return g;
}

GammaEstimate gamma_k_tail_estimate(const SectionBasis& basis, const Density& f, const ReferenceData& ref,
                                    std::size_t n_samples, std::uint64_t seed, std::span<const double> gamma_grid,
                                    const TailOptions& options) {
  const auto tail = static_cast<std::size_t>(options.hill_fraction * static_cast<double>(n_samples));
  if (tail < options.min_tail) {
    std::ostringstream msg;
    msg << "gamma_k_tail_estimate: only " << tail << " tail samples (need " << options.min_tail
        << "); increase the sample count to at least "
        << static_cast<std::size_t>(std::ceil(options.min_tail / options.hill_fraction));
    throw NumericError(msg.str());
  }
  const LogTerms terms = sample_log_terms(basis, f, ref, n_samples, seed);
  const std::size_t n = n_samples;
  // log Y = -log W = -L/k
  std::vector<double> log_y(n);
  for (std::size_t i = 0; i < n; ++i) log_y[i] = -terms.log_det[i] / terms.k;
  const bool weighted = std::any_of(terms.log_weight.begin(), terms.log_weight.end(), [](double w) { return w != 0.0; });
  const std::span<const double> weights = weighted ? std::span<const double>(terms.log_weight) : std::span<const double>();
  const HillEstimate h = hill_estimate(log_y, weights, options.hill_fraction);
  if (!std::isfinite(h.alpha)) throw NumericError("gamma_k_tail_estimate: degenerate tail; increase the sample count");

  GammaEstimate g;
  g.m = basis.m();
  g.k = basis.k();
  g.density = describe(f);
  g.hill = h.alpha;

  // bootstrap: a resample of size n puts Binomial(n, q) draws in the top-q pool
  const auto pool_size = static_cast<std::size_t>(options.bootstrap_fraction * static_cast<double>(n));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  auto greater = [&](std::size_t a, std::size_t b) { return log_y[a] != log_y[b] ? log_y[a] > log_y[b] : a < b; };
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(pool_size), order.end(), greater);
  std::vector<double> pool_y(pool_size), pool_w(pool_size);
  for (std::size_t j = 0; j < pool_size; ++j) {
    pool_y[j] = log_y[order[j]];
    pool_w[j] = terms.log_weight[order[j]];
  }
  const Philox4x32 gen(mix_seed(seed, 0xB007));
  const double q = options.bootstrap_fraction;
  const double nq = static_cast<double>(n) * q;
  std::vector<double> alphas;
  std::vector<double> ry, rw;
  for (int b = 0; b < options.bootstrap_rounds; ++b) {
    const double z = normal2(gen, static_cast<std::uint64_t>(b), 0)[0];
    const auto count = static_cast<std::size_t>(
        std::max(1.0, std::round(nq + std::sqrt(nq * (1.0 - q)) * z)));
    ry.resize(count);
    rw.resize(count);
    for (std::size_t j = 0; j < count; ++j) {
      const double u = gen.uniform2(static_cast<std::uint64_t>(b), j + 1)[0];
      const std::size_t pick = std::min(pool_size - 1, static_cast<std::size_t>(u * static_cast<double>(pool_size)));
      ry[j] = pool_y[pick];
      rw[j] = pool_w[pick];
    }
    // top fraction of the full resample = top (hill/bootstrap) share of this pool
    const HillEstimate hb = hill_estimate(ry, weighted ? std::span<const double>(rw) : std::span<const double>(),
                                          options.hill_fraction * static_cast<double>(n) / static_cast<double>(count));
    if (std::isfinite(hb.alpha) && hb.alpha > 0.0) alphas.push_back(hb.alpha);
  }
  if (alphas.size() < 10) throw NumericError("gamma_k_tail_estimate: bootstrap failed; increase the sample count");
  std::sort(alphas.begin(), alphas.end());
  const double tail_p = 0.5 * (1.0 - options.confidence);
  auto quantile = [&](double p) {
    const double pos = p * static_cast<double>(alphas.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(alphas.size() - 1, lo + 1);
    return alphas[lo] + (pos - static_cast<double>(lo)) * (alphas[hi] - alphas[lo]);
  };
  g.bootstrap_lower = quantile(tail_p);
  g.bootstrap_upper = quantile(1.0 - tail_p);
  g.band_lower = g.band_upper = h.alpha;
  for (double q : options.band_fractions) {
    const HillEstimate hq = hill_estimate(log_y, weights, q);
    if (hq.tail_count < options.min_tail || !std::isfinite(hq.alpha)) continue;
    g.band_lower = std::min(g.band_lower, hq.alpha - 2.0 * hq.standard_error);
    g.band_upper = std::max(g.band_upper, hq.alpha + 2.0 * hq.standard_error);
  }
  g.lower = std::min(g.bootstrap_lower, g.band_lower);
  g.upper = std::max(g.bootstrap_upper, g.band_upper);
  g.value = h.alpha;
  g.method = GammaMethod::tail_index;

  if (!gamma_grid.empty()) {
    g.scan = divergence_scan(terms, gamma_grid, options.divergence);
    double last_ok = 0.0;
    for (const MCEstimate& e : g.scan) {
      if (e.diverged && e.tail_index < 1.0) {
        g.scan_bound = e.gamma;
        break;
      }
      last_ok = e.gamma;
    }
    if (g.scan_bound && g.value > *g.scan_bound) {
      g.value = 0.5 * (last_ok + *g.scan_bound);
      g.method = GammaMethod::divergence_scan;
    }
  }
  g.lower = std::min(g.lower, g.value);
  g.upper = std::max(g.upper, g.value);
  if (!(g.value > 0.0)) throw NumericError("gamma_k_tail_estimate: non-positive estimate");
  return g;
}

}  // namespace gibbsk
