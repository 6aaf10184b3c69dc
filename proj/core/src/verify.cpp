#include "gibbsk/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gibbsk/error.hpp"
#include "gibbsk/parallel.hpp"
#include "gibbsk/quantization.hpp"
#include "gibbsk/rng.hpp"

namespace gibbsk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Member {
  std::uint64_t seed;
  Potential phi;
};

// Case 0 is φ = 0; the rest are seeded random potentials.
std::vector<Member> case_potentials(std::size_t n, std::uint64_t seed, int lmax, const ReferenceData& ref,
                                    bool include_zero) {
  PotentialFamilyOptions opts;
  opts.lmax = lmax;
  std::vector<Member> out(n);
  for_each_chunk(n, 1, [&](std::size_t i, std::size_t, std::size_t) {
    const std::uint64_t s = mix_seed(seed, i);
    out[i] = {s, include_zero && i == 0 ? Potential::zero(lmax) : random_potential(s, ref, opts)};
  });
  return out;
}

double relative_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

std::string digest(std::uint64_t seed, const std::string& extra) {
  std::ostringstream out;
  out << "phi seed=" << seed;
  if (!extra.empty()) out << ", " << extra;
  return out.str();
}

double worst_value(const SuiteResult& r, const std::string& key, bool take_max) {
  double w = take_max ? -kInf : kInf;
  for (const CaseRecord& c : r.records)
    for (const auto& [k, v] : c.values)
      if (k == key) w = take_max ? std::max(w, v) : std::min(w, v);
  return w;
}

double log_factorial(int n) { return std::lgamma(n + 1.0); }

}  // namespace

void SuiteResult::finalize() {
  cases = records.size();
  worst_margin = records.empty() ? 0.0 : kInf;
  for (const CaseRecord& c : records) worst_margin = std::min(worst_margin, c.margin);
  pass = std::isfinite(worst_margin) && worst_margin >= -tolerance;
}

std::optional<double> SuiteResult::summary_value(const std::string& key) const {
  for (const auto& [k, v] : summary)
    if (k == key) return v;
  return std::nullopt;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities", "mabuchi-ding", "gibbs-bound", "fitted-constants", "bergman", "legendre"};
  return names;
}

SphericalExpansion random_test_function(std::uint64_t seed, int lmax, double scale) {
  const Philox4x32 gen(seed);
  SphericalExpansion a(lmax);
  std::vector<double> c(static_cast<std::size_t>(harmonic_count(lmax)));
  for (std::size_t i = 0; i < c.size(); i += 2) {
    const auto z = normal2(gen, i, 0);
    const double s = scale / (harmonic_degree(static_cast<int>(i)) + 1.0);
    c[i] = s * z[0];
    if (i + 1 < c.size()) c[i + 1] = scale / (harmonic_degree(static_cast<int>(i + 1)) + 1.0) * z[1];
  }
  return SphericalExpansion(lmax, std::move(c));
}

// -------------------------------------------------------------- identities

SuiteResult suite_identities(const ReferenceData& ref, const IdentitiesOptions& options) {
  if (options.cases < 1) throw InputError("suite_identities: need at least one case");
  SuiteResult r;
  r.name = "identities";
  r.tolerance = 0.0;
  r.units = "1 - violation/tolerance";

  // closed form on a rule exact for degree 2 lmax, independent of q
  const int lmax = options.lmax;
  const ReferenceData exact{ref.model, build_quadrature(2 * lmax + 4, 4 * lmax + 8, ref.model), ref.volume};
  const std::vector<Member> members = case_potentials(options.cases, options.seed, lmax, exact, true);
  const SphereQuadrature det_q = build_quadrature(options.det_polar, options.det_azimuth, ref.model);
  const SectionBasis det_basis = section_basis(ref.model.degree(), 1);
  const double det_tol = det_basis.dimension() <= 2 ? options.det_tolerance : 10.0 * options.det_tolerance;
  const OneOneForm omega = OneOneForm::kahler(ref.model);

  r.records.resize(members.size());
  for_each_chunk(members.size(), 1, [&](std::size_t i, std::size_t, std::size_t) {
    const Member& mem = members[i];
    CaseRecord rec;
    rec.seed = mem.seed;
    rec.inputs = digest(mem.seed, "lmax=" + std::to_string(lmax));
    const double lhs = j_chi(mem.phi, omega, ref);
    const double rhs = j_omega_closed_form(mem.phi, exact);
    const double e22 = relative_error(lhs, rhs);
    rec.values.push_back({"j_omega_rel_error", e22});
    double margin = 1.0 - e22 / options.j_omega_tolerance;

    const double ent = entropy(mem.phi, Density::uniform(), ref);
    double excess = -kInf;
    for (std::size_t j = 0; j < options.legendre_probes; ++j) {
      const SphericalExpansion a = random_test_function(mix_seed(mem.seed, 1000 + j), 6, 1.0);
      const double lb = entropy_lower_bound(mem.phi, Density::uniform(), [&](const Vec3& x) { return a.evaluate(x); }, ref);
      excess = std::max(excess, lb - ent);
    }
    const double gap =
        ent - entropy_lower_bound(mem.phi, Density::uniform(),
                                  entropy_optimal_test_function(mem.phi, Density::uniform(), ref), ref);
    rec.values.push_back({"legendre_excess", excess});
    rec.values.push_back({"legendre_gap", gap});
    margin = std::min({margin, 1.0 - excess / options.legendre_excess_tolerance,
                       1.0 - gap / options.legendre_gap_tolerance});

    if (i < options.det_cases && det_basis.dimension() <= 4) {
      const DetIdentityCheck check = det_identity_tensor(mem.phi, det_basis, det_q, ref);
      rec.values.push_back({"det_rel_error", check.relative_error});
      margin = std::min(margin, 1.0 - check.relative_error / det_tol);
    }
    rec.margin = margin;
    r.records[i] = std::move(rec);
  });
  r.finalize();
  r.summary = {{"j_omega_worst_rel_error", worst_value(r, "j_omega_rel_error", true)},
               {"legendre_worst_excess", worst_value(r, "legendre_excess", true)},
               {"legendre_worst_gap", worst_value(r, "legendre_gap", true)},
               {"quadrature_exactness", static_cast<double>(ref.quad.exactness())},
               {"lmax", static_cast<double>(lmax)}};
  if (options.det_cases > 0 && det_basis.dimension() <= 4)
    r.summary.push_back({"det_worst_rel_error", worst_value(r, "det_rel_error", true)});
  if (!r.pass) {
    std::ostringstream advice;
    advice << "quadrature exactness " << ref.quad.exactness() << " is below the degree " << 2 * lmax
           << " needed for lmax = " << lmax << "; refine to n_polar >= " << lmax + 1 << " and n_azimuth >= "
           << 2 * lmax + 1 << " (or larger)";
    if (ref.quad.exactness() >= 2 * lmax) {
      advice.str("");
      advice << "identity violated at adequate resolution; inspect the worst case";
    }
    r.advice = advice.str();
  }
  return r;
}

// ------------------------------------------------------------ mabuchi-ding

SuiteResult suite_mabuchi_ding(const ReferenceData& ref, const MabuchiDingOptions& options) {
  SuiteResult r;
  r.name = "mabuchi-ding";
  r.tolerance = options.tolerance;
  r.units = "M - gamma D - J_{-Ric+eta+gamma omega}";
  const std::vector<Member> members = case_potentials(options.cases, options.seed, options.lmax, ref, true);
  struct Setting {
    std::string name;
    Density f;
    OneOneForm eta;
  };
  std::vector<Setting> settings{{"uniform", Density::uniform(), OneOneForm::zero()}};
  if (options.conic) {
    const Vec3 pole(0.0, 0.0, 1.0);
    const std::span<const Vec3> pts(&pole, 1);
    settings.push_back({"conic", conic_density(pts, options.cone_angle, ref), eta_form(pts, options.cone_angle, ref.model)});
  }
  const std::size_t per_case = options.gammas.size() * settings.size();
  r.records.resize(members.size() * per_case);
  for_each_chunk(members.size(), 1, [&](std::size_t i, std::size_t, std::size_t) {
    std::size_t slot = i * per_case;
    for (const Setting& s : settings)
      for (double g : options.gammas) {
        CaseRecord rec;
        rec.seed = members[i].seed;
        std::ostringstream extra;
        extra << "gamma=" << g << ", f=" << s.name;
        rec.inputs = digest(members[i].seed, extra.str());
        rec.margin = mabuchi_ding_margin(members[i].phi, g, s.f, s.eta, ref);
        rec.values = {{"gamma", g}};
        r.records[slot++] = std::move(rec);
      }
  });
  r.finalize();
  r.summary = {{"worst_margin", r.worst_margin}};
  return r;
}

// ------------------------------------------------------------- gibbs-bound

SuiteResult suite_gibbs_bound(const ReferenceData& ref, const GibbsBoundOptions& o) {
  const int m = ref.model.degree();
  const SectionBasis basis = section_basis(m, o.k);
  const int n = basis.dimension();
  const double g1 = o.gamma * (1.0 + o.tau);
  if (!(o.gamma > 0.0 && o.tau > 0.0)) throw InputError("gibbs-bound: gamma and tau must be positive");
  if (!(o.k * o.tau / g1 > 1.0)) {
    std::ostringstream msg;
    msg << "gibbs-bound: precondition k tau / (gamma (1 + tau)) > 1 fails: " << o.k * o.tau / g1;
    throw InputError(msg.str());
  }
  const double p = o.k * o.tau / (o.k * o.tau - g1);
  if (!o.f.in_lp(p)) {
    std::ostringstream msg;
    msg << "gibbs-bound: precondition f in L^p with p = k tau/(k tau - gamma(1+tau)) = " << p << " fails (p(1-b) = "
        << p * o.f.exponent() << " >= 1)";
    throw InputError(msg.str());
  }
  if (o.f.is_uniform()) {
    const double gk = gamma_k_exact_p1(m, o.k).value;
    if (!(g1 < gk)) {
      std::ostringstream msg;
      msg << "gibbs-bound: gamma (1 + tau) = " << g1 << " is not below gamma_k = " << gk << "; Z diverges";
      throw InputError(msg.str());
    }
  }
  const MCEstimate z = partition_mc(g1, basis, o.f, ref, o.samples, mix_seed(o.seed, 0xC0FFEE));
  if (z.diverged) {
    std::ostringstream msg;
    msg << "gibbs-bound: partition function flagged divergent at gamma (1 + tau) = " << g1 << " (max share "
        << z.max_share << ", tail index " << z.tail_index << ")";
    throw InputError(msg.str());
  }
  const double lhs = -z.log_mean / (g1 * n);
  const double se = z.standard_error / z.mean / (g1 * n);
  const double density_term = (o.k * o.tau - g1) / (o.gamma * o.k * (1.0 + o.tau)) * std::log(lp_integral(o.f, p, ref));
  const double stated_log = std::log(static_cast<double>(n)) / o.k;
  const double exact_log = log_factorial(n) / (static_cast<double>(n) * o.k);

  SuiteResult r;
  r.name = "gibbs-bound";
  r.tolerance = 3.0;
  r.units = "(rhs - lhs) / stderr";
  const std::vector<Member> members = case_potentials(o.potentials, o.seed, o.lmax, ref, false);
  r.records.resize(members.size());
  for_each_chunk(members.size(), 1, [&](std::size_t i, std::size_t, std::size_t) {
    const double dk = approx_ding(members[i].phi, o.gamma, o.f, basis, ref);
    const double rhs = dk + exact_log + density_term;
    CaseRecord rec;
    rec.seed = members[i].seed;
    std::ostringstream extra;
    extra << "k=" << o.k << ", tau=" << o.tau << ", gamma=" << o.gamma << ", f=" << describe(o.f);
    rec.inputs = digest(members[i].seed, extra.str());
    const double raw = rhs - lhs;
    rec.margin = se > 0.0 ? raw / se : (raw >= 0.0 ? kInf : -kInf);
    rec.values = {{"k", static_cast<double>(o.k)}, {"tau", o.tau},   {"gamma", o.gamma},
                  {"lhs", lhs},                    {"rhs", rhs},     {"rhs_stated", dk + stated_log + density_term},
                  {"stderr", se},                  {"margin", raw}};
    r.records[i] = std::move(rec);
  });
  r.finalize();
  r.summary = {{"lhs", lhs},
               {"lhs_stderr", se},
               {"log_Z", z.log_mean},
               {"Z_max_share", z.max_share},
               {"Z_tail_index", z.tail_index},
               {"density_term", density_term},
               {"log_N_over_k", stated_log},
               {"log_N_factorial_over_Nk", exact_log},
               {"worst_raw_margin", worst_value(r, "margin", false)}};
  return r;
}

// -------------------------------------------------------- fitted-constants

FittedConstantsResult suite_fitted_constants(const ReferenceData& ref, const FittedConstantsOptions& o) {
  if (o.ks.empty()) throw InputError("fitted-constants: empty k list");
  if (!(o.gamma > 0.0 && o.tau > 0.0)) throw InputError("fitted-constants: gamma and tau must be positive");
  const int m = ref.model.degree();
  const double g1 = o.gamma * (1.0 + o.tau);
  // integrability preconditions first
  for (int k : o.ks) {
    if (!(k * o.tau / g1 > 1.0)) {
      std::ostringstream msg;
      msg << "fitted-constants: k tau / (gamma (1 + tau)) > 1 fails at k = " << k;
      throw InputError(msg.str());
    }
    const double p = k * o.tau / (k * o.tau - g1);
    if (!o.f.in_lp(p)) {
      std::ostringstream msg;
      msg << "fitted-constants: f is not in L^" << p << " at k = " << k << " (p(1-b) = " << p * o.f.exponent()
          << " >= 1)";
      throw InputError(msg.str());
    }
    if (o.f.is_uniform() && !(g1 < gamma_k_exact_p1(m, k).value)) {
      std::ostringstream msg;
      msg << "fitted-constants: gamma (1 + tau) = " << g1 << " is not below gamma_k at k = " << k;
      throw InputError(msg.str());
    }
  }

  const std::vector<Member> family = case_potentials(o.family, mix_seed(o.seed, 1), o.lmax, ref, true);
  const std::vector<Member> holdout = case_potentials(o.holdout, mix_seed(o.seed, 2), o.lmax, ref, false);
  std::vector<Potential> family_phi;
  for (const Member& mem : family) family_phi.push_back(mem.phi);

  const OneOneForm omega = OneOneForm::kahler(ref.model);
  const OneOneForm twist = -ricci_density(ref.volume, ref.model) + o.eta;

  struct Level {
    int k, n;
    SectionBasis basis;
    double zterm, zse, dens_stated, dens_proof, log_term, c, g_eps;
  };
  struct Eval {
    double jw, num_thm, lhs34, rhs34_base;
  };
  auto evaluate = [&](const Level& lv, const Potential& phi) {
    Eval e;
    e.jw = j_chi(phi, omega, ref);
    const MabuchiParts mp = mabuchi(phi, o.f, o.eta, ref);
    e.num_thm = lv.zterm + j_chi(phi, twist, ref) + lv.g_eps * e.jw - mp.total - lv.dens_stated - lv.log_term;
    e.lhs34 = o.gamma * approx_ding(phi, o.gamma, o.f, lv.basis, ref);
    e.rhs34_base = lv.g_eps * ding(phi, lv.g_eps, o.f, ref);
    return e;
  };

  FittedConstantsResult out;
  std::vector<Level> levels;
  for (int k : o.ks) {
    FitOptions fo;
    fo.k = k;
    fo.gamma = o.gamma;
    fo.f = o.f;
    ConstantsFit fit = fit_constants(family_phi, fo, ref, "seed=" + std::to_string(mix_seed(o.seed, 1)));
    const SectionBasis basis = normalized_basis(m, k, ref);
    const int n = basis.dimension();
    const MCEstimate z = partition_mc(g1, basis, o.f, ref, o.samples, mix_seed(o.seed, 100 + static_cast<std::uint64_t>(k)));
    if (z.diverged) {
      std::ostringstream msg;
      msg << "fitted-constants: partition function flagged divergent at k = " << k;
      throw InputError(msg.str());
    }
    const double p = k * o.tau / (k * o.tau - g1);
    const double log_lp = std::log(lp_integral(o.f, p, ref));
    Level lv{k,
             n,
             basis,
             -z.log_mean / (n * (1.0 + o.tau)),
             z.standard_error / z.mean / (n * (1.0 + o.tau)),
             (k * o.tau - o.gamma) / (k * (1.0 + o.tau)) * log_lp,
             (k * o.tau - g1) / (k * (1.0 + o.tau)) * log_lp,
             o.gamma * log_factorial(n) / (static_cast<double>(k) * n),
             fit.c,
             (1.0 - fit.c / k) * o.gamma};

    std::vector<Eval> evals(family.size());
    for_each_chunk(family.size(), 1, [&](std::size_t i, std::size_t, std::size_t) { evals[i] = evaluate(lv, family[i].phi); });
    std::vector<double> r_thm;
    double sup_thm = -kInf;
    for (const Eval& e : evals) {
      const double v = e.num_thm / (lv.g_eps * (1.0 + e.jw / k));
      r_thm.push_back(v);
      sup_thm = std::max(sup_thm, v);
    }
    const double c1_k = std::max({0.0, extrapolated_sup(r_thm), fit.C1});
    out.per_k_c1.push_back(c1_k);
    fit.C1 = c1_k;
    out.fits.push_back(fit);
    out.suite.summary.push_back({"k" + std::to_string(k) + "_c1", c1_k});
    out.suite.summary.push_back({"k" + std::to_string(k) + "_sup_ding_bound_residual", sup_thm});
    out.suite.summary.push_back({"k" + std::to_string(k) + "_sup_quantized_ding_residual", fit.sup_quantized_ding_residual});
    out.suite.summary.push_back({"k" + std::to_string(k) + "_C0", fit.C0});
    out.suite.summary.push_back({"k" + std::to_string(k) + "_z_term", lv.zterm});
    out.suite.summary.push_back({"k" + std::to_string(k) + "_z_term_stderr", lv.zse});
    out.suite.summary.push_back({"k" + std::to_string(k) + "_density_term_stated", lv.dens_stated});
    out.suite.summary.push_back({"k" + std::to_string(k) + "_density_term_proof", lv.dens_proof});
    levels.push_back(std::move(lv));
  }
  out.c1 = *std::max_element(out.per_k_c1.begin(), out.per_k_c1.end());
  const double lo = *std::min_element(out.per_k_c1.begin(), out.per_k_c1.end());
  out.variation = out.c1 > 0.0 ? (out.c1 - lo) / out.c1 : 0.0;

  SuiteResult& r = out.suite;
  r.name = "fitted-constants";
  r.tolerance = o.tolerance;
  r.units = "slack + 3 stderr";
  r.records.resize(holdout.size() * levels.size());
  for_each_chunk(holdout.size(), 1, [&](std::size_t i, std::size_t, std::size_t) {
    for (std::size_t l = 0; l < levels.size(); ++l) {
      const Level& lv = levels[l];
      const Eval e = evaluate(lv, holdout[i].phi);
      const double allowance = lv.g_eps * (1.0 + e.jw / lv.k) * out.c1;
      const double slack_thm = allowance - e.num_thm;
      const double slack_34 = allowance - (e.lhs34 - e.rhs34_base);
      CaseRecord rec;
      rec.seed = holdout[i].seed;
      rec.inputs = digest(holdout[i].seed, "k=" + std::to_string(lv.k) + ", held out");
      rec.margin = std::min(slack_thm + 3.0 * lv.zse, slack_34);
      rec.values = {{"k", static_cast<double>(lv.k)}, {"J_omega", e.jw}, {"ding_bound_slack", slack_thm},
                    {"quantized_ding_slack", slack_34}};
      r.records[i * levels.size() + l] = std::move(rec);
    }
  });
  r.finalize();
  r.summary.push_back({"c1", out.c1});
  r.summary.push_back({"variation", out.variation});
  r.summary.push_back({"c", out.fits.front().c});
  r.summary.push_back({"family", static_cast<double>(family.size())});
  r.summary.push_back({"holdout", static_cast<double>(holdout.size())});
  return out;
}

// ----------------------------------------------------------------- bergman

SuiteResult suite_bergman(const ReferenceData& ref, const BergmanOptions& o) {
  if (o.ks.size() < 2) throw InputError("bergman: need at least two levels");
  SuiteResult r;
  r.name = "bergman";
  r.tolerance = 0.0;
  r.units = "min(relative decrement, 1 - terminal/tolerance)";
  std::vector<SectionBasis> bases;
  std::vector<double> e0;
  for (int k : o.ks) {
    bases.push_back(normalized_basis(ref.model.degree(), k, ref));
    e0.push_back(energy_k(Potential::zero(), bases.back(), ref));
  }
  const std::vector<Member> members = case_potentials(o.cases, o.seed, o.lmax, ref, false);
  r.records.resize(members.size());
  for_each_chunk(members.size(), 1, [&](std::size_t i, std::size_t, std::size_t) {
    const double e = energy(members[i].phi, ref);
    CaseRecord rec;
    rec.seed = members[i].seed;
    rec.inputs = digest(members[i].seed, "");
    std::vector<double> err;
    for (std::size_t j = 0; j < bases.size(); ++j) {
      err.push_back(std::abs(energy_k(members[i].phi, bases[j], ref) - e0[j] - e));
      rec.values.push_back({"error_k" + std::to_string(o.ks[j]), err.back()});
    }
    double margin = 1.0 - err.back() / o.terminal_tolerance;
    for (std::size_t j = 0; j + 1 < err.size(); ++j)
      margin = std::min(margin, err[j] > 0.0 ? (err[j] - err[j + 1]) / err[j] : -1.0);
    // least-squares slope of log error against log k
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double nk = static_cast<double>(err.size());
    for (std::size_t j = 0; j < err.size(); ++j) {
      const double x = std::log(static_cast<double>(o.ks[j])), y = std::log(std::max(err[j], 1e-300));
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    rec.values.push_back({"rate", (nk * sxy - sx * sy) / (nk * sxx - sx * sx)});
    rec.margin = margin;
    r.records[i] = std::move(rec);
  });
  r.finalize();
  r.summary = {{"worst_terminal_error", worst_value(r, "error_k" + std::to_string(o.ks.back()), true)},
               {"mean_rate", 0.0}};
  double rate = 0.0;
  for (const CaseRecord& c : r.records) rate += c.values.back().second;
  r.summary[1].second = rate / static_cast<double>(r.records.size());
  return r;
}

// ---------------------------------------------------------------- legendre

SuiteResult suite_legendre(const ReferenceData& ref, const LegendreOptions& o) {
  SuiteResult r;
  r.name = "legendre";
  r.tolerance = 0.0;
  r.units = "1 - violation/tolerance";
  const std::vector<Member> members = case_potentials(o.cases, o.seed, o.lmax, ref, false);
  r.records.resize(members.size());
  for_each_chunk(members.size(), 1, [&](std::size_t i, std::size_t, std::size_t) {
    const Potential& phi = members[i].phi;
    const double ent = entropy(phi, o.f, ref);
    double excess = -kInf;
    for (std::size_t j = 0; j < o.probes; ++j) {
      const std::uint64_t s = mix_seed(members[i].seed, 2000 + j);
      const double scale = 0.25 + 2.0 * Philox4x32(s).uniform2(0, 1)[0];
      const SphericalExpansion a = random_test_function(s, 6, scale);
      const double lb = entropy_lower_bound(phi, o.f, [&](const Vec3& x) { return a.evaluate(x); }, ref);
      excess = std::max(excess, lb - ent);
    }
    const double gap = ent - entropy_lower_bound(phi, o.f, entropy_optimal_test_function(phi, o.f, ref), ref);
    CaseRecord rec;
    rec.seed = members[i].seed;
    rec.inputs = digest(members[i].seed, "f=" + describe(o.f));
    rec.values = {{"entropy", ent}, {"excess", excess}, {"gap", gap}};
    rec.margin = std::min(1.0 - excess / o.excess_tolerance, 1.0 - gap / o.gap_tolerance);
    r.records[i] = std::move(rec);
  });
  r.finalize();
  r.summary = {{"worst_excess", worst_value(r, "excess", true)}, {"worst_gap", worst_value(r, "gap", true)}};
  return r;
}

}  // namespace gibbsk
