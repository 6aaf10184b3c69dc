// Acceptance run: one [PASS]/[FAIL] line per criterion, exit status 1 if
// any criterion fails. Criterion 11 reruns 1-10 with a different worker
// count and compares the JSON reports byte for byte.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gibbsk/io.hpp"
#include "gibbsk/parallel.hpp"
#include "gibbsk/quantization.hpp"
#include "gibbsk/toric.hpp"
#include "gibbsk/verify.hpp"

using namespace gibbsk;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
  std::string report;  // compared across worker counts
  double time_used = -1;  // seconds counted against the limit; wall time if negative
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const ReferenceData& reference(int m) {
  static const ReferenceData r1 = ReferenceData::standard(1, 64, 128);
  static const ReferenceData r2 = ReferenceData::standard(2, 64, 128);
  return m == 1 ? r1 : r2;
}

Outcome partition_normalization() {
  Outcome o{true, "", ""};
  for (auto [m, k] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 1}}) {
    const MCEstimate e = partition_mc(0.0, section_basis(m, k), Density::uniform(), reference(m), 10000, 7);
    const bool ok = e.mean == 1.0 && e.standard_error == 0.0;
    o.pass = o.pass && ok;
    o.detail += "(" + std::to_string(m) + "," + std::to_string(k) + "): Z=" + fmt(e.mean, 17) +
                " se=" + fmt(e.standard_error) + "; ";
    o.report += to_json(e);
  }
  return o;
}

Outcome threshold_oracle() {
  std::vector<double> grid;
  for (int i = 1; i <= 30; ++i) grid.push_back(0.1 * i);
  struct Case {
    int m;
    double lo, hi, exact;
  };
  Outcome o{true, "", "", 0.0};
  for (const Case& c : {Case{1, 0.9, 1.1, 1.0}, Case{2, 0.55, 0.8, 2.0 / 3}}) {
    const auto t0 = std::chrono::steady_clock::now();
    const GammaEstimate g =
        gamma_k_tail_estimate(section_basis(c.m, 1), Density::uniform(), reference(c.m), 1000000, 7, grid);
    const double t = seconds_since(t0);
    // each estimate has its own 60 s budget
    o.time_used = std::max(o.time_used, t);
    const bool ok = g.value >= c.lo && g.value <= c.hi;
    o.pass = o.pass && ok;
    o.detail += "m=" + std::to_string(c.m) + ": " + fmt(g.value) + " in [" + fmt(c.lo) + ", " + fmt(c.hi) +
                "] (exact " + fmt(c.exact) + ", " + fmt(t, 3) + " s); ";
    o.report += to_json(g);
  }
  return o;
}

Outcome determinant_identity() {
  const ReferenceData& ref = reference(1);
  const SphereQuadrature q = build_quadrature(16, 32, ref.model);
  const ReferenceData on_q{ref.model, q, ref.volume};
  Outcome o{true, "", ""};
  for (auto [k, tol] : {std::pair{1, 1e-6}, std::pair{2, 1e-5}}) {
    const SectionBasis basis = section_basis(1, k);
    double worst = 0, structure = 0;
    for (std::uint64_t s = 0; s < 6; ++s) {
      const Potential phi = s == 0 ? Potential::zero(8) : random_potential(s, ref);
      const DetIdentityCheck check = det_identity_tensor(phi, basis, q, ref);
      // right side rebuilt from N! and det H
      const double n_fact = std::tgamma(basis.dimension() + 1.0);
      const double det_h = std::exp(hermitian_log_det(gram_matrix(phi, Density::uniform(), basis, on_q).entries));
      worst = std::max(worst, check.relative_error);
      structure = std::max(structure, std::abs(check.rhs - n_fact * det_h) / (n_fact * det_h));
      o.report += fmt(check.lhs, 17) + " " + fmt(check.rhs, 17) + "\n";
    }
    const bool ok = worst < tol && structure < 1e-12;
    o.pass = o.pass && ok;
    o.detail += "N=" + std::to_string(k + 1) + ": rel err " + fmt(worst) + " (< " + fmt(tol) + "), N! det H mismatch " +
                fmt(structure) + "; ";
  }
  return o;
}

Outcome j_omega_identity() {
  IdentitiesOptions opt;
  opt.cases = 100;
  opt.lmax = 8;
  const SuiteResult r = suite_identities(reference(1), opt);
  const double worst = r.summary_value("j_omega_worst_rel_error").value_or(INFINITY);
  return {worst < 1e-8 && r.pass,
          "worst rel error " + fmt(worst) + " (< 1e-8) over " + std::to_string(r.cases) +
              " potentials; suite worst margin " + fmt(r.worst_margin),
          to_json(r)};
}

Outcome mabuchi_ding() {
  const SuiteResult r = suite_mabuchi_ding(reference(1), MabuchiDingOptions{});
  return {r.pass, std::to_string(r.records.size()) + " cases, worst margin " + fmt(r.worst_margin) + " (>= -1e-6)",
          to_json(r)};
}

Outcome gibbs_upper_bound() {
  const SuiteResult r = suite_gibbs_bound(reference(1), GibbsBoundOptions{});
  return {r.pass,
          std::to_string(r.records.size()) + " potentials, worst margin " + fmt(r.worst_margin) + " SE (>= -3)",
          to_json(r)};
}

Outcome bergman_limit() {
  const SuiteResult r = suite_bergman(reference(1), BergmanOptions{});
  return {r.pass,
          "worst terminal error " + fmt(r.summary_value("worst_terminal_error").value_or(NAN)) +
              " (< 1e-2), worst margin " + fmt(r.worst_margin),
          to_json(r)};
}

Outcome entropy_legendre() {
  const SuiteResult r = suite_legendre(reference(1), LegendreOptions{});
  double excess = -INFINITY, gap = 0;
  for (const CaseRecord& c : r.records)
    for (const auto& [key, v] : c.values) {
      if (key == "excess") excess = std::max(excess, v);
      if (key == "gap") gap = std::max(gap, v);
    }
  return {r.pass,
          std::to_string(r.cases) + " cases, worst excess " + fmt(excess) + " (<= 1e-6), worst gap " + fmt(gap) +
              " (< 1e-4)",
          to_json(r)};
}

Outcome toric_golden() {
  struct Row {
    std::string label;
    ToricSurface x;
    TDivisor l;
    Rational mu, s, bound;
  };
  const ToricSurface p2 = ToricSurface::projective_plane();
  const ToricSurface p11 = ToricSurface::p1_times_p1();
  const ToricSurface f1 = ToricSurface::hirzebruch(1);
  const std::vector<Row> rows{{"P2,H", p2, p2.divisor(0), Rational(3), Rational(3), Rational(3)},
                              {"P1xP1,O(1,1)", p11, p11.divisor(0) + p11.divisor(1), Rational(2), Rational(2), Rational(2)},
                              {"F1,-K", f1, f1.anticanonical(), Rational(1), Rational(1), Rational(1)}};
  Outcome o{true, "", ""};
  for (const Row& r : rows) {
    const StabilityReport rep = check_csck_criterion(r.x, r.l, r.bound + Rational(1));
    const bool ok = rep.mu == r.mu && rep.s == r.s && rep.bound == r.bound;
    o.pass = o.pass && ok;
    o.detail += r.label + ": " + to_string(rep.mu) + " " + to_string(rep.s) + " " + to_string(rep.bound) + "; ";
    o.report += to_json(rep);
  }
  const auto m_p2 = find_m0(p2, p2.divisor(0), Rational(1, 2));
  const auto m_p11 = find_m0(p11, p11.divisor(0) + p11.divisor(1), Rational(1, 2));
  o.pass = o.pass && m_p2 == 7 && m_p11 == 5;
  o.detail += "m0(P2)=" + (m_p2 ? std::to_string(*m_p2) : "none") +
              " m0(P1xP1)=" + (m_p11 ? std::to_string(*m_p11) : "none");
  o.report += o.detail;
  return o;
}

Outcome fitted_constant_sweep() {
  const FittedConstantsResult r = suite_fitted_constants(reference(1), FittedConstantsOptions{});
  const bool ok = std::isfinite(r.c1) && r.c1 >= 0 && r.suite.pass && r.variation < 0.5;
  std::string per_k;
  for (double c : r.per_k_c1) per_k += fmt(c) + " ";
  return {ok,
          "C1=" + fmt(r.c1) + " per k [" + per_k + "] variation " + fmt(r.variation) + " (< 0.5), holdout " +
              (r.suite.pass ? "pass" : "FAIL") + " (worst margin " + fmt(r.suite.worst_margin) + ")",
          to_json(r)};
}

void print_line(bool pass, int id, const std::string& name, double seconds, const std::string& detail) {
  std::printf("[%s] %2d %-24s %8.2f s  %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), seconds, detail.c_str());
  std::fflush(stdout);
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "partition-normalization", 1, partition_normalization},
      {2, "threshold-oracle", 60, threshold_oracle},
      {3, "determinant-identity", 60, determinant_identity},
      {4, "j-omega-identity", 30, j_omega_identity},
      {5, "mabuchi-ding-inequality", 60, mabuchi_ding},
      {6, "gibbs-upper-bound", 300, gibbs_upper_bound},
      {7, "bergman-limit", 120, bergman_limit},
      {8, "entropy-legendre", 30, entropy_legendre},
      {9, "toric-golden-table", 1, toric_golden},
      {10, "fitted-constant-sweep", 600, fitted_constant_sweep},
  };

  // warm the shared reference data outside the timed sections
  reference(1);
  reference(2);

  bool all = true;
  std::vector<std::string> reports;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what(), ""};
    }
    const double wall = seconds_since(t0);
    const double counted = o.time_used >= 0 ? o.time_used : wall;
    const bool in_time = counted < c.limit_seconds;
    const bool pass = o.pass && in_time;
    all = all && pass;
    print_line(pass, c.id, c.name, wall,
               o.detail + (in_time ? "" : " [over the " + fmt(c.limit_seconds) + " s limit]"));
    reports.push_back(o.report);
  }

  const std::size_t base = worker_count();
  const std::size_t other = base == 1 ? 3 : 1;
  set_worker_override(other);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<int> mismatched;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string again;
    try {
      again = criteria[i].run().report;
    } catch (const std::exception&) {
      again = "error";
    }
    if (again != reports[i] || reports[i].empty()) mismatched.push_back(criteria[i].id);
  }
  set_worker_override(0);
  std::string detail = "reports for criteria 1-10 with " + std::to_string(base) + " vs " + std::to_string(other) +
                       " workers: ";
  if (mismatched.empty()) {
    detail += "byte-identical";
  } else {
    detail += "differ for";
    for (int id : mismatched) detail += " " + std::to_string(id);
  }
  print_line(mismatched.empty(), 11, "determinism", seconds_since(t0), detail);
  all = all && mismatched.empty();
  return all ? 0 : 1;
}
