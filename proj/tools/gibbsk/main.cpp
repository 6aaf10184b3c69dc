// gibbsk: command-line front end to the gibbsk core library.
//
// Exit codes: 0 success, 1 suite failure or numerical failure, 2 bad input
// or configuration.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "config_check.hpp"
#include "gibbsk/error.hpp"
#include "gibbsk/functionals.hpp"
#include "gibbsk/gibbs.hpp"
#include "gibbsk/io.hpp"
#include "gibbsk/parallel.hpp"
#include "gibbsk/quantization.hpp"
#include "gibbsk/rng.hpp"
#include "gibbsk/toric.hpp"
#include "gibbsk/verify.hpp"

namespace gibbsk::cli {
namespace {

struct ModelArgs {
  int m = 1;
  int n_polar = 64;
  int n_azimuth = 128;
  int lmax = 8;
  std::uint64_t seed = 7;
};

struct DensityArgs {
  std::string kind = "uniform";
  double b = 0.5;
  std::vector<std::string> points;
  std::string file;
};

struct OutputArgs {
  std::string json;
  std::string csv;
};

void add_model(CLI::App* cmd, ModelArgs& a) {
  cmd->add_option("--m", a.m, "degree of O(m) on P^1")->check(CLI::Range(1, 64))->capture_default_str();
  cmd->add_option("--n-polar", a.n_polar, "Gauss-Legendre nodes in cos(theta)")
      ->check(CLI::Range(2, 2048))
      ->capture_default_str();
  cmd->add_option("--n-azimuth", a.n_azimuth, "azimuthal nodes")->check(CLI::Range(3, 4096))->capture_default_str();
  cmd->add_option("--lmax", a.lmax, "harmonic degree of random potentials")
      ->check(CLI::Range(1, 32))
      ->capture_default_str();
  cmd->add_option("--seed", a.seed, "master seed")->capture_default_str();
}

void add_density(CLI::App* cmd, DensityArgs& a) {
  cmd->add_option("--density", a.kind, "uniform, conic, or file")
      ->check(CLI::IsMember({"uniform", "conic", "file"}))
      ->capture_default_str();
  cmd->add_option("--cone-angle", a.b, "conic parameter b in (0, 1]")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--cone-point", a.points, "cone point as x,y,z (repeatable; default 0,0,1)");
  cmd->add_option("--density-file", a.file, "density JSON document (with --density file)");
}

void add_output(CLI::App* cmd, OutputArgs& a, bool csv) {
  cmd->add_option("--json", a.json, "write the JSON report here ('-' for stdout)");
  if (csv) cmd->add_option("--csv", a.csv, "write the CSV table here");
}

ReferenceData make_reference(const ModelArgs& a) { return ReferenceData::standard(a.m, a.n_polar, a.n_azimuth); }

Vec3 parse_point(const std::string& text) {
  std::vector<double> v;
  std::stringstream s(text);
  for (std::string tok; std::getline(s, tok, ',');) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw InputError("--cone-point: '" + text + "' is not x,y,z");
    }
  }
  if (v.size() != 3) throw InputError("--cone-point: '" + text + "' is not x,y,z");
  return {v[0], v[1], v[2]};
}

std::vector<Vec3> cone_points(const DensityArgs& a) {
  std::vector<Vec3> pts;
  for (const std::string& p : a.points) pts.push_back(parse_point(p));
  if (pts.empty()) pts.emplace_back(0.0, 0.0, 1.0);
  return pts;
}

Density make_density(const DensityArgs& a, const ReferenceData& ref) {
  if (a.kind == "uniform") return Density::uniform();
  if (a.kind == "conic") {
    if (!(a.b > 0.0)) throw InputError("--cone-angle must be positive");
    return conic_density(cone_points(a), a.b, ref);
  }
  if (a.file.empty()) throw InputError("--density file needs --density-file");
  return density_from_json(read_text_file(a.file), ref);
}

OneOneForm make_eta(const DensityArgs& a, const ReferenceData& ref) {
  if (a.kind != "conic") return OneOneForm::zero();
  return eta_form(cone_points(a), a.b, ref.model);
}

std::size_t sample_count(double n, const char* flag) {
  if (!(n >= 1.0) || n > 1e10 || n != std::floor(n))
    throw InputError(std::string(flag) + " must be a whole number in [1, 1e10]");
  return static_cast<std::size_t>(n);
}

// Summaries go to stdout unless the JSON report does.
void say(const OutputArgs& out, const std::string& line) { (out.json == "-" ? std::cerr : std::cout) << line << '\n'; }

void emit_json(const OutputArgs& out, const std::string& text) {
  if (out.json.empty()) return;
  if (out.json == "-")
    std::cout << text;
  else
    write_text_file(out.json, text);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Potential load_or_draw(const std::string& file, bool zero, std::uint64_t seed, const ModelArgs& a,
                       const ReferenceData& ref) {
  if (!file.empty()) {
    int m = 0;
    Potential phi = potential_from_json(read_text_file(file), &m);
    if (m != a.m) throw InputError("potential file is for m = " + std::to_string(m) + ", run uses m = " + std::to_string(a.m));
    if (!is_admissible(phi, ref.quad, ref.model)) throw DomainError("potential from '" + file + "' is not Kähler");
    return phi;
  }
  if (zero) return Potential::zero(a.lmax);
  PotentialFamilyOptions po;
  po.lmax = a.lmax;
  return random_potential(seed, ref, po);
}

std::vector<double> default_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 30; ++i) g.push_back(0.1 * i);
  return g;
}

// ----------------------------------------------------------- subcommands

struct FunctionalArgs {
  ModelArgs model;
  DensityArgs density;
  OutputArgs out;
  double gamma = 0.5;
  double tau = 1.0;
  std::size_t count = 1;
  std::string potential;
};

int run_functional_report(const FunctionalArgs& a) {
  const ReferenceData ref = make_reference(a.model);
  const Density f = make_density(a.density, ref);
  const OneOneForm eta = make_eta(a.density, ref);
  const std::vector<OneOneForm> chis{OneOneForm::kahler(ref.model)};
  const std::size_t n = a.potential.empty() ? a.count : 1;
  std::vector<std::uint64_t> seeds;
  std::vector<FunctionalReport> reports;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t s = mix_seed(a.model.seed, i);
    const Potential phi = load_or_draw(a.potential, false, s, a.model, ref);
    reports.push_back(evaluate_report(phi, a.gamma, a.tau, f, eta, chis, ref));
    seeds.push_back(a.potential.empty() ? s : 0);
    const FunctionalReport& r = reports.back();
    say(a.out, "seed=" + std::to_string(seeds.back()) + " E=" + fmt(r.E) + " J=" + fmt(r.J) + " Ent=" + fmt(r.Ent) +
                   " M=" + fmt(r.M.total) + " D=" + fmt(r.D) + " margin=" + fmt(r.margin));
  }
  if (reports.size() == 1) {
    emit_json(a.out, to_json(reports.front()));
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const FunctionalReport& r : reports) arr.push_back(nlohmann::json::parse(to_json(r)));
    emit_json(a.out, arr.dump(2) + "\n");
  }
  if (!a.out.csv.empty()) emit_sweep(functional_table(seeds, reports), a.out.csv);
  return 0;
}

struct GramArgs {
  ModelArgs model;
  DensityArgs density;
  OutputArgs out;
  int k = 1;
  bool normalized = false;
  bool zero = false;
  std::string potential;
};

int run_gram(const GramArgs& a) {
  const ReferenceData ref = make_reference(a.model);
  const Density f = make_density(a.density, ref);
  const Potential phi = load_or_draw(a.potential, a.zero, a.model.seed, a.model, ref);
  const SectionBasis basis = a.normalized ? normalized_basis(a.model.m, a.k, ref) : section_basis(a.model.m, a.k);
  const GramMatrix h = gram_matrix(phi, f, basis, ref);
  say(a.out, "k=" + std::to_string(a.k) + " N=" + std::to_string(basis.dimension()) +
                 " log_det_H=" + fmt(hermitian_log_det(h.entries)));
  emit_json(a.out, to_json(h));
  return 0;
}

struct PartitionArgs {
  ModelArgs model;
  DensityArgs density;
  OutputArgs out;
  int k = 1;
  double gamma = 0.5;
  double samples = 1e5;
  bool normalized = false;
  std::vector<double> grid;
};

int run_partition(const PartitionArgs& a) {
  const ReferenceData ref = make_reference(a.model);
  const Density f = make_density(a.density, ref);
  const SectionBasis basis = a.normalized ? normalized_basis(a.model.m, a.k, ref) : section_basis(a.model.m, a.k);
  const std::size_t n = sample_count(a.samples, "--samples");
  if (!a.grid.empty()) {
    const LogTerms terms = sample_log_terms(basis, f, ref, n, a.model.seed);
    const std::vector<MCEstimate> scan = divergence_scan(terms, a.grid);
    for (const MCEstimate& e : scan)
      say(a.out, "gamma=" + fmt(e.gamma) + " Z=" + fmt(e.mean) + " stderr=" + fmt(e.standard_error) +
                     " max_share=" + fmt(e.max_share) + " diverged=" + (e.diverged ? "true" : "false"));
    if (!a.out.csv.empty()) emit_sweep(scan_table(scan), a.out.csv);
    nlohmann::json arr = nlohmann::json::array();
    for (const MCEstimate& e : scan) arr.push_back(nlohmann::json::parse(to_json(e)));
    emit_json(a.out, arr.dump(2) + "\n");
    return 0;
  }
  const MCEstimate e = partition_mc(a.gamma, basis, f, ref, n, a.model.seed);
  say(a.out, "gamma=" + fmt(e.gamma) + " Z=" + fmt(e.mean) + " stderr=" + fmt(e.standard_error) +
                 " diverged=" + (e.diverged ? "true" : "false"));
  emit_json(a.out, to_json(e));
  return 0;
}

struct GammaArgs {
  ModelArgs model;
  DensityArgs density;
  OutputArgs out;
  int k = 1;
  double samples = 1e6;
  std::string method = "tail";
  std::vector<double> grid;
};

int run_gamma_k(const GammaArgs& a) {
  const ReferenceData ref = make_reference(a.model);
  const Density f = make_density(a.density, ref);
  GammaEstimate g;
  if (a.method == "exact") {
    g = gamma_k_exact_p1(a.model.m, a.k, f);
  } else {
    const std::vector<double> grid = a.grid.empty() ? default_grid() : a.grid;
    g = gamma_k_tail_estimate(section_basis(a.model.m, a.k), f, ref, sample_count(a.samples, "--samples"),
                              a.model.seed, grid);
    if (!a.out.csv.empty()) emit_sweep(scan_table(g.scan), a.out.csv);
  }
  std::string line = "m=" + std::to_string(a.model.m) + " k=" + std::to_string(a.k) + " method=" + to_string(g.method) +
                     " gamma_k=" + fmt(g.value) + " interval=[" + fmt(g.lower) + ", " + fmt(g.upper) + "]";
  if (f.is_uniform() && a.method != "exact") line += " exact=" + fmt(gamma_k_exact_p1(a.model.m, a.k).value);
  say(a.out, line);
  emit_json(a.out, to_json(g));
  return 0;
}

struct ToricArgs {
  OutputArgs out;
  std::string fan;
  std::string l = "-K";
  std::string gamma;
  std::string b;
  std::string d;
};

int run_toric_check(const ToricArgs& a) {
  const FanFile fan = read_fan_file(a.fan);
  const TDivisor l = resolve_divisor(fan, a.l);
  std::optional<Rational> b;
  std::optional<TDivisor> d;
  if (!a.b.empty()) b = parse_rational(a.b);
  if (!a.d.empty()) d = resolve_divisor(fan, a.d);
  const StabilityReport r = check_csck_criterion(fan.surface, l, parse_rational(a.gamma), b, d);
  std::string line = "mu=" + to_string(r.mu) + " s=" + to_string(r.s) + " bound=" + to_string(r.bound);
  if (r.bound_b) line += " bound_b=" + to_string(*r.bound_b);
  line += " gamma=" + to_string(r.gamma) + " ample=" + (r.ample ? "true" : "false") +
          " satisfied=" + (r.satisfied ? "true" : "false");
  say(a.out, line);
  emit_json(a.out, to_json(r));
  return 0;
}

int run_find_m0(const ToricArgs& a) {
  const FanFile fan = read_fan_file(a.fan);
  const TDivisor l = resolve_divisor(fan, a.l);
  const Rational b = parse_rational(a.b);
  const std::optional<long long> m0 = find_m0(fan.surface, l, b);
  const Rational m = mu(l, fan.surface);
  const Rational s = nef_threshold(fan.surface.anticanonical(), l, fan.surface).value;
  say(a.out, "m0=" + (m0 ? std::to_string(*m0) : std::string("none")) + " bound=" + to_string(Rational(2) * m - s) +
                 " b=" + to_string(b));
  nlohmann::json j{{"provenance", {{"operation", "find_m0"}, {"library_version", library_version()}}},
                   {"mu", to_string(m)},
                   {"s", to_string(s)},
                   {"bound", to_string(Rational(2) * m - s)},
                   {"b", to_string(b)},
                   {"m0", m0 ? nlohmann::json(*m0) : nlohmann::json(nullptr)}};
  emit_json(a.out, j.dump(2) + "\n");
  return 0;
}

struct VerifyArgs {
  ModelArgs model;
  DensityArgs density;
  std::vector<std::string> suites{"all"};
  std::string out_dir = ".";
  std::string csv;
  std::size_t cases = 0;
  double samples = 1e6;
  int k = 3;
  double tau = 1.0;
  double gamma = 0.5;
  bool verbose = false;
};

SuiteResult run_one(const std::string& name, const VerifyArgs& a, const ReferenceData& ref, std::string& json) {
  auto cases = [&](std::size_t d) { return a.cases ? a.cases : d; };
  const std::size_t samples = sample_count(a.samples, "--samples");
  SuiteResult r;
  if (name == "identities") {
    IdentitiesOptions o;
    o.cases = cases(o.cases);
    o.seed = a.model.seed;
    o.lmax = a.model.lmax;
    r = suite_identities(ref, o);
  } else if (name == "mabuchi-ding") {
    MabuchiDingOptions o;
    o.cases = cases(o.cases);
    o.seed = a.model.seed;
    o.lmax = a.model.lmax;
    r = suite_mabuchi_ding(ref, o);
  } else if (name == "gibbs-bound") {
    GibbsBoundOptions o;
    o.potentials = cases(o.potentials);
    o.seed = a.model.seed;
    o.lmax = a.model.lmax;
    o.samples = samples;
    o.k = a.k;
    o.tau = a.tau;
    o.gamma = a.gamma;
    o.f = make_density(a.density, ref);
    r = suite_gibbs_bound(ref, o);
    if (!a.csv.empty()) emit_sweep(gibbs_bound_table(r), a.csv);
  } else if (name == "fitted-constants") {
    FittedConstantsOptions o;
    o.family = cases(o.family);
    o.holdout = cases(o.holdout);
    o.seed = a.model.seed;
    o.lmax = a.model.lmax;
    o.samples = samples;
    o.tau = a.tau;
    o.gamma = a.gamma;
    o.f = make_density(a.density, ref);
    o.eta = make_eta(a.density, ref);
    const FittedConstantsResult t = suite_fitted_constants(ref, o);
    json = to_json(t);
    return t.suite;
  } else if (name == "bergman") {
    BergmanOptions o;
    o.cases = cases(o.cases);
    o.seed = a.model.seed;
    o.lmax = a.model.lmax;
    r = suite_bergman(ref, o);
  } else if (name == "legendre") {
    LegendreOptions o;
    o.cases = cases(o.cases);
    o.seed = a.model.seed;
    o.lmax = a.model.lmax;
    o.f = make_density(a.density, ref);
    r = suite_legendre(ref, o);
  } else {
    throw InputError("unknown suite '" + name + "'");
  }
  json = to_json(r);
  return r;
}

int run_verify(const VerifyArgs& a) {
  std::vector<std::string> names;
  for (const std::string& s : a.suites) {
    if (s == "all")
      names.insert(names.end(), suite_names().begin(), suite_names().end());
    else if (std::find(suite_names().begin(), suite_names().end(), s) != suite_names().end())
      names.push_back(s);
    else
      throw InputError("unknown suite '" + s + "'");
  }
  std::filesystem::create_directories(a.out_dir);
  const ReferenceData ref = make_reference(a.model);
  bool all_pass = true;
  for (const std::string& name : names) {
    std::string json;
    const SuiteResult r = run_one(name, a, ref, json);
    write_text_file((std::filesystem::path(a.out_dir) / (name + ".json")).string(), json);
    if (a.verbose)
      for (const CaseRecord& c : r.records) std::cout << "  " << name << " " << c.inputs << " margin=" << fmt(c.margin) << '\n';
    std::cout << "suite " << name << ": " << (r.pass ? "pass" : "FAIL") << " worst_margin=" << fmt(r.worst_margin)
              << " tolerance=" << fmt(r.tolerance) << " cases=" << r.cases;
    if (!r.advice.empty()) std::cout << " advice: " << r.advice;
    std::cout << '\n';
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 1;
}

struct SweepArgs {
  ModelArgs model;
  DensityArgs density;
  std::string kind = "functionals";
  std::string out;
  std::size_t count = 20;
  double gamma = 0.5;
  double tau = 1.0;
  int k = 3;
  double samples = 1e5;
  std::vector<double> grid;
};

int run_sweep(const SweepArgs& a) {
  const ReferenceData ref = make_reference(a.model);
  const Density f = make_density(a.density, ref);
  CsvTable table;
  if (a.kind == "functionals") {
    const OneOneForm eta = make_eta(a.density, ref);
    PotentialFamilyOptions po;
    po.lmax = a.model.lmax;
    const PotentialFamily fam = random_family(a.count, a.model.seed, ref, po);
    std::vector<FunctionalReport> reports;
    for (const Potential& phi : fam.members) reports.push_back(evaluate_report(phi, a.gamma, a.tau, f, eta, {}, ref));
    table = functional_table(fam.member_seeds, reports);
  } else if (a.kind == "gibbs-bound") {
    GibbsBoundOptions o;
    o.k = a.k;
    o.tau = a.tau;
    o.gamma = a.gamma;
    o.f = f;
    o.potentials = a.count;
    o.samples = sample_count(a.samples, "--samples");
    o.seed = a.model.seed;
    o.lmax = a.model.lmax;
    table = gibbs_bound_table(suite_gibbs_bound(ref, o));
  } else {
    const LogTerms terms = sample_log_terms(section_basis(a.model.m, a.k), f, ref, sample_count(a.samples, "--samples"),
                                            a.model.seed);
    const std::vector<double> grid = a.grid.empty() ? default_grid() : a.grid;
    table = scan_table(divergence_scan(terms, grid));
  }
  emit_sweep(table, a.out);
  std::cout << "sweep " << a.kind << ": " << table.rows.size() << " rows -> " << a.out << '\n';
  return 0;
}

std::string config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string s = argv[i];
    if (s == "--config" && i + 1 < argc) return argv[i + 1];
    if (s.rfind("--config=", 0) == 0) return s.substr(9);
  }
  return "";
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"gibbsk: Gibbs stability and energy functionals on (P^1, O(m)) and toric surfaces"};
  app.require_subcommand(1);
  app.set_config("--config", "", "configuration file: key = value lines with [subcommand] sections");
  app.allow_config_extras(CLI::config_extras_mode::error);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "worker threads (0: GIBBSK_THREADS or hardware)");

  FunctionalArgs fa;
  auto* fr = app.add_subcommand("functional-report", "E, J, Ent, M, D and the Mabuchi-Ding margin for potentials");
  add_model(fr, fa.model);
  add_density(fr, fa.density);
  add_output(fr, fa.out, true);
  fr->add_option("--gamma", fa.gamma)->check(CLI::PositiveNumber)->capture_default_str();
  fr->add_option("--tau", fa.tau)->check(CLI::PositiveNumber)->capture_default_str();
  fr->add_option("--count", fa.count, "random potentials")->check(CLI::Range(1, 100000))->capture_default_str();
  fr->add_option("--potential", fa.potential, "potential JSON document instead of random ones");

  GramArgs ga;
  auto* gr = app.add_subcommand("gram", "Gram matrix H^(k)(phi, f dV)");
  add_model(gr, ga.model);
  add_density(gr, ga.density);
  add_output(gr, ga.out, false);
  gr->add_option("--k", ga.k)->check(CLI::Range(1, 64))->capture_default_str();
  gr->add_flag("--normalized", ga.normalized, "use the basis orthonormal at phi = 0");
  gr->add_flag("--zero", ga.zero, "use phi = 0");
  gr->add_option("--potential", ga.potential, "potential JSON document");

  PartitionArgs pa;
  auto* pt = app.add_subcommand("partition", "Monte-Carlo Z_{N,f}(-gamma)");
  add_model(pt, pa.model);
  add_density(pt, pa.density);
  add_output(pt, pa.out, true);
  pt->add_option("--k", pa.k)->check(CLI::Range(1, 64))->capture_default_str();
  pt->add_option("--gamma", pa.gamma)->check(CLI::NonNegativeNumber)->capture_default_str();
  pt->add_option("--samples", pa.samples)->capture_default_str();
  pt->add_flag("--normalized", pa.normalized, "use the basis orthonormal at phi = 0");
  pt->add_option("--grid", pa.grid, "increasing gamma grid for a divergence scan")->check(CLI::PositiveNumber);

  GammaArgs gk;
  auto* gm = app.add_subcommand("gamma-k", "microscopic stability threshold gamma_k");
  add_model(gm, gk.model);
  add_density(gm, gk.density);
  add_output(gm, gk.out, true);
  gm->add_option("--k", gk.k)->check(CLI::Range(1, 64))->capture_default_str();
  gm->add_option("--samples", gk.samples)->capture_default_str();
  gm->add_option("--method", gk.method)->check(CLI::IsMember({"tail", "exact"}))->capture_default_str();
  gm->add_option("--grid", gk.grid, "gamma grid for the divergence scan")->check(CLI::PositiveNumber);

  ToricArgs ta;
  auto* tc = app.add_subcommand("toric-check", "cscK criterion on a toric surface");
  add_output(tc, ta.out, false);
  tc->add_option("--fan", ta.fan, "fan file")->required();
  tc->add_option("--L", ta.l, "polarization: divisor name, K, -K, or coefficients")->capture_default_str();
  tc->add_option("--gamma", ta.gamma, "rational gamma, e.g. 7/2")->required();
  tc->add_option("--b", ta.b, "conic parameter (rational)");
  tc->add_option("--D", ta.d, "conic divisor");

  ToricArgs ma;
  auto* fm = app.add_subcommand("find-m0", "smallest m0 for the conic criterion");
  add_output(fm, ma.out, false);
  fm->add_option("--fan", ma.fan, "fan file")->required();
  fm->add_option("--L", ma.l, "polarization")->capture_default_str();
  fm->add_option("--b", ma.b, "conic parameter (rational)")->required();

  VerifyArgs va;
  auto* vf = app.add_subcommand("verify", "run verification suites; one JSON report per suite");
  add_model(vf, va.model);
  add_density(vf, va.density);
  vf->add_option("--suite", va.suites, "suite name or 'all' (repeatable)")->capture_default_str();
  vf->add_option("--out-dir", va.out_dir, "directory for the reports")->capture_default_str();
  vf->add_option("--csv", va.csv, "gibbs-bound table");
  vf->add_option("--cases", va.cases, "override the case count (0: suite default)")->capture_default_str();
  vf->add_option("--samples", va.samples, "Monte-Carlo samples")->capture_default_str();
  vf->add_option("--k", va.k)->check(CLI::Range(1, 64))->capture_default_str();
  vf->add_option("--tau", va.tau)->check(CLI::PositiveNumber)->capture_default_str();
  vf->add_option("--gamma", va.gamma)->check(CLI::PositiveNumber)->capture_default_str();
  vf->add_flag("--verbose", va.verbose, "one line per case");

  SweepArgs sa;
  auto* sw = app.add_subcommand("sweep", "plot-ready CSV tables");
  add_model(sw, sa.model);
  add_density(sw, sa.density);
  sw->add_option("--kind", sa.kind)->check(CLI::IsMember({"functionals", "gibbs-bound", "scan"}))->capture_default_str();
  sw->add_option("--out", sa.out, "CSV path")->required();
  sw->add_option("--count", sa.count)->check(CLI::Range(0, 100000))->capture_default_str();
  sw->add_option("--gamma", sa.gamma)->check(CLI::PositiveNumber)->capture_default_str();
  sw->add_option("--tau", sa.tau)->check(CLI::PositiveNumber)->capture_default_str();
  sw->add_option("--k", sa.k)->check(CLI::Range(1, 64))->capture_default_str();
  sw->add_option("--samples", sa.samples)->capture_default_str();
  sw->add_option("--grid", sa.grid)->check(CLI::PositiveNumber);

  std::vector<ConfigEntry> entries;
  try {
    if (const std::string cfg = config_path(argc, argv); !cfg.empty()) entries = check_config(cfg, app);
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string where = locate_in_config(entries, e.what());
    std::cerr << "gibbsk: " << e.what() << (where.empty() ? "" : " (" + where + ")") << '\n';
    return 2;
  }

  try {
    if (threads > 0) set_worker_override(threads);
    if (*fr) return run_functional_report(fa);
    if (*gr) return run_gram(ga);
    if (*pt) return run_partition(pa);
    if (*gm) return run_gamma_k(gk);
    if (*tc) return run_toric_check(ta);
    if (*fm) return run_find_m0(ma);
    if (*vf) return run_verify(va);
    if (*sw) return run_sweep(sa);
  } catch (const InputError& e) {
    std::cerr << "gibbsk: input error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "gibbsk: domain error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "gibbsk: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gibbsk: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace gibbsk::cli

int main(int argc, char** argv) { return gibbsk::cli::run_cli(argc, argv); }
