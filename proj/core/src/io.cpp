#include "gibbsk/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gibbsk/error.hpp"

namespace gibbsk {

using nlohmann::json;

namespace {

json real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double read_real(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw InputError("expected a real number, got " + j.dump());
}

json reals(std::span<const double> v) {
  json a = json::array();
  for (double x : v) a.push_back(real(x));
  return a;
}

json vec3(const Vec3& x) { return json::array({real(x[0]), real(x[1]), real(x[2])}); }

json pairs(const std::vector<std::pair<std::string, double>>& kv) {
  json o = json::object();
  for (const auto& [k, v] : kv) o[k] = real(v);
  return o;
}

json optional_rational(const std::optional<Rational>& r) { return r ? json(to_string(*r)) : json(nullptr); }

json provenance(const std::string& operation) {
  return {{"operation", operation}, {"library_version", library_version()}, {"document_version", kDocumentVersion}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw InputError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw InputError(std::string("field '") + key + "' has the wrong type");
  }
}

json mc(const MCEstimate& e) {
  return {{"gamma", real(e.gamma)},          {"mean", real(e.mean)},
          {"standard_error", real(e.standard_error)}, {"log_mean", real(e.log_mean)},
          {"n_samples", e.n_samples},        {"seed", e.seed},
          {"diverged", e.diverged},          {"max_share", real(e.max_share)},
          {"tail_index", real(e.tail_index)}, {"tail_index_se", real(e.tail_index_se)}};
}

json suite(const SuiteResult& r) {
  json records = json::array();
  for (const CaseRecord& c : r.records)
    records.push_back({{"seed", c.seed}, {"inputs", c.inputs}, {"margin", real(c.margin)}, {"values", pairs(c.values)}});
  return {{"suite", r.name},
          {"cases", r.cases},
          {"worst_margin", real(r.worst_margin)},
          {"tolerance", real(r.tolerance)},
          {"pass", r.pass},
          {"margin_units", r.units},
          {"advice", r.advice},
          {"summary", pairs(r.summary)},
          {"records", records}};
}

json fit(const ConstantsFit& c) {
  return {{"A", real(c.A)},
          {"B", real(c.B)},
          {"C", real(c.C)},
          {"C0", real(c.C0)},
          {"C1", real(c.C1)},
          {"c", real(c.c)},
          {"raw_sup", {{"energy", real(c.sup_energy_residual)}, {"quantized_energy", real(c.sup_quantized_energy_residual)}, {"quantized_ding", real(c.sup_quantized_ding_residual)}}},
          {"family_size", c.family_size},
          {"family", c.family}};
}

std::string format_cell(const CsvCell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) {
    if (std::isnan(*d)) return "nan";
    if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  if (const auto* i = std::get_if<long long>(&cell)) return std::to_string(*i);
  if (const auto* u = std::get_if<std::uint64_t>(&cell)) return std::to_string(*u);
  const std::string& s = std::get<std::string>(cell);
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

}  // namespace

std::string library_version() { return "0.1.0"; }

// ------------------------------------------------------------ documents

std::string to_json(const Potential& phi, const PolarizedModel& model) {
  return dump({{"version", kDocumentVersion},
               {"m", model.degree()},
               {"lmax", phi.lmax()},
               {"coefficients", reals(phi.expansion().coefficients())}});
}

Potential potential_from_json(const std::string& text, int* m) try {
  const json j = parse(text);
  if (field<int>(j, "version") != kDocumentVersion) throw InputError("potential: unsupported document version");
  const int lmax = field<int>(j, "lmax");
  if (lmax < 0) throw InputError("potential: lmax must be nonnegative");
  const json& c = j.at("coefficients");
  if (!c.is_array() || c.size() != static_cast<std::size_t>(harmonic_count(lmax)))
    throw InputError("potential: expected " + std::to_string(harmonic_count(lmax)) + " coefficients for lmax " +
                     std::to_string(lmax));
  std::vector<double> v;
  for (const json& x : c) v.push_back(read_real(x));
  if (m) *m = field<int>(j, "m");
  return Potential(SphericalExpansion(lmax, std::move(v)));
} catch (const json::exception& e) {
  throw InputError(std::string("potential: ") + e.what());
}

std::string to_json(const Density& f) {
  json j{{"version", kDocumentVersion}};
  if (f.is_uniform()) {
    j["kind"] = "uniform";
  } else if (f.kind() == Density::Kind::smooth) {
    j["kind"] = "smooth";
    j["lmax"] = f.log_density().lmax();
    j["log_density"] = reals(f.log_density().coefficients());
    j["log_normalization"] = real(f.log_normalization());
  } else {
    j["kind"] = "conic";
    j["b"] = real(f.cone_angle());
    json pts = json::array();
    for (const Vec3& p : f.cone_points()) pts.push_back(vec3(p));
    j["points"] = pts;
    j["log_normalization"] = real(f.log_normalization());
  }
  return dump(j);
}

Density density_from_json(const std::string& text, const ReferenceData& ref) try {
  const json j = parse(text);
  if (field<int>(j, "version") != kDocumentVersion) throw InputError("density: unsupported document version");
  const std::string kind = field<std::string>(j, "kind");
  if (kind == "uniform") return Density::uniform();
  if (kind == "smooth") {
    const int lmax = field<int>(j, "lmax");
    std::vector<double> c;
    for (const json& x : j.at("log_density")) c.push_back(read_real(x));
    if (c.size() != static_cast<std::size_t>(harmonic_count(lmax))) throw InputError("density: coefficient count");
    return smooth_density(SphericalExpansion(lmax, std::move(c)), ref.model, ref.quad, ref.volume);
  }
  if (kind == "conic") {
    std::vector<Vec3> pts;
    for (const json& p : j.at("points")) {
      if (!p.is_array() || p.size() != 3) throw InputError("density: cone points are [x, y, z] triples");
      pts.emplace_back(read_real(p[0]), read_real(p[1]), read_real(p[2]));
    }
    return conic_density(pts, read_real(j.at("b")), ref);
  }
  throw InputError("density: unknown kind '" + kind + "'");
} catch (const json::exception& e) {
  throw InputError(std::string("density: ") + e.what());
}

std::string to_json(const SphereQuadrature& q) {
  json nodes = json::array();
  for (const Vec3& x : q.nodes()) nodes.push_back(vec3(x));
  return dump({{"version", kDocumentVersion},
               {"kind", q.kind() == SphereQuadrature::Kind::product ? "product" : "conic"},
               {"exactness", q.exactness()},
               {"volume", real(q.volume())},
               {"nodes", nodes},
               {"weights", reals(q.weights())}});
}

std::string to_json(const FunctionalReport& r) {
  return dump({{"provenance", provenance("evaluate_report")},
               {"E", real(r.E)},
               {"J", real(r.J)},
               {"J_chi", reals(r.J_chi)},
               {"Ent", real(r.Ent)},
               {"M", {{"entropy", real(r.M.entropy)}, {"j_twist", real(r.M.j_twist)}, {"total", real(r.M.total)}}},
               {"D", real(r.D)},
               {"gamma", real(r.gamma)},
               {"tau", real(r.tau)},
               {"margin", real(r.margin)},
               {"tolerances",
                {{"identity", real(r.tolerances.identity)},
                 {"inequality", real(r.tolerances.inequality)},
                 {"singular", real(r.tolerances.singular)}}}});
}

std::string to_json(const ConstantsFit& c) {
  json j = fit(c);
  j["provenance"] = provenance("fit_constants");
  return dump(j);
}

std::string to_json(const CoercivityReport& r) {
  return dump({{"provenance", provenance("coercivity_probe")},
               {"functional", to_string(r.tag)},
               {"slope", real(r.slope)},
               {"intercept", real(r.intercept)},
               {"j_min", real(r.j_min)},
               {"j_max", real(r.j_max)},
               {"hull_points", r.hull_points},
               {"J", reals(r.J)},
               {"F", reals(r.F)}});
}

std::string to_json(const GramMatrix& h) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < h.entries.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < h.entries.cols(); ++j)
      row.push_back(json::array({real(h.entries(i, j).real()), real(h.entries(i, j).imag())}));
    rows.push_back(row);
  }
  return dump({{"provenance", provenance("gram_matrix")},
               {"k", h.k},
               {"dimension", h.entries.rows()},
               {"potential", h.potential_descriptor},
               {"measure", h.measure_descriptor},
               {"entries", rows}});
}

std::string to_json(const MCEstimate& e) {
  json j = mc(e);
  j["provenance"] = provenance("partition_mc");
  return dump(j);
}

std::string to_json(const GammaEstimate& g) {
  json scan = json::array();
  for (const MCEstimate& e : g.scan) scan.push_back(mc(e));
  return dump({{"provenance", provenance(g.method == GammaMethod::exact_exponent ? "gamma_k_exact_p1"
                                                                               : "gamma_k_tail_estimate")},
               {"m", g.m},
               {"k", g.k},
               {"density", g.density},
               {"method", to_string(g.method)},
               {"estimate", real(g.value)},
               {"lower", real(g.lower)},
               {"upper", real(g.upper)},
               {"hill", real(g.hill)},
               {"bootstrap", json::array({real(g.bootstrap_lower), real(g.bootstrap_upper)})},
               {"band", json::array({real(g.band_lower), real(g.band_upper)})},
               {"scan_bound", g.scan_bound ? real(*g.scan_bound) : json(nullptr)},
               {"scan", scan}});
}

std::string to_json(const StabilityReport& r) {
  return dump({{"provenance", provenance("check_csck_criterion")},
               {"mu", to_string(r.mu)},
               {"s", to_string(r.s)},
               {"bound", to_string(r.bound)},
               {"b", optional_rational(r.b)},
               {"mu_b", optional_rational(r.mu_b)},
               {"s_b", optional_rational(r.s_b)},
               {"bound_b", optional_rational(r.bound_b)},
               {"gamma", to_string(r.gamma)},
               {"ample", r.ample},
               {"threshold", r.threshold},
               {"satisfied", r.satisfied},
               {"m0", r.m0 ? json(*r.m0) : json(nullptr)}});
}

std::string to_json(const SuiteResult& r) {
  json j = suite(r);
  j["provenance"] = provenance("suite_" + r.name);
  return dump(j);
}

std::string to_json(const FittedConstantsResult& r) {
  json j = suite(r.suite);
  j["provenance"] = provenance("suite_fitted_constants");
  json fits = json::array();
  for (const ConstantsFit& c : r.fits) fits.push_back(fit(c));
  j["fits"] = fits;
  j["per_k_c1"] = reals(r.per_k_c1);
  j["c1"] = real(r.c1);
  j["variation"] = real(r.variation);
  return dump(j);
}

// ------------------------------------------------------------------- CSV

std::string to_csv(const CsvTable& table) {
  std::string out;
  auto line = [&](const auto& cells, auto&& format) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += format(cells[i]);
    }
    out += '\n';
  };
  line(table.header, [](const std::string& s) { return format_cell(CsvCell(s)); });
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != table.header.size())
      throw InputError("csv: row " + std::to_string(r) + " has " + std::to_string(table.rows[r].size()) +
                       " cells, header has " + std::to_string(table.header.size()));
    line(table.rows[r], [](const CsvCell& c) { return format_cell(c); });
  }
  return out;
}

void emit_sweep(const CsvTable& table, const std::string& path) { write_text_file(path, to_csv(table)); }

CsvTable scan_table(const std::vector<MCEstimate>& scan) {
  CsvTable t{{"gamma", "mean", "stderr", "max_share", "diverged"}, {}};
  for (const MCEstimate& e : scan)
    t.rows.push_back({e.gamma, e.mean, e.standard_error, e.max_share, static_cast<long long>(e.diverged)});
  return t;
}

CsvTable gibbs_bound_table(const SuiteResult& r) {
  CsvTable t{{"seed", "k", "tau", "gamma", "lhs", "rhs", "stderr", "margin"}, {}};
  for (const CaseRecord& c : r.records) {
    std::vector<CsvCell> row{c.seed};
    for (const char* key : {"k", "tau", "gamma", "lhs", "rhs", "stderr", "margin"}) {
      double v = NAN;
      for (const auto& [name, x] : c.values)
        if (name == key) v = x;
      if (std::string(key) == "k")
        row.emplace_back(static_cast<long long>(v));
      else
        row.emplace_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable functional_table(const std::vector<std::uint64_t>& seeds, const std::vector<FunctionalReport>& reports) {
  if (seeds.size() != reports.size()) throw InputError("functional_table: seeds and reports differ in length");
  CsvTable t{{"seed", "J", "E", "Ent", "M", "D", "margin"}, {}};
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const FunctionalReport& r = reports[i];
    t.rows.push_back({seeds[i], r.J, r.E, r.Ent, r.M.total, r.D, r.margin});
  }
  return t;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out.flush()) throw IoError("write to '" + path + "' failed");
}

}  // namespace gibbsk
