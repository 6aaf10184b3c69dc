#include "gibbsk/toric.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>

#include "gibbsk/error.hpp"

namespace gibbsk {

namespace {

// Comparisons go through Rational on both sides: the mixed rational/int
// operators recurse under C++20 rewritten comparisons.
const Rational kZero(0);
const Rational kOne(1);

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

long long parse_integer(const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw InputError("not an integer: '" + s + "'");
  }
  if (used != s.size()) throw InputError("not an integer: '" + s + "'");
  return v;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw InputError("empty rational");
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const long long q = parse_integer(trim(s.substr(slash + 1)));
    if (q == 0) throw InputError("zero denominator in '" + s + "'");
    return {parse_integer(trim(s.substr(0, slash))), q};
  }
  const auto dot = s.find('.');
  if (dot == std::string::npos) return {parse_integer(s)};
  const std::string frac = s.substr(dot + 1);
  if (frac.empty() || frac.size() > 15 || !std::all_of(frac.begin(), frac.end(), ::isdigit))
    throw InputError("not a rational: '" + s + "'");
  std::string whole = s.substr(0, dot);
  const bool negative = !whole.empty() && whole[0] == '-';
  if (whole.empty() || whole == "-" || whole == "+") whole += "0";
  long long den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  const long long w = parse_integer(whole);
  const long long f = parse_integer(frac);
  return Rational(w) + (negative ? Rational(-f, den) : Rational(f, den));
}

std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

long long floor_rational(const Rational& r) {
  const long long n = r.numerator(), d = r.denominator();
  long long q = n / d;
  if ((n % d != 0) && (n < 0)) --q;
  return q;
}

// ------------------------------------------------------------ divisors

TDivisor TDivisor::basis(std::size_t rays, std::size_t i) {
  std::vector<Rational> c(rays, Rational(0));
  c.at(i) = 1;
  return TDivisor(std::move(c));
}

TDivisor TDivisor::uniform(std::size_t rays, Rational value) {
  return TDivisor(std::vector<Rational>(rays, value));
}

TDivisor& TDivisor::operator+=(const TDivisor& o) {
  if (o.size() != size()) throw InputError("divisors on different fans");
  for (std::size_t i = 0; i < size(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

// ------------------------------------------------------------- surfaces

ToricSurface::ToricSurface(std::vector<Ray> rays) : rays_(std::move(rays)) {
  const std::size_t n = rays_.size();
  if (n < 3) throw InputError("fan needs at least 3 rays, got " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    const Ray& v = rays_[i];
    if (std::gcd(v.x, v.y) != 1)
      throw InputError("ray " + std::to_string(i) + " is not primitive");
  }
  int winding = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Ray& v = rays_[i];
    const Ray& w = rays_[(i + 1) % n];
    const long long det = v.x * w.y - v.y * w.x;
    if (det != 1)
      throw InputError("cone " + std::to_string(i) + " has determinant " + std::to_string(det) +
                       " (need +1: smooth, counterclockwise)");
    if (v.y < 0 && w.y >= 0) ++winding;
  }
  if (winding != 1) throw InputError("rays wind " + std::to_string(winding) + " times around the origin");
  a_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Ray& v = rays_[i];
    const Ray& p = rays_[(i + n - 1) % n];
    const Ray& q = rays_[(i + 1) % n];
    const long long wx = p.x + q.x, wy = p.y + q.y;
    if (wx * v.y - wy * v.x != 0) throw InputError("wall relation fails at ray " + std::to_string(i));
    const long long vv = v.x * v.x + v.y * v.y;
    const long long dot = wx * v.x + wy * v.y;
    if (dot % vv != 0) throw InputError("non-integral wall coefficient at ray " + std::to_string(i));
    a_[i] = dot / vv;
  }
}

long long ToricSurface::divisor_intersection(std::size_t i, std::size_t j) const {
  const std::size_t n = size();
  if (i == j) return -a_[i];
  if ((i + 1) % n == j || (j + 1) % n == i) return 1;
  return 0;
}

ToricSurface ToricSurface::projective_plane() { return ToricSurface({{1, 0}, {0, 1}, {-1, -1}}); }
ToricSurface ToricSurface::p1_times_p1() { return ToricSurface({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}); }
ToricSurface ToricSurface::hirzebruch(long long a) {
  return ToricSurface({{1, 0}, {0, 1}, {-1, a}, {0, -1}});
}

// ------------------------------------------------------------- fan files

FanFile parse_fan(std::istream& in) {
  std::vector<Ray> rays;
  std::vector<std::pair<std::string, std::pair<int, std::vector<Rational>>>> named;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "fan line " + std::to_string(lineno) + ": ";
    try {
      const auto eq = line.find('=');
      if (eq != std::string::npos) {
        const std::string name = trim(line.substr(0, eq));
        if (name.empty()) throw InputError("missing divisor name");
        std::istringstream fields(line.substr(eq + 1));
        std::vector<Rational> c;
        for (std::string tok; fields >> tok;) c.push_back(parse_rational(tok));
        named.push_back({name, {lineno, std::move(c)}});
        continue;
      }
      std::istringstream fields(line);
      std::vector<std::string> tok;
      for (std::string t; fields >> t;) tok.push_back(t);
      if (tok.size() != 2) throw InputError("expected two integers 'x y'");
      rays.push_back({parse_integer(tok[0]), parse_integer(tok[1])});
    } catch (const InputError& e) {
      throw InputError(where + e.what());
    }
  }
  FanFile fan{ToricSurface(rays), {}};
  for (auto& [name, entry] : named) {
    if (entry.second.size() != rays.size())
      throw InputError("fan line " + std::to_string(entry.first) + ": divisor " + name + " has " +
                       std::to_string(entry.second.size()) + " coefficients for " + std::to_string(rays.size()) +
                       " rays");
    if (!fan.divisors.emplace(name, TDivisor(entry.second)).second)
      throw InputError("fan line " + std::to_string(entry.first) + ": duplicate divisor " + name);
  }
  return fan;
}

FanFile read_fan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open fan file '" + path + "'");
  return parse_fan(in);
}

TDivisor resolve_divisor(const FanFile& fan, const std::string& spec) {
  const std::string s = trim(spec);
  if (const auto it = fan.divisors.find(s); it != fan.divisors.end()) return it->second;
  if (s == "K") return fan.surface.canonical();
  if (s == "-K") return fan.surface.anticanonical();
  std::istringstream fields(s);
  std::vector<Rational> c;
  try {
    for (std::string tok; fields >> tok;) c.push_back(parse_rational(tok));
  } catch (const InputError&) {
    throw InputError("unknown divisor '" + s + "'");
  }
  if (c.size() != fan.surface.size()) throw InputError("unknown divisor '" + s + "'");
  return TDivisor(std::move(c));
}

// ----------------------------------------------------------- intersections

Rational intersect(const TDivisor& d1, const TDivisor& d2, const ToricSurface& x) {
  if (d1.size() != x.size() || d2.size() != x.size()) throw InputError("divisor does not match the fan");
  Rational s(0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (d1[i] == kZero) continue;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const long long e = x.divisor_intersection(i, j);
      if (e != 0 && d2[j] != kZero) s += d1[i] * d2[j] * e;
    }
  }
  return s;
}

bool is_ample(const TDivisor& d, const ToricSurface& x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(intersect(d, x.divisor(i), x) > kZero)) return false;
  return true;
}

bool is_nef(const TDivisor& d, const ToricSurface& x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    if (intersect(d, x.divisor(i), x) < kZero) return false;
  return true;
}

Rational mu(const TDivisor& l, const ToricSurface& x) {
  const Rational ll = intersect(l, l, x);
  if (ll == kZero) throw DomainError("mu: L^2 = 0");
  return intersect(x.anticanonical(), l, x) / ll;
}

Rational mu_b(const TDivisor& l, const TDivisor& d, const Rational& b, const ToricSurface& x) {
  const Rational ll = intersect(l, l, x);
  if (ll == kZero) throw DomainError("mu_b: L^2 = 0");
  return -intersect(x.canonical() + (Rational(1) - b) * d, l, x) / ll;
}

NefThreshold nef_threshold(const TDivisor& f, const TDivisor& l, const ToricSurface& x) {
  if (!is_ample(l, x)) throw DomainError("nef_threshold: L is not ample");
  NefThreshold t;
  bool first = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Rational r = intersect(f, x.divisor(i), x) / intersect(l, x.divisor(i), x);
    if (first || r < t.value) {
      t.value = r;
      t.boundary_curves.clear();
      first = false;
    }
    if (r == t.value) t.boundary_curves.push_back(i);
  }
  return t;
}

StabilityReport check_csck_criterion(const ToricSurface& x, const TDivisor& l, const Rational& gamma,
                                     const std::optional<Rational>& b, const std::optional<TDivisor>& d) {
  if (b.has_value() != d.has_value()) throw InputError("check_csck_criterion: b and D must be given together");
  if (b && !(*b > kZero && *b <= kOne)) throw InputError("check_csck_criterion: b must lie in (0, 1]");
  if (!is_ample(l, x)) throw DomainError("check_csck_criterion: L is not ample");
  StabilityReport r;
  r.gamma = gamma;
  r.mu = mu(l, x);
  r.s = nef_threshold(x.anticanonical(), l, x).value;
  r.bound = Rational(2) * r.mu - r.s;
  TDivisor twist = x.canonical();
  Rational bound = r.bound;
  if (b) {
    const TDivisor boundary = (Rational(1) - *b) * *d;
    r.b = b;
    r.mu_b = mu_b(l, *d, *b, x);
    r.s_b = nef_threshold(-(x.canonical() + boundary), l, x).value;
    r.bound_b = Rational(2) * *r.mu_b - *r.s_b;
    twist += boundary;
    bound = *r.bound_b;
  }
  r.ample = is_ample(twist + gamma * l, x);
  r.threshold = gamma > bound;
  r.satisfied = r.ample && r.threshold;
  return r;
}

std::optional<long long> find_m0(const ToricSurface& x, const TDivisor& l, const Rational& b) {
  if (!(b > kZero && b <= kOne)) throw InputError("find_m0: b must lie in (0, 1]");
  if (!is_ample(l, x)) throw DomainError("find_m0: L is not ample");
  const Rational bound = Rational(2) * mu(l, x) - nef_threshold(x.anticanonical(), l, x).value;
  const Rational slack = Rational(1) - b;
  long long m0 = 1;
  if (slack == kZero) {
    if (bound >= kZero) return std::nullopt;
  } else {
    m0 = std::max(m0, floor_rational(bound / slack) + 1);
  }
  // K + m L ample iff m > (-K·D_i)/(L·D_i) for every i
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Rational r = intersect(x.anticanonical(), x.divisor(i), x) / intersect(l, x.divisor(i), x);
    m0 = std::max(m0, floor_rational(r) + 1);
  }
  return m0;
}

}  // namespace gibbsk
