#pragma once

// Exact intersection theory on smooth complete toric surfaces.
// T-invariant divisors D_i correspond to the rays v_i (counterclockwise);
// D_i·D_{i±1} = 1, D_i^2 = -a_i with v_{i-1} + v_{i+1} = a_i v_i.

#include <boost/rational.hpp>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace gibbsk {

using Rational = boost::rational<long long>;

/// "p/q", "p", or a finite decimal such as "3.5"; InputError otherwise.
Rational parse_rational(const std::string& text);
/// Always "p/q".
std::string to_string(const Rational& r);
long long floor_rational(const Rational& r);

struct Ray {
  long long x = 0;
  long long y = 0;
  friend bool operator==(const Ray&, const Ray&) = default;
};

class TDivisor {
 public:
  TDivisor() = default;
  explicit TDivisor(std::vector<Rational> coefficients) : coeffs_(std::move(coefficients)) {}
  static TDivisor basis(std::size_t rays, std::size_t i);
  static TDivisor uniform(std::size_t rays, Rational value);

  std::size_t size() const { return coeffs_.size(); }
  const Rational& operator[](std::size_t i) const { return coeffs_[i]; }
  const std::vector<Rational>& coefficients() const { return coeffs_; }

  TDivisor& operator+=(const TDivisor& o);
  friend TDivisor operator+(TDivisor a, const TDivisor& b) { return a += b; }
  friend TDivisor operator-(TDivisor a, const TDivisor& b) { return a += Rational(-1) * b; }
  friend TDivisor operator*(const Rational& s, TDivisor a) {
    for (Rational& c : a.coeffs_) c *= s;
    return a;
  }
  friend TDivisor operator-(const TDivisor& a) { return Rational(-1) * a; }
  friend bool operator==(const TDivisor&, const TDivisor&) = default;

 private:
  std::vector<Rational> coeffs_;
};

class ToricSurface {
 public:
  /// InputError for a fan that is not smooth and complete.
  explicit ToricSurface(std::vector<Ray> rays);

  std::size_t size() const { return rays_.size(); }
  const std::vector<Ray>& rays() const { return rays_; }
  /// a_i with v_{i-1} + v_{i+1} = a_i v_i, so D_i^2 = -a_i.
  long long wall_coefficient(std::size_t i) const { return a_[i]; }
  /// D_i · D_j.
  long long divisor_intersection(std::size_t i, std::size_t j) const;

  TDivisor anticanonical() const { return TDivisor::uniform(size(), Rational(1)); }
  TDivisor canonical() const { return TDivisor::uniform(size(), Rational(-1)); }
  TDivisor divisor(std::size_t i) const { return TDivisor::basis(size(), i); }

  static ToricSurface projective_plane();
  static ToricSurface p1_times_p1();
  static ToricSurface hirzebruch(long long a);

 private:
  std::vector<Ray> rays_;
  std::vector<long long> a_;
};

/// A fan plus named divisors, as read from a fan file.
struct FanFile {
  ToricSurface surface;
  std::map<std::string, TDivisor> divisors;
};
/// Lines "x y" give rays in order; "NAME = c_1 ... c_n" names a divisor;
/// '#' starts a comment. InputError with the line number on bad input.
FanFile parse_fan(std::istream& in);
FanFile read_fan_file(const std::string& path);
/// A name from the file, "K", "-K", or an explicit coefficient list.
TDivisor resolve_divisor(const FanFile& fan, const std::string& spec);

Rational intersect(const TDivisor& d1, const TDivisor& d2, const ToricSurface& x);
bool is_ample(const TDivisor& d, const ToricSurface& x);
bool is_nef(const TDivisor& d, const ToricSurface& x);

/// μ(L) = -K·L / L^2. DomainError when L^2 = 0.
Rational mu(const TDivisor& l, const ToricSurface& x);
/// μ_b(L) = -(K + (1-b)D)·L / L^2.
Rational mu_b(const TDivisor& l, const TDivisor& d, const Rational& b, const ToricSurface& x);

struct NefThreshold {
  Rational value;
  std::vector<std::size_t> boundary_curves;  // D_i where F - sL meets zero
};
/// s_F(L) = min_i (F·D_i)/(L·D_i); DomainError unless L is ample.
NefThreshold nef_threshold(const TDivisor& f, const TDivisor& l, const ToricSurface& x);

struct StabilityReport {
  Rational mu;
  Rational s;
  Rational bound;  // n μ - (n-1) s, n = 2
  std::optional<Rational> b;
  std::optional<Rational> mu_b;
  std::optional<Rational> s_b;
  std::optional<Rational> bound_b;
  Rational gamma;
  bool ample = false;      // K + (1-b)D + γL ample
  bool threshold = false;  // γ > bound (or bound_b)
  bool satisfied = false;
  std::optional<long long> m0;
};

/// Toric cscK criterion: K_X + γL ample and γ > 2μ - s; with (b, D)
/// the conic version using μ_b, s_b and K_X + (1-b)D + γL.
StabilityReport check_csck_criterion(const ToricSurface& x, const TDivisor& l, const Rational& gamma,
                                     const std::optional<Rational>& b = std::nullopt,
                                     const std::optional<TDivisor>& d = std::nullopt);

/// Smallest m0 ≥ 1 with 2μ - s - (1-b)m0 < 0 and K_X + m0 L ample;
/// none when b = 1 and 2μ - s ≥ 0.
std::optional<long long> find_m0(const ToricSurface& x, const TDivisor& l, const Rational& b);

}  // namespace gibbsk
