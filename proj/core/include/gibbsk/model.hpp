#pragma once

#include "gibbsk/error.hpp"

namespace gibbsk {

/// (P^1, O(m)) with ∫ c1(O(1)) = 1, so the volume V = ∫ ω equals m and
/// ∫ Ric = deg(-K) = 2. Analytic computations are always in complex dimension 1.
class PolarizedModel {
 public:
  explicit PolarizedModel(int m = 1) : m_(m) {
    if (m < 1) throw InputError("PolarizedModel: degree m must be >= 1");
  }
  int degree() const { return m_; }
  double volume() const { return static_cast<double>(m_); }
  static constexpr int dimension() { return 1; }
  static constexpr const char* normalization() { return "int_P1 c1(O(1)) = 1"; }

 private:
  int m_;
};

}  // namespace gibbsk
