#pragma once

// Exact rational arithmetic for exposure labels. Proportion-valued mappings
// produce labels like s/N; comparing those as doubles makes deduplication and
// restriction matching tie-prone, so labels are kept as normalized fractions
// (den >= 1, gcd(|num|, den) == 1) and compared with 128-bit cross products.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace netbandit {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  static Rational integer(std::int64_t n) { return Rational(n, 1); }

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return a == b || a < b; }

  std::string str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }

  // Matches a configured double against this exact label. Labels at simulation
  // scale have denominators far below 2^26, so 1e-9 separates distinct values.
  bool matches(double v) const { return std::fabs(value() - v) < 1e-9; }
};

}  // namespace netbandit
