#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace linkmod {

/// Exact rational on 64-bit numerator/denominator. Used for the symbolic
/// equality and set-emptiness tests, which are fragile in floating point.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw std::invalid_argument("zero denominator");
    normalize();
  }

  /// Parses "p/q", a plain integer, or a decimal like "1.25".
  static Rational parse(const std::string& text);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  Rational operator+(const Rational& o) const {
    return Rational(checked(num_, o.den_) + checked(o.num_, den_),
                    checked(den_, o.den_));
  }
  Rational operator-(const Rational& o) const {
    return Rational(checked(num_, o.den_) - checked(o.num_, den_),
                    checked(den_, o.den_));
  }
  Rational operator*(const Rational& o) const {
    return Rational(checked(num_, o.num_), checked(den_, o.den_));
  }
  Rational operator-() const { return Rational(-num_, den_); }

  bool operator==(const Rational& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const {
    return checked(num_, o.den_) < checked(o.num_, den_);
  }
  bool operator<=(const Rational& o) const { return !(o < *this); }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator>=(const Rational& o) const { return !(*this < o); }

  Rational abs() const { return num_ < 0 ? -*this : *this; }

 private:
  static std::int64_t checked(std::int64_t a, std::int64_t b) {
    __int128 p = static_cast<__int128>(a) * b;
    if (p > INT64_MAX || p < INT64_MIN)
      throw std::overflow_error("rational overflow");
    return static_cast<std::int64_t>(p);
  }

  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace linkmod
