#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <string>

namespace nlse {

/// Exact rational number on 64-bit integers. Arithmetic throws
/// std::overflow_error instead of wrapping, and std::domain_error on a zero
/// denominator. Always stored reduced with a positive denominator.
class Rational {
public:
  constexpr Rational() = default;
  Rational(std::int64_t num) : num_(num), den_(1) {}  // NOLINT: implicit by design of literals
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  bool is_negative() const { return num_ < 0; }

  /// Largest integer not exceeding the value.
  std::int64_t floor() const;
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "3", "-1/2".
  std::string str() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// Positive gcd of two rationals: the largest r such that a/r and b/r are
/// both integers. gcd(0, b) = |b|.
Rational gcd(const Rational& a, const Rational& b);
Rational abs(const Rational& r);

/// Gaussian rational re + im*i, the exact numeric coefficient type of the
/// symbolic layer.
struct ComplexRational {
  Rational re;
  Rational im;

  ComplexRational() = default;
  ComplexRational(std::int64_t n) : re(n) {}  // NOLINT
  ComplexRational(Rational r) : re(r) {}  // NOLINT
  ComplexRational(Rational r, Rational i) : re(r), im(i) {}

  static ComplexRational i() { return {0, 1}; }

  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  bool is_one() const { return re == Rational(1) && im.is_zero(); }
  bool is_real() const { return im.is_zero(); }

  ComplexRational conj() const { return {re, -im}; }
  ComplexRational inverse() const;
  /// Integer power; negative exponents invert.
  ComplexRational pow(std::int64_t n) const;
  std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }

  ComplexRational operator-() const { return {-re, -im}; }
  friend ComplexRational operator+(const ComplexRational& a, const ComplexRational& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend ComplexRational operator-(const ComplexRational& a, const ComplexRational& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend ComplexRational operator/(const ComplexRational& a, const ComplexRational& b) {
    return a * b.inverse();
  }
  friend bool operator==(const ComplexRational&, const ComplexRational&) = default;
  friend std::strong_ordering operator<=>(const ComplexRational& a, const ComplexRational& b) {
    if (auto c = a.re <=> b.re; c != 0) return c;
    return a.im <=> b.im;
  }
};

}  // namespace nlse
