#pragma once

#include "arith.hpp"

#include <cmath>
#include <compare>
#include <ostream>

namespace hkp {

inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// a + b*sqrt(rad) with rational a, b and positive radicand.
/// A perfect-square radicand is folded into the rational part.
class QuadNum {
public:
  QuadNum() = default;

  QuadNum(Rational a, Rational b, Integer rad) : a_(std::move(a)), b_(std::move(b)), rad_(std::move(rad)) {
    require_positive(rad_, "radicand");
    normalize();
  }

  static QuadNum rational(Rational a, Integer rad = 1) { return QuadNum(std::move(a), 0, std::move(rad)); }

  static QuadNum sqrt_of(const Integer& rad) { return QuadNum(0, 1, rad); }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const Integer& rad() const { return rad_; }

  bool is_rational() const { return b_ == 0; }

  Rational norm() const { return a_ * a_ - b_ * b_ * rad_; }

  QuadNum conj() const { return QuadNum(a_, -b_, rad_); }

  QuadNum operator-() const { return QuadNum(-a_, -b_, rad_); }

  friend QuadNum operator+(const QuadNum& x, const QuadNum& y) {
    const Integer r = common_rad(x, y);
    return QuadNum(x.a_ + y.a_, x.b_ + y.b_, r);
  }

  friend QuadNum operator-(const QuadNum& x, const QuadNum& y) { return x + (-y); }

  friend QuadNum operator*(const QuadNum& x, const QuadNum& y) {
    const Integer r = common_rad(x, y);
    return QuadNum(x.a_ * y.a_ + x.b_ * y.b_ * r, x.a_ * y.b_ + x.b_ * y.a_, r);
  }

  friend QuadNum operator*(const QuadNum& x, const Rational& q) { return QuadNum(x.a_ * q, x.b_ * q, x.rad_); }

  friend QuadNum operator/(const QuadNum& x, const Rational& q) {
    if (q == 0) throw std::domain_error("division by zero");
    return QuadNum(x.a_ / q, x.b_ / q, x.rad_);
  }

  friend QuadNum operator/(const QuadNum& x, const QuadNum& y) {
    const Rational n = y.norm();
    if (n == 0) throw std::domain_error("division by an element of norm zero");
    return (x * y.conj()) / n;
  }

  /// Power with integer exponent; negative exponents need a nonzero norm.
  QuadNum pow(long m) const {
    if (m < 0) return QuadNum::rational(1, rad_) / pow(-m);
    QuadNum result = QuadNum::rational(1, rad_);
    QuadNum base = *this;
    while (m > 0) {
      if (m & 1) result = result * base;
      base = base * base;
      m >>= 1;
    }
    return result;
  }

  /// Sign of the real number a + b*sqrt(rad), computed exactly.
  int sign() const {
    const int sa = sgn(a_);
    const int sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sa == 0 ? sb : sa;
    // opposite signs: compare a^2 with b^2 * rad
    const int c = cmp(Rational(a_ * a_), Rational(b_ * b_ * rad_));
    return c > 0 ? sa : (c < 0 ? sb : 0);
  }

  friend bool operator==(const QuadNum& x, const QuadNum& y) { return (x - y).sign() == 0; }

  friend std::strong_ordering operator<=>(const QuadNum& x, const QuadNum& y) {
    const int s = (x - y).sign();
    return s < 0 ? std::strong_ordering::less : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  double to_double() const { return a_.get_d() + b_.get_d() * std::sqrt(rad_.get_d()); }

  friend std::ostream& operator<<(std::ostream& os, const QuadNum& x) {
    os << to_string(x.a_);
    if (x.b_ != 0) os << (x.b_ > 0 ? " + " : " - ") << to_string(Rational(abs(x.b_))) << "*sqrt(" << x.rad_ << ")";
    return os;
  }

private:
  static Integer common_rad(const QuadNum& x, const QuadNum& y) {
    if (x.b_ == 0) return y.rad_;
    if (y.b_ == 0) return x.rad_;
    if (x.rad_ != y.rad_) throw std::invalid_argument("radicand mismatch");
    return x.rad_;
  }

  void normalize() {
    a_.canonicalize();
    b_.canonicalize();
    if (auto s = is_perfect_square(rad_)) {
      a_ += b_ * *s;
      b_ = 0;
    }
  }

  Rational a_{0};
  Rational b_{0};
  Integer rad_{1};
};

}  // namespace hkp
