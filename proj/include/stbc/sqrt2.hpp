// SPDX-License-Identifier: Apache-2.0
//
// Exact arithmetic over Q(sqrt 2) and its complex extension.
//
// Every coefficient that appears in a design matrix lives in this ring, so
// Gram-matrix checks are decidable equalities instead of float comparisons.
// The scalars the constructions actually produce are 0, +-1 and +-1/sqrt(2);
// the ring is closed under all four operations regardless.

#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace stbc {

// Value a + b*sqrt(2) with rational a, b kept in lowest terms.
// 1/sqrt(2) is representable as (0, 1/2) since 1/sqrt(2) = sqrt(2)/2.
class Sqrt2Rational {
 public:
  Sqrt2Rational() : a_(0), b_(0) {}
  Sqrt2Rational(long v) : a_(v), b_(0) {}  // NOLINT: integers embed implicitly
  Sqrt2Rational(mpq_class a, mpq_class b) : a_(std::move(a)), b_(std::move(b)) {
    // mpq_class arithmetic keeps values canonical, but raw construction
    // (e.g. mpq_class(2, 4)) does not; normalize once on entry.
    a_.canonicalize();
    b_.canonicalize();
  }

  static Sqrt2Rational ratio(long num, long den) {
    if (den == 0) throw std::domain_error("Sqrt2Rational: zero denominator");
    return Sqrt2Rational(mpq_class(num, den), mpq_class(0));
  }
  static Sqrt2Rational sqrt2() { return Sqrt2Rational(mpq_class(0), mpq_class(1)); }
  static Sqrt2Rational inv_sqrt2() {
    return Sqrt2Rational(mpq_class(0), mpq_class(1, 2));
  }

  const mpq_class& a() const { return a_; }
  const mpq_class& b() const { return b_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }
  bool is_rational() const { return b_ == 0; }

  Sqrt2Rational operator-() const { return Sqrt2Rational(-a_, -b_); }

  Sqrt2Rational& operator+=(const Sqrt2Rational& o) {
    a_ += o.a_;
    b_ += o.b_;
    return *this;
  }
  Sqrt2Rational& operator-=(const Sqrt2Rational& o) {
    a_ -= o.a_;
    b_ -= o.b_;
    return *this;
  }
  Sqrt2Rational& operator*=(const Sqrt2Rational& o) {
    // (a1 + b1 r)(a2 + b2 r) = a1 a2 + 2 b1 b2 + (a1 b2 + a2 b1) r,  r = sqrt 2
    mpq_class a = a_ * o.a_ + 2 * b_ * o.b_;
    mpq_class b = a_ * o.b_ + o.a_ * b_;
    a_ = std::move(a);
    b_ = std::move(b);
    return *this;
  }

  friend Sqrt2Rational operator+(Sqrt2Rational x, const Sqrt2Rational& y) {
    return x += y;
  }
  friend Sqrt2Rational operator-(Sqrt2Rational x, const Sqrt2Rational& y) {
    return x -= y;
  }
  friend Sqrt2Rational operator*(Sqrt2Rational x, const Sqrt2Rational& y) {
    return x *= y;
  }

  // (a + b r)^-1 = (a - b r) / (a^2 - 2 b^2); the denominator vanishes only
  // at zero because sqrt(2) is irrational.
  Sqrt2Rational inverse() const {
    if (is_zero()) throw std::domain_error("Sqrt2Rational: inverse of zero");
    mpq_class d = a_ * a_ - 2 * b_ * b_;
    return Sqrt2Rational(a_ / d, -b_ / d);
  }
  friend Sqrt2Rational operator/(const Sqrt2Rational& x, const Sqrt2Rational& y) {
    return x * y.inverse();
  }

  // Exact sign of a + b*sqrt(2) without floating point. When a and b have
  // opposite signs the comparison reduces to a^2 vs 2 b^2.
  int sign() const {
    int sa = sgn(a_);
    int sb = sgn(b_);
    if (sa == 0) return sb;
    if (sb == 0 || sa == sb) return sa;
    int c = cmp(a_ * a_, 2 * b_ * b_);
    // a^2 = 2 b^2 with a, b nonzero would make sqrt(2) rational.
    return c > 0 ? sa : sb;
  }

  friend bool operator==(const Sqrt2Rational& x, const Sqrt2Rational& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const Sqrt2Rational& x, const Sqrt2Rational& y) {
    return !(x == y);
  }
  friend bool operator<(const Sqrt2Rational& x, const Sqrt2Rational& y) {
    return (x - y).sign() < 0;
  }
  friend bool operator>(const Sqrt2Rational& x, const Sqrt2Rational& y) {
    return y < x;
  }
  friend bool operator<=(const Sqrt2Rational& x, const Sqrt2Rational& y) {
    return !(y < x);
  }
  friend bool operator>=(const Sqrt2Rational& x, const Sqrt2Rational& y) {
    return !(x < y);
  }

  double to_double() const;
  std::string str() const;  // compact "a+b*r2" form for diagnostics

 private:
  mpq_class a_, b_;
};

// Complex extension: re + j*im with re, im in Q(sqrt 2).
class Sqrt2Complex {
 public:
  Sqrt2Complex() = default;
  Sqrt2Complex(Sqrt2Rational re, Sqrt2Rational im)
      : re_(std::move(re)), im_(std::move(im)) {}
  Sqrt2Complex(long v) : re_(v), im_(0) {}  // NOLINT: integers embed implicitly

  static Sqrt2Complex j() { return Sqrt2Complex(Sqrt2Rational(0), Sqrt2Rational(1)); }

  const Sqrt2Rational& re() const { return re_; }
  const Sqrt2Rational& im() const { return im_; }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }
  bool is_imaginary() const { return re_.is_zero(); }

  Sqrt2Complex conj() const { return Sqrt2Complex(re_, -im_); }
  Sqrt2Complex operator-() const { return Sqrt2Complex(-re_, -im_); }
  // Multiplication by j, cheaper than a full product.
  Sqrt2Complex times_j() const { return Sqrt2Complex(-im_, re_); }

  // |z|^2 = z * conj(z), always real.
  Sqrt2Rational norm2() const { return re_ * re_ + im_ * im_; }

  Sqrt2Complex& operator+=(const Sqrt2Complex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  Sqrt2Complex& operator-=(const Sqrt2Complex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  Sqrt2Complex& operator*=(const Sqrt2Complex& o) {
    Sqrt2Rational re = re_ * o.re_ - im_ * o.im_;
    Sqrt2Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }

  friend Sqrt2Complex operator+(Sqrt2Complex x, const Sqrt2Complex& y) {
    return x += y;
  }
  friend Sqrt2Complex operator-(Sqrt2Complex x, const Sqrt2Complex& y) {
    return x -= y;
  }
  friend Sqrt2Complex operator*(Sqrt2Complex x, const Sqrt2Complex& y) {
    return x *= y;
  }

  Sqrt2Complex inverse() const {
    if (is_zero()) throw std::domain_error("Sqrt2Complex: inverse of zero");
    Sqrt2Rational d = norm2().inverse();
    return Sqrt2Complex(re_ * d, -im_ * d);
  }
  friend Sqrt2Complex operator/(const Sqrt2Complex& x, const Sqrt2Complex& y) {
    return x * y.inverse();
  }

  friend bool operator==(const Sqrt2Complex& x, const Sqrt2Complex& y) {
    return x.re_ == y.re_ && x.im_ == y.im_;
  }
  friend bool operator!=(const Sqrt2Complex& x, const Sqrt2Complex& y) {
    return !(x == y);
  }

  std::string str() const;

 private:
  Sqrt2Rational re_, im_;
};

}  // namespace stbc
