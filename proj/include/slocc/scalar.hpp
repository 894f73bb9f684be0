#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <ostream>
#include <string>
#include <utility>

#include "slocc/errors.hpp"

namespace slocc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& q) {
  if (boost::multiprecision::denominator(q) == 1) {
    return boost::multiprecision::numerator(q).str();
  }
  return boost::multiprecision::numerator(q).str() + "/" +
         boost::multiprecision::denominator(q).str();
}

/// Complex number with exact rational real and imaginary parts.
///
/// Both parts are kept in lowest terms with a positive denominator (the
/// invariant is maintained by cpp_rational itself).
class ExactScalar {
 public:
  ExactScalar() = default;
  ExactScalar(Rational re, Rational im = Rational(0)) : re_(std::move(re)), im_(std::move(im)) {}
  ExactScalar(long long re, long long im = 0) : re_(re), im_(im) {}
  ExactScalar(int re) : re_(re), im_(0) {}

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }

  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }

  ExactScalar conj() const { return {re_, -im_}; }
  Rational norm_squared() const { return re_ * re_ + im_ * im_; }

  ExactScalar operator-() const { return {-re_, -im_}; }

  ExactScalar& operator+=(const ExactScalar& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
  }
  ExactScalar& operator-=(const ExactScalar& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
  }
  ExactScalar& operator*=(const ExactScalar& o) {
    if (im_.is_zero() && o.im_.is_zero()) {
      re_ *= o.re_;
      return *this;
    }
    Rational re = re_ * o.re_ - im_ * o.im_;
    Rational im = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }
  ExactScalar& operator/=(const ExactScalar& o) {
    if (o.is_zero()) throw InvalidArgument("ExactScalar: division by zero");
    if (o.im_.is_zero()) {
      re_ /= o.re_;
      im_ /= o.re_;
      return *this;
    }
    const Rational den = o.norm_squared();
    Rational re = (re_ * o.re_ + im_ * o.im_) / den;
    Rational im = (im_ * o.re_ - re_ * o.im_) / den;
    re_ = std::move(re);
    im_ = std::move(im);
    return *this;
  }

  friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
  friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
  friend ExactScalar operator*(ExactScalar a, const ExactScalar& b) { return a *= b; }
  friend ExactScalar operator/(ExactScalar a, const ExactScalar& b) { return a /= b; }

  friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
    return a.re_ == b.re_ && a.im_ == b.im_;
  }

  /// Renders as `re+imi`, e.g. `1/2-3i` or `0+0i`.
  std::string str() const {
    std::string out = to_string(re_);
    out += im_ < 0 ? "-" : "+";
    out += to_string(im_ < 0 ? Rational(-im_) : im_);
    out += "i";
    return out;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExactScalar& z) { return os << z.str(); }

 private:
  Rational re_{0};
  Rational im_{0};
};

}  // namespace slocc
