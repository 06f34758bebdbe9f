#pragma once

// Reduced fraction with 64-bit parts. Every operation checks for overflow and
// throws SmallOverflow so callers can retry with arbitrary precision.

#include <cstdint>
#include <cstdlib>
#include <numeric>

#include "linsys/rational.hpp"

namespace linsys::detail {

struct SmallOverflow {};

class SmallRational {
 public:
  SmallRational() = default;
  SmallRational(std::int64_t n) : num_(n) {}  // NOLINT(google-explicit-constructor)

  static SmallRational from(const Rational& q) {
    if (!q.get_num().fits_slong_p() || !q.get_den().fits_slong_p()) throw SmallOverflow{};
    SmallRational r;
    r.num_ = q.get_num().get_si();
    r.den_ = q.get_den().get_si();
    return r;
  }

  Rational to_rational() const { return Rational(mpz_class(num_), mpz_class(den_)); }

  friend int sgn(const SmallRational& x) { return (x.num_ > 0) - (x.num_ < 0); }

  friend bool operator==(const SmallRational& a, const SmallRational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  friend int cmp(const SmallRational& a, const SmallRational& b) {
    const __int128 l = static_cast<__int128>(a.num_) * b.den_;
    const __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return (l > r) - (l < r);
  }

  SmallRational operator-() const {
    if (num_ == INT64_MIN) throw SmallOverflow{};
    SmallRational r = *this;
    r.num_ = -num_;
    return r;
  }

  friend SmallRational operator*(const SmallRational& a, const SmallRational& b) {
    if (a.num_ == 0 || b.num_ == 0) return {};
    const std::int64_t g1 = std::gcd(a.num_, b.den_);
    const std::int64_t g2 = std::gcd(b.num_, a.den_);
    SmallRational r;
    if (__builtin_mul_overflow(a.num_ / g1, b.num_ / g2, &r.num_) ||
        __builtin_mul_overflow(a.den_ / g2, b.den_ / g1, &r.den_)) {
      throw SmallOverflow{};
    }
    return r;
  }

  friend SmallRational operator/(const SmallRational& a, const SmallRational& b) {
    return a * b.inverse();
  }

  SmallRational inverse() const {
    if (num_ == 0 || num_ == INT64_MIN) throw SmallOverflow{};
    SmallRational r;
    r.num_ = num_ < 0 ? -den_ : den_;
    r.den_ = num_ < 0 ? -num_ : num_;
    return r;
  }

  SmallRational& operator*=(const SmallRational& b) { return *this = *this * b; }

  SmallRational& operator-=(const SmallRational& b) { return *this = add(*this, b, true); }

  SmallRational& operator+=(const SmallRational& b) { return *this = add(*this, b, false); }

 private:
  static SmallRational add(const SmallRational& a, const SmallRational& b, bool subtract) {
    if (b.num_ == 0) return a;
    std::int64_t bn = b.num_;
    if (subtract) {
      if (bn == INT64_MIN) throw SmallOverflow{};
      bn = -bn;
    }
    SmallRational r;
    if (a.den_ == 1 && b.den_ == 1) {
      if (__builtin_add_overflow(a.num_, bn, &r.num_)) throw SmallOverflow{};
      return r;
    }
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const std::int64_t ad = a.den_ / g;
    const std::int64_t bd = b.den_ / g;
    std::int64_t left, right, num, den;
    if (__builtin_mul_overflow(a.num_, bd, &left) || __builtin_mul_overflow(bn, ad, &right) ||
        __builtin_add_overflow(left, right, &num) || __builtin_mul_overflow(ad, b.den_, &den)) {
      throw SmallOverflow{};
    }
    if (num == 0) return r;
    const std::int64_t h = std::gcd(num, g);
    r.num_ = num / h;
    r.den_ = den / h;
    return r;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace linsys::detail
