#pragma once

// Exact integer and rational arithmetic shared by every module.

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace nilprod {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer coordinate overflow");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer coordinate overflow");
  return r;
}

inline std::int64_t checked_neg(std::int64_t a) {
  if (a == INT64_MIN) throw std::overflow_error("integer coordinate overflow");
  return -a;
}

/// Representative of x modulo m in [0, m); m == 0 leaves x unchanged.
inline std::int64_t reduce_mod(std::int64_t x, std::int64_t m) {
  if (m == 0) return x;
  std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

/// a*b reduced modulo m without intermediate overflow (m > 0), or checked
/// plain product when m == 0.
inline std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  if (m == 0) return checked_mul(a, b);
  __int128 p = static_cast<__int128>(a) * b;
  __int128 r = p % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

inline std::int64_t gcd0(std::int64_t a, std::int64_t b) {
  // gcd(0, n) = n, gcd(0, 0) = 0
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::int64_t to_int64(const BigInt& v) {
  if (v > INT64_MAX || v < INT64_MIN) throw std::overflow_error("value exceeds 64-bit range: " + v.str());
  return v.convert_to<std::int64_t>();
}

}  // namespace detail

/// Order of a group: a nonnegative integer or infinity.
class Cardinal {
 public:
  Cardinal() = default;  // infinite
  Cardinal(BigInt v) : value_(std::move(v)) {}
  Cardinal(std::int64_t v) : value_(BigInt(v)) {}
  Cardinal(int v) : value_(BigInt(v)) {}

  static Cardinal infinite() { return Cardinal(); }

  bool is_finite() const { return value_.has_value(); }
  const BigInt& value() const {
    if (!value_) throw std::domain_error("cardinal is infinite");
    return *value_;
  }

  std::string str() const { return value_ ? value_->str() : std::string("infinite"); }

  friend Cardinal operator*(const Cardinal& a, const Cardinal& b) {
    // 0 * infinite = 0 never arises for groups (orders are >= 1)
    if (!a.value_ || !b.value_) return infinite();
    return Cardinal(*a.value_ * *b.value_);
  }
  Cardinal& operator*=(const Cardinal& o) { return *this = *this * o; }

  friend bool operator==(const Cardinal& a, const Cardinal& b) { return a.value_ == b.value_; }
  friend std::ostream& operator<<(std::ostream& os, const Cardinal& c) { return os << c.str(); }

 private:
  std::optional<BigInt> value_;
};

/// Exact dyadic rational numerator / 2^exponent, kept with an odd numerator
/// (or zero with exponent 0).
class DyadicRational {
 public:
  DyadicRational() = default;
  DyadicRational(BigInt numerator, std::uint64_t exponent = 0)
      : num_(std::move(numerator)), exp_(exponent) {
    normalize();
  }

  /// 2^-k
  static DyadicRational inverse_power_of_two(std::uint64_t k) { return DyadicRational(BigInt(1), k); }

  const BigInt& numerator() const { return num_; }
  std::uint64_t exponent() const { return exp_; }

  Rational to_rational() const {
    return Rational(num_, pow2(exp_));
  }

  friend DyadicRational operator+(const DyadicRational& a, const DyadicRational& b) {
    std::uint64_t e = std::max(a.exp_, b.exp_);
    BigInt n = a.num_ * pow2(e - a.exp_) + b.num_ * pow2(e - b.exp_);
    return DyadicRational(std::move(n), e);
  }
  friend DyadicRational operator-(const DyadicRational& a) { return DyadicRational(-a.num_, a.exp_); }
  friend DyadicRational operator-(const DyadicRational& a, const DyadicRational& b) { return a + (-b); }
  friend DyadicRational operator*(const DyadicRational& a, const DyadicRational& b) {
    return DyadicRational(a.num_ * b.num_, a.exp_ + b.exp_);
  }
  DyadicRational& operator+=(const DyadicRational& o) { return *this = *this + o; }
  DyadicRational& operator-=(const DyadicRational& o) { return *this = *this - o; }

  friend bool operator==(const DyadicRational& a, const DyadicRational& b) {
    return a.num_ == b.num_ && a.exp_ == b.exp_;
  }
  friend bool operator<(const DyadicRational& a, const DyadicRational& b) {
    std::uint64_t e = std::max(a.exp_, b.exp_);
    return a.num_ * pow2(e - a.exp_) < b.num_ * pow2(e - b.exp_);
  }

  friend std::ostream& operator<<(std::ostream& os, const DyadicRational& d) { return os << d.to_rational(); }

 private:
  static BigInt pow2(std::uint64_t k) { return BigInt(1) << k; }

  void normalize() {
    if (num_ == 0) {
      exp_ = 0;
      return;
    }
    while (exp_ > 0 && num_ % 2 == 0) {
      num_ /= 2;
      --exp_;
    }
  }

  BigInt num_{0};
  std::uint64_t exp_ = 0;
};

}  // namespace nilprod
