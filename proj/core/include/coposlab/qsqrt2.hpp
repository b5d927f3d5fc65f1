#pragma once

#include <string>

#include "coposlab/rational.hpp"

namespace coposlab {

// Exact element rat + irr*sqrt(2) of the field Q(sqrt 2).
class QSqrt2 {
 public:
  QSqrt2() = default;
  QSqrt2(long v) : rat_(v) {}  // NOLINT(google-explicit-constructor)
  QSqrt2(Rational rat) : rat_(std::move(rat)) {}  // NOLINT(google-explicit-constructor)
  QSqrt2(Rational rat, Rational irr) : rat_(std::move(rat)), irr_(std::move(irr)) {}

  static QSqrt2 sqrt2() { return QSqrt2(Rational(0), Rational(1)); }

  const Rational& rat() const { return rat_; }
  const Rational& irr() const { return irr_; }

  bool is_rational() const { return irr_ == 0; }
  bool is_zero() const { return rat_ == 0 && irr_ == 0; }

  // Exact sign in {-1, 0, 1}.
  int sign() const;

  // Conjugate rat - irr*sqrt(2) and field norm rat^2 - 2 irr^2.
  QSqrt2 conjugate() const { return QSqrt2(rat_, -irr_); }
  Rational norm() const;

  // Nearest-double evaluation; uses the conjugate form when the two parts
  // have opposite signs to avoid cancellation.
  double to_double() const;

  // "p/q", "r/s√2", "p/q+r/s√2" or "p/q-r/s√2".
  std::string to_string() const;
  static QSqrt2 parse(const std::string& s);

  QSqrt2& operator+=(const QSqrt2& o);
  QSqrt2& operator-=(const QSqrt2& o);
  QSqrt2& operator*=(const QSqrt2& o);
  QSqrt2& operator/=(const QSqrt2& o);

  friend QSqrt2 operator+(QSqrt2 a, const QSqrt2& b) { return a += b; }
  friend QSqrt2 operator-(QSqrt2 a, const QSqrt2& b) { return a -= b; }
  friend QSqrt2 operator*(QSqrt2 a, const QSqrt2& b) { return a *= b; }
  friend QSqrt2 operator/(QSqrt2 a, const QSqrt2& b) { return a /= b; }
  QSqrt2 operator-() const { return QSqrt2(-rat_, -irr_); }

  friend bool operator==(const QSqrt2& a, const QSqrt2& b) {
    return a.rat_ == b.rat_ && a.irr_ == b.irr_;
  }
  friend bool operator!=(const QSqrt2& a, const QSqrt2& b) { return !(a == b); }
  friend bool operator<(const QSqrt2& a, const QSqrt2& b) { return (a - b).sign() < 0; }
  friend bool operator>(const QSqrt2& a, const QSqrt2& b) { return b < a; }
  friend bool operator<=(const QSqrt2& a, const QSqrt2& b) { return !(b < a); }
  friend bool operator>=(const QSqrt2& a, const QSqrt2& b) { return !(a < b); }

 private:
  Rational rat_{0};
  Rational irr_{0};
};

inline QSqrt2 abs(const QSqrt2& x) { return x.sign() < 0 ? -x : x; }

}  // namespace coposlab
