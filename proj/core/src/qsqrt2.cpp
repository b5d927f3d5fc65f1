#include "coposlab/qsqrt2.hpp"

#include <cmath>
#include <stdexcept>

namespace coposlab {

namespace {

int sgn(const Rational& q) { return q > 0 ? 1 : (q < 0 ? -1 : 0); }

}  // namespace

int QSqrt2::sign() const {
  int a = sgn(rat_);
  int b = sgn(irr_);
  if (b == 0) return a;
  if (a == 0) return b;
  if (a == b) return a;
  // Opposite signs: compare rat^2 with 2 irr^2.
  Rational lhs = rat_ * rat_;
  Rational rhs = 2 * irr_ * irr_;
  int c = cmp(lhs, rhs);
  if (c == 0) return 0;  // unreachable since sqrt(2) is irrational
  return c > 0 ? a : b;
}

Rational QSqrt2::norm() const {
  Rational r = rat_ * rat_ - 2 * irr_ * irr_;
  return r;
}

double QSqrt2::to_double() const {
  const double s2 = std::sqrt(2.0);
  if (sgn(rat_) * sgn(irr_) >= 0) return rat_.get_d() + irr_.get_d() * s2;
  double den = rat_.get_d() - irr_.get_d() * s2;
  return norm().get_d() / den;
}

std::string QSqrt2::to_string() const {
  if (irr_ == 0) return coposlab::to_string(rat_);
  std::string out;
  if (rat_ != 0) out = coposlab::to_string(rat_);
  if (irr_ < 0) {
    Rational m = -irr_;
    out += "-" + coposlab::to_string(m);
  } else {
    if (!out.empty()) out += "+";
    out += coposlab::to_string(irr_);
  }
  out += "√2";
  return out;
}

QSqrt2 QSqrt2::parse(const std::string& text) {
  static const std::string kRoot = "√2";
  if (text.size() < kRoot.size() || text.compare(text.size() - kRoot.size(), kRoot.size(), kRoot) != 0) {
    return QSqrt2(parse_rational(text));
  }
  std::string body = text.substr(0, text.size() - kRoot.size());
  // The irrational part starts at the last sign that is not leading.
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    if (body[i] == '+' || body[i] == '-') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) return QSqrt2(Rational(0), parse_rational(body));
  Rational r = parse_rational(body.substr(0, split));
  Rational s = parse_rational(body.substr(split));
  return QSqrt2(r, s);
}

QSqrt2& QSqrt2::operator+=(const QSqrt2& o) {
  rat_ += o.rat_;
  irr_ += o.irr_;
  return *this;
}

QSqrt2& QSqrt2::operator-=(const QSqrt2& o) {
  rat_ -= o.rat_;
  irr_ -= o.irr_;
  return *this;
}

QSqrt2& QSqrt2::operator*=(const QSqrt2& o) {
  Rational r = rat_ * o.rat_ + 2 * irr_ * o.irr_;
  Rational s = rat_ * o.irr_ + irr_ * o.rat_;
  rat_ = std::move(r);
  irr_ = std::move(s);
  return *this;
}

QSqrt2& QSqrt2::operator/=(const QSqrt2& o) {
  if (o.is_zero()) throw std::domain_error("division by zero in Q(sqrt 2)");
  Rational n = o.norm();
  QSqrt2 inv(o.rat_ / n, -o.irr_ / n);
  return *this *= inv;
}

}  // namespace coposlab
