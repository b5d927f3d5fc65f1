#include "coposlab/rational.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace coposlab {

Rational make_rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite double has no rational value");
  Rational q(x);  // mpq_set_d is exact
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    bool ok = (c >= '0' && c <= '9') || c == '/' || (i == 0 && (c == '-' || c == '+'));
    if (!ok) throw std::invalid_argument("bad rational literal: " + s);
  }
  std::string body = s[0] == '+' ? s.substr(1) : s;
  Rational q;
  if (q.set_str(body, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
  if (q.get_den() == 0) throw std::invalid_argument("rational with zero denominator: " + s);
  q.canonicalize();
  return q;
}

double to_double(const Rational& q) { return q.get_d(); }

bool fits_int64(const Integer& z) {
  static const Integer lo(std::to_string(std::numeric_limits<std::int64_t>::min()));
  static const Integer hi(std::to_string(std::numeric_limits<std::int64_t>::max()));
  return z >= lo && z <= hi;
}

std::int64_t to_int64(const Integer& z) {
  if (!fits_int64(z)) throw std::out_of_range("integer does not fit in 64 bits");
  return std::stoll(z.get_str());
}

}  // namespace coposlab
