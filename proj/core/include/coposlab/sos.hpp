#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "coposlab/sdp.hpp"

namespace coposlab {

// Exponent vector of a monomial in n variables.
using Monomial = std::vector<int>;

int degree(const Monomial& m);
Monomial operator+(const Monomial& a, const Monomial& b);
std::string to_string(const Monomial& m);  // e.g. "x1^2*x3"

// Graded lexicographic: lower total degree first; within a degree,
// x1^d precedes x1^(d-1) x2 and so on.
struct GrlexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

template <typename T>
using Poly = std::map<Monomial, T, GrlexLess>;
using PolyF = Poly<double>;

// All monomials of exactly `degree` in n variables, in grlex order.
std::vector<Monomial> homogeneous_monomials(int n, int degree);

template <typename T>
Poly<T> poly_mul(const Poly<T>& a, const Poly<T>& b) {
  Poly<T> out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) out[ma + mb] += ca * cb;
  for (auto it = out.begin(); it != out.end();) {
    if (it->second == T(0)) it = out.erase(it);
    else ++it;
  }
  return out;
}

// (x1^2 + ... + xn^2)^r
template <typename T>
Poly<T> sum_squares_power(int n, int r) {
  Poly<T> out;
  out[Monomial(n, 0)] = T(1);
  Poly<T> s;
  for (int i = 0; i < n; ++i) {
    Monomial m(n, 0);
    m[i] = 2;
    s[m] = T(1);
  }
  for (int k = 0; k < r; ++k) out = poly_mul(out, s);
  return out;
}

// Basis pairs (a <= b) with w_a w_b equal to each reachable monomial.
class GramPairs {
 public:
  explicit GramPairs(std::vector<Monomial> basis);
  const std::vector<Monomial>& basis() const { return basis_; }
  const std::map<Monomial, std::vector<std::pair<int, int>>, GrlexLess>& pairs() const { return pairs_; }
  bool reachable(const Monomial& m) const { return pairs_.count(m) != 0; }

  // Adds scale * (coefficient of m in w^T B w) to f, with B in PSD block `block`.
  void add_coefficient(LinearFunctional& f, int block, const Monomial& m, double scale = 1.0) const;

 private:
  std::vector<Monomial> basis_;
  std::map<Monomial, std::vector<std::pair<int, int>>, GrlexLess> pairs_;
};

struct SosAssembly {
  SdpProblem problem;               // block 0 is the Gram matrix
  std::vector<Monomial> basis;
  std::vector<Monomial> monomials;  // constraint i matches monomials[i]
};

struct UnreachableMonomials {
  std::vector<Monomial> monomials;  // target terms no basis pair produces
};

std::variant<SosAssembly, UnreachableMonomials> sos_gram_assemble(const PolyF& target, const std::vector<Monomial>& basis);

// Coefficients of w^T B w.
PolyF gram_polynomial(const std::vector<Monomial>& basis, const Matrix& gram);

// max over monomials of |coef(w^T B w) - target|.
double gram_residual(const PolyF& target, const std::vector<Monomial>& basis, const Matrix& gram);

}  // namespace coposlab
