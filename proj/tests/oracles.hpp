#pragma once

#include <random>

#include "coposlab/quartic.hpp"
#include "support.hpp"

namespace coposlab::test {

// Literal repeated differentiation d/dx_var applied to a polynomial.
inline Poly<Rational> differentiate(const Poly<Rational>& p, int var) {
  Poly<Rational> out;
  for (const auto& [m, c] : p) {
    if (m[var] == 0) continue;
    Monomial d = m;
    d[var] -= 1;
    out[d] += c * m[var];
  }
  return out;
}

// D_f(g): replace each x^alpha of f by the operator d^alpha and apply it to g.
inline Rational apolar_oracle(const GeneralQuartic& f, const GeneralQuartic& g) {
  Rational total = 0;
  for (const auto& [alpha, c] : f.terms()) {
    Poly<Rational> p = g.terms();
    for (int v = 0; v < f.n(); ++v)
      for (int k = 0; k < alpha[v]; ++k) p = differentiate(p, v);
    for (const auto& [m, coef] : p) total += c * coef;
  }
  return total;
}

// Random sparse degree-4 form with rational coefficients.
inline GeneralQuartic random_general(Rng& rng, int n) {
  GeneralQuartic g(n);
  std::uniform_int_distribution<int> keep(0, 2);
  for (const Monomial& m : homogeneous_monomials(n, 4))
    if (keep(rng) == 0) g.add(m, random_rational(rng, -4, 4, 5));
  return g;
}

}  // namespace coposlab::test
