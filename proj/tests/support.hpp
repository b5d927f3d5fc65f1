#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "coposlab/exceptional.hpp"
#include "coposlab/linalg.hpp"
#include "coposlab/quartic.hpp"
#include "coposlab/rational.hpp"
#include "coposlab/sym_matrix.hpp"

namespace coposlab::test {

using Rng = std::mt19937_64;

inline const std::string kDataDir = COPOSLAB_DATA_DIR;

inline Rational random_rational(Rng& rng, long lo, long hi, long den) {
  std::uniform_int_distribution<long> num(lo * den, hi * den);
  return make_rational(num(rng), den);
}

inline SymMatrixR random_sym_rational(Rng& rng, int n, long lo, long hi, long den) {
  SymMatrixR a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a.set(i, j, random_rational(rng, lo, hi, den));
  return a;
}

inline EvenQuartic random_quartic(Rng& rng, int n) { return EvenQuartic{random_sym_rational(rng, n, -5, 5, 7)}; }

inline std::vector<Rational> random_rational_vector(Rng& rng, int n, long lo, long hi, long den) {
  std::vector<Rational> v(n);
  for (auto& x : v) x = random_rational(rng, lo, hi, den);
  return v;
}

inline SymMatrixF random_sym(Rng& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  SymMatrixF a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a.set(i, j, u(rng));
  return a;
}

// G G^T with G of size n x k, entries uniform in [lo, hi].
inline SymMatrixF random_gram(Rng& rng, int n, int k, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<std::vector<double>> g(n, std::vector<double>(k));
  for (auto& row : g)
    for (auto& x : row) x = u(rng);
  SymMatrixF a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int l = 0; l < k; ++l) s += g[i][l] * g[j][l];
      a.set(i, j, s);
    }
  return a;
}

inline SymMatrixR to_rational(const SymMatrixQ& a) {
  SymMatrixR r(a.n());
  for (int i = 0; i < a.n(); ++i)
    for (int j = i; j < a.n(); ++j) r.set(i, j, a(i, j).rat());
  return r;
}

inline SymMatrixQ to_qsqrt2(const SymMatrixR& a) {
  SymMatrixQ q(a.n());
  for (int i = 0; i < a.n(); ++i)
    for (int j = i; j < a.n(); ++j) q.set(i, j, QSqrt2(a(i, j)));
  return q;
}

inline Monomial mono(std::initializer_list<int> e) { return Monomial(e); }

}  // namespace coposlab::test
