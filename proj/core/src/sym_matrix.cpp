#include "coposlab/sym_matrix.hpp"

#include "coposlab/rational.hpp"

namespace coposlab {

SymMatrixF to_float(const SymMatrixQ& a) {
  SymMatrixF f(a.n());
  for (int i = 0; i < a.n(); ++i)
    for (int j = i; j < a.n(); ++j) f.set(i, j, a(i, j).to_double());
  return f;
}

SymMatrixQ to_exact(const SymMatrixF& a) {
  SymMatrixQ q(a.n());
  for (int i = 0; i < a.n(); ++i)
    for (int j = i; j < a.n(); ++j) q.set(i, j, QSqrt2(rational_from_double(a(i, j))));
  return q;
}

double frobenius(const SymMatrixF& a, const SymMatrixF& b) {
  if (a.n() != b.n()) throw std::invalid_argument("frobenius: dimension mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < a.data().size(); ++k) s += a.data()[k] * b.data()[k];
  return s;
}

QSqrt2 frobenius(const SymMatrixQ& a, const SymMatrixQ& b) {
  if (a.n() != b.n()) throw std::invalid_argument("frobenius: dimension mismatch");
  QSqrt2 s(0);
  for (std::size_t k = 0; k < a.data().size(); ++k) s += a.data()[k] * b.data()[k];
  return s;
}

}  // namespace coposlab
