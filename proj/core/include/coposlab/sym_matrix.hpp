#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "coposlab/qsqrt2.hpp"

namespace coposlab {

enum class Flavor { Float, Exact };

template <typename T>
struct FlavorOf;
template <>
struct FlavorOf<double> {
  static constexpr Flavor value = Flavor::Float;
};
template <>
struct FlavorOf<Rational> {
  static constexpr Flavor value = Flavor::Exact;
};
template <>
struct FlavorOf<QSqrt2> {
  static constexpr Flavor value = Flavor::Exact;
};

// Dense symmetric matrix. Writes go through set(), which keeps both
// triangles equal, so the symmetry invariant cannot be broken.
template <typename T>
class SymMatrix {
 public:
  static constexpr Flavor flavor = FlavorOf<T>::value;

  SymMatrix() = default;
  explicit SymMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, T(0)) {
    if (n < 1) throw std::invalid_argument("SymMatrix dimension must be at least 1");
  }

  static SymMatrix identity(int n) {
    SymMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, T(1));
    return m;
  }
  static SymMatrix ones(int n) {
    SymMatrix m(n);
    for (auto& x : m.a_) x = T(1);
    return m;
  }

  int n() const { return n_; }
  const T& operator()(int i, int j) const { return a_[idx(i, j)]; }
  void set(int i, int j, const T& v) {
    a_[idx(i, j)] = v;
    a_[idx(j, i)] = v;
  }
  void add(int i, int j, const T& v) {
    a_[idx(i, j)] += v;
    if (i != j) a_[idx(j, i)] += v;
  }

  SymMatrix& operator+=(const SymMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
    return *this;
  }
  SymMatrix& operator-=(const SymMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
    return *this;
  }
  SymMatrix& operator*=(const T& s) {
    for (auto& x : a_) x *= s;
    return *this;
  }
  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
  friend SymMatrix operator*(const T& s, SymMatrix a) { return a *= s; }

  friend bool operator==(const SymMatrix& a, const SymMatrix& b) { return a.n_ == b.n_ && a.a_ == b.a_; }

  T trace() const {
    T t(0);
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  // Principal submatrix on the leading k indices.
  SymMatrix leading(int k) const {
    if (k < 1 || k > n_) throw std::out_of_range("leading block size out of range");
    SymMatrix m(k);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) m.set(i, j, (*this)(i, j));
    return m;
  }

  // Row-major n*n storage.
  const std::vector<T>& data() const { return a_; }

 private:
  std::size_t idx(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) throw std::out_of_range("SymMatrix index out of range");
    return static_cast<std::size_t>(i) * n_ + j;
  }
  void check_same(const SymMatrix& o) const {
    if (o.n_ != n_) throw std::invalid_argument("SymMatrix dimension mismatch");
  }

  int n_ = 0;
  std::vector<T> a_;
};

using SymMatrixF = SymMatrix<double>;
using SymMatrixQ = SymMatrix<QSqrt2>;
using SymMatrixR = SymMatrix<Rational>;

SymMatrixF to_float(const SymMatrixQ& a);

// Exact lift of a float matrix (binary-exact rationals).
SymMatrixQ to_exact(const SymMatrixF& a);

// Tr(AB) = sum_ij A_ij B_ij.
double frobenius(const SymMatrixF& a, const SymMatrixF& b);
QSqrt2 frobenius(const SymMatrixQ& a, const SymMatrixQ& b);

}  // namespace coposlab
