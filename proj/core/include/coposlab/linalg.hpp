#pragma once

#include <cstddef>
#include <stdexcept>
#include <variant>
#include <vector>

#include "coposlab/sym_matrix.hpp"

namespace coposlab {

// Row-major dense real matrix used by the numerical kernels.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, double fill = 0.0)
      : r_(rows), c_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}

  static Matrix identity(int n);
  static Matrix from_sym(const SymMatrixF& s);

  int rows() const { return r_; }
  int cols() const { return c_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * c_ + j]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * c_ + j]; }
  double* row(int i) { return a_.data() + static_cast<std::size_t>(i) * c_; }
  const double* row(int i) const { return a_.data() + static_cast<std::size_t>(i) * c_; }
  std::vector<double>& data() { return a_; }
  const std::vector<double>& data() const { return a_; }

  Matrix transpose() const;
  SymMatrixF to_sym() const;  // symmetrizes (A + A^T)/2

 private:
  int r_ = 0, c_ = 0;
  std::vector<double> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
std::vector<double> operator*(const Matrix& a, const std::vector<double>& x);

double max_abs(const Matrix& a);
double frobenius_norm(const Matrix& a);

class EigenNonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EigenResult {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k pairs with values[k]
};

// Cyclic Jacobi. Throws EigenNonConvergence after the sweep cap.
EigenResult sym_eigen(const SymMatrixF& a);
EigenResult sym_eigen(const Matrix& a);
std::vector<double> sym_eigenvalues(const Matrix& a);

// Pivoted factorization A[perm, perm] = L L^T with L lower triangular
// (columns past `rank` are zero).
struct CholeskyFactor {
  Matrix L;
  std::vector<int> perm;
  int rank = 0;

  // F with A = F F^T in the original ordering (F = P^T L).
  Matrix factor() const;
};

struct NegVector {
  std::vector<double> v;  // max-abs normalized
  double value = 0.0;     // v^T A v
};

using PsdCertificate = std::variant<CholeskyFactor, NegVector>;

// Success when ||A - F F^T||_inf <= tol, refutation when v^T A v < -tol.
PsdCertificate psd_certificate(const SymMatrixF& a, double tol);

struct PivotList {
  std::vector<int> pivots;  // original indices, in elimination order
  std::vector<QSqrt2> d;    // positive pivots
};

struct Refutation {
  std::vector<QSqrt2> v;
  QSqrt2 value;  // v^T A v, exactly negative
};

using ExactPsdResult = std::variant<PivotList, Refutation>;

// Exact symmetric-pivoted LDL^T over Q(sqrt 2); decides PSD exactly.
ExactPsdResult exact_ldl_psd(const SymMatrixQ& a);

// In-place lower Cholesky. Returns false if a pivot is not positive.
bool cholesky_inplace(Matrix& a);
// Solves (L L^T) x = b for a factor produced by cholesky_inplace.
void cholesky_solve(const Matrix& l, std::vector<double>& b);

// LU with partial pivoting. Returns false on an exactly singular pivot.
struct LuFactor {
  Matrix lu;
  std::vector<int> piv;
};
bool lu_factor(Matrix a, LuFactor& out);
void lu_solve(const LuFactor& f, std::vector<double>& b);

// Pivoted Cholesky of a PSD Gram matrix; pivots below rel_tol * max diag
// are treated as dependent. Returns the selected (independent) indices.
std::vector<int> independent_rows_by_gram(const Matrix& gram, double rel_tol);

}  // namespace coposlab
