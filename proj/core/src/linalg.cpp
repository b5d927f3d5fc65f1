#include "coposlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace coposlab {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_sym(const SymMatrixF& s) {
  Matrix m(s.n(), s.n());
  m.a_ = s.data();
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(c_, r_);
  for (int i = 0; i < r_; ++i)
    for (int j = 0; j < c_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

SymMatrixF Matrix::to_sym() const {
  if (r_ != c_) throw std::invalid_argument("to_sym needs a square matrix");
  SymMatrixF s(r_);
  for (int i = 0; i < r_; ++i)
    for (int j = i; j < r_; ++j) s.set(i, j, 0.5 * ((*this)(i, j) + (*this)(j, i)));
  return s;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product dimension mismatch");
  Matrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i);
    const double* ai = a.row(i);
    for (int k = 0; k < a.cols(); ++k) {
      double aik = ai[k];
      if (aik == 0.0) continue;
      const double* bk = b.row(k);
      for (int j = 0; j < b.cols(); ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix sum dimension mismatch");
  Matrix c = a;
  for (std::size_t k = 0; k < c.data().size(); ++k) c.data()[k] += b.data()[k];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix difference dimension mismatch");
  Matrix c = a;
  for (std::size_t k = 0; k < c.data().size(); ++k) c.data()[k] -= b.data()[k];
  return c;
}

std::vector<double> operator*(const Matrix& a, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != a.cols()) throw std::invalid_argument("matrix-vector dimension mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    const double* ai = a.row(i);
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j) s += ai[j] * x[j];
    y[i] = s;
  }
  return y;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (double x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (double x : a.data()) s += x * x;
  return std::sqrt(s);
}

namespace {

constexpr int kMaxSweeps = 100;

void jacobi(Matrix& a, Matrix* v) {
  const int n = a.rows();
  double total = 0.0;
  for (double x : a.data()) total += x * x;
  if (!std::isfinite(total)) throw EigenNonConvergence("sym_eigen: non-finite input");
  const double stop = 1e-30 * total;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= stop || off == 0.0) return;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p), aqq = a(q, q);
        if (sweep > 3 && std::abs(apq) < 1e-18 * (std::abs(app) + std::abs(aqq))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (aqq - app) / (2.0 * apq);
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p), arq = a(r, q);
          const double np = c * arp - s * arq;
          const double nq = s * arp + c * arq;
          a(r, p) = a(p, r) = np;
          a(r, q) = a(q, r) = nq;
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = a(q, p) = 0.0;
        if (v != nullptr) {
          for (int r = 0; r < n; ++r) {
            const double vrp = (*v)(r, p), vrq = (*v)(r, q);
            (*v)(r, p) = c * vrp - s * vrq;
            (*v)(r, q) = s * vrp + c * vrq;
          }
        }
      }
    }
  }
  throw EigenNonConvergence("sym_eigen: Jacobi sweep cap reached");
}

EigenResult sorted_result(const Matrix& a, const Matrix& v) {
  const int n = a.rows();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  EigenResult out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (int r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

}  // namespace

EigenResult sym_eigen(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("sym_eigen needs a square matrix");
  Matrix w = a;
  Matrix v = Matrix::identity(a.rows());
  jacobi(w, &v);
  return sorted_result(w, v);
}

EigenResult sym_eigen(const SymMatrixF& a) { return sym_eigen(Matrix::from_sym(a)); }

std::vector<double> sym_eigenvalues(const Matrix& a) {
  Matrix w = a;
  jacobi(w, nullptr);
  std::vector<double> ev(a.rows());
  for (int i = 0; i < a.rows(); ++i) ev[i] = w(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

Matrix CholeskyFactor::factor() const {
  const int n = L.rows();
  Matrix f(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f(perm[i], j) = L(i, j);
  return f;
}

namespace {

// Maps a vector w on the trailing (Schur) coordinates k..n-1 back to the
// original coordinates so that v^T A v = w^T S w. l holds the first k
// columns of the factor in permuted order.
template <typename T, typename Get>
std::vector<T> lift_schur_vector(int n, int k, const std::vector<int>& perm, Get l_at, const std::vector<T>& w) {
  std::vector<T> vp(n, T(0));
  for (int i = k; i < n; ++i) vp[i] = w[i - k];
  // Solve L11^T x = -L21^T w, back substitution on the upper triangle.
  for (int i = k - 1; i >= 0; --i) {
    T s(0);
    for (int r = k; r < n; ++r) s += l_at(r, i) * vp[r];
    for (int r = i + 1; r < k; ++r) s += l_at(r, i) * vp[r];
    vp[i] = -s / l_at(i, i);
  }
  std::vector<T> v(n, T(0));
  for (int i = 0; i < n; ++i) v[perm[i]] = vp[i];
  return v;
}

double quad_form(const SymMatrixF& a, const std::vector<double>& v) {
  double s = 0.0;
  for (int i = 0; i < a.n(); ++i)
    for (int j = 0; j < a.n(); ++j) s += v[i] * a(i, j) * v[j];
  return s;
}

}  // namespace

PsdCertificate psd_certificate(const SymMatrixF& a, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("psd_certificate: tol must be positive");
  const int n = a.n();
  Matrix s = Matrix::from_sym(a);  // permuted working copy, Schur block in [k, n)
  Matrix l(n, n);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  auto swap_index = [&](int i, int j) {
    if (i == j) return;
    std::swap(perm[i], perm[j]);
    for (int c = 0; c < n; ++c) std::swap(s(i, c), s(j, c));
    for (int r = 0; r < n; ++r) std::swap(s(r, i), s(r, j));
    for (int c = 0; c < n; ++c) std::swap(l(i, c), l(j, c));
  };
  auto refute = [&](int k, const std::vector<double>& w) -> PsdCertificate {
    auto l_at = [&](int r, int c) { return l(r, c); };
    std::vector<double> v = lift_schur_vector<double>(n, k, perm, l_at, w);
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    for (double& x : v) x /= m;
    NegVector neg{v, quad_form(a, v)};
    return neg;
  };

  for (int k = 0; k < n; ++k) {
    double big = 0.0;
    int piv = k;
    for (int i = k; i < n; ++i) {
      for (int j = k; j < n; ++j) big = std::max(big, std::abs(s(i, j)));
      if (s(i, i) > s(piv, piv)) piv = i;
    }
    if (big <= tol) {
      return CholeskyFactor{l, perm, k};
    }
    // Most negative diagonal or 2x2 principal minor of the Schur block.
    double worst = -tol;
    std::vector<double> w;
    for (int i = k; i < n; ++i) {
      if (s(i, i) < worst) {
        worst = s(i, i);
        w.assign(n - k, 0.0);
        w[i - k] = 1.0;
      }
    }
    for (int i = k; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double p = s(i, i), q = s(j, j), b = s(i, j);
        const double mid = 0.5 * (p + q);
        const double rad = std::hypot(0.5 * (p - q), b);
        const double lam = mid - rad;
        if (lam < worst) {
          worst = lam;
          // Eigenvector of [[p,b],[b,q]] for lam.
          double x = b, y = lam - p;
          if (std::abs(x) + std::abs(y) < 1e-300) {
            x = lam - q;
            y = b;
          }
          w.assign(n - k, 0.0);
          w[i - k] = x;
          w[j - k] = y;
        }
      }
    }
    if (!w.empty()) return refute(k, w);

    swap_index(k, piv);
    const double d = s(k, k);
    const double root = std::sqrt(d);
    l(k, k) = root;
    for (int i = k + 1; i < n; ++i) l(i, k) = s(i, k) / root;
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) s(i, j) -= l(i, k) * l(j, k);
    for (int i = k; i < n; ++i) s(i, k) = s(k, i) = 0.0;
  }
  return CholeskyFactor{l, perm, n};
}

ExactPsdResult exact_ldl_psd(const SymMatrixQ& a) {
  const int n = a.n();
  std::vector<QSqrt2> s(a.data());
  auto S = [&](int i, int j) -> QSqrt2& { return s[static_cast<std::size_t>(i) * n + j]; };
  std::vector<QSqrt2> l(static_cast<std::size_t>(n) * n, QSqrt2(0));
  auto L = [&](int i, int j) -> QSqrt2& { return l[static_cast<std::size_t>(i) * n + j]; };
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  PivotList out;

  auto swap_index = [&](int i, int j) {
    if (i == j) return;
    std::swap(perm[i], perm[j]);
    for (int c = 0; c < n; ++c) std::swap(S(i, c), S(j, c));
    for (int r = 0; r < n; ++r) std::swap(S(r, i), S(r, j));
    for (int c = 0; c < n; ++c) std::swap(L(i, c), L(j, c));
  };
  auto refute = [&](int k, const std::vector<QSqrt2>& w) -> ExactPsdResult {
    auto l_at = [&](int r, int c) { return r == c ? QSqrt2(1) : L(r, c); };
    std::vector<QSqrt2> v = lift_schur_vector<QSqrt2>(n, k, perm, l_at, w);
    QSqrt2 val(0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) val += v[i] * a(i, j) * v[j];
    return Refutation{v, val};
  };

  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (S(i, i) > S(piv, piv)) piv = i;
    const int sign = S(piv, piv).sign();
    if (sign < 0) {
      std::vector<QSqrt2> w(n - k, QSqrt2(0));
      w[piv - k] = QSqrt2(1);
      return refute(k, w);
    }
    if (sign == 0) {
      // All remaining diagonals are zero; any nonzero entry refutes.
      for (int i = k; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (!S(i, j).is_zero()) {
            std::vector<QSqrt2> w(n - k, QSqrt2(0));
            w[i - k] = QSqrt2(1);
            w[j - k] = QSqrt2(S(i, j).sign() > 0 ? -1 : 1);
            return refute(k, w);
          }
        }
      }
      return out;
    }
    swap_index(k, piv);
    const QSqrt2 d = S(k, k);
    out.pivots.push_back(perm[k]);
    out.d.push_back(d);
    for (int i = k + 1; i < n; ++i) L(i, k) = S(i, k) / d;
    for (int i = k + 1; i < n; ++i) {
      if (L(i, k).is_zero()) continue;
      for (int j = k + 1; j < n; ++j) S(i, j) -= L(i, k) * S(k, j);
    }
    for (int i = k; i < n; ++i) S(i, k) = S(k, i) = QSqrt2(0);
  }
  return out;
}

bool cholesky_inplace(Matrix& a) {
  const int n = a.rows();
  for (int j = 0; j < n; ++j) {
    double* aj = a.row(j);
    double d = aj[j];
    for (int k = 0; k < j; ++k) d -= aj[k] * aj[k];
    if (!(d > 0.0)) return false;
    const double root = std::sqrt(d);
    aj[j] = root;
    for (int i = j + 1; i < n; ++i) {
      double* ai = a.row(i);
      double s = ai[j];
      for (int k = 0; k < j; ++k) s -= ai[k] * aj[k];
      ai[j] = s / root;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) a(i, j) = 0.0;
  return true;
}

void cholesky_solve(const Matrix& l, std::vector<double>& b) {
  const int n = l.rows();
  for (int i = 0; i < n; ++i) {
    const double* li = l.row(i);
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= li[k] * b[k];
    b[i] = s / li[i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= l(k, i) * b[k];
    b[i] = s / l(i, i);
  }
}

bool lu_factor(Matrix a, LuFactor& out) {
  const int n = a.rows();
  out.piv.resize(n);
  for (int k = 0; k < n; ++k) {
    int p = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        p = i;
      }
    }
    out.piv[k] = p;
    if (best == 0.0) return false;
    if (p != k)
      for (int c = 0; c < n; ++c) std::swap(a(k, c), a(p, c));
    const double inv = 1.0 / a(k, k);
    const double* ak = a.row(k);
    for (int i = k + 1; i < n; ++i) {
      double* ai = a.row(i);
      const double f = ai[k] * inv;
      ai[k] = f;
      if (f == 0.0) continue;
      for (int c = k + 1; c < n; ++c) ai[c] -= f * ak[c];
    }
  }
  out.lu = std::move(a);
  return true;
}

void lu_solve(const LuFactor& f, std::vector<double>& b) {
  const int n = f.lu.rows();
  for (int k = 0; k < n; ++k) std::swap(b[k], b[f.piv[k]]);
  for (int i = 0; i < n; ++i) {
    const double* li = f.lu.row(i);
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= li[k] * b[k];
    b[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    const double* ui = f.lu.row(i);
    double s = b[i];
    for (int k = i + 1; k < n; ++k) s -= ui[k] * b[k];
    b[i] = s / ui[i];
  }
}

std::vector<int> independent_rows_by_gram(const Matrix& gram, double rel_tol) {
  const int n = gram.rows();
  Matrix s = gram;
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, s(i, i));
  std::vector<int> chosen;
  if (scale <= 0.0) return chosen;
  std::vector<bool> used(n, false);
  Matrix l(n, n);
  for (int k = 0; k < n; ++k) {
    int piv = -1;
    double best = rel_tol * scale;
    for (int i = 0; i < n; ++i) {
      if (!used[i] && s(i, i) > best) {
        best = s(i, i);
        piv = i;
      }
    }
    if (piv < 0) break;
    used[piv] = true;
    chosen.push_back(piv);
    const double root = std::sqrt(s(piv, piv));
    std::vector<double> col(n, 0.0);
    for (int i = 0; i < n; ++i)
      if (!used[i]) col[i] = s(i, piv) / root;
    for (int i = 0; i < n; ++i) {
      if (used[i] || col[i] == 0.0) continue;
      for (int j = 0; j < n; ++j)
        if (!used[j]) s(i, j) -= col[i] * col[j];
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace coposlab
