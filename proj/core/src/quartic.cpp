#include "coposlab/quartic.hpp"

#include <cmath>
#include <stdexcept>

namespace coposlab {

namespace {

void check_same_n(int a, int b) {
  if (a != b) throw std::invalid_argument("quartic dimension mismatch");
}

Monomial exponent(int n, int i, int j, int k, int l) {
  Monomial m(n, 0);
  ++m[i];
  ++m[j];
  ++m[k];
  ++m[l];
  return m;
}

Integer factorial(int k) {
  Integer f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// sum_i (3 a_ii + sum_{j != i} a_ij) per row; n(n+2) times the sphere average
// when summed.
std::vector<Rational> row_sums(const SymMatrixR& a) {
  const int n = a.n();
  std::vector<Rational> s(n);
  for (int i = 0; i < n; ++i) {
    Rational t = 3 * a(i, i);
    for (int j = 0; j < n; ++j)
      if (j != i) t += a(i, j);
    s[i] = t;
  }
  return s;
}

// Moment of x_i^2 x_j^2 x_k^2 x_l^2 for the float paths.
double moment8(int n, int i, int j, int k, int l) {
  int idx[4] = {i, j, k, l};
  double num = 1.0;
  for (int p = 0; p < 4; ++p) {
    bool first = true;
    for (int q = 0; q < p; ++q)
      if (idx[q] == idx[p]) first = false;
    if (!first) continue;
    int beta = 0;
    for (int q = 0; q < 4; ++q)
      if (idx[q] == idx[p]) ++beta;
    for (int t = 2 * beta - 1; t > 1; t -= 2) num *= t;
  }
  double den = 1.0;
  for (int t = 0; t < 4; ++t) den *= n + 2 * t;
  return num / den;
}

}  // namespace

GeneralQuartic::GeneralQuartic(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("GeneralQuartic needs n >= 1");
}

void GeneralQuartic::add(const Monomial& m, const Rational& c) {
  if (static_cast<int>(m.size()) != n_ || degree(m) != 4) throw std::invalid_argument("monomial is not a degree-4 monomial in n variables");
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second += c;
  if (it->second == 0) terms_.erase(it);
}

Rational GeneralQuartic::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

EvenQuartic quartic_of_matrix(const SymMatrixR& a) { return EvenQuartic{a}; }

EvenQuartic quartic_of_matrix(const SymMatrixQ& a) {
  SymMatrixR r(a.n());
  for (int i = 0; i < a.n(); ++i)
    for (int j = i; j < a.n(); ++j) {
      if (a(i, j).irr() != 0) throw std::invalid_argument("entry has a sqrt(2) part; even quartics are rational here");
      r.set(i, j, a(i, j).rat());
    }
  return EvenQuartic{r};
}

EvenQuarticF quartic_of_matrix(const SymMatrixF& a) { return EvenQuarticF{a}; }

SymMatrixR matrix_of_quartic(const EvenQuartic& f) { return f.a; }

EvenQuartic to_exact(const EvenQuarticF& f) {
  SymMatrixR r(f.n());
  for (int i = 0; i < f.n(); ++i)
    for (int j = i; j < f.n(); ++j) r.set(i, j, rational_from_double(f.a(i, j)));
  return EvenQuartic{r};
}

EvenQuarticF to_float(const EvenQuartic& f) {
  SymMatrixF r(f.n());
  for (int i = 0; i < f.n(); ++i)
    for (int j = i; j < f.n(); ++j) r.set(i, j, to_double(f.a(i, j)));
  return EvenQuarticF{r};
}

EvenQuartic r_squared(int n) { return EvenQuartic{SymMatrixR::ones(n)}; }

EvenQuartic nn_vertex(int n, int i, int j) {
  if (i < 0 || j < 0 || i >= n || j >= n) throw std::out_of_range("nn_vertex index out of range");
  EvenQuartic f{SymMatrixR(n)};
  const Rational scale = make_rational(n * (n + 2), i == j ? 3 : 2);
  f.a.set(i, j, scale);
  f.a -= SymMatrixR::ones(n);
  return f;
}

Rational eval(const EvenQuartic& f, const std::vector<Rational>& x) {
  check_same_n(f.n(), static_cast<int>(x.size()));
  Rational s = 0;
  for (int i = 0; i < f.n(); ++i)
    for (int j = 0; j < f.n(); ++j) s += f.a(i, j) * x[i] * x[i] * x[j] * x[j];
  return s;
}

double eval(const EvenQuarticF& f, const std::vector<double>& x) {
  check_same_n(f.n(), static_cast<int>(x.size()));
  double s = 0;
  for (int i = 0; i < f.n(); ++i)
    for (int j = 0; j < f.n(); ++j) s += f.a(i, j) * x[i] * x[i] * x[j] * x[j];
  return s;
}

GeneralQuartic to_general(const EvenQuartic& f) {
  const int n = f.n();
  GeneralQuartic g(n);
  for (int i = 0; i < n; ++i) {
    g.add(exponent(n, i, i, i, i), f.a(i, i));
    for (int j = i + 1; j < n; ++j) g.add(exponent(n, i, i, j, j), 2 * f.a(i, j));
  }
  return g;
}

GeneralQuartic linear_form_power(const std::vector<Rational>& v) {
  const int n = static_cast<int>(v.size());
  GeneralQuartic g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) g.add(exponent(n, i, j, k, l), v[i] * v[j] * v[k] * v[l]);
  return g;
}

Rational sphere_moment(const Monomial& alpha) {
  const int n = static_cast<int>(alpha.size());
  if (n < 1) throw std::invalid_argument("sphere_moment needs at least one variable");
  Integer num = 1;
  int b = 0;
  for (int e : alpha) {
    if (e < 0) throw std::invalid_argument("negative exponent");
    if (e % 2) return 0;
    for (int t = e - 1; t > 1; t -= 2) num *= t;
    b += e / 2;
  }
  Integer den = 1;
  for (int j = 0; j < b; ++j) den *= n + 2 * j;
  return make_rational(num, den);
}

Rational l2_inner(const GeneralQuartic& f, const GeneralQuartic& g) {
  check_same_n(f.n(), g.n());
  Rational s = 0;
  for (const auto& [a, fa] : f.terms())
    for (const auto& [b, gb] : g.terms()) s += fa * gb * sphere_moment(a + b);
  return s;
}

Rational l2_inner(const EvenQuartic& f, const EvenQuartic& g) { return l2_inner(to_general(f), to_general(g)); }

double l2_inner(const EvenQuarticF& f, const EvenQuarticF& g) {
  check_same_n(f.n(), g.n());
  const int n = f.n();
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (f.a(i, j) == 0.0) continue;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += f.a(i, j) * g.a(k, l) * moment8(n, i, j, k, l);
    }
  return s;
}

Rational sphere_average(const EvenQuartic& f) {
  Rational s = 0;
  for (const auto& t : row_sums(f.a)) s += t;
  return s / (f.n() * (f.n() + 2));
}

Rational diff_inner(const GeneralQuartic& f, const GeneralQuartic& g) {
  check_same_n(f.n(), g.n());
  Rational s = 0;
  for (const auto& [a, fa] : f.terms()) {
    const Rational gb = g.coeff(a);
    if (gb == 0) continue;
    Integer w = 1;
    for (int e : a) w *= factorial(e);
    s += fa * gb * Rational(w);
  }
  return s;
}

Rational diff_inner(const EvenQuartic& f, const EvenQuartic& g) {
  check_same_n(f.n(), g.n());
  Rational s = 0;
  for (int k = 0; k < f.n(); ++k) {
    s += 24 * f.a(k, k) * g.a(k, k);
    for (int l = k + 1; l < f.n(); ++l) s += 16 * f.a(k, l) * g.a(k, l);
  }
  return s;
}

double diff_inner(const EvenQuarticF& f, const EvenQuarticF& g) {
  check_same_n(f.n(), g.n());
  double s = 0;
  for (int k = 0; k < f.n(); ++k) {
    s += 24 * f.a(k, k) * g.a(k, k);
    for (int l = k + 1; l < f.n(); ++l) s += 16 * f.a(k, l) * g.a(k, l);
  }
  return s;
}

EvenQuartic project_pr_Q(const GeneralQuartic& f) {
  const int n = f.n();
  EvenQuartic q{SymMatrixR(n)};
  for (int i = 0; i < n; ++i) {
    q.a.set(i, i, f.coeff(exponent(n, i, i, i, i)));
    for (int j = i + 1; j < n; ++j) q.a.set(i, j, f.coeff(exponent(n, i, i, j, j)) / 2);
  }
  return q;
}

// With g = c0 r^2 + r (sum_i d_i x_i^2), the harmonic condition on f - g
// reads s_i(f) = (n+2) c0 + (n+4) d_i / 2 for every row, which pins c0 by
// summation and then each d_i.
HarmonicParts harmonic_decompose(const EvenQuartic& f) {
  const int n = f.n();
  const std::vector<Rational> s = row_sums(f.a);
  Rational total = 0;
  for (const auto& t : s) total += t;
  HarmonicParts h{total / (n * (n + 2)), SymMatrixR(n), EvenQuartic{f.a}};
  for (int i = 0; i < n; ++i) h.h2.set(i, i, 2 * (s[i] - (n + 2) * h.c0) / (n + 4));
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) h.h4.a.add(i, k, -(h.c0 + (h.h2(i, i) + h.h2(k, k)) / 2));
  return h;
}

EvenQuartic reconstruct(const HarmonicParts& h) {
  const int n = h.h4.n();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (h.h2(i, j) != 0) throw std::invalid_argument("off-diagonal quadratic part leaves the even quartics");
  EvenQuartic f{h.h4.a};
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) f.a.add(i, k, h.c0 + (h.h2(i, i) + h.h2(k, k)) / 2);
  return f;
}

EvenQuartic apply_T(const EvenQuartic& f) {
  const int n = f.n();
  const HarmonicParts h = harmonic_decompose(f);
  const Rational w1 = make_rational(4, n + 4), w2 = make_rational(8, (n + 4) * (n + 6)), scale = make_rational(3, n * (n + 2));
  EvenQuartic t{SymMatrixR(n)};
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k)
      t.a.set(i, k, scale * (h.c0 + w1 * (h.h2(i, i) + h.h2(k, k)) / 2 + w2 * h.h4.a(i, k)));
  return t;
}

SubspaceFlags classify_subspaces(const EvenQuartic& f) {
  const int n = f.n();
  const std::vector<Rational> s = row_sums(f.a);
  Rational total = 0;
  bool harmonic = true;
  for (const auto& t : s) {
    total += t;
    if (t != 0) harmonic = false;
  }
  return SubspaceFlags{total == n * (n + 2), total == 0, harmonic};
}

std::vector<EvenQuarticF> basis_M(int n) {
  if (n < 2) throw std::invalid_argument("basis_M needs n >= 2");
  const EvenQuarticF r2{SymMatrixF::ones(n)};
  std::vector<EvenQuarticF> candidates;
  for (int i = 0; i < n; ++i) {
    EvenQuarticF m{SymMatrixF(n)};
    m.a.set(i, i, 1.0);
    candidates.push_back(m);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      EvenQuarticF m{SymMatrixF(n)};
      m.a.set(i, j, 0.5);
      candidates.push_back(m);
    }
  std::vector<EvenQuarticF> basis;
  const std::size_t dim = candidates.size() - 1;
  for (auto m : candidates) {
    // r^2 has unit norm, so removing it first lands every candidate in M.
    const double orig = std::sqrt(l2_inner(m, m));
    m.a -= l2_inner(m, r2) * r2.a;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) m.a -= l2_inner(m, b) * b.a;
    const double norm = std::sqrt(l2_inner(m, m));
    if (norm <= 1e-8 * orig) continue;
    m.a *= 1.0 / norm;
    basis.push_back(m);
    if (basis.size() == dim) break;
  }
  if (basis.size() != dim) throw std::logic_error("basis_M: Gram-Schmidt lost rank");
  return basis;
}

EvenQuartic v4_project(const std::vector<Rational>& v) {
  const int n = static_cast<int>(v.size());
  EvenQuartic f{SymMatrixR(n)};
  for (int i = 0; i < n; ++i) {
    const Rational vi2 = v[i] * v[i];
    f.a.set(i, i, vi2 * vi2);
    for (int j = i + 1; j < n; ++j) f.a.set(i, j, 3 * vi2 * v[j] * v[j]);
  }
  return f;
}

EvenQuarticF v4_project(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  EvenQuarticF f{SymMatrixF(n)};
  for (int i = 0; i < n; ++i) {
    const double vi2 = v[i] * v[i];
    f.a.set(i, i, vi2 * vi2);
    for (int j = i + 1; j < n; ++j) f.a.set(i, j, 3 * vi2 * v[j] * v[j]);
  }
  return f;
}

namespace {

// Expanding (Ox)_i^2 (Ox)_j^2 and keeping x_k^2 x_l^2 gives
//   b_kk = sum_ij a_ij O_ik^2 O_jk^2,
//   b_kl = sum_ij a_ij (O_ik^2 O_jl^2 + 2 O_ik O_il O_jk O_jl).
template <typename T, typename Get, typename Mat>
Mat act(int n, const Mat& a, Get o) {
  auto form = [&](const std::vector<T>& u, const std::vector<T>& w) {
    T s(0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s += a(i, j) * u[i] * w[j];
    return s;
  };
  std::vector<std::vector<T>> sq(n, std::vector<T>(n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i) sq[k][i] = o(i, k) * o(i, k);
  Mat b(n);
  for (int k = 0; k < n; ++k) {
    b.set(k, k, form(sq[k], sq[k]));
    for (int l = k + 1; l < n; ++l) {
      std::vector<T> cross(n);
      for (int i = 0; i < n; ++i) cross[i] = o(i, k) * o(i, l);
      b.set(k, l, form(sq[k], sq[l]) + 2 * form(cross, cross));
    }
  }
  return b;
}

}  // namespace

EvenQuartic group_action(const std::vector<std::vector<Rational>>& o, const EvenQuartic& f) {
  const int n = f.n();
  if (static_cast<int>(o.size()) != n) throw std::invalid_argument("group_action: O has the wrong size");
  for (const auto& row : o)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("group_action: O has the wrong size");
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      Rational s = 0;
      for (int i = 0; i < n; ++i) s += o[i][p] * o[i][q];
      if (s != (p == q ? 1 : 0)) throw std::invalid_argument("group_action: O is not orthogonal");
    }
  auto get = [&](int i, int k) -> const Rational& { return o[i][k]; };
  return EvenQuartic{act<Rational>(n, f.a, get)};
}

EvenQuarticF group_action(const Matrix& o, const EvenQuarticF& f) {
  const int n = f.n();
  if (o.rows() != n || o.cols() != n) throw std::invalid_argument("group_action: O has the wrong size");
  if (max_abs(o.transpose() * o - Matrix::identity(n)) > 1e-12) throw std::invalid_argument("group_action: O is not orthogonal");
  auto get = [&](int i, int k) { return o(i, k); };
  return EvenQuarticF{act<double>(n, f.a, get)};
}

Json to_json(const EvenQuartic& f) {
  SymMatrixQ q(f.n());
  for (int i = 0; i < f.n(); ++i)
    for (int j = i; j < f.n(); ++j) q.set(i, j, QSqrt2(f.a(i, j)));
  Json j = matrix_to_json(q);
  j["kind"] = "even-quartic";
  return j;
}

EvenQuartic even_quartic_from_json(const Json& j) {
  if (j.is_object() && j.contains("kind") && j["kind"] != "even-quartic")
    throw MatrixFormatError("kind: expected \"even-quartic\"");
  const AnyMatrix m = matrix_from_json(j);
  if (const auto* q = std::get_if<SymMatrixQ>(&m)) return quartic_of_matrix(*q);
  return to_exact(quartic_of_matrix(std::get<SymMatrixF>(m)));
}

}  // namespace coposlab
