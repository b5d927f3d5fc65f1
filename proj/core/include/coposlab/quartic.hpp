#pragma once

#include <vector>

#include "coposlab/linalg.hpp"
#include "coposlab/matrix_json.hpp"
#include "coposlab/sos.hpp"

namespace coposlab {

// f(x) = sum_ij a_ij x_i^2 x_j^2 with a symmetric. The coefficient of the
// monomial x_i^2 x_j^2 (i != j) is therefore 2 a_ij.
struct EvenQuartic {
  SymMatrixR a;
  int n() const { return a.n(); }
  friend bool operator==(const EvenQuartic& x, const EvenQuartic& y) { return x.a == y.a; }
};

// Floating mirror used on the sampling paths.
struct EvenQuarticF {
  SymMatrixF a;
  int n() const { return a.n(); }
};

// Degree-4 form in n variables, keyed by exponent vector.
class GeneralQuartic {
 public:
  explicit GeneralQuartic(int n);
  int n() const { return n_; }
  // Adds c to the coefficient of m; zero coefficients are dropped.
  void add(const Monomial& m, const Rational& c);
  Rational coeff(const Monomial& m) const;
  const Poly<Rational>& terms() const { return terms_; }

 private:
  int n_;
  Poly<Rational> terms_;
};

EvenQuartic quartic_of_matrix(const SymMatrixR& a);
// Throws std::invalid_argument when an entry has a nonzero sqrt(2) part.
EvenQuartic quartic_of_matrix(const SymMatrixQ& a);
EvenQuarticF quartic_of_matrix(const SymMatrixF& a);
SymMatrixR matrix_of_quartic(const EvenQuartic& f);

EvenQuartic to_exact(const EvenQuarticF& f);
EvenQuarticF to_float(const EvenQuartic& f);

// (x_1^2 + ... + x_n^2)^2.
EvenQuartic r_squared(int n);
// (n(n+2)/3) x_i^4 - r^2 and n(n+2) x_i^2 x_j^2 - r^2: the vertices of the NN section.
EvenQuartic nn_vertex(int n, int i, int j);

Rational eval(const EvenQuartic& f, const std::vector<Rational>& x);
double eval(const EvenQuarticF& f, const std::vector<double>& x);

GeneralQuartic to_general(const EvenQuartic& f);
// (v . x)^4 expanded.
GeneralQuartic linear_form_power(const std::vector<Rational>& v);

// Integral of x^alpha over the unit sphere against the normalized measure.
// Zero when some exponent is odd.
Rational sphere_moment(const Monomial& alpha);

Rational l2_inner(const GeneralQuartic& f, const GeneralQuartic& g);
Rational l2_inner(const EvenQuartic& f, const EvenQuartic& g);
double l2_inner(const EvenQuarticF& f, const EvenQuarticF& g);
// Integral of f over the sphere.
Rational sphere_average(const EvenQuartic& f);

// Apolar pairing sum_alpha f_alpha g_alpha alpha!.
Rational diff_inner(const GeneralQuartic& f, const GeneralQuartic& g);
// Closed form on even quartics: 24 sum_k a_kk b_kk + 16 sum_{k<l} a_kl b_kl.
Rational diff_inner(const EvenQuartic& f, const EvenQuartic& g);
double diff_inner(const EvenQuarticF& f, const EvenQuarticF& g);

EvenQuartic project_pr_Q(const GeneralQuartic& f);

// f = c0 r^2 + r * (x^T h2 x) + h4. For even f the quadratic part is diagonal.
struct HarmonicParts {
  Rational c0;
  SymMatrixR h2;  // traceless
  EvenQuartic h4;  // harmonic
};

HarmonicParts harmonic_decompose(const EvenQuartic& f);
EvenQuartic reconstruct(const HarmonicParts& h);

// T f = integral of f(v) pr_Q((v . x)^4) over the sphere.
EvenQuartic apply_T(const EvenQuartic& f);

struct SubspaceFlags {
  bool in_L = false;   // sphere average 1
  bool in_M = false;   // sphere average 0
  bool in_H4 = false;  // harmonic
};

SubspaceFlags classify_subspaces(const EvenQuartic& f);

// Orthonormal basis (l2 inner product) of the average-zero even quartics,
// n(n+1)/2 - 1 elements.
std::vector<EvenQuarticF> basis_M(int n);

EvenQuartic v4_project(const std::vector<Rational>& v);
EvenQuarticF v4_project(const std::vector<double>& v);

// pr_Q(f(O x)). O must be orthogonal: exactly for the Rational overload,
// within 1e-12 for the float one. Throws std::invalid_argument otherwise.
EvenQuartic group_action(const std::vector<std::vector<Rational>>& o, const EvenQuartic& f);
EvenQuarticF group_action(const Matrix& o, const EvenQuarticF& f);

Json to_json(const EvenQuartic& f);
EvenQuartic even_quartic_from_json(const Json& j);

}  // namespace coposlab
