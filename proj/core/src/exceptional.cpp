#include "coposlab/exceptional.hpp"

#include <algorithm>
#include <stdexcept>

namespace coposlab {

namespace {

QSqrt2 times_sqrt2(const QSqrt2& x) { return x * QSqrt2::sqrt2(); }
double times_sqrt2(double x) { return std::sqrt(2.0) * x; }

template <typename T>
SymMatrix<T> compress(const CosPolyT<T>& f, int n) {
  if (n < 1) throw std::invalid_argument("compression_matrix needs n >= 1");
  if (f.a.empty()) throw std::invalid_argument("cosine series has no coefficients");
  SymMatrix<T> a(n);
  a.set(0, 0, f.coeff(0));
  for (int k = 1; k < n; ++k) a.set(0, k, times_sqrt2(f.coeff(k)));
  for (int j = 1; j < n; ++j)
    for (int k = j; k < n; ++k) a.set(j, k, f.coeff(k - j) + f.coeff(j + k));
  return a;
}

// Coefficient of B_pq (p <= q) in the integral of v^T B v cos(2 k pi x);
// an off-diagonal pair appears twice in the quadratic form.
Rational gram_weight(int p, int q, int k) { return (p == q ? 1 : 2) * triple_integral(p, q, k); }

const SymMatrixF& horn_float() {
  static const SymMatrixF h = to_float(horn_matrix());
  return h;
}

Json cos_json(const CosPolyF& f) { return Json(f.a); }

}  // namespace

CosPolyF to_float(const CosPoly& f) {
  CosPolyF g;
  for (const auto& x : f.a) g.a.push_back(x.to_double());
  return g;
}

double eval(const CosPolyF& f, double x) {
  double s = f.coeff(0);
  for (int k = 1; k <= f.m(); ++k) s += 2.0 * f.a[k] * std::cos(2.0 * k * M_PI * x);
  return s;
}

Rational triple_integral(int j, int k, int l) {
  if (j < 0 || k < 0 || l < 0) throw std::invalid_argument("triple_integral needs nonnegative frequencies");
  const int zeros = (j == 0) + (k == 0) + (l == 0);
  if (zeros == 3) return 1;
  if (zeros == 2) return 0;
  if (zeros == 1) {
    // cos(0) = 1 leaves the orthogonality integral of the other two.
    const int u = j == 0 ? k : j;
    const int v = l == 0 ? k : l;
    return u == v ? make_rational(1, 2) : Rational(0);
  }
  if (j == k + l || k == j + l || l == j + k) return make_rational(1, 4);
  return 0;
}

SymMatrixQ compression_matrix(const CosPoly& f, int n) { return compress(f, n); }
SymMatrixF compression_matrix(const CosPolyF& f, int n) { return compress(f, n); }

std::vector<QSqrt2> trig_gram_moments(const SymMatrixQ& b) {
  const int d = b.n();
  std::vector<QSqrt2> out(2 * d - 1, QSqrt2(0));
  for (int k = 0; k < 2 * d - 1; ++k)
    for (int p = 0; p < d; ++p)
      for (int q = p; q < d; ++q) {
        const Rational w = gram_weight(p, q, k);
        if (w != 0) out[k] += b(p, q) * QSqrt2(w);
      }
  return out;
}

std::vector<double> trig_gram_moments(const SymMatrixF& b) {
  const int d = b.n();
  std::vector<double> out(2 * d - 1, 0.0);
  for (int k = 0; k < 2 * d - 1; ++k)
    for (int p = 0; p < d; ++p)
      for (int q = p; q < d; ++q) out[k] += b(p, q) * to_double(gram_weight(p, q, k));
  return out;
}

QSqrt2 cos_moment(const CosPoly& f, int k) { return f.coeff(k); }

std::variant<TrigGram, InfeasibilityCert> trig_sos_check(const CosPolyF& f, int mprime, double tol) {
  if (f.a.empty()) throw std::invalid_argument("cosine series has no coefficients");
  if (mprime < 0 || mprime > f.m()) throw std::invalid_argument("trig_sos_check needs 0 <= m' <= m");
  const int d = mprime + 1;
  const int top = std::max(f.m(), 2 * mprime);
  SdpProblem p;
  p.add_psd_block(d);
  for (int k = 0; k <= top; ++k) {
    LinearFunctional lf;
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) {
        const Rational w = gram_weight(a, b, k);
        if (w != 0) lf.psd(0, a, b, to_double(w));
      }
    p.add_constraint(std::move(lf), f.coeff(k));
  }
  SdpSolution s = sdp_solve(p, tol);
  if (s.status == SdpStatus::Infeasible) return make_infeasibility(p, s, "f is not v^T B v with B PSD");
  if (!s.feasible()) indeterminate("trig_sos_check", s);
  TrigGram g{SymMatrixF(d), mprime, 0.0, 0.0};
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) g.gram.set(a, b, s.psd[0](a, b));
  const std::vector<double> mom = trig_gram_moments(g.gram);
  for (int k = 0; k <= top; ++k) {
    const double lhs = k < static_cast<int>(mom.size()) ? mom[k] : 0.0;
    g.residual = std::max(g.residual, std::abs(lhs - f.coeff(k)));
  }
  g.min_eigenvalue = sym_eigen(g.gram).values.front();
  return g;
}

SdpProblem build_ednn_sdp(const Rational& epsilon, int m, int mprime) {
  if (epsilon < 0) throw std::invalid_argument("build_ednn_sdp needs epsilon >= 0");
  if (m < 1 || mprime < 0 || mprime > m) throw std::invalid_argument("build_ednn_sdp needs m >= 1 and 0 <= m' <= m");
  const int d = mprime + 1;
  const int top = std::max(m, 2 * mprime);
  SdpProblem p;
  p.add_psd_block(d);
  p.add_nonneg(m);  // a_1 .. a_m at indices 0 .. m-1

  // <A5(a), H> is affine in a: A5(a) = I + sum_k a_k A5(e_k).
  LinearFunctional sep;
  for (int k = 1; k <= m; ++k) {
    CosPolyF e;
    e.a.assign(k + 1, 0.0);
    e.a[k] = 1.0;
    const double w = frobenius(compression_matrix(e, 5), horn_float());
    if (w != 0.0) sep.nonneg(k - 1, w);
  }
  const double base = frobenius(SymMatrixF::identity(5), horn_float());
  if (epsilon > 0) p.add_constraint(std::move(sep), -to_double(epsilon) - base);

  // Cosine moments of v^T B v equal those of f.
  for (int k = 0; k <= top; ++k) {
    LinearFunctional lf;
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b) {
        const Rational w = gram_weight(a, b, k);
        if (w != 0) lf.psd(0, a, b, to_double(w));
      }
    if (k >= 1 && k <= m) lf.nonneg(k - 1, -1.0);
    p.add_constraint(std::move(lf), k == 0 ? 1.0 : 0.0);
  }
  return p;
}

std::variant<EdnnResult, InfeasibilityCert> construct_ednn(const Rational& epsilon, int m, int mprime, double tol) {
  if (!(epsilon > 0)) throw std::invalid_argument("construct_ednn needs epsilon > 0");
  const SdpProblem p = build_ednn_sdp(epsilon, m, mprime);
  SdpSolution s = sdp_solve(p, tol);
  if (s.status == SdpStatus::Infeasible)
    return make_infeasibility(p, s, "no nonnegative cosine series of length " + std::to_string(m) + " with <A5, H> = -" +
                                        to_string(epsilon) + " has a Gram certificate over m' = " + std::to_string(mprime));
  if (!s.feasible()) indeterminate("construct_ednn", s);

  EdnnResult r;
  r.f.a.assign(m + 1, 0.0);
  r.f.a[0] = 1.0;
  for (int k = 1; k <= m; ++k) r.f.a[k] = std::max(0.0, s.nonneg[k - 1]);
  r.mprime = mprime;
  r.epsilon = epsilon;
  r.gram = SymMatrixF(mprime + 1);
  for (int a = 0; a <= mprime; ++a)
    for (int b = a; b <= mprime; ++b) r.gram.set(a, b, s.psd[0](a, b));
  r.A5 = compression_matrix(r.f, 5);

  const std::vector<double> mom = trig_gram_moments(r.gram);
  for (int k = 0; k <= std::max(m, 2 * mprime); ++k) {
    const double lhs = k < static_cast<int>(mom.size()) ? mom[k] : 0.0;
    r.gram_residual = std::max(r.gram_residual, std::abs(lhs - r.f.coeff(k)));
  }
  // Loose relative to tol: the residual is measured after clipping a_k.
  if (r.gram_residual > 1e3 * tol) throw VerificationError("construct_ednn: f = v^T B v residual " + std::to_string(r.gram_residual));
  for (int i = 0; i < 5; ++i)
    for (int j = i; j < 5; ++j)
      if (r.A5(i, j) < 0.0) throw VerificationError("construct_ednn: A5 has a negative entry");
  if (!membership_basic(r.A5, ConeTag::DNN, tol).member) throw VerificationError("construct_ednn: A5 failed DNN certification");
  auto cp = cp_refute_with(r.A5, horn_float(), 1, tol);
  if (!cp) throw VerificationError("construct_ednn: H does not refute complete positivity of A5");
  r.cp_witness = *cp;
  return r;
}

namespace {

ParriloVariables ecop_build(SdpProblem& p, const SymMatrixF& a, const Rational& epsilon_prime, int k) {
  if (k < 1 || k > 2) throw std::invalid_argument("construct_ecop needs k in {1, 2}");
  if (epsilon_prime < 0) throw std::invalid_argument("construct_ecop needs epsilon' >= 0");
  const int n = a.n();
  ParriloVariables pv = add_parrilo_cone(p, n, k);
  LinearFunctional pair;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (a(i, j) != 0.0) pair.free_var(pv.var[i][j], i == j ? a(i, i) : 2.0 * a(i, j));
  p.add_constraint(std::move(pair), -to_double(epsilon_prime));
  if (epsilon_prime == 0) {
    LinearFunctional trace;
    for (int i = 0; i < n; ++i) trace.free_var(pv.var[i][i], 1.0);
    p.add_constraint(std::move(trace), n);
  }
  return pv;
}

}  // namespace

SdpProblem build_ecop_sdp(const SymMatrixF& a, const Rational& epsilon_prime, int k) {
  SdpProblem p;
  ecop_build(p, a, epsilon_prime, k);
  return p;
}

std::variant<EcopResult, InfeasibilityCert> construct_ecop(const SymMatrixF& a, const Rational& epsilon_prime, int k, double tol) {
  if (!membership_basic(a, ConeTag::DNN, tol).member) throw std::invalid_argument("construct_ecop needs a DNN-certified A");
  const int n = a.n();
  SdpProblem p;
  const ParriloVariables pv = ecop_build(p, a, epsilon_prime, k);
  SdpSolution s = sdp_solve(p, tol);
  if (s.status == SdpStatus::Infeasible)
    return make_infeasibility(p, s, "no C in K^(" + std::to_string(k) + ") has Tr(C A) = -" + to_string(epsilon_prime));
  if (!s.feasible()) indeterminate("construct_ecop", s);
  EcopResult r;
  r.C = SymMatrixF(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) r.C.set(i, j, s.free_vars[pv.var[i][j]]);
  r.cert = make_sos_gram(parrilo_target(r.C, k), pv.basis, s.psd[pv.gram]);
  r.pairing = frobenius(r.C, a);
  return r;
}

PaperData load_paper_data(const std::string& dir) {
  auto exact = [&](const std::string& name) {
    const AnyMatrix m = read_matrix_file(dir + "/" + name);
    if (const auto* q = std::get_if<SymMatrixQ>(&m)) return *q;
    throw MatrixFormatError(name + ": expected the exact flavor");
  };
  return PaperData{exact("paper_A5.json"), exact("paper_B.json"), exact("paper_C.json")};
}

bool PaperReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const PaperCheck& c) { return c.passed; });
}

CosPoly read_off_cos_poly(const SymMatrixQ& a5) {
  if (a5.n() < 5) throw std::invalid_argument("read_off_cos_poly needs a 5x5 matrix");
  const QSqrt2 inv_sqrt2(Rational(0), make_rational(1, 2));
  CosPoly f;
  f.a.resize(7);
  f.a[0] = a5(0, 0);
  for (int k = 1; k <= 4; ++k) f.a[k] = a5(0, k) * inv_sqrt2;
  f.a[5] = a5(2, 3) - f.a[1];  // A_34 = a_1 + a_5
  f.a[6] = a5(3, 3) - f.a[0];  // A_44 = a_0 + a_6
  return f;
}

PaperReport verify_paper_examples(const PaperData& d) {
  PaperReport rep;
  const CosPoly f = read_off_cos_poly(d.A5);

  {
    PaperCheck c{"(1) A5 is the 5x5 compression of its cosine series", true, "", ""};
    const SymMatrixQ a = compression_matrix(f, d.A5.n());
    int bad = 0;
    for (int i = 0; i < a.n(); ++i)
      for (int j = i; j < a.n(); ++j)
        if (a(i, j) != d.A5(i, j)) {
          ++bad;
          c.detail += "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "): " + (d.A5(i, j) - a(i, j)).to_string() + "; ";
        }
    c.passed = bad == 0;
    c.value = std::to_string(bad) + " mismatched entries";
    std::string series;
    for (int k = 0; k <= f.m(); ++k) series += (k ? ", " : "") + f.a[k].to_string();
    c.detail += "a = [" + series + "]";
    rep.checks.push_back(c);
  }

  {
    PaperCheck c{"(2) f = v^T B v coefficientwise", true, "", ""};
    const std::vector<QSqrt2> mom = trig_gram_moments(d.B);
    const int top = std::max(f.m(), static_cast<int>(mom.size()) - 1);
    bool half = true;
    int bad = 0;
    for (int k = 0; k <= top; ++k) {
      const QSqrt2 lhs = k < static_cast<int>(mom.size()) ? mom[k] : QSqrt2(0);
      const QSqrt2 diff = lhs - cos_moment(f, k);
      if (!diff.is_zero()) {
        ++bad;
        c.detail += "k=" + std::to_string(k) + ": v^T B v minus f = " + diff.to_string() + "; ";
      }
      const QSqrt2 half_target = k == 0 ? f.coeff(0) : f.coeff(k) * QSqrt2(make_rational(1, 2));
      if (lhs != half_target) half = false;
    }
    c.passed = bad == 0;
    c.value = std::to_string(bad) + " mismatched cosine moments";
    c.detail += std::string("B reproduces 1 + sum a_k cos(2 k pi x) exactly: ") + (half ? "yes" : "no");
    rep.checks.push_back(c);
  }

  {
    PaperCheck c{"(3) B is PSD (exact LDL^T)", true, "", ""};
    const ExactPsdResult res = exact_ldl_psd(d.B);
    if (const auto* pl = std::get_if<PivotList>(&res)) {
      c.value = "rank " + std::to_string(pl->pivots.size());
    } else {
      c.passed = false;
      c.value = std::get<Refutation>(res).value.to_string();
      c.detail = "v^T B v < 0 for the returned v";
    }
    rep.checks.push_back(c);
  }

  {
    PaperCheck c{"(4) A5 is entrywise nonnegative", true, "", ""};
    QSqrt2 lo = d.A5(0, 0);
    for (int i = 0; i < d.A5.n(); ++i)
      for (int j = i; j < d.A5.n(); ++j) {
        lo = std::min(lo, d.A5(i, j));
        if (d.A5(i, j).sign() < 0) {
          c.passed = false;
          c.detail += "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") = " + d.A5(i, j).to_string() + "; ";
        }
      }
    c.value = "min entry " + lo.to_string();
    rep.checks.push_back(c);
  }

  {
    const QSqrt2 v = frobenius(d.A5, horn_matrix());
    rep.checks.push_back(PaperCheck{"(5) <A5, H> < 0", v.sign() < 0, v.to_string(), "reference target -1/20"});
  }
  {
    const QSqrt2 v = frobenius(d.C, d.A5);
    rep.checks.push_back(PaperCheck{"(6) <C, A5> < 0", v.sign() < 0, v.to_string(), "reference target -1/10"});
  }

  {
    PaperCheck c{"(7) (sum x^2) q_C is SOS", false, "", ""};
    try {
      auto res = parrilo_member(to_float(d.C), 1, 1e-8);
      if (const auto* g = std::get_if<SosGram>(&res)) {
        c.passed = true;
        c.value = "gram residual " + std::to_string(g->residual);
        c.detail = "min Gram eigenvalue " + std::to_string(g->min_eigenvalue);
      } else {
        c.value = "infeasible";
        c.detail = std::get<InfeasibilityCert>(res).detail;
      }
    } catch (const IndeterminateError& e) {
      c.value = "indeterminate";
      c.detail = e.what();
    }
    rep.checks.push_back(c);
  }
  return rep;
}

Json to_json(const PaperReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"detail", c.detail}});
  return Json{{"checks", checks}, {"all_passed", r.all_passed()}};
}

Json to_json(const EdnnResult& r) {
  return Json{{"epsilon", to_string(r.epsilon)},
              {"m", r.f.m()},
              {"mprime", r.mprime},
              {"a", cos_json(r.f)},
              {"A5", matrix_to_json(r.A5)},
              {"gram", matrix_to_json(r.gram)},
              {"gram_residual", r.gram_residual},
              {"pairing_with_H", r.cp_witness.pairing},
              {"cp_witness", to_json(Certificate{r.cp_witness})}};
}

Json to_json(const EcopResult& r) {
  return Json{{"C", matrix_to_json(r.C)}, {"pairing", r.pairing}, {"sos", to_json(Certificate{r.cert})}};
}

Json to_json(const TrigGram& g) {
  return Json{{"gram", matrix_to_json(g.gram)}, {"mprime", g.mprime}, {"residual", g.residual}, {"min_eigenvalue", g.min_eigenvalue}};
}

}  // namespace coposlab
