#include "coposlab/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace coposlab {

std::string to_string(ConeId c) {
  switch (c.tag) {
    case ConeTag::NN: return "NN";
    case ConeTag::PSD: return "PSD";
    case ConeTag::DNN: return "DNN";
    case ConeTag::SPN: return "SPN";
    case ConeTag::COP: return "COP";
    case ConeTag::CP: return "CP";
    case ConeTag::Parrilo: return "K(" + std::to_string(c.r) + ")";
  }
  return "?";
}

SymMatrixQ horn_matrix() {
  static const int h[5][5] = {{1, -1, 1, 1, -1},
                              {-1, 1, -1, 1, 1},
                              {1, -1, 1, -1, 1},
                              {1, 1, -1, 1, -1},
                              {-1, 1, 1, -1, 1}};
  SymMatrixQ m(5);
  for (int i = 0; i < 5; ++i)
    for (int j = i; j < 5; ++j) m.set(i, j, QSqrt2(h[i][j]));
  return m;
}

double psd_tolerance(const SymMatrixF& a, double tol) { return tol * std::max(1.0, std::abs(a.trace())); }

Membership membership_basic(const SymMatrixF& a, ConeTag cone, double tol) {
  if (cone != ConeTag::NN && cone != ConeTag::PSD && cone != ConeTag::DNN)
    throw std::invalid_argument("membership_basic: cone must be NN, PSD or DNN");
  if (cone == ConeTag::NN || cone == ConeTag::DNN) {
    NegativeEntry worst{0, 0, std::numeric_limits<double>::infinity()};
    for (int i = 0; i < a.n(); ++i)
      for (int j = i; j < a.n(); ++j)
        if (a(i, j) < worst.value) worst = {i, j, a(i, j)};
    if (worst.value < -tol) return {false, worst};
    if (cone == ConeTag::NN) return {true, NNWitness{}};
  }
  PsdCertificate pc = psd_certificate(a, psd_tolerance(a, tol));
  if (auto* neg = std::get_if<NegVector>(&pc)) return {false, PsdRefutation{*neg}};
  PsdFactor f{std::get<CholeskyFactor>(pc)};
  if (cone == ConeTag::PSD) return {true, f};
  return {true, DnnCertificate{f}};
}

InfeasibilityCert make_infeasibility(const SdpProblem& p, const SdpSolution& s, const std::string& what) {
  InfeasibilityCert c;
  c.y = s.farkas;
  c.violation = farkas_violation(p, s.farkas);
  c.detail = what + (s.message.empty() ? "" : " (" + s.message + ")");
  return c;
}

[[noreturn]] void indeterminate(const std::string& what, const SdpSolution& s) {
  throw IndeterminateError(what + ": solver returned " + to_string(s.status) + (s.message.empty() ? "" : " (" + s.message + ")"));
}

SosGram make_sos_gram(const PolyF& target, const std::vector<Monomial>& basis, const Matrix& gram) {
  SosGram g;
  g.gram = gram;
  g.basis = basis;
  g.residual = gram_residual(target, basis, gram);
  g.min_eigenvalue = sym_eigenvalues(gram).front();
  return g;
}

ParriloVariables add_parrilo_cone(SdpProblem& p, int n, int r) {
  ParriloVariables pv;
  pv.basis = homogeneous_monomials(n, 2 + r);
  GramPairs gp(pv.basis);
  pv.gram = p.add_psd_block(static_cast<int>(pv.basis.size()));
  pv.var.assign(n, std::vector<int>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) pv.var[i][j] = pv.var[j][i] = p.add_free(1);

  // Coefficient of each monomial in (sum x^2)^r q_M, linear in M.
  const PolyF sr = sum_squares_power<double>(n, r);
  std::map<Monomial, std::vector<std::pair<int, double>>, GrlexLess> lin;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      Monomial m(n, 0);
      m[i] += 2;
      m[j] += 2;
      const double mult = i == j ? 1.0 : 2.0;
      for (const auto& [ms, cs] : sr) lin[ms + m].push_back({pv.var[i][j], mult * cs});
    }
  }
  for (const auto& [m, prs] : gp.pairs()) {
    LinearFunctional f;
    gp.add_coefficient(f, pv.gram, m);
    auto it = lin.find(m);
    if (it != lin.end())
      for (const auto& [v, c] : it->second) f.free_var(v, -c);
    p.add_constraint(std::move(f), 0.0);
  }
  return pv;
}

SdpProblem spn_problem(const SymMatrixF& a) {
  const int n = a.n();
  SdpProblem p;
  p.add_psd_block(n);
  p.add_nonneg(n * (n + 1) / 2);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j, ++k) {
      LinearFunctional f;
      f.psd(0, i, j, 1.0).nonneg(k, 1.0);
      p.add_constraint(std::move(f), a(i, j));
    }
  }
  return p;
}

std::variant<SpnPair, InfeasibilityCert> spn_decompose(const SymMatrixF& a, double tol) {
  const int n = a.n();
  const SdpProblem p = spn_problem(a);
  SdpSolution s = sdp_solve(p, tol);
  if (s.status == SdpStatus::Infeasible) {
    InfeasibilityCert c = make_infeasibility(p, s, "A is not PSD + NN");
    Pullback g = pull_back(p, s.farkas);
    SymMatrixF w(n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) w.set(i, j, -g.psd[0](i, j));
    c.dual_matrix = w;
    return c;
  }
  if (!s.feasible()) indeterminate("spn_decompose", s);
  SpnPair out{SymMatrixF(n), SymMatrixF(n)};
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double nn = std::max(0.0, a(i, j) - s.psd[0](i, j));
      out.N.set(i, j, nn);
      out.P.set(i, j, a(i, j) - nn);
    }
  }
  return out;
}

PolyF parrilo_target(const SymMatrixF& a, int r) {
  const int n = a.n();
  PolyF q;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Monomial m(n, 0);
      m[i] += 2;
      m[j] += 2;
      q[m] += a(i, j);
    }
  }
  for (auto it = q.begin(); it != q.end();) {
    if (it->second == 0.0) it = q.erase(it);
    else ++it;
  }
  return poly_mul(sum_squares_power<double>(n, r), q);
}

SosAssembly parrilo_assembly(const SymMatrixF& a, int r) {
  if (r < 0 || r > 2) throw std::invalid_argument("Parrilo level r must be 0, 1 or 2");
  auto assembled = sos_gram_assemble(parrilo_target(a, r), homogeneous_monomials(a.n(), 2 + r));
  // A full homogeneous basis reaches every monomial of twice its degree.
  return std::get<SosAssembly>(std::move(assembled));
}

std::variant<SosGram, InfeasibilityCert> parrilo_member(const SymMatrixF& a, int r, double tol) {
  const SosAssembly sa = parrilo_assembly(a, r);
  const PolyF target = parrilo_target(a, r);
  const std::vector<Monomial>& basis = sa.basis;
  SdpSolution s = sdp_solve(sa.problem, tol);
  if (s.status == SdpStatus::Infeasible)
    return make_infeasibility(sa.problem, s, "(sum x^2)^" + std::to_string(r) + " q_A is not SOS");
  if (!s.feasible()) indeterminate("parrilo_member", s);
  return make_sos_gram(target, basis, s.psd[0]);
}

namespace {

void project_simplex(std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0.0, theta = 0.0;
  for (int k = 0; k < n; ++k) {
    css += u[k];
    const double t = (css - 1.0) / (k + 1);
    if (k == n - 1 || u[k + 1] <= t) {
      theta = t;
      break;
    }
  }
  for (double& x : v) x = std::max(0.0, x - theta);
}

double quad(const SymMatrixF& a, const std::vector<double>& x) {
  double s = 0.0;
  for (int i = 0; i < a.n(); ++i) {
    if (x[i] == 0.0) continue;
    double t = 0.0;
    for (int j = 0; j < a.n(); ++j) t += a(i, j) * x[j];
    s += x[i] * t;
  }
  return s;
}

struct Candidate {
  std::vector<double> x;
  double normalized = 0.0;  // value on the simplex
};

std::vector<Candidate> simplex_candidates(const SymMatrixF& a, const CopRefuteOptions& opt) {
  const int n = a.n();
  std::vector<Candidate> out;
  // {0,1} supports up to size min(n, 6), ordered by size then lexicographically.
  const int kmax = std::min(n, 6);
  std::vector<int> idx;
  for (int k = 1; k <= kmax; ++k) {
    std::vector<int> c(k);
    std::iota(c.begin(), c.end(), 0);
    while (true) {
      double s = 0.0;
      for (int i : c)
        for (int j : c) s += a(i, j);
      if (s < 0.0) {
        std::vector<double> x(n, 0.0);
        for (int i : c) x[i] = 1.0;
        out.push_back({x, s / (static_cast<double>(k) * k)});
      }
      int p = k - 1;
      while (p >= 0 && c[p] == n - k + p) --p;
      if (p < 0) break;
      ++c[p];
      for (int q = p + 1; q < k; ++q) c[q] = c[q - 1] + 1;
    }
  }
  // Projected gradient from seeded random starts.
  double lip = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += std::abs(a(i, j));
    lip = std::max(lip, row);
  }
  if (lip == 0.0) return out;
  const double step = 1.0 / (2.0 * lip);
  for (int t = 0; t < opt.attempts; ++t) {
    std::mt19937_64 rng(opt.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(t) + 1);
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> x(n);
    double tot = 0.0;
    for (double& v : x) tot += (v = expo(rng));
    for (double& v : x) v /= tot;
    std::vector<double> g(n);
    double val = quad(a, x);
    for (int it = 0; it < opt.iterations; ++it) {
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += a(i, j) * x[j];
        g[i] = x[i] - step * 2.0 * s;
      }
      project_simplex(g);
      const double nv = quad(a, g);
      double move = 0.0;
      for (int i = 0; i < n; ++i) move = std::max(move, std::abs(g[i] - x[i]));
      x = g;
      val = nv;
      if (move < 1e-15) break;
    }
    if (val < 0.0) out.push_back({x, val});
  }
  std::stable_sort(out.begin(), out.end(), [](const Candidate& p, const Candidate& q) { return p.normalized < q.normalized; });
  return out;
}

std::vector<Rational> rationalize_nonneg(const std::vector<double>& x) {
  std::vector<Rational> q(x.size());
  const double scale = 1073741824.0;  // 2^30
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = std::round(std::max(0.0, x[i]) * scale);
    q[i] = make_rational(static_cast<long>(r), 1L << 30);
  }
  return q;
}

std::optional<CopRefutation> refute_with_exact(const SymMatrixF& af, const SymMatrixQ& aq, const CopRefuteOptions& opt) {
  if (opt.attempts < 1) throw std::invalid_argument("cop_refute: attempts must be at least 1");
  for (const Candidate& c : simplex_candidates(af, opt)) {
    std::vector<Rational> x = rationalize_nonneg(c.x);
    std::vector<double> xd(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xd[i] = x[i].get_d();
    const double v = quad(af, xd);
    if (!(v < -opt.tol)) continue;
    QSqrt2 exact(0);
    for (int i = 0; i < aq.n(); ++i) {
      if (x[i] == 0) continue;
      for (int j = 0; j < aq.n(); ++j) {
        if (x[j] == 0) continue;
        exact += QSqrt2(x[i] * x[j]) * aq(i, j);
      }
    }
    if (exact.sign() < 0) return CopRefutation{x, v, exact};
  }
  return std::nullopt;
}

}  // namespace

std::optional<CopRefutation> cop_refute(const SymMatrixF& a, int attempts, std::uint64_t seed) {
  CopRefuteOptions opt;
  opt.attempts = attempts;
  opt.seed = seed;
  return cop_refute(a, opt);
}

std::optional<CopRefutation> cop_refute(const SymMatrixF& a, const CopRefuteOptions& opt) {
  return refute_with_exact(a, to_exact(a), opt);
}

std::optional<CopRefutation> cop_refute(const SymMatrixQ& a, const CopRefuteOptions& opt) {
  return refute_with_exact(to_float(a), a, opt);
}

namespace {

constexpr double kRefuteMargin = 1e-6;

ParriloVariables cp_refute_build(SdpProblem& p, const SymMatrixF& a, int r) {
  if (r < 0 || r > 1) throw std::invalid_argument("cp_refute: r must be 0 or 1");
  const int n = a.n();
  ParriloVariables pv = add_parrilo_cone(p, n, r);
  LinearFunctional norm;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) norm.free_var(pv.var[i][j], 2.0);  // <M, I+J> = 2 sum_i M_ii + 2 sum_{i<j} M_ij
  p.add_constraint(std::move(norm), 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j)
      if (a(i, j) != 0.0) p.objective.free_var(pv.var[i][j], i == j ? a(i, i) : 2.0 * a(i, j));
  return pv;
}

}  // namespace

SdpProblem cp_refute_problem(const SymMatrixF& a, int r) {
  SdpProblem p;
  cp_refute_build(p, a, r);
  return p;
}

std::optional<CpRefutation> cp_refute(const SymMatrixF& a, int r, double tol) {
  const int n = a.n();
  SdpProblem p;
  const ParriloVariables pv = cp_refute_build(p, a, r);
  const auto& var = pv.var;
  SdpSolution s = sdp_solve(p, tol);
  if (s.status != SdpStatus::Optimal) indeterminate("cp_refute", s);
  // The optimum is 0 for every CP input on the boundary of the refutable set,
  // so solver noise around 0 is not evidence.
  double scale = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  if (!(s.primal_objective < -kRefuteMargin * scale)) return std::nullopt;
  CpRefutation out;
  out.M = SymMatrixF(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out.M.set(i, j, s.free_vars[var[i][j]]);
  out.r = r;
  out.cert = make_sos_gram(parrilo_target(out.M, r), pv.basis, s.psd[pv.gram]);
  out.pairing = frobenius(a, out.M);
  return out;
}

std::optional<CpRefutation> cp_refute_with(const SymMatrixF& a, const SymMatrixF& m, int r, double tol) {
  if (a.n() != m.n()) throw std::invalid_argument("cp_refute_with: dimension mismatch");
  const double pairing = frobenius(a, m);
  if (!(pairing < -tol)) return std::nullopt;
  auto res = parrilo_member(m, r, tol);
  if (!std::holds_alternative<SosGram>(res)) return std::nullopt;
  CpRefutation out;
  out.M = m;
  out.cert = std::get<SosGram>(res);
  out.r = r;
  out.pairing = pairing;
  return out;
}

bool kaykobad_cp(const SymMatrixF& a, double tol) {
  for (int i = 0; i < a.n(); ++i) {
    double off = 0.0;
    for (int j = 0; j < a.n(); ++j) {
      if (a(i, j) < -tol) return false;
      if (j != i) off += a(i, j);
    }
    if (a(i, i) < off - tol) return false;
  }
  return true;
}

namespace {

Json matrix_rows(const Matrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) rows.push_back(std::vector<double>(m.row(i), m.row(i) + m.cols()));
  return rows;
}

Json sos_json(const SosGram& g) {
  Json basis = Json::array();
  for (const Monomial& m : g.basis) basis.push_back(m);
  return Json{{"basis", basis}, {"gram", matrix_rows(g.gram)}, {"residual", g.residual}, {"min_eigenvalue", g.min_eigenvalue}};
}

Json factor_json(const CholeskyFactor& c) {
  return Json{{"L", matrix_rows(c.L)}, {"perm", c.perm}, {"rank", c.rank}};
}

}  // namespace

std::string certificate_kind(const Certificate& c) {
  static const char* names[] = {"NNWitness",  "NegativeEntry", "PsdFactor",     "PsdRefutation",     "DnnCertificate",
                                "SpnPair",    "SosGram",       "CopRefutation", "CpRefutation", "InfeasibilityCert"};
  return names[c.index()];
}

Json to_json(const Certificate& c) {
  Json out{{"kind", certificate_kind(c)}};
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NegativeEntry>) {
          out["i"] = v.i;
          out["j"] = v.j;
          out["value"] = v.value;
        } else if constexpr (std::is_same_v<T, PsdFactor>) {
          out["factor"] = factor_json(v.chol);
        } else if constexpr (std::is_same_v<T, PsdRefutation>) {
          out["v"] = v.v.v;
          out["value"] = v.v.value;
        } else if constexpr (std::is_same_v<T, DnnCertificate>) {
          out["factor"] = factor_json(v.psd.chol);
        } else if constexpr (std::is_same_v<T, SpnPair>) {
          out["P"] = matrix_to_json(v.P);
          out["N"] = matrix_to_json(v.N);
        } else if constexpr (std::is_same_v<T, SosGram>) {
          out["sos"] = sos_json(v);
        } else if constexpr (std::is_same_v<T, CopRefutation>) {
          Json x = Json::array();
          for (const Rational& q : v.x) x.push_back(to_string(q));
          out["x"] = x;
          out["value"] = v.value;
          out["exact_value"] = v.exact_value.to_string();
        } else if constexpr (std::is_same_v<T, CpRefutation>) {
          out["M"] = matrix_to_json(v.M);
          out["r"] = v.r;
          out["pairing"] = v.pairing;
          out["sos"] = sos_json(v.cert);
        } else if constexpr (std::is_same_v<T, InfeasibilityCert>) {
          out["y"] = v.y;
          out["violation"] = v.violation;
          out["detail"] = v.detail;
          if (v.dual_matrix) out["dual_matrix"] = matrix_to_json(*v.dual_matrix);
        }
      },
      c);
  return out;
}

}  // namespace coposlab
