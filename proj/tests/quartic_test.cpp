#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "coposlab/cones.hpp"
#include "coposlab/quartic.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace coposlab {
namespace {

using test::mono;
using test::Rng;
using RPoly = Poly<Rational>;

Rational R(long p, long q = 1) { return make_rational(p, q); }

// ---- independent oracles ----

using test::apolar_oracle;
using test::differentiate;
using test::random_general;

std::vector<Monomial> all_monomials(int n, int d) { return homogeneous_monomials(n, d); }

RPoly laplacian(const RPoly& p, int n) {
  RPoly out;
  for (int v = 0; v < n; ++v)
    for (const auto& [m, c] : differentiate(differentiate(p, v), v)) out[m] += c;
  for (auto it = out.begin(); it != out.end();) it = it->second == 0 ? out.erase(it) : std::next(it);
  return out;
}

// Integral over the sphere of f(x) x^gamma, by monomial moments.
Rational integrate_times(const EvenQuartic& f, const Monomial& gamma) {
  Rational s = 0;
  const GeneralQuartic g = to_general(f);
  for (const auto& [alpha, c] : g.terms()) s += c * sphere_moment(alpha + gamma);
  return s;
}

// Sphere moment via the Gaussian factorization E[g^a] = E[|g|^|a|] E[theta^a].
double gaussian_moment_oracle(const Monomial& alpha) {
  const int n = static_cast<int>(alpha.size());
  double logv = std::lgamma(n / 2.0);
  int b = 0;
  for (int a : alpha) {
    if (a % 2) return 0.0;
    logv += std::lgamma(a / 2 + 0.5) - std::lgamma(0.5);
    b += a / 2;
  }
  logv -= std::lgamma(n / 2.0 + b);
  return std::exp(logv);
}

using RMatrix = std::vector<std::vector<Rational>>;

RMatrix rmul(const RMatrix& a, const RMatrix& b) {
  const int n = static_cast<int>(a.size());
  RMatrix c(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
  return c;
}

RMatrix rinverse(RMatrix a) {
  const int n = static_cast<int>(a.size());
  RMatrix inv(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i) inv[i][i] = 1;
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (a[p][c] == 0) ++p;
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    const Rational d = a[c][c];
    for (int j = 0; j < n; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const Rational f = a[r][c];
      for (int j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

// Cayley transform (I - S)(I + S)^-1 of a random skew S: exactly orthogonal.
RMatrix random_rational_orthogonal(Rng& rng, int n) {
  RMatrix s(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      s[i][j] = test::random_rational(rng, -2, 2, 3);
      s[j][i] = -s[i][j];
    }
  RMatrix a = s, b = s;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      a[i][j] = (i == j ? Rational(1) : Rational(0)) - s[i][j];
      b[i][j] = (i == j ? Rational(1) : Rational(0)) + s[i][j];
    }
  return rmul(a, rinverse(b));
}

// pr_Q(f(O x)) by expanding products of linear forms.
EvenQuartic substitute_oracle(const RMatrix& o, const EvenQuartic& f) {
  const int n = f.n();
  std::vector<RPoly> lin(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (o[i][j] == 0) continue;
      Monomial m(n, 0);
      m[j] = 1;
      lin[i][m] = o[i][j];
    }
  GeneralQuartic out(n);
  const GeneralQuartic g = to_general(f);
  for (const auto& [beta, c] : g.terms()) {
    RPoly p;
    p[Monomial(n, 0)] = c;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < beta[i]; ++k) p = poly_mul(p, lin[i]);
    for (const auto& [m, coef] : p) out.add(m, coef);
  }
  return project_pr_Q(out);
}

EvenQuartic monomial_quartic(int n, int k, int l) {
  SymMatrixR a(n);
  a.set(k, l, k == l ? R(1) : R(1, 2));
  return EvenQuartic{a};
}

// ---- matrix correspondence and evaluation ----

TEST(QuarticOfMatrix, Examples) {
  const EvenQuartic i2 = quartic_of_matrix(SymMatrixR::identity(2));
  EXPECT_EQ(to_general(i2).coeff(mono({4, 0})), 1);
  EXPECT_EQ(to_general(i2).coeff(mono({2, 2})), 0);
  EXPECT_EQ(quartic_of_matrix(SymMatrixR::ones(2)), r_squared(2));
  const EvenQuartic qh = quartic_of_matrix(horn_matrix());
  EXPECT_EQ(to_general(qh).coeff(mono({2, 2, 0, 0, 0})), -2);
  EXPECT_EQ(matrix_of_quartic(qh), test::to_rational(horn_matrix()));
}

TEST(QuarticOfMatrix, RejectsIrrationalEntries) {
  SymMatrixQ a(2);
  a.set(0, 1, QSqrt2::sqrt2());
  EXPECT_THROW(quartic_of_matrix(a), std::invalid_argument);
}

TEST(Eval, Examples) {
  const std::vector<Rational> ones5(5, Rational(1));
  EXPECT_EQ(eval(quartic_of_matrix(SymMatrixR::identity(5)), ones5), 5);
  // Every Horn row sums to 1.
  EXPECT_EQ(eval(quartic_of_matrix(horn_matrix()), ones5), 5);
  Rng rng(31);
  EXPECT_EQ(eval(test::random_quartic(rng, 4), std::vector<Rational>(4, Rational(0))), 0);
}

TEST(Eval, FloatMirrorsExact) {
  Rng rng(32);
  for (int t = 0; t < 20; ++t) {
    const EvenQuartic f = test::random_quartic(rng, 4);
    const std::vector<Rational> x = test::random_rational_vector(rng, 4, -2, 2, 3);
    std::vector<double> xf;
    for (const auto& v : x) xf.push_back(to_double(v));
    EXPECT_NEAR(eval(to_float(f), xf), to_double(eval(f, x)), 1e-10);
  }
}

// ---- sphere moments ----

TEST(SphereMoment, Examples) {
  EXPECT_EQ(sphere_moment(mono({4, 0, 0})), R(1, 5));
  EXPECT_EQ(sphere_moment(mono({2, 2, 0, 0, 0})), R(1, 35));
  EXPECT_EQ(sphere_moment(mono({8, 0, 0, 0, 0})), R(1, 33));
  EXPECT_EQ(sphere_moment(mono({3, 1, 0})), 0);
  EXPECT_EQ(sphere_moment(mono({0, 0})), 1);
}

TEST(SphereMoment, DegreeFourConstants) {
  for (int n = 3; n <= 10; ++n) {
    Monomial x4(n, 0), x2y2(n, 0);
    x4[0] = 4;
    x2y2[0] = x2y2[1] = 2;
    EXPECT_EQ(sphere_moment(x4), R(3, n * (n + 2)));
    EXPECT_EQ(sphere_moment(x2y2), R(1, n * (n + 2)));
  }
}

TEST(SphereMoment, MatchesGaussianOracle) {
  for (int n = 2; n <= 8; ++n)
    for (int d : {2, 4, 6, 8})
      for (const Monomial& m : all_monomials(n, d)) {
        const double want = gaussian_moment_oracle(m);
        EXPECT_NEAR(to_double(sphere_moment(m)), want, 1e-13 * std::max(1.0, want)) << to_string(m);
      }
}

TEST(SphereMoment, MonteCarloWithinThreeStandardErrors) {
  constexpr int kPoints = 1000000;
  for (int n : {3, 5}) {
    std::vector<Monomial> mons;
    for (int d : {4, 8})
      for (const Monomial& m : all_monomials(n, d)) {
        bool even = true;
        for (int e : m) even = even && e % 2 == 0;
        if (even) mons.push_back(m);
      }
    std::vector<double> sum(mons.size(), 0.0), sum2(mons.size(), 0.0);
    Rng rng(33 + n);
    std::normal_distribution<double> g;
    std::vector<double> x(n);
    for (int p = 0; p < kPoints; ++p) {
      double r2 = 0.0;
      for (auto& v : x) {
        v = g(rng);
        r2 += v * v;
      }
      const double r = std::sqrt(r2);
      for (auto& v : x) v /= r;
      for (std::size_t k = 0; k < mons.size(); ++k) {
        double val = 1.0;
        for (int i = 0; i < n; ++i) val *= std::pow(x[i], mons[k][i]);
        sum[k] += val;
        sum2[k] += val * val;
      }
    }
    for (std::size_t k = 0; k < mons.size(); ++k) {
      const double mean = sum[k] / kPoints;
      const double se = std::sqrt((sum2[k] / kPoints - mean * mean) / kPoints);
      EXPECT_LE(std::abs(mean - to_double(sphere_moment(mons[k]))), 3 * se)
          << "n=" << n << " " << to_string(mons[k]);
    }
  }
}

// ---- inner products ----

TEST(L2Inner, Examples) {
  EXPECT_EQ(l2_inner(r_squared(5), r_squared(5)), 1);
  EXPECT_EQ(l2_inner(monomial_quartic(5, 0, 0), monomial_quartic(5, 1, 1)), R(1, 385));
  Rng rng(34);
  for (int t = 0; t < 20; ++t) {
    const EvenQuartic f = test::random_quartic(rng, 4);
    EXPECT_EQ(l2_inner(f, r_squared(4)), sphere_average(f));
  }
}

TEST(L2Inner, EvenAgreesWithGeneralAndFloat) {
  Rng rng(35);
  for (int t = 0; t < 20; ++t) {
    const EvenQuartic f = test::random_quartic(rng, 4), g = test::random_quartic(rng, 4);
    const Rational e = l2_inner(f, g);
    EXPECT_EQ(e, l2_inner(to_general(f), to_general(g)));
    EXPECT_NEAR(l2_inner(to_float(f), to_float(g)), to_double(e), 1e-12 * (1 + std::abs(to_double(e))));
  }
}

TEST(DiffInner, Examples) {
  EXPECT_EQ(diff_inner(monomial_quartic(3, 0, 0), monomial_quartic(3, 0, 0)), 24);
  Rng rng(36);
  const EvenQuartic f = test::random_quartic(rng, 4);
  for (int k = 0; k < 4; ++k)
    for (int l = k; l < 4; ++l) {
      // The monomial x_k^2 x_l^2 pairs to 24 a_kk or 8 a_kl.
      SymMatrixR m(4);
      m.set(k, l, k == l ? R(1) : R(1, 2));
      const Rational want = k == l ? 24 * f.a(k, k) : 8 * f.a(k, l);
      EXPECT_EQ(diff_inner(f, EvenQuartic{m}), want);
    }
}

TEST(DiffInner, MatchesFourthDerivativeOracle) {
  Rng rng(37);
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 4;
    const GeneralQuartic f = random_general(rng, n), g = random_general(rng, n);
    EXPECT_EQ(diff_inner(f, g), apolar_oracle(f, g)) << "trial " << t;
    const EvenQuartic ef = test::random_quartic(rng, n), eg = test::random_quartic(rng, n);
    EXPECT_EQ(diff_inner(ef, eg), apolar_oracle(to_general(ef), to_general(eg))) << "trial " << t;
  }
}

TEST(DiffInner, PairingWithFourthPowerEvaluates) {
  Rng rng(38);
  for (int t = 0; t < 30; ++t) {
    const EvenQuartic f = test::random_quartic(rng, 5);
    const std::vector<Rational> v = test::random_rational_vector(rng, 5, -3, 3, 4);
    EXPECT_EQ(diff_inner(f, v4_project(v)), 24 * eval(f, v));
    EXPECT_EQ(diff_inner(to_general(f), linear_form_power(v)), 24 * eval(f, v));
  }
}

TEST(DiffInner, NnIsSelfDual) {
  Rng rng(39);
  for (int t = 0; t < 50; ++t) {
    const EvenQuartic f{test::random_sym_rational(rng, 4, 0, 3, 5)}, g{test::random_sym_rational(rng, 4, 0, 3, 5)};
    EXPECT_GE(diff_inner(f, g), 0);
    EvenQuartic h = test::random_quartic(rng, 4);
    h.a.set(1, 2, R(-1, 3));
    EXPECT_LT(diff_inner(h, monomial_quartic(4, 1, 2)), 0);
  }
}

// ---- projection ----

TEST(ProjectPrQ, Examples) {
  const EvenQuartic p = project_pr_Q(linear_form_power({R(1), R(1)}));
  EXPECT_EQ(to_general(p).coeff(mono({4, 0})), 1);
  EXPECT_EQ(to_general(p).coeff(mono({2, 2})), 6);
  EXPECT_EQ(to_general(p).coeff(mono({0, 4})), 1);
  GeneralQuartic odd(2);
  odd.add(mono({3, 1}), R(1));
  EXPECT_EQ(project_pr_Q(odd), EvenQuartic{SymMatrixR(2)});
}

TEST(ProjectPrQ, IdempotentAndOrthogonal) {
  Rng rng(40);
  for (int t = 0; t < 30; ++t) {
    const GeneralQuartic f = random_general(rng, 3);
    const EvenQuartic p = project_pr_Q(f);
    EXPECT_EQ(project_pr_Q(to_general(p)), p);
    GeneralQuartic diff = f;
    const GeneralQuartic gp = to_general(p);
    for (const auto& [m, c] : gp.terms()) diff.add(m, -c);
    const EvenQuartic g = test::random_quartic(rng, 3);
    EXPECT_EQ(l2_inner(diff, to_general(g)), 0);
  }
}

// ---- harmonic decomposition and T ----

TEST(Harmonic, RSquared) {
  const HarmonicParts h = harmonic_decompose(r_squared(4));
  EXPECT_EQ(h.c0, 1);
  EXPECT_EQ(h.h2, SymMatrixR(4));
  EXPECT_EQ(h.h4, EvenQuartic{SymMatrixR(4)});
}

TEST(Harmonic, ReconstructsAndPartsAreHarmonic) {
  Rng rng(41);
  std::vector<EvenQuartic> cases{monomial_quartic(2, 0, 0)};
  for (int t = 0; t < 40; ++t) cases.push_back(test::random_quartic(rng, 2 + t % 6));
  for (const EvenQuartic& f : cases) {
    const HarmonicParts h = harmonic_decompose(f);
    EXPECT_EQ(reconstruct(h), f);
    EXPECT_EQ(h.h2.trace(), 0);
    for (int i = 0; i < f.n(); ++i)
      for (int j = 0; j < f.n(); ++j)
        if (i != j) {
          EXPECT_EQ(h.h2(i, j), 0);
        }
    EXPECT_TRUE(laplacian(to_general(h.h4).terms(), f.n()).empty());
    EXPECT_EQ(sphere_average(h.h4), 0);
    EXPECT_TRUE(classify_subspaces(h.h4).in_H4);
  }
}

TEST(ApplyT, RSquaredEigenvalue) {
  for (int n = 2; n <= 9; ++n) {
    SymMatrixR want = matrix_of_quartic(r_squared(n));
    want *= R(3, n * (n + 2));
    EXPECT_EQ(apply_T(r_squared(n)).a, want);
  }
}

TEST(ApplyT, MatchesIntegralOracle) {
  Rng rng(42);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 5;
    const EvenQuartic f = test::random_quartic(rng, n);
    const EvenQuartic tf = apply_T(f);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        Monomial g(n, 0);
        g[i] += 2;
        g[j] += 2;
        const Rational want = (i == j ? 1 : 3) * integrate_times(f, g);
        EXPECT_EQ(tf.a(i, j), want) << "n=" << n << " (" << i << "," << j << ")";
      }
  }
}

TEST(ApplyT, ApolarBridge) {
  Rng rng(43);
  for (int t = 0; t < 100; ++t) {
    const EvenQuartic f = test::random_quartic(rng, 5), g = test::random_quartic(rng, 5);
    EXPECT_EQ(diff_inner(apply_T(f), g), 24 * l2_inner(f, g)) << "trial " << t;
  }
}

TEST(ApplyT, Injective) {
  Rng rng(44);
  const EvenQuartic zero{SymMatrixR(5)};
  for (int t = 0; t < 20; ++t) {
    const EvenQuartic f = test::random_quartic(rng, 5);
    if (f == zero) continue;
    EXPECT_FALSE(apply_T(f) == zero);
  }
}

// ---- subspaces ----

TEST(Classify, Examples) {
  const SubspaceFlags r2 = classify_subspaces(r_squared(5));
  EXPECT_TRUE(r2.in_L);
  EXPECT_FALSE(r2.in_M);
  EXPECT_TRUE(classify_subspaces(nn_vertex(5, 2, 2)).in_M);
  EXPECT_TRUE(classify_subspaces(nn_vertex(5, 1, 3)).in_M);
}

TEST(Classify, ImposedHarmonicRows) {
  Rng rng(45);
  for (int t = 0; t < 30; ++t) {
    const int n = 3 + t % 5;
    SymMatrixR a(n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) a.set(i, j, test::random_rational(rng, -3, 3, 7));
    for (int i = 0; i < n; ++i) {
      Rational s = 0;
      for (int j = 0; j < n; ++j)
        if (j != i) s += a(i, j);
      a.set(i, i, -s / 3);
    }
    const SubspaceFlags fl = classify_subspaces(EvenQuartic{a});
    EXPECT_TRUE(fl.in_H4);
    EXPECT_TRUE(fl.in_M);
  }
}

TEST(Classify, HarmonicConstraintRank) {
  // Rows a_ii + (1/3) sum_{j != i} a_ij = 0 over the n(n+1)/2 coordinates.
  for (int n = 3; n <= 8; ++n) {
    const int cols = n * (n + 1) / 2;
    std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(cols, Rational(0)));
    auto col = [n](int i, int j) {
      if (i > j) std::swap(i, j);
      return i * n - i * (i - 1) / 2 + (j - i);
    };
    for (int i = 0; i < n; ++i) {
      rows[i][col(i, i)] = 1;
      for (int j = 0; j < n; ++j)
        if (j != i) rows[i][col(i, j)] = R(1, 3);
    }
    int rank = 0;
    for (int c = 0; c < cols && rank < n; ++c) {
      int p = rank;
      while (p < n && rows[p][c] == 0) ++p;
      if (p == n) continue;
      std::swap(rows[p], rows[rank]);
      for (int r = 0; r < n; ++r) {
        if (r == rank || rows[r][c] == 0) continue;
        const Rational f = rows[r][c] / rows[rank][c];
        for (int k = 0; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
      }
      ++rank;
    }
    EXPECT_EQ(rank, n);
    EXPECT_EQ(cols - rank, n * (n - 1) / 2);
  }
}

TEST(BasisM, OrthonormalAverageZero) {
  for (int n = 3; n <= 7; ++n) {
    const std::vector<EvenQuarticF> b = basis_M(n);
    ASSERT_EQ(static_cast<int>(b.size()), n * (n + 1) / 2 - 1);
    const EvenQuarticF r2 = to_float(r_squared(n));
    for (std::size_t i = 0; i < b.size(); ++i) {
      EXPECT_NEAR(l2_inner(b[i], r2), 0.0, 1e-12);
      for (std::size_t j = 0; j < b.size(); ++j)
        EXPECT_NEAR(l2_inner(b[i], b[j]), i == j ? 1.0 : 0.0, 1e-12);
    }
  }
  EXPECT_EQ(basis_M(5).size(), 14u);
}

// ---- fourth powers and the orthogonal action ----

TEST(V4Project, Examples) {
  EXPECT_EQ(v4_project(std::vector<Rational>{R(1), R(0), R(0)}), monomial_quartic(3, 0, 0));
  const double s = 1.0 / std::sqrt(2.0);
  const EvenQuarticF p = v4_project(std::vector<double>{s, s});
  EXPECT_NEAR(p.a(0, 0), 0.25, 1e-15);
  EXPECT_NEAR(p.a(1, 1), 0.25, 1e-15);
  EXPECT_NEAR(p.a(0, 1), 0.75, 1e-15);  // 2 * 3/4 = 6/4 on x1^2 x2^2
  Rng rng(46);
  for (int t = 0; t < 20; ++t) {
    const std::vector<Rational> v = test::random_rational_vector(rng, 4, -2, 2, 5);
    EXPECT_EQ(v4_project(v), project_pr_Q(linear_form_power(v)));
  }
}

TEST(GroupAction, FixesRSquared) {
  Rng rng(47);
  for (int t = 0; t < 10; ++t) {
    const int n = 3 + t % 3;
    EXPECT_EQ(group_action(random_rational_orthogonal(rng, n), r_squared(n)), r_squared(n));
  }
}

TEST(GroupAction, PermutationPermutesCoefficients) {
  Rng rng(48);
  const EvenQuartic f = test::random_quartic(rng, 4);
  const std::vector<int> perm{2, 0, 3, 1};
  RMatrix o(4, std::vector<Rational>(4, Rational(0)));
  for (int i = 0; i < 4; ++i) o[i][perm[i]] = 1;  // (O x)_i = x_perm[i]
  const EvenQuartic g = group_action(o, f);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(g.a(perm[i], perm[j]), f.a(i, j));
}

TEST(GroupAction, MatchesDirectExpansion) {
  Rng rng(49);
  for (int t = 0; t < 15; ++t) {
    const int n = 3 + t % 3;
    const RMatrix o = random_rational_orthogonal(rng, n);
    const EvenQuartic f = test::random_quartic(rng, n);
    EXPECT_EQ(group_action(o, f), substitute_oracle(o, f)) << "trial " << t;
  }
}

// pr_Q commutes with signed permutations, so these move v4(v) to v4(P^T v).
TEST(GroupAction, SignedPermutationMovesFourthPowers) {
  Rng rng(52);
  for (int t = 0; t < 20; ++t) {
    const int n = 3 + t % 4;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    RMatrix o(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i) o[i][perm[i]] = rng() % 2 ? 1 : -1;
    const std::vector<Rational> v = test::random_rational_vector(rng, n, -2, 2, 3);
    std::vector<Rational> otv(n, Rational(0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) otv[i] += o[j][i] * v[j];
    EXPECT_EQ(group_action(o, v4_project(v)), v4_project(otv)) << "trial " << t;
  }
}

TEST(GroupAction, FloatMatchesExact) {
  Rng rng(50);
  const RMatrix o = random_rational_orthogonal(rng, 4);
  Matrix of(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) of(i, j) = to_double(o[i][j]);
  const EvenQuartic f = test::random_quartic(rng, 4);
  const EvenQuarticF g = group_action(of, to_float(f));
  const EvenQuartic want = group_action(o, f);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(g.a(i, j), to_double(want.a(i, j)), 1e-12);
}

TEST(GroupAction, RejectsNonOrthogonal) {
  RMatrix o(2, std::vector<Rational>(2, Rational(0)));
  o[0][0] = 1;
  o[1][1] = 2;
  EXPECT_THROW(group_action(o, r_squared(2)), std::invalid_argument);
}

// ---- NN section identities ----

// n(n+2) x_i^2 x_j^2 - r^2 as a combination of pr_Q((x_i + x_j)^4), (x_i^2 + x_j^2)^2
// and the two diagonal vertices.
TEST(NnIdentities, ConstantTwoAndSeven) {
  for (int n = 5; n <= 8; ++n) {
    const Rational nn2 = R(n * (n + 2));
    const SymMatrixR r2 = matrix_of_quartic(r_squared(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        std::vector<Rational> e(n, Rational(0));
        e[i] = e[j] = 1;
        const SymMatrixR p1 = (nn2 / 12) * v4_project(e).a - r2;
        SymMatrixR sq(n);
        sq.set(i, i, R(1));
        sq.set(j, j, R(1));
        sq.set(i, j, R(1));
        const SymMatrixR p4 = (nn2 / 8) * sq - r2;
        const SymMatrixR p2 = nn_vertex(n, i, i).a, p3 = nn_vertex(n, j, j).a;
        const SymMatrixR lhs = nn_vertex(n, i, j).a;
        EXPECT_EQ(lhs, R(2) * p1 - R(1, 2) * p2 - R(1, 2) * p3) << n << " " << i << " " << j;
        EXPECT_EQ(lhs, R(4) * p4 - R(3, 2) * p2 - R(3, 2) * p3) << n << " " << i << " " << j;
      }
  }
}

TEST(QuarticJson, RoundTripWithKind) {
  Rng rng(51);
  const EvenQuartic f = test::random_quartic(rng, 3);
  const Json j = to_json(f);
  EXPECT_EQ(j.at("kind"), "even-quartic");
  EXPECT_EQ(even_quartic_from_json(Json::parse(j.dump())), f);
}

}  // namespace
}  // namespace coposlab
