#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>

#include "coposlab/volume.hpp"
#include "support.hpp"

namespace coposlab {
namespace {

using test::Rng;

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> axpy(double a, const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> out(y);
  for (std::size_t i = 0; i < x.size(); ++i) out[i] += a * x[i];
  return out;
}

SectionSpec spec_of(SectionCone c, OracleMode m, int n) {
  SectionSpec s;
  s.cone = c;
  s.mode = m;
  s.n = n;
  return s;
}

double log_rational(const Rational& q) {
  long en = 0, ed = 0;
  const double mn = mpz_get_d_2exp(&en, q.get_num_mpz_t());
  const double md = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
  return std::log(std::abs(mn)) - std::log(md) + (en - ed) * std::numbers::ln2;
}

// vrad of the NN simplex from the exact L2 Gram determinant of its edges.
double vrad_nn_gram_oracle(int n) {
  std::vector<EvenQuartic> v;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) v.push_back(nn_vertex(n, i, j));
  const int d = static_cast<int>(v.size()) - 1;
  std::vector<EvenQuartic> e;
  for (int k = 1; k <= d; ++k) e.push_back(EvenQuartic{v[k].a - v[0].a});
  std::vector<std::vector<Rational>> g(d, std::vector<Rational>(d));
  for (int a = 0; a < d; ++a)
    for (int b = a; b < d; ++b) g[a][b] = g[b][a] = l2_inner(e[a], e[b]);
  Rational det = 1;
  for (int c = 0; c < d; ++c) {
    int p = c;
    while (g[p][c] == 0) ++p;
    if (p != c) {
      std::swap(g[p], g[c]);
      det = -det;
    }
    det *= g[c][c];
    for (int r = c + 1; r < d; ++r) {
      const Rational f = g[r][c] / g[c][c];
      for (int k = c; k < d; ++k) g[r][k] -= f * g[c][k];
    }
  }
  const double log_vol = 0.5 * log_rational(det) - std::lgamma(d + 1.0);
  const double log_ball = 0.5 * d * std::log(std::numbers::pi) - std::lgamma(d / 2.0 + 1.0);
  return std::exp((log_vol - log_ball) / d);
}

TEST(ValidateSpec, RejectsMissingOracles) {
  EXPECT_THROW(validate_spec(spec_of(SectionCone::NN, OracleMode::Exact, 2)), std::invalid_argument);
  EXPECT_THROW(validate_spec(spec_of(SectionCone::COP, OracleMode::Exact, 5)), std::invalid_argument);
  EXPECT_THROW(validate_spec(spec_of(SectionCone::CP, OracleMode::Exact, 5)), std::invalid_argument);
  EXPECT_THROW(validate_spec(spec_of(SectionCone::LF, OracleMode::Exact, 4)), std::invalid_argument);
  EXPECT_THROW(validate_spec(spec_of(SectionCone::PSD, OracleMode::Inner, 4)), std::invalid_argument);
  EXPECT_NO_THROW(validate_spec(spec_of(SectionCone::COP, OracleMode::Exact, 4)));
  EXPECT_NO_THROW(validate_spec(spec_of(SectionCone::COP, OracleMode::Inner, 5)));
}

TEST(ConeNames, RoundTrip) {
  for (SectionCone c : {SectionCone::NN, SectionCone::PSD, SectionCone::DNN, SectionCone::SPN, SectionCone::COP,
                        SectionCone::CP, SectionCone::LF, SectionCone::Ball})
    EXPECT_EQ(section_cone_from_string(to_string(c)), c);
  EXPECT_THROW(section_cone_from_string("pos"), std::invalid_argument);
  EXPECT_EQ(oracle_mode_from_string("outer"), OracleMode::Outer);
}

TEST(Section, CenterInsideEveryCone) {
  const std::vector<SectionSpec> specs{
      spec_of(SectionCone::NN, OracleMode::Exact, 5),  spec_of(SectionCone::PSD, OracleMode::Exact, 5),
      spec_of(SectionCone::DNN, OracleMode::Exact, 5), spec_of(SectionCone::SPN, OracleMode::Exact, 5),
      spec_of(SectionCone::COP, OracleMode::Inner, 5), spec_of(SectionCone::COP, OracleMode::Outer, 5),
      spec_of(SectionCone::CP, OracleMode::Inner, 5),  spec_of(SectionCone::CP, OracleMode::Outer, 5),
      spec_of(SectionCone::LF, OracleMode::Inner, 5),  spec_of(SectionCone::LF, OracleMode::Outer, 5),
      spec_of(SectionCone::COP, OracleMode::Exact, 4), spec_of(SectionCone::CP, OracleMode::Exact, 4)};
  for (const SectionSpec& s : specs) {
    const Section sec(s);
    EXPECT_TRUE(sec.contains(sec.center())) << to_string(s.cone) << "/" << to_string(s.mode);
    EXPECT_EQ(sec.dim(), s.n * (s.n + 1) / 2 - 1);
  }
}

TEST(Section, CoordinatesInvertMatrixAt) {
  const Section sec(spec_of(SectionCone::NN, OracleMode::Exact, 5));
  Rng rng(71);
  std::normal_distribution<double> g;
  std::vector<double> x(sec.dim());
  for (auto& v : x) v = g(rng);
  const std::vector<double> back = sec.coordinates(quartic_of_matrix(sec.matrix_at(x)));
  for (int i = 0; i < sec.dim(); ++i) EXPECT_NEAR(back[i], x[i], 1e-12);
}

TEST(Section, NnVerticesAreExtreme) {
  const Section sec(spec_of(SectionCone::NN, OracleMode::Exact, 5));
  const auto verts = nn_vertex_coordinates(sec);
  ASSERT_EQ(verts.size(), 15u);
  for (const auto& v : verts) {
    EXPECT_TRUE(sec.contains(v));
    std::vector<double> out(v);
    for (auto& x : out) x *= 1.01;
    EXPECT_FALSE(sec.contains(out));
  }
}

TEST(Radial, TowardVertexReachesVertex) {
  const Section sec(spec_of(SectionCone::NN, OracleMode::Exact, 5));
  for (const auto& v : nn_vertex_coordinates(sec)) {
    std::vector<double> dir = axpy(-1.0, sec.center(), v);
    const double dist = norm(dir);
    for (auto& x : dir) x /= dist;
    EXPECT_NEAR(sec.radial(dir), dist, 1e-6);
  }
}

TEST(Radial, PsdIsFinite) {
  const Section sec(spec_of(SectionCone::PSD, OracleMode::Exact, 5));
  std::vector<double> dir(sec.center());
  const double c = norm(dir);
  for (auto& x : dir) x /= -c;
  const double r = sec.radial(dir);
  EXPECT_GT(r, 0.0);
  EXPECT_LT(r, 1e3);
}

TEST(Radial, BoundaryIsBracketed) {
  const std::vector<SectionSpec> specs{
      spec_of(SectionCone::NN, OracleMode::Exact, 5),  spec_of(SectionCone::PSD, OracleMode::Exact, 5),
      spec_of(SectionCone::DNN, OracleMode::Exact, 5), spec_of(SectionCone::SPN, OracleMode::Exact, 5),
      spec_of(SectionCone::COP, OracleMode::Inner, 5), spec_of(SectionCone::COP, OracleMode::Outer, 5),
      spec_of(SectionCone::CP, OracleMode::Inner, 5),  spec_of(SectionCone::CP, OracleMode::Outer, 5),
      spec_of(SectionCone::LF, OracleMode::Inner, 4),  spec_of(SectionCone::LF, OracleMode::Outer, 4),
      spec_of(SectionCone::COP, OracleMode::Exact, 4), spec_of(SectionCone::CP, OracleMode::Exact, 4)};
  for (const SectionSpec& s : specs) {
    const Section sec(s);
    for (std::uint64_t k = 0; k < 4; ++k) {
      const std::vector<double> dir = sample_direction(sec.dim(), 72, k);
      const double r = sec.radial(dir);
      const std::string what = to_string(s.cone) + "/" + to_string(s.mode) + " dir " + std::to_string(k);
      EXPECT_TRUE(sec.contains(axpy(0.99 * r, dir, sec.center()))) << what;
      EXPECT_FALSE(sec.contains(axpy(1.01 * r, dir, sec.center()))) << what;
    }
  }
}

TEST(Radial, InclusionIsPointwise) {
  const Section nn(spec_of(SectionCone::NN, OracleMode::Exact, 5));
  const Section spn(spec_of(SectionCone::SPN, OracleMode::Exact, 5));
  const Section dnn(spec_of(SectionCone::DNN, OracleMode::Exact, 5));
  const Section psd(spec_of(SectionCone::PSD, OracleMode::Exact, 5));
  for (std::uint64_t k = 0; k < 500; ++k) {
    const std::vector<double> dir = sample_direction(nn.dim(), 73, k);
    EXPECT_LE(nn.radial(dir), spn.radial(dir) + 1e-6) << k;
    EXPECT_LE(dnn.radial(dir), psd.radial(dir) + 1e-6) << k;
  }
}

TEST(Directions, UnitAndDeterministic) {
  const auto a = sample_direction(14, 5, 9), b = sample_direction(14, 5, 9), c = sample_direction(14, 5, 10);
  EXPECT_NEAR(norm(a), 1.0, 1e-12);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
}

TEST(Threads, EnvironmentCap) {
  ::setenv("COPOSLAB_THREADS", "2", 1);
  EXPECT_EQ(sampling_threads(8), 2);
  EXPECT_EQ(sampling_threads(1), 1);
  ::unsetenv("COPOSLAB_THREADS");
  EXPECT_GE(sampling_threads(0), 1);
}

TEST(VradMc, IndependentOfThreadCount) {
  VradOptions opt;
  opt.samples = 400;
  opt.seed = 3;
  opt.threads = 1;
  const VradEstimate a = vrad_mc(spec_of(SectionCone::DNN, OracleMode::Exact, 4), opt);
  opt.threads = 3;
  const VradEstimate b = vrad_mc(spec_of(SectionCone::DNN, OracleMode::Exact, 4), opt);
  EXPECT_EQ(a.point_estimate, b.point_estimate);
  EXPECT_EQ(a.ci_low, b.ci_low);
  EXPECT_EQ(a.ci_high, b.ci_high);
  EXPECT_LE(a.ci_low, a.point_estimate);
  EXPECT_LE(a.point_estimate, a.ci_high);
}

TEST(VradMc, BallCalibration) {
  VradOptions opt;
  opt.samples = 20000;
  opt.seed = 1;
  for (double radius : {1.0, 2.0}) {
    SectionSpec s = spec_of(SectionCone::Ball, OracleMode::Exact, 5);
    s.ball_radius = radius;
    const VradEstimate e = vrad_mc(s, opt);
    EXPECT_EQ(e.dim, 14);
    EXPECT_NEAR(e.point_estimate, radius, 0.02 * radius);
  }
}

TEST(VradMc, NnAgreesWithExactSimplex) {
  VradOptions opt;
  opt.samples = 20000;
  opt.seed = 42;
  const VradEstimate e = vrad_mc(spec_of(SectionCone::NN, OracleMode::Exact, 5), opt);
  const double exact = vrad_nn_exact(5);
  EXPECT_LE(std::abs(e.point_estimate - exact) / exact, 0.10) << e.point_estimate << " vs " << exact;
}

TEST(VradMc, FromConstantRadii) {
  const VradEstimate e = vrad_from_radii(std::vector<double>(100, 0.7), 9, 200, 1);
  EXPECT_NEAR(e.point_estimate, 0.7, 1e-15);
  EXPECT_NEAR(e.ci_low, 0.7, 1e-15);
  EXPECT_NEAR(e.ci_high, 0.7, 1e-15);
}

TEST(VradNnExact, MatchesGramDeterminantOracle) {
  for (int n = 3; n <= 8; ++n) {
    const double v = vrad_nn_exact(n);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(v, 0.0);
    EXPECT_NEAR(v, vrad_nn_gram_oracle(n), 1e-9 * v) << "n=" << n;
  }
}

TEST(VradNnExact, WithinBandsAtFive) {
  const double v = vrad_nn_exact(5);
  EXPECT_GE(v, 1.0 / (std::sqrt(2.0) * 5));
  EXPECT_LE(v, vrad_upper_band(5));
  EXPECT_THROW(vrad_nn_exact(2), std::invalid_argument);
}

TEST(CheckBounds, PartialInputs) {
  EXPECT_TRUE(check_bounds(5, {}).checks.empty());
  VradEstimate nn;
  nn.cone = SectionCone::NN;
  nn.n = 5;
  nn.point_estimate = 0.25;
  nn.ci_low = 0.23;
  nn.ci_high = 0.27;
  const BoundsReport r = check_bounds(5, {nn});
  for (const BoundCheck& c : r.checks) EXPECT_TRUE(c.kind == "band" || c.kind == "nn-exact") << c.kind;
  EXPECT_TRUE(r.all_passed());
}

TEST(CheckBounds, OrderViolationReported) {
  VradEstimate dnn, psd;
  dnn.cone = SectionCone::DNN;
  psd.cone = SectionCone::PSD;
  dnn.n = psd.n = 5;
  dnn.point_estimate = 0.5;
  dnn.ci_low = 0.49;
  dnn.ci_high = 0.51;
  psd.point_estimate = 0.3;
  psd.ci_low = 0.29;
  psd.ci_high = 0.31;
  const BoundsReport r = check_bounds(5, {dnn, psd});
  EXPECT_FALSE(r.all_passed());
  bool found = false;
  for (const BoundCheck& c : r.checks)
    if (c.kind == "order" && !c.passed) {
      found = true;
      EXPECT_LT(c.margin, 0.0);
    }
  EXPECT_TRUE(found);
}

TEST(VradJson, RoundTrip) {
  VradEstimate e;
  e.cone = SectionCone::COP;
  e.mode = OracleMode::Inner;
  e.n = 5;
  e.point_estimate = 0.4;
  e.ci_low = 0.35;
  e.ci_high = 0.45;
  e.samples = 100;
  e.seed = 9;
  e.dim = 14;
  const Json j = to_json(e);
  for (const char* key : {"cone", "n", "mode", "estimate", "ci", "samples", "seed"}) EXPECT_TRUE(j.contains(key)) << key;
  const VradEstimate b = vrad_estimate_from_json(Json::parse(j.dump()));
  EXPECT_EQ(to_json(b), j);
}

// Signed permutations map LF generators to LF generators.
TEST(LfSection, SignedPermutationInvariance) {
  const Section sec(spec_of(SectionCone::LF, OracleMode::Inner, 4));
  const auto& gens = sec.lf_generators();
  Rng rng(74);
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int t = 0; t < 50; ++t) {
    std::vector<int> perm{0, 1, 2, 3};
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix o(4, 4);
    for (int i = 0; i < 4; ++i) o(i, perm[i]) = coin(rng) ? 1.0 : -1.0;
    for (int k = 0; k < 50; ++k) {
      const EvenQuarticF g = group_action(o, EvenQuarticF{gens[pick(rng)]});
      EXPECT_TRUE(sec.contains(sec.coordinates(g))) << t << " " << k;
    }
  }
}

}  // namespace
}  // namespace coposlab
