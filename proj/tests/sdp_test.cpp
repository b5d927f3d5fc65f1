#include <gtest/gtest.h>

#include <cmath>

#include "coposlab/sdp.hpp"
#include "coposlab/sos.hpp"
#include "support.hpp"

namespace coposlab {
namespace {

using test::mono;
using test::Rng;

// min X00 subject to X00 + X11 = 1, X in PSD(2).
SdpProblem trace_one_problem() {
  SdpProblem p;
  p.add_psd_block(2);
  LinearFunctional tr;
  tr.psd(0, 0, 0, 1.0).psd(0, 1, 1, 1.0);
  p.add_constraint(tr, 1.0);
  p.objective.psd(0, 0, 0, 1.0);
  return p;
}

TEST(SdpSolve, MinimizeCornerOfTraceOneSet) {
  const SdpSolution s = sdp_solve(trace_one_problem());
  ASSERT_EQ(s.status, SdpStatus::Optimal) << s.message;
  EXPECT_NEAR(s.primal_objective, 0.0, 1e-7);
  EXPECT_NEAR(s.psd[0](1, 1), 1.0, 1e-7);
}

TEST(SdpSolve, NegativeTraceIsInfeasibleWithRay) {
  SdpProblem p;
  p.add_psd_block(3);
  LinearFunctional tr;
  for (int i = 0; i < 3; ++i) tr.psd(0, i, i, 1.0);
  p.add_constraint(tr, -1.0);
  const SdpSolution s = sdp_solve(p);
  ASSERT_EQ(s.status, SdpStatus::Infeasible);
  ASSERT_EQ(s.farkas.size(), 1u);
  EXPECT_LE(farkas_violation(p, s.farkas), 1e-9);
}

TEST(SdpSolve, WeakDualityAtOptimum) {
  // min <C, X> with C = [[2, 1], [1, 3]] over tr X = 1: smallest eigenvalue of C.
  SdpProblem p = trace_one_problem();
  p.objective = LinearFunctional{};
  p.objective.psd(0, 0, 0, 2.0).psd(0, 0, 1, 2.0).psd(0, 1, 1, 3.0);
  const double tol = 1e-9;
  const SdpSolution s = sdp_solve(p, tol);
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  EXPECT_NEAR(s.primal_objective, (5.0 - std::sqrt(5.0)) / 2.0, 1e-7);
  EXPECT_LE(std::abs(s.primal_objective - s.dual_objective), 10 * tol * (1 + std::abs(s.primal_objective)));
}

TEST(SdpSolve, LinearProgramOnly) {
  SdpProblem p;
  p.add_nonneg(2);
  LinearFunctional sum;
  sum.nonneg(0, 1.0).nonneg(1, 1.0);
  p.add_constraint(sum, 1.0);
  p.objective.nonneg(0, 1.0).nonneg(1, 2.0);
  const SdpSolution s = sdp_solve(p);
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  EXPECT_NEAR(s.primal_objective, 1.0, 1e-7);
  EXPECT_NEAR(s.nonneg[0], 1.0, 1e-7);
}

TEST(SdpSolve, FreeVariablesTiedToPsdBlock) {
  // X = [[1, z], [z, 1]] PSD, min z gives z = -1.
  SdpProblem p;
  p.add_psd_block(2);
  const int z = p.add_free(1);
  p.add_constraint(LinearFunctional{}.psd(0, 0, 0, 1.0), 1.0);
  p.add_constraint(LinearFunctional{}.psd(0, 1, 1, 1.0), 1.0);
  p.add_constraint(LinearFunctional{}.psd(0, 0, 1, 1.0).free_var(z, -1.0), 0.0);
  p.objective.free_var(z, 1.0);
  const SdpSolution s = sdp_solve(p);
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  EXPECT_NEAR(s.free_vars[0], -1.0, 1e-6);
}

TEST(SdpSolve, DuplicateConstraintsDropped) {
  SdpProblem p = trace_one_problem();
  LinearFunctional tr;
  tr.psd(0, 0, 0, 1.0).psd(0, 1, 1, 1.0);
  p.add_constraint(tr, 1.0);
  const SdpSolution s = sdp_solve(p);
  ASSERT_EQ(s.status, SdpStatus::Optimal);
  EXPECT_FALSE(s.warnings.empty());
}

TEST(SdpSolve, BitwiseReproducible) {
  Rng rng(11);
  const PolyF target = gram_polynomial(homogeneous_monomials(3, 2), Matrix::from_sym(test::random_gram(rng, 6, 6, -1, 1)));
  const SosAssembly sa = std::get<SosAssembly>(sos_gram_assemble(target, homogeneous_monomials(3, 2)));
  const SdpSolution s1 = sdp_solve(sa.problem);
  const SdpSolution s2 = sdp_solve(sa.problem);
  EXPECT_EQ(s1.status, s2.status);
  EXPECT_EQ(s1.iterations, s2.iterations);
  EXPECT_EQ(s1.residuals.primal_res, s2.residuals.primal_res);
  EXPECT_EQ(s1.residuals.dual_res, s2.residuals.dual_res);
  EXPECT_EQ(s1.residuals.gap, s2.residuals.gap);
  EXPECT_EQ(s1.psd[0].data(), s2.psd[0].data());
}

TEST(SdpSolve, RejectsMalformedProblems) {
  SdpProblem p;
  EXPECT_THROW(p.validate(), std::invalid_argument);
  p.add_psd_block(2);
  p.add_constraint(LinearFunctional{}.psd(0, 2, 0, 1.0), 1.0);
  EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(SdpJson, ProblemRoundTrip) {
  SdpProblem p = trace_one_problem();
  p.add_nonneg(2);
  p.add_free(1);
  p.add_constraint(LinearFunctional{}.nonneg(1, 2.0).free_var(0, -1.0), 0.5);
  const SdpProblem q = sdp_problem_from_json(Json::parse(to_json(p).dump()));
  EXPECT_EQ(to_json(q), to_json(p));
  const SdpSolution a = sdp_solve(p), b = sdp_solve(q);
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.primal_objective, b.primal_objective);
}

TEST(SosAssemble, SumOfFourthPowers) {
  PolyF f;
  f[mono({4, 0})] = 1.0;
  f[mono({0, 4})] = 1.0;
  const std::vector<Monomial> basis{mono({2, 0}), mono({1, 1}), mono({0, 2})};
  const SosAssembly sa = std::get<SosAssembly>(sos_gram_assemble(f, basis));
  const SdpSolution s = sdp_solve(sa.problem);
  ASSERT_TRUE(s.feasible()) << s.message;
  EXPECT_LE(gram_residual(f, basis, s.psd[0]), 1e-8);
  // diag(1, 1, 0) is a Gram; every Gram has B00 = B22 = 1.
  EXPECT_NEAR(s.psd[0](0, 0), 1.0, 1e-7);
  EXPECT_NEAR(s.psd[0](2, 2), 1.0, 1e-7);
}

TEST(SosAssemble, NegativeFormIsInfeasible) {
  PolyF f;
  f[mono({2, 2})] = 1.0;
  f[mono({4, 0})] = -1.0;
  const std::vector<Monomial> basis{mono({2, 0}), mono({1, 1}), mono({0, 2})};
  const SosAssembly sa = std::get<SosAssembly>(sos_gram_assemble(f, basis));
  const SdpSolution s = sdp_solve(sa.problem);
  ASSERT_EQ(s.status, SdpStatus::Infeasible);
  EXPECT_LE(farkas_violation(sa.problem, s.farkas), 1e-8);
}

TEST(SosAssemble, UnreachableMonomialReported) {
  PolyF f;
  f[mono({4, 0})] = 1.0;
  f[mono({3, 1})] = 1.0;
  const auto r = sos_gram_assemble(f, {mono({1, 1}), mono({0, 2})});
  ASSERT_TRUE(std::holds_alternative<UnreachableMonomials>(r));
  const auto& missing = std::get<UnreachableMonomials>(r).monomials;
  ASSERT_EQ(missing.size(), 2u);
  EXPECT_EQ(missing[0], mono({4, 0}));
}

TEST(SosAssemble, GrlexOrder) {
  const std::vector<Monomial> m = homogeneous_monomials(3, 2);
  const std::vector<Monomial> want{mono({2, 0, 0}), mono({1, 1, 0}), mono({1, 0, 1}),
                                   mono({0, 2, 0}), mono({0, 1, 1}), mono({0, 0, 2})};
  EXPECT_EQ(m, want);
}

TEST(SosAssemble, RandomGramRoundTrip) {
  Rng rng(12);
  const std::vector<Monomial> basis = homogeneous_monomials(3, 2);
  const int k = static_cast<int>(basis.size());
  for (int t = 0; t < 50; ++t) {
    const Matrix b0 = Matrix::from_sym(test::random_gram(rng, k, 1 + t % k, -1.0, 1.0));
    const PolyF target = gram_polynomial(basis, b0);
    const SosAssembly sa = std::get<SosAssembly>(sos_gram_assemble(target, basis));
    const SdpSolution s = sdp_solve(sa.problem);
    ASSERT_TRUE(s.feasible()) << "trial " << t << ": " << s.message;
    EXPECT_LE(gram_residual(target, basis, s.psd[0]), 1e-7) << "trial " << t;
  }
}

}  // namespace
}  // namespace coposlab
