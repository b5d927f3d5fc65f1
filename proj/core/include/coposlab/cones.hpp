#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "coposlab/linalg.hpp"
#include "coposlab/sdp.hpp"
#include "coposlab/sos.hpp"

namespace coposlab {

enum class ConeTag { NN, PSD, DNN, SPN, COP, CP, Parrilo };

struct ConeId {
  ConeTag tag = ConeTag::NN;
  int r = 0;  // Parrilo level
};

std::string to_string(ConeId c);

// The solver gave up; no claim either way is made.
class IndeterminateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NNWitness {};
struct NegativeEntry {
  int i = 0, j = 0;
  double value = 0.0;
};
struct PsdFactor {
  CholeskyFactor chol;
};
struct PsdRefutation {
  NegVector v;
};
struct DnnCertificate {
  PsdFactor psd;
};
struct SpnPair {
  SymMatrixF P, N;  // A = P + N exactly in floating point, N >= 0
};
struct SosGram {
  Matrix gram;
  std::vector<Monomial> basis;
  double residual = 0.0;  // max coefficient mismatch
  double min_eigenvalue = 0.0;
};
struct CopRefutation {
  std::vector<Rational> x;  // x >= 0
  double value = 0.0;       // x^T A x in floating point
  QSqrt2 exact_value;       // x^T A x exactly (A's entries taken exactly)
};
struct CpRefutation {
  SymMatrixF M;       // copositive witness, certified by `cert`
  SosGram cert;
  int r = 0;
  double pairing = 0.0;  // <A, M>
};

struct InfeasibilityCert {
  std::vector<double> y;  // Farkas multipliers, b^T y = 1
  double violation = 0.0;
  std::string detail;
  // spn_decompose only: a DNN matrix W with <A, W> = -1 read off the ray.
  std::optional<SymMatrixF> dual_matrix;
};

using Certificate = std::variant<NNWitness, NegativeEntry, PsdFactor, PsdRefutation, DnnCertificate, SpnPair, SosGram,
                                 CopRefutation, CpRefutation, InfeasibilityCert>;

struct Membership {
  bool member = false;
  Certificate certificate;
};

SymMatrixQ horn_matrix();

// Effective PSD tolerance: tol * max(1, |trace A|).
double psd_tolerance(const SymMatrixF& a, double tol);

// cone in {NN, PSD, DNN}.
Membership membership_basic(const SymMatrixF& a, ConeTag cone, double tol = 1e-9);

// A = P + N with P in block 0 and N (upper triangle, row-major) nonnegative.
SdpProblem spn_problem(const SymMatrixF& a);
std::variant<SpnPair, InfeasibilityCert> spn_decompose(const SymMatrixF& a, double tol = 1e-9);

// (x1^2 + ... + xn^2)^r * q_A as a polynomial.
PolyF parrilo_target(const SymMatrixF& a, int r);

SosAssembly parrilo_assembly(const SymMatrixF& a, int r);
std::variant<SosGram, InfeasibilityCert> parrilo_member(const SymMatrixF& a, int r, double tol = 1e-9);

struct CopRefuteOptions {
  int attempts = 64;
  std::uint64_t seed = 0;
  double tol = 1e-12;
  int iterations = 2000;
};

std::optional<CopRefutation> cop_refute(const SymMatrixF& a, int attempts = 64, std::uint64_t seed = 0);
std::optional<CopRefutation> cop_refute(const SymMatrixF& a, const CopRefuteOptions& opt);
// Same search; the witness is re-checked against the exact entries.
std::optional<CopRefutation> cop_refute(const SymMatrixQ& a, const CopRefuteOptions& opt);

// min <A, M> over M in K^(r) with <M, I + J> = 1. An optimum below
// -1e-6 max(1, max_ij |a_ij|) refutes A in CP; smaller values are solver noise.
SdpProblem cp_refute_problem(const SymMatrixF& a, int r);
std::optional<CpRefutation> cp_refute(const SymMatrixF& a, int r, double tol = 1e-9);

// Checks a given witness: M in K^(r) and <A, M> < -tol.
std::optional<CpRefutation> cp_refute_with(const SymMatrixF& a, const SymMatrixF& m, int r, double tol = 1e-9);

// Entrywise nonnegative and diagonally dominant, a sufficient CP condition.
bool kaykobad_cp(const SymMatrixF& a, double tol = 0.0);

// Shared assembly pieces for SDPs over the Parrilo cones.
InfeasibilityCert make_infeasibility(const SdpProblem& p, const SdpSolution& s, const std::string& what);
[[noreturn]] void indeterminate(const std::string& what, const SdpSolution& s);
SosGram make_sos_gram(const PolyF& target, const std::vector<Monomial>& basis, const Matrix& gram);

struct ParriloVariables {
  std::vector<std::vector<int>> var;  // free-variable index of M_ij
  int gram = 0;                       // PSD block of the Gram matrix
  std::vector<Monomial> basis;
};

// Adds free M (upper triangle) and a Gram block over degree-(2+r) monomials
// tied by (sum x^2)^r q_M = w^T G w, so M is in K^(r) for any feasible point.
ParriloVariables add_parrilo_cone(SdpProblem& p, int n, int r);

Json to_json(const Certificate& c);
std::string certificate_kind(const Certificate& c);

}  // namespace coposlab
