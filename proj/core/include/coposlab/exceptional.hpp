#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "coposlab/cones.hpp"
#include "coposlab/sdp.hpp"

namespace coposlab {

// f(x) = a_0 + 2 sum_{k=1..m} a_k cos(2 k pi x). Only cosines appear: a sine
// term would break the symmetry the cosine compressions rely on.
template <typename T>
struct CosPolyT {
  std::vector<T> a;  // a_0 .. a_m

  int m() const { return static_cast<int>(a.size()) - 1; }
  T coeff(int k) const { return k >= 0 && k < static_cast<int>(a.size()) ? a[k] : T(0); }
};

using CosPoly = CosPolyT<QSqrt2>;
using CosPolyF = CosPolyT<double>;

CosPolyF to_float(const CosPoly& f);
double eval(const CosPolyF& f, double x);

// Integral over [0, 1] of cos(2 j pi x) cos(2 k pi x) cos(2 l pi x).
Rational triple_integral(int j, int k, int l);

// n x n compression of multiplication by f onto 1, sqrt2 cos(2 pi x), ...:
// A_11 = a_0, A_1k = sqrt2 a_{k-1}, A_jk = a_{|j-k|} + a_{j+k-2} (1-based).
SymMatrixQ compression_matrix(const CosPoly& f, int n);
SymMatrixF compression_matrix(const CosPolyF& f, int n);

// B over v = (1, cos 2 pi x, ..., cos 2 m' pi x) with f = v^T B v.
struct TrigGram {
  SymMatrixF gram;
  int mprime = 0;
  double residual = 0.0;  // max |integral of (f - v^T B v) cos(2 k pi x)|
  double min_eigenvalue = 0.0;
};

// Integral of v^T B v against cos(2 k pi x), k = 0 .. 2(dim B - 1).
std::vector<QSqrt2> trig_gram_moments(const SymMatrixQ& b);
std::vector<double> trig_gram_moments(const SymMatrixF& b);
// Integral of f against cos(2 k pi x): a_0 for k = 0, a_k otherwise.
QSqrt2 cos_moment(const CosPoly& f, int k);

std::variant<TrigGram, InfeasibilityCert> trig_sos_check(const CosPolyF& f, int mprime, double tol = 1e-9);

// Variables: a_1..a_m in the nonnegative block, B in PSD block 0.
// Constraints: <A5(a), H> = -epsilon and f = v^T B v, with a_0 = 1.
// epsilon = 0 gives the relaxed program without the separation constraint.
SdpProblem build_ednn_sdp(const Rational& epsilon, int m, int mprime);

struct EdnnResult {
  CosPolyF f;
  SymMatrixF gram;
  int mprime = 0;
  SymMatrixF A5;
  Rational epsilon;
  double gram_residual = 0.0;
  CpRefutation cp_witness;  // H with <A5, H> < 0
};

// Post-verification of a solver answer failed; a tolerance problem.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Needs epsilon > 0. Throws IndeterminateError or VerificationError; never
// returns an unverified result.
std::variant<EdnnResult, InfeasibilityCert> construct_ednn(const Rational& epsilon, int m, int mprime, double tol = 1e-9);

template <typename T>
SymMatrix<T> extend_ednn(const CosPolyT<T>& f, int n) {
  if (n < 5) throw std::invalid_argument("extend_ednn needs n >= 5");
  return compression_matrix(f, n);
}

struct EcopResult {
  SymMatrixF C;
  SosGram cert;
  double pairing = 0.0;  // Tr(C A)
};

// Free C, Gram block 0 over degree-(k+2) monomials.
SdpProblem build_ecop_sdp(const SymMatrixF& a, const Rational& epsilon_prime, int k);

// C with Tr(C A) = -epsilon' and (sum x^2)^k q_C SOS. With epsilon' = 0 the
// normalization Tr(C) = n replaces the pairing to exclude C = 0.
std::variant<EcopResult, InfeasibilityCert> construct_ecop(const SymMatrixF& a, const Rational& epsilon_prime, int k,
                                                           double tol = 1e-9);

struct PaperData {
  SymMatrixQ A5;
  SymMatrixQ B;
  SymMatrixQ C;
};

PaperData load_paper_data(const std::string& dir);

struct PaperCheck {
  std::string name;
  bool passed = false;
  std::string value;   // exact value when the check has one
  std::string detail;  // offending entries or solver diagnostics
};

struct PaperReport {
  std::vector<PaperCheck> checks;
  bool all_passed() const;
};

// Seven checks; (1)-(6) are exact, (7) solves an SDP at tol 1e-8.
PaperReport verify_paper_examples(const PaperData& d);

// a_0..a_6 read off A5's first row and the (3,4), (4,4) entries.
CosPoly read_off_cos_poly(const SymMatrixQ& a5);

Json to_json(const PaperReport& r);
Json to_json(const EdnnResult& r);
Json to_json(const EcopResult& r);
Json to_json(const TrigGram& g);

}  // namespace coposlab
