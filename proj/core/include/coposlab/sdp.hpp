#pragma once

#include <string>
#include <vector>

#include "coposlab/linalg.hpp"
#include "coposlab/matrix_json.hpp"

namespace coposlab {

enum class BlockKind { Psd, Nonneg, Free };

// One coefficient of a linear functional. For PSD blocks `value` multiplies
// X[row][col]; an off-diagonal position names the shared entry
// X[row][col] = X[col][row], so (0,1,v) contributes v*X01 once. For the
// nonnegative and free blocks `row` is the variable index and `block` and
// `col` are ignored.
struct Entry {
  BlockKind kind = BlockKind::Psd;
  int block = 0;
  int row = 0;
  int col = 0;
  double value = 0.0;
};

struct LinearFunctional {
  std::vector<Entry> entries;

  LinearFunctional& psd(int block, int row, int col, double value);
  LinearFunctional& nonneg(int index, double value);
  LinearFunctional& free_var(int index, double value);
};

struct Constraint {
  LinearFunctional lhs;
  double rhs = 0.0;
};

// minimize <objective, x> subject to lhs_i(x) = rhs_i, x in
// PSD(d_1) x ... x PSD(d_k) x R^l_+ x R^f.
struct SdpProblem {
  std::vector<int> psd_block_dims;
  int nonneg_dim = 0;
  int free_dim = 0;
  std::vector<Constraint> constraints;
  LinearFunctional objective;

  int add_psd_block(int dim);
  int add_nonneg(int count);  // returns the first new index
  int add_free(int count);    // returns the first new index
  void add_constraint(LinearFunctional lhs, double rhs);

  // Throws std::invalid_argument on out-of-range indices or empty cones.
  void validate() const;
};

enum class SdpStatus { Optimal, FeasiblePoint, Infeasible, Indeterminate };

std::string to_string(SdpStatus s);

struct SdpResiduals {
  double primal_res = 0.0;  // max_i |a_i(x) - b_i| / (||a_i|| (1 + |b_i| / ||a_i||))
  double dual_res = 0.0;    // ||A^T y + s - c|| / (1 + ||c||)
  double gap = 0.0;         // |c^T x - b^T y| / (1 + |c^T x|)
};

struct SdpSolution {
  SdpStatus status = SdpStatus::Indeterminate;
  std::vector<Matrix> psd;       // primal blocks
  std::vector<double> nonneg;    // primal nonnegative block
  std::vector<double> free_vars; // primal free block
  std::vector<double> y;         // multipliers, one per input constraint
  std::vector<Matrix> dual_psd;  // dual slack blocks
  std::vector<double> dual_nonneg;
  SdpResiduals residuals;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  int iterations = 0;
  // Infeasible only: y with b^T y = 1 whose pulled-back operator A^T y is
  // negative semidefinite (PSD blocks), <= 0 (nonneg block) and zero on the
  // free block, all within tol.
  std::vector<double> farkas;
  std::string message;
  std::vector<std::string> warnings;

  bool feasible() const { return status == SdpStatus::Optimal || status == SdpStatus::FeasiblePoint; }
};

// Pulled-back operator A^T y split by block.
struct Pullback {
  std::vector<Matrix> psd;
  std::vector<double> nonneg;
  std::vector<double> free_vars;
};

Pullback pull_back(const SdpProblem& p, const std::vector<double>& y);

// Largest violation of the Farkas conditions for y (after scaling to
// b^T y = 1); returns +inf when b^T y <= 0.
double farkas_violation(const SdpProblem& p, const std::vector<double>& y);

SdpSolution sdp_solve(const SdpProblem& p, double tol = 1e-9, int max_iter = 200);

Json to_json(const SdpProblem& p);
SdpProblem sdp_problem_from_json(const Json& j);
Json to_json(const SdpSolution& s);

}  // namespace coposlab
