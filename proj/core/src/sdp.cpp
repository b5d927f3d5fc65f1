#include "coposlab/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace coposlab {

LinearFunctional& LinearFunctional::psd(int block, int row, int col, double value) {
  entries.push_back({BlockKind::Psd, block, row, col, value});
  return *this;
}

LinearFunctional& LinearFunctional::nonneg(int index, double value) {
  entries.push_back({BlockKind::Nonneg, 0, index, 0, value});
  return *this;
}

LinearFunctional& LinearFunctional::free_var(int index, double value) {
  entries.push_back({BlockKind::Free, 0, index, 0, value});
  return *this;
}

int SdpProblem::add_psd_block(int dim) {
  psd_block_dims.push_back(dim);
  return static_cast<int>(psd_block_dims.size()) - 1;
}

int SdpProblem::add_nonneg(int count) {
  int first = nonneg_dim;
  nonneg_dim += count;
  return first;
}

int SdpProblem::add_free(int count) {
  int first = free_dim;
  free_dim += count;
  return first;
}

void SdpProblem::add_constraint(LinearFunctional lhs, double rhs) {
  constraints.push_back({std::move(lhs), rhs});
}

namespace {

void check_functional(const SdpProblem& p, const LinearFunctional& f, const std::string& what) {
  for (const Entry& e : f.entries) {
    if (!std::isfinite(e.value)) throw std::invalid_argument(what + ": non-finite coefficient");
    switch (e.kind) {
      case BlockKind::Psd: {
        if (e.block < 0 || e.block >= static_cast<int>(p.psd_block_dims.size()))
          throw std::invalid_argument(what + ": PSD block index out of range");
        int d = p.psd_block_dims[e.block];
        if (e.row < 0 || e.col < 0 || e.row >= d || e.col >= d)
          throw std::invalid_argument(what + ": PSD entry index out of range");
        break;
      }
      case BlockKind::Nonneg:
        if (e.row < 0 || e.row >= p.nonneg_dim) throw std::invalid_argument(what + ": nonneg index out of range");
        break;
      case BlockKind::Free:
        if (e.row < 0 || e.row >= p.free_dim) throw std::invalid_argument(what + ": free index out of range");
        break;
    }
  }
}

}  // namespace

void SdpProblem::validate() const {
  int total = nonneg_dim + free_dim;
  for (int d : psd_block_dims) {
    if (d < 0) throw std::invalid_argument("SdpProblem: negative PSD block dimension");
    total += d;
  }
  if (nonneg_dim < 0 || free_dim < 0) throw std::invalid_argument("SdpProblem: negative dimension");
  if (total == 0) throw std::invalid_argument("SdpProblem: no variables");
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    check_functional(*this, constraints[i].lhs, "constraint " + std::to_string(i));
    if (!std::isfinite(constraints[i].rhs)) throw std::invalid_argument("constraint " + std::to_string(i) + ": non-finite rhs");
  }
  check_functional(*this, objective, "objective");
}

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::Optimal: return "Optimal";
    case SdpStatus::FeasiblePoint: return "FeasiblePoint";
    case SdpStatus::Infeasible: return "Infeasible";
    case SdpStatus::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

namespace {

// v*(X_rc + X_cr) for r < c, v*X_rr on the diagonal.
struct SymEntry {
  int r, c;
  double v;
};

struct Row {
  std::vector<std::vector<SymEntry>> psd;  // per internal block
  std::vector<std::pair<int, double>> nn, fr;

  double norm2() const {
    double s = 0.0;
    for (const auto& blk : psd)
      for (const SymEntry& e : blk) s += (e.r == e.c ? 1.0 : 2.0) * e.v * e.v;
    for (const auto& [i, v] : nn) s += v * v;
    for (const auto& [i, v] : fr) s += v * v;
    return s;
  }
  bool empty() const {
    for (const auto& blk : psd)
      if (!blk.empty()) return false;
    return nn.empty() && fr.empty();
  }
  void scale(double a) {
    for (auto& blk : psd)
      for (SymEntry& e : blk) e.v *= a;
    for (auto& [i, v] : nn) v *= a;
    for (auto& [i, v] : fr) v *= a;
  }
};

struct Model {
  std::vector<int> dims;             // internal (nonzero) PSD blocks
  std::vector<int> block_of_user;    // user block -> internal block or -1
  int l = 0, f = 0;
  std::vector<Row> rows;
  std::vector<double> b;
  Row c;
  std::vector<int> orig;             // internal row -> user constraint
  std::vector<double> scale;         // internal row = scale * user row
  std::vector<std::vector<int>> rows_in_block;
  std::vector<std::vector<std::pair<int, double>>> nn_cols;  // nn index -> (row, coef)
  Matrix af;                         // m x f dense
};

Row to_row(const SdpProblem& p, const Model& m, const LinearFunctional& fn) {
  Row row;
  row.psd.resize(m.dims.size());
  std::vector<std::map<std::pair<int, int>, double>> acc(m.dims.size());
  std::map<int, double> nn, fr;
  for (const Entry& e : fn.entries) {
    switch (e.kind) {
      case BlockKind::Psd: {
        int blk = m.block_of_user[e.block];
        if (blk < 0) break;
        int r = std::min(e.row, e.col), c = std::max(e.row, e.col);
        acc[blk][{r, c}] += (r == c) ? e.value : 0.5 * e.value;
        break;
      }
      case BlockKind::Nonneg: nn[e.row] += e.value; break;
      case BlockKind::Free: fr[e.row] += e.value; break;
    }
  }
  (void)p;
  for (std::size_t k = 0; k < acc.size(); ++k)
    for (const auto& [rc, v] : acc[k])
      if (v != 0.0) row.psd[k].push_back({rc.first, rc.second, v});
  for (const auto& [i, v] : nn)
    if (v != 0.0) row.nn.push_back({i, v});
  for (const auto& [i, v] : fr)
    if (v != 0.0) row.fr.push_back({i, v});
  return row;
}

// Cone-space vector: PSD blocks and nonnegative block.
struct ConeVec {
  std::vector<Matrix> psd;
  std::vector<double> nn;
};

ConeVec zeros_like(const Model& m) {
  ConeVec v;
  for (int d : m.dims) v.psd.emplace_back(d, d);
  v.nn.assign(m.l, 0.0);
  return v;
}

ConeVec identity_like(const Model& m) {
  ConeVec v;
  for (int d : m.dims) v.psd.push_back(Matrix::identity(d));
  v.nn.assign(m.l, 1.0);
  return v;
}

void axpy(double a, const ConeVec& x, ConeVec& y) {
  for (std::size_t k = 0; k < x.psd.size(); ++k) {
    auto& yd = y.psd[k].data();
    const auto& xd = x.psd[k].data();
    for (std::size_t t = 0; t < xd.size(); ++t) yd[t] += a * xd[t];
  }
  for (std::size_t t = 0; t < x.nn.size(); ++t) y.nn[t] += a * x.nn[t];
}

double inner(const ConeVec& x, const ConeVec& y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.psd.size(); ++k) {
    const auto& xd = x.psd[k].data();
    const auto& yd = y.psd[k].data();
    for (std::size_t t = 0; t < xd.size(); ++t) s += xd[t] * yd[t];
  }
  for (std::size_t t = 0; t < x.nn.size(); ++t) s += x.nn[t] * y.nn[t];
  return s;
}

double norm2(const ConeVec& x) { return inner(x, x); }

double row_dot(const Row& r, const ConeVec& x, const std::vector<double>& xf) {
  double s = 0.0;
  for (std::size_t k = 0; k < r.psd.size(); ++k) {
    const Matrix& X = x.psd[k];
    for (const SymEntry& e : r.psd[k]) s += (e.r == e.c ? 1.0 : 2.0) * e.v * X(e.r, e.c);
  }
  for (const auto& [i, v] : r.nn) s += v * x.nn[i];
  for (const auto& [i, v] : r.fr) s += v * xf[i];
  return s;
}

// Adds a * (row as a symmetric operator) to g.
void row_axpy(double a, const Row& r, ConeVec& g, std::vector<double>& gf) {
  if (a == 0.0) return;
  for (std::size_t k = 0; k < r.psd.size(); ++k) {
    Matrix& G = g.psd[k];
    for (const SymEntry& e : r.psd[k]) {
      G(e.r, e.c) += a * e.v;
      if (e.r != e.c) G(e.c, e.r) += a * e.v;
    }
  }
  for (const auto& [i, v] : r.nn) g.nn[i] += a * v;
  for (const auto& [i, v] : r.fr) gf[i] += a * v;
}

std::vector<double> apply_a(const Model& m, const ConeVec& x, const std::vector<double>& xf) {
  std::vector<double> out(m.rows.size());
  for (std::size_t i = 0; i < m.rows.size(); ++i) out[i] = row_dot(m.rows[i], x, xf);
  return out;
}

void apply_at(const Model& m, const std::vector<double>& y, ConeVec& g, std::vector<double>& gf) {
  g = zeros_like(m);
  gf.assign(m.f, 0.0);
  for (std::size_t i = 0; i < m.rows.size(); ++i) row_axpy(y[i], m.rows[i], g, gf);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm_inf(const std::vector<double>& a) {
  double s = 0.0;
  for (double x : a) s = std::max(s, std::abs(x));
  return s;
}

Matrix mul_t(const Matrix& a, const Matrix& b) {  // a^T b
  const int n = a.cols(), p = b.cols(), k = a.rows();
  Matrix c(n, p);
  for (int t = 0; t < k; ++t) {
    const double* at = a.row(t);
    const double* bt = b.row(t);
    for (int i = 0; i < n; ++i) {
      const double ai = at[i];
      if (ai == 0.0) continue;
      double* ci = c.row(i);
      for (int j = 0; j < p; ++j) ci[j] += ai * bt[j];
    }
  }
  return c;
}

Matrix sym(const Matrix& a) {
  Matrix s = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.rows(); ++j) s(i, j) = s(j, i) = 0.5 * (a(i, j) + a(j, i));
  return s;
}

// R Z R^T
Matrix sandwich(const Matrix& r, const Matrix& z) { return sym(r * z * r.transpose()); }
// R^T Z R
Matrix sandwich_t(const Matrix& r, const Matrix& z) { return sym(mul_t(r, z * r)); }

Matrix jordan(const Matrix& a, const Matrix& b) {
  Matrix ab = a * b;
  Matrix out(a.rows(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.rows(); ++j) out(i, j) = 0.5 * (ab(i, j) + ab(j, i));
  return out;
}

struct BlockScaling {
  Matrix R, Rinv, W;
  std::vector<double> lam;
};

struct Scaling {
  std::vector<BlockScaling> psd;
  std::vector<double> w, lam;  // nonnegative block
};

bool nt_scaling(const Matrix& x, const Matrix& s, BlockScaling& out) {
  const int n = x.rows();
  Matrix l = x;
  if (!cholesky_inplace(l)) return false;
  Matrix t = sym(mul_t(l, s * l));
  EigenResult e;
  try {
    e = sym_eigen(t);
  } catch (const EigenNonConvergence&) {
    return false;
  }
  for (double d : e.values)
    if (!(d > 0.0)) return false;
  Matrix q = e.vectors;
  for (int j = 0; j < n; ++j) {
    const double f = std::pow(e.values[j], -0.25);
    for (int i = 0; i < n; ++i) q(i, j) *= f;
  }
  out.R = l * q;
  out.lam.resize(n);
  for (int j = 0; j < n; ++j) out.lam[j] = std::sqrt(e.values[j]);
  Matrix rts = mul_t(out.R, s);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rts(i, j) /= out.lam[i];
  out.Rinv = std::move(rts);
  out.W = sym(out.R * out.R.transpose());
  return true;
}

// Largest step keeping diag(lam) + a * delta PSD.
double max_step_psd(const std::vector<double>& lam, const Matrix& delta) {
  const int n = delta.rows();
  Matrix t(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t(i, j) = delta(i, j) / std::sqrt(lam[i] * lam[j]);
  double e = sym_eigenvalues(sym(t)).front();
  return e >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / e;
}

struct Direction {
  ConeVec dx, ds;
  std::vector<double> dxf, dy;
  double dtau = 0.0, dkappa = 0.0;
};

class Solver {
 public:
  Solver(const Model& m, double tol, int max_iter) : m_(m), tol_(tol), max_iter_(max_iter) {}

  SdpSolution run();

 private:
  bool build_scaling();
  bool factor_system();
  std::vector<double> solve_reduced(const std::vector<double>& rhs) const;
  Direction newton(double eta, const std::vector<Matrix>& u_psd, const std::vector<double>& u_nn, double rtk);
  double max_step(const Direction& d) const;

  const Model& m_;
  double tol_;
  int max_iter_;
  int mm_ = 0;  // rows

  ConeVec x_, s_;
  std::vector<double> xf_, y_;
  double tau_ = 1.0, kappa_ = 1.0;

  // Per-iteration data.
  std::vector<double> rp_, rdf_;
  ConeVec rd_;
  double rg_ = 0.0;
  Scaling sc_;
  Matrix kkt_;  // M or augmented [M AF; AF^T 0]
  bool use_chol_ = true;
  Matrix chol_;
  LuFactor lu_;
  std::vector<double> g_;  // A_K W c_K
  ConeVec wc_;             // W c_K
  double cwc_ = 0.0;
  ConeVec ck_;
  std::vector<double> cf_;
};

bool Solver::build_scaling() {
  sc_.psd.resize(m_.dims.size());
  for (std::size_t k = 0; k < m_.dims.size(); ++k)
    if (!nt_scaling(x_.psd[k], s_.psd[k], sc_.psd[k])) return false;
  sc_.w.resize(m_.l);
  sc_.lam.resize(m_.l);
  for (int t = 0; t < m_.l; ++t) {
    if (!(x_.nn[t] > 0.0 && s_.nn[t] > 0.0)) return false;
    sc_.w[t] = std::sqrt(x_.nn[t] / s_.nn[t]);
    sc_.lam[t] = std::sqrt(x_.nn[t] * s_.nn[t]);
  }
  return true;
}

// W z W for PSD blocks, w^2 z for the nonnegative block.
ConeVec apply_w2(const Model& m, const Scaling& sc, const ConeVec& z) {
  ConeVec out;
  for (std::size_t k = 0; k < m.dims.size(); ++k) out.psd.push_back(sandwich(sc.psd[k].W, z.psd[k]));
  out.nn.resize(m.l);
  for (int t = 0; t < m.l; ++t) out.nn[t] = sc.w[t] * sc.w[t] * z.nn[t];
  return out;
}

bool Solver::factor_system() {
  const int m = mm_, f = m_.f;
  Matrix M(m, m);
  // PSD contributions: M_ij += <A_i, W A_j W>.
  for (std::size_t k = 0; k < m_.dims.size(); ++k) {
    const int n = m_.dims[k];
    const Matrix& W = sc_.psd[k].W;
    const auto& list = m_.rows_in_block[k];
    Matrix g(n, n);
    for (std::size_t pj = 0; pj < list.size(); ++pj) {
      const int j = list[pj];
      const auto& ej = m_.rows[j].psd[k];
      std::fill(g.data().begin(), g.data().end(), 0.0);
      if (static_cast<int>(ej.size()) * 2 <= n) {
        for (const SymEntry& e : ej) {
          const double* wr = W.row(e.r);
          const double* wc = W.row(e.c);
          for (int a = 0; a < n; ++a) {
            double* ga = g.row(a);
            if (e.r == e.c) {
              const double fa = e.v * wr[a];
              for (int bb = 0; bb < n; ++bb) ga[bb] += fa * wr[bb];
            } else {
              const double fr = e.v * wr[a], fc = e.v * wc[a];
              for (int bb = 0; bb < n; ++bb) ga[bb] += fr * wc[bb] + fc * wr[bb];
            }
          }
        }
      } else {
        Matrix a(n, n);
        for (const SymEntry& e : ej) {
          a(e.r, e.c) += e.v;
          if (e.r != e.c) a(e.c, e.r) += e.v;
        }
        g = W * a * W;
      }
      for (std::size_t pi = pj; pi < list.size(); ++pi) {
        const int i = list[pi];
        double s = 0.0;
        for (const SymEntry& e : m_.rows[i].psd[k]) s += (e.r == e.c ? e.v * g(e.r, e.r) : 2.0 * e.v * g(e.r, e.c));
        M(std::max(i, j), std::min(i, j)) += s;
      }
    }
  }
  for (int t = 0; t < m_.l; ++t) {
    const double w2 = sc_.w[t] * sc_.w[t];
    const auto& col = m_.nn_cols[t];
    for (std::size_t p = 0; p < col.size(); ++p)
      for (std::size_t q = p; q < col.size(); ++q) {
        int i = col[p].first, j = col[q].first;
        M(std::max(i, j), std::min(i, j)) += col[p].second * col[q].second * w2;
      }
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) M(i, j) = M(j, i);

  if (f == 0) {
    kkt_ = M;
    double reg = 0.0, diag = 0.0;
    for (int i = 0; i < m; ++i) diag = std::max(diag, M(i, i));
    for (int attempt = 0; attempt < 8; ++attempt) {
      chol_ = M;
      for (int i = 0; i < m; ++i) chol_(i, i) += reg;
      if (cholesky_inplace(chol_)) {
        use_chol_ = true;
        return true;
      }
      reg = reg == 0.0 ? 1e-14 * (1.0 + diag) : reg * 100.0;
    }
    return false;
  }
  Matrix k(m + f, m + f);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) k(i, j) = M(i, j);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < f; ++j) k(i, m + j) = k(m + j, i) = m_.af(i, j);
  kkt_ = k;
  use_chol_ = false;
  if (lu_factor(k, lu_)) return true;
  // Tiny primal-dual regularization as a fallback.
  double diag = 0.0;
  for (int i = 0; i < m; ++i) diag = std::max(diag, M(i, i));
  for (int i = 0; i < m; ++i) k(i, i) += 1e-13 * (1.0 + diag);
  for (int j = 0; j < f; ++j) k(m + j, m + j) -= 1e-13 * (1.0 + diag);
  return lu_factor(k, lu_);
}

std::vector<double> Solver::solve_reduced(const std::vector<double>& rhs) const {
  auto solve_once = [&](std::vector<double> r) {
    if (use_chol_) cholesky_solve(chol_, r);
    else lu_solve(lu_, r);
    return r;
  };
  std::vector<double> z = solve_once(rhs);
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<double> res = kkt_ * z;
    for (std::size_t i = 0; i < res.size(); ++i) res[i] = rhs[i] - res[i];
    std::vector<double> corr = solve_once(res);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += corr[i];
  }
  return z;
}

Direction Solver::newton(double eta, const std::vector<Matrix>& u_psd, const std::vector<double>& u_nn, double rtk) {
  const int m = mm_, f = m_.f;
  // p = W^{-1} u + eta * W r_dK W
  ConeVec p;
  ConeVec wrd = apply_w2(m_, sc_, rd_);
  for (std::size_t k = 0; k < m_.dims.size(); ++k) {
    Matrix pk = sandwich(sc_.psd[k].R, u_psd[k]);
    const auto& wd = wrd.psd[k].data();
    auto& pd = pk.data();
    for (std::size_t t = 0; t < pd.size(); ++t) pd[t] += eta * wd[t];
    p.psd.push_back(std::move(pk));
  }
  p.nn.resize(m_.l);
  for (int t = 0; t < m_.l; ++t) p.nn[t] = sc_.w[t] * u_nn[t] + eta * wrd.nn[t];

  std::vector<double> zero_f(f, 0.0);
  std::vector<double> ap = apply_a(m_, p, zero_f);
  std::vector<double> rhs1(m + f), rhs2(m + f);
  for (int i = 0; i < m; ++i) {
    rhs1[i] = eta * rp_[i] - ap[i];
    rhs2[i] = m_.b[i] + g_[i];
  }
  for (int j = 0; j < f; ++j) {
    rhs1[m + j] = -eta * rdf_[j];
    rhs2[m + j] = cf_[j];
  }
  std::vector<double> z1 = solve_reduced(rhs1);
  std::vector<double> z2 = solve_reduced(rhs2);

  double num = -eta * rg_ - inner(ck_, p) - rtk / tau_;
  for (int i = 0; i < m; ++i) num += (m_.b[i] - g_[i]) * z1[i];
  for (int j = 0; j < f; ++j) num -= cf_[j] * z1[m + j];
  // The denominator equals -(|c_K - A_K^T z2_y|_W^2 + kappa / tau). Summing
  // squares avoids the cancellation in c^T W c - g^T z2 near the optimum.
  ConeVec rc;
  std::vector<double> rcf;
  apply_at(m_, std::vector<double>(z2.begin(), z2.begin() + m), rc, rcf);
  double den = kappa_ / tau_;
  for (std::size_t k = 0; k < m_.dims.size(); ++k) {
    Matrix r = ck_.psd[k];
    auto& rd = r.data();
    const auto& ad = rc.psd[k].data();
    for (std::size_t t = 0; t < rd.size(); ++t) rd[t] -= ad[t];
    const Matrix scaled = sandwich_t(sc_.psd[k].R, r);
    for (double v : scaled.data()) den += v * v;
  }
  for (int t = 0; t < m_.l; ++t) {
    const double v = sc_.w[t] * (ck_.nn[t] - rc.nn[t]);
    den += v * v;
  }
  den = -den;
  Direction d;
  d.dtau = num / den;
  d.dy.resize(m);
  d.dxf.resize(f);
  for (int i = 0; i < m; ++i) d.dy[i] = z1[i] + d.dtau * z2[i];
  for (int j = 0; j < f; ++j) d.dxf[j] = z1[m + j] + d.dtau * z2[m + j];

  // ds_K = -eta r_dK - A_K^T dy + c_K dtau
  std::vector<double> gf;
  apply_at(m_, d.dy, d.ds, gf);
  for (std::size_t k = 0; k < m_.dims.size(); ++k) {
    auto& sd = d.ds.psd[k].data();
    const auto& rdd = rd_.psd[k].data();
    const auto& cd = ck_.psd[k].data();
    for (std::size_t t = 0; t < sd.size(); ++t) sd[t] = -eta * rdd[t] - sd[t] + cd[t] * d.dtau;
  }
  for (int t = 0; t < m_.l; ++t) d.ds.nn[t] = -eta * rd_.nn[t] - d.ds.nn[t] + ck_.nn[t] * d.dtau;

  // dx_K = W^{-1} u - W ds_K W
  ConeVec wds = apply_w2(m_, sc_, d.ds);
  d.dx = zeros_like(m_);
  for (std::size_t k = 0; k < m_.dims.size(); ++k) {
    Matrix a = sandwich(sc_.psd[k].R, u_psd[k]);
    auto& ad = a.data();
    const auto& wd = wds.psd[k].data();
    for (std::size_t t = 0; t < ad.size(); ++t) ad[t] -= wd[t];
    d.dx.psd[k] = std::move(a);
  }
  for (int t = 0; t < m_.l; ++t) d.dx.nn[t] = sc_.w[t] * u_nn[t] - wds.nn[t];
  d.dkappa = (rtk - kappa_ * d.dtau) / tau_;
  return d;
}

double Solver::max_step(const Direction& d) const {
  double a = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < m_.dims.size(); ++k) {
    const BlockScaling& b = sc_.psd[k];
    a = std::min(a, max_step_psd(b.lam, sandwich(b.Rinv, d.dx.psd[k])));
    a = std::min(a, max_step_psd(b.lam, sandwich_t(b.R, d.ds.psd[k])));
  }
  for (int t = 0; t < m_.l; ++t) {
    if (d.dx.nn[t] < 0.0) a = std::min(a, -x_.nn[t] / d.dx.nn[t]);
    if (d.ds.nn[t] < 0.0) a = std::min(a, -s_.nn[t] / d.ds.nn[t]);
  }
  if (d.dtau < 0.0) a = std::min(a, -tau_ / d.dtau);
  if (d.dkappa < 0.0) a = std::min(a, -kappa_ / d.dkappa);
  return a;
}

SdpSolution Solver::run() {
  SdpSolution sol;
  mm_ = static_cast<int>(m_.rows.size());
  const int m = mm_, f = m_.f;
  double nu = m_.l;
  for (int d : m_.dims) nu += d;

  x_ = identity_like(m_);
  s_ = identity_like(m_);
  xf_.assign(f, 0.0);
  y_.assign(m, 0.0);
  tau_ = kappa_ = 1.0;

  ck_ = zeros_like(m_);
  cf_.assign(f, 0.0);
  row_axpy(1.0, m_.c, ck_, cf_);
  const double c_norm = std::sqrt(norm2(ck_) + dot(cf_, cf_));
  const bool feasibility_only = c_norm == 0.0;
  double b_inf = norm_inf(m_.b);
  (void)b_inf;

  int stall = 0;
  double prev_mu = std::numeric_limits<double>::infinity();
  for (int it = 0; it <= max_iter_; ++it) {
    sol.iterations = it;
    // Residuals.
    std::vector<double> ax = apply_a(m_, x_, xf_);
    rp_.resize(m);
    double pres = 0.0;
    for (int i = 0; i < m; ++i) {
      rp_[i] = m_.b[i] * tau_ - ax[i];
      pres = std::max(pres, std::abs(rp_[i]) / (tau_ * (1.0 + std::abs(m_.b[i]))));
    }
    ConeVec aty;
    std::vector<double> atyf;
    apply_at(m_, y_, aty, atyf);
    rd_ = aty;
    axpy(1.0, s_, rd_);
    axpy(-tau_, ck_, rd_);
    rdf_.resize(f);
    for (int j = 0; j < f; ++j) rdf_[j] = atyf[j] - tau_ * cf_[j];
    const double rd_norm = std::sqrt(norm2(rd_) + dot(rdf_, rdf_));
    const double dres = rd_norm / (tau_ * (1.0 + c_norm));
    const double cx = inner(ck_, x_) + dot(cf_, xf_);
    const double by = dot(m_.b, y_);
    rg_ = cx - by + kappa_;
    const double pobj = cx / tau_, dobj = by / tau_;
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
    const double mu = (inner(x_, s_) + tau_ * kappa_) / (nu + 1.0);

    sol.residuals = {pres, dres, gap};
    sol.primal_objective = pobj;
    sol.dual_objective = dobj;

    if (feasibility_only && pres <= tol_) {
      sol.status = SdpStatus::FeasiblePoint;
      break;
    }
    if (!feasibility_only && pres <= tol_ && dres <= tol_ && gap <= tol_) {
      sol.status = SdpStatus::Optimal;
      break;
    }
    if (by > 0.0) {
      ConeVec ray = aty;
      axpy(1.0, s_, ray);
      const double viol = std::sqrt(norm2(ray) + dot(atyf, atyf)) / by;
      if (viol <= tol_) {
        sol.status = SdpStatus::Infeasible;
        sol.farkas = y_;
        for (double& v : sol.farkas) v /= by;
        break;
      }
    }
    if (cx < 0.0) {
      const double viol = norm_inf(ax) / (-cx);
      if (viol <= tol_) {
        sol.status = SdpStatus::Indeterminate;
        sol.message = "dual infeasible: the objective is unbounded below";
        break;
      }
    }
    if (it == max_iter_) {
      sol.message = "iteration limit reached";
      break;
    }
    if (!std::isfinite(mu) || !build_scaling()) {
      sol.message = "numerical failure: iterate left the cone interior";
      break;
    }
    if (!factor_system()) {
      sol.message = "numerical failure: singular Newton system";
      break;
    }
    // Per-iteration objective quantities.
    wc_ = apply_w2(m_, sc_, ck_);
    std::vector<double> zero_f(f, 0.0);
    g_ = apply_a(m_, wc_, zero_f);
    cwc_ = inner(ck_, wc_);

    // Predictor.
    std::vector<Matrix> u_psd;
    for (const BlockScaling& b : sc_.psd) {
      Matrix u(static_cast<int>(b.lam.size()), static_cast<int>(b.lam.size()));
      for (std::size_t i = 0; i < b.lam.size(); ++i) u(i, i) = -b.lam[i];
      u_psd.push_back(std::move(u));
    }
    std::vector<double> u_nn(m_.l);
    for (int t = 0; t < m_.l; ++t) u_nn[t] = -sc_.lam[t];
    Direction aff = newton(1.0, u_psd, u_nn, -tau_ * kappa_);
    const double a_aff = std::min(1.0, max_step(aff));
    const double sigma = std::clamp(std::pow(1.0 - a_aff, 3.0), 0.0, 1.0);

    // Corrector.
    for (std::size_t k = 0; k < m_.dims.size(); ++k) {
      const BlockScaling& b = sc_.psd[k];
      const int n = static_cast<int>(b.lam.size());
      Matrix dxs = sandwich(b.Rinv, aff.dx.psd[k]);
      Matrix dss = sandwich_t(b.R, aff.ds.psd[k]);
      Matrix corr = jordan(dxs, dss);
      Matrix u(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double rc = -corr(i, j);
          if (i == j) rc += sigma * mu - b.lam[i] * b.lam[i];
          u(i, j) = 2.0 * rc / (b.lam[i] + b.lam[j]);
        }
      u_psd[k] = std::move(u);
    }
    for (int t = 0; t < m_.l; ++t) {
      const double dxs = aff.dx.nn[t] / sc_.w[t];
      const double dss = aff.ds.nn[t] * sc_.w[t];
      const double rc = sigma * mu - sc_.lam[t] * sc_.lam[t] - dxs * dss;
      u_nn[t] = rc / sc_.lam[t];
    }
    const double rtk = sigma * mu - tau_ * kappa_ - aff.dtau * aff.dkappa;
    Direction d = newton(1.0 - sigma, u_psd, u_nn, rtk);
    const double alpha = std::min(1.0, 0.99 * max_step(d));
    if (!(alpha > 1e-12)) {
      sol.message = "numerical failure: step length collapsed";
      break;
    }
    axpy(alpha, d.dx, x_);
    axpy(alpha, d.ds, s_);
    for (int j = 0; j < f; ++j) xf_[j] += alpha * d.dxf[j];
    for (int i = 0; i < m; ++i) y_[i] += alpha * d.dy[i];
    tau_ += alpha * d.dtau;
    kappa_ += alpha * d.dkappa;
    for (auto& X : x_.psd) X = sym(X);
    for (auto& S : s_.psd) S = sym(S);

    if (mu >= 0.999 * prev_mu) {
      if (++stall >= 20) {
        sol.message = "numerical failure: no progress";
        break;
      }
    } else {
      stall = 0;
    }
    prev_mu = mu;
  }

  // Unscaled primal/dual values.
  const double inv_tau = 1.0 / tau_;
  for (const Matrix& X : x_.psd) {
    Matrix a = X;
    for (double& v : a.data()) v *= inv_tau;
    sol.psd.push_back(std::move(a));
  }
  sol.nonneg = x_.nn;
  for (double& v : sol.nonneg) v *= inv_tau;
  sol.free_vars = xf_;
  for (double& v : sol.free_vars) v *= inv_tau;
  for (const Matrix& S : s_.psd) {
    Matrix a = S;
    for (double& v : a.data()) v *= inv_tau;
    sol.dual_psd.push_back(std::move(a));
  }
  sol.dual_nonneg = s_.nn;
  for (double& v : sol.dual_nonneg) v *= inv_tau;
  sol.y = y_;
  for (double& v : sol.y) v *= inv_tau;
  return sol;
}

Model build_model(const SdpProblem& p) {
  Model m;
  m.block_of_user.assign(p.psd_block_dims.size(), -1);
  for (std::size_t k = 0; k < p.psd_block_dims.size(); ++k) {
    if (p.psd_block_dims[k] > 0) {
      m.block_of_user[k] = static_cast<int>(m.dims.size());
      m.dims.push_back(p.psd_block_dims[k]);
    }
  }
  m.l = p.nonneg_dim;
  m.f = p.free_dim;
  m.c = to_row(p, m, p.objective);
  return m;
}

void index_model(Model& m) {
  const int rows = static_cast<int>(m.rows.size());
  m.rows_in_block.assign(m.dims.size(), {});
  m.nn_cols.assign(m.l, {});
  m.af = Matrix(rows, m.f);
  for (int i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < m.dims.size(); ++k)
      if (!m.rows[i].psd[k].empty()) m.rows_in_block[k].push_back(i);
    for (const auto& [t, v] : m.rows[i].nn) m.nn_cols[t].push_back({i, v});
    for (const auto& [t, v] : m.rows[i].fr) m.af(i, t) = v;
  }
}

// Sparse Gram matrix A A^T under the trace inner product.
Matrix row_gram(const Model& m, const std::vector<Row>& rows) {
  const int n = static_cast<int>(rows.size());
  std::unordered_map<long long, std::vector<std::pair<int, double>>> cols;
  auto key = [](int kind, long long blk, long long a, long long b) {
    return (((static_cast<long long>(kind) * 1024 + blk) * 1000003LL + a) * 1000003LL) + b;
  };
  for (int i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < rows[i].psd.size(); ++k)
      for (const SymEntry& e : rows[i].psd[k])
        cols[key(0, static_cast<long long>(k), e.r, e.c)].push_back({i, (e.r == e.c ? 1.0 : std::sqrt(2.0)) * e.v});
    for (const auto& [t, v] : rows[i].nn) cols[key(1, 0, t, 0)].push_back({i, v});
    for (const auto& [t, v] : rows[i].fr) cols[key(2, 0, t, 0)].push_back({i, v});
  }
  (void)m;
  Matrix g(n, n);
  for (const auto& [k, col] : cols)
    for (const auto& [i, vi] : col)
      for (const auto& [j, vj] : col) g(i, j) += vi * vj;
  return g;
}

}  // namespace

Pullback pull_back(const SdpProblem& p, const std::vector<double>& y) {
  if (y.size() != p.constraints.size()) throw std::invalid_argument("pull_back: multiplier count mismatch");
  Pullback out;
  for (int d : p.psd_block_dims) out.psd.emplace_back(d, d);
  out.nonneg.assign(p.nonneg_dim, 0.0);
  out.free_vars.assign(p.free_dim, 0.0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (const Entry& e : p.constraints[i].lhs.entries) {
      const double v = y[i] * e.value;
      switch (e.kind) {
        case BlockKind::Psd:
          if (e.row == e.col) {
            out.psd[e.block](e.row, e.col) += v;
          } else {
            out.psd[e.block](e.row, e.col) += 0.5 * v;
            out.psd[e.block](e.col, e.row) += 0.5 * v;
          }
          break;
        case BlockKind::Nonneg: out.nonneg[e.row] += v; break;
        case BlockKind::Free: out.free_vars[e.row] += v; break;
      }
    }
  }
  return out;
}

double farkas_violation(const SdpProblem& p, const std::vector<double>& y) {
  if (y.size() != p.constraints.size()) return std::numeric_limits<double>::infinity();
  double by = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) by += y[i] * p.constraints[i].rhs;
  if (!(by > 0.0)) return std::numeric_limits<double>::infinity();
  std::vector<double> yn = y;
  for (double& v : yn) v /= by;
  Pullback g = pull_back(p, yn);
  double viol = 0.0;
  for (const Matrix& blk : g.psd)
    if (blk.rows() > 0) viol = std::max(viol, sym_eigenvalues(blk).back());
  for (double v : g.nonneg) viol = std::max(viol, v);
  for (double v : g.free_vars) viol = std::max(viol, std::abs(v));
  return viol;
}

SdpSolution sdp_solve(const SdpProblem& p, double tol, int max_iter) {
  if (!(tol > 0.0 && tol <= 1e-4)) throw std::invalid_argument("sdp_solve: tol must lie in (0, 1e-4]");
  if (max_iter < 1) throw std::invalid_argument("sdp_solve: max_iter must be positive");
  p.validate();

  Model model = build_model(p);
  SdpSolution early;
  const int user_rows = static_cast<int>(p.constraints.size());
  auto blank_solution = [&](SdpStatus st) {
    SdpSolution s;
    s.status = st;
    s.y.assign(user_rows, 0.0);
    return s;
  };

  // Presolve: drop empty rows, equilibrate, remove dependent rows.
  std::vector<Row> rows;
  std::vector<double> b;
  std::vector<int> orig;
  std::vector<double> scale;
  std::vector<std::string> warnings;
  for (int i = 0; i < user_rows; ++i) {
    Row r = to_row(p, model, p.constraints[i].lhs);
    const double rhs = p.constraints[i].rhs;
    if (r.empty()) {
      if (rhs != 0.0) {
        SdpSolution s = blank_solution(SdpStatus::Infeasible);
        s.farkas.assign(user_rows, 0.0);
        s.farkas[i] = 1.0 / rhs;
        s.message = "presolve: constraint " + std::to_string(i) + " reads 0 = " + std::to_string(rhs);
        return s;
      }
      warnings.push_back("presolve: empty constraint " + std::to_string(i) + " dropped");
      continue;
    }
    const double nrm = std::sqrt(r.norm2());
    r.scale(1.0 / nrm);
    rows.push_back(std::move(r));
    b.push_back(rhs / nrm);
    orig.push_back(i);
    scale.push_back(1.0 / nrm);
  }

  if (!rows.empty()) {
    Matrix gram = row_gram(model, rows);
    std::vector<int> keep = independent_rows_by_gram(gram, 1e-20);
    if (keep.size() < rows.size()) {
      const int nk = static_cast<int>(keep.size());
      Matrix gkk(nk, nk);
      for (int a = 0; a < nk; ++a)
        for (int c = 0; c < nk; ++c) gkk(a, c) = gram(keep[a], keep[c]);
      Matrix lk = gkk;
      if (!cholesky_inplace(lk)) throw std::runtime_error("presolve: independent row Gram not positive definite");
      std::vector<bool> kept(rows.size(), false);
      for (int k : keep) kept[k] = true;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (kept[i]) continue;
        std::vector<double> lam(nk);
        for (int a = 0; a < nk; ++a) lam[a] = gram(keep[a], static_cast<int>(i));
        cholesky_solve(lk, lam);
        double pred = 0.0, lam_norm = 0.0;
        for (int a = 0; a < nk; ++a) {
          pred += lam[a] * b[keep[a]];
          lam_norm = std::max(lam_norm, std::abs(lam[a]));
        }
        const double resid = b[i] - pred;
        if (std::abs(resid) > 1e-9 * (1.0 + std::abs(b[i]) + lam_norm * norm_inf(b))) {
          SdpSolution s = blank_solution(SdpStatus::Infeasible);
          s.farkas.assign(user_rows, 0.0);
          const double sgn = resid > 0 ? 1.0 : -1.0;
          s.farkas[orig[i]] += sgn * scale[i];
          for (int a = 0; a < nk; ++a) s.farkas[orig[keep[a]]] -= sgn * lam[a] * scale[keep[a]];
          double by = 0.0;
          for (int r = 0; r < user_rows; ++r) by += s.farkas[r] * p.constraints[r].rhs;
          for (double& v : s.farkas) v /= by;
          s.message = "presolve: constraint " + std::to_string(orig[i]) + " contradicts a combination of the others";
          s.warnings = warnings;
          return s;
        }
        warnings.push_back("presolve: dependent constraint " + std::to_string(orig[i]) + " dropped");
      }
      std::vector<Row> r2;
      std::vector<double> b2, s2;
      std::vector<int> o2;
      for (int k : keep) {
        r2.push_back(std::move(rows[k]));
        b2.push_back(b[k]);
        o2.push_back(orig[k]);
        s2.push_back(scale[k]);
      }
      rows = std::move(r2);
      b = std::move(b2);
      orig = std::move(o2);
      scale = std::move(s2);
    }
  }
  model.rows = std::move(rows);
  model.b = std::move(b);
  model.orig = std::move(orig);
  model.scale = std::move(scale);
  index_model(model);

  Solver solver(model, tol, max_iter);
  SdpSolution internal = solver.run();

  SdpSolution sol;
  sol.status = internal.status;
  sol.iterations = internal.iterations;
  sol.message = internal.message;
  sol.warnings = warnings;
  sol.residuals = internal.residuals;
  sol.primal_objective = internal.primal_objective;
  sol.dual_objective = internal.dual_objective;
  // Re-expand elided blocks.
  for (std::size_t k = 0; k < p.psd_block_dims.size(); ++k) {
    int blk = model.block_of_user[k];
    if (blk < 0) {
      sol.psd.emplace_back(0, 0);
      sol.dual_psd.emplace_back(0, 0);
    } else {
      sol.psd.push_back(internal.psd[blk]);
      sol.dual_psd.push_back(internal.dual_psd[blk]);
    }
  }
  sol.nonneg = internal.nonneg;
  sol.free_vars = internal.free_vars;
  sol.dual_nonneg = internal.dual_nonneg;
  sol.y.assign(user_rows, 0.0);
  for (std::size_t i = 0; i < model.orig.size(); ++i) sol.y[model.orig[i]] = internal.y[i] * model.scale[i];
  if (sol.status == SdpStatus::Infeasible) {
    sol.farkas.assign(user_rows, 0.0);
    for (std::size_t i = 0; i < model.orig.size(); ++i) sol.farkas[model.orig[i]] = internal.farkas[i] * model.scale[i];
  }
  return sol;
}

Json to_json(const SdpProblem& p) {
  auto functional = [](const LinearFunctional& f) {
    Json arr = Json::array();
    for (const Entry& e : f.entries) {
      const char* kind = e.kind == BlockKind::Psd ? "psd" : (e.kind == BlockKind::Nonneg ? "nonneg" : "free");
      arr.push_back(Json{{"kind", kind}, {"block", e.block}, {"row", e.row}, {"col", e.col}, {"value", e.value}});
    }
    return arr;
  };
  Json cons = Json::array();
  for (const Constraint& c : p.constraints) cons.push_back(Json{{"lhs", functional(c.lhs)}, {"rhs", c.rhs}});
  return Json{{"psd_block_dims", p.psd_block_dims},
              {"nonneg_dim", p.nonneg_dim},
              {"free_dim", p.free_dim},
              {"constraints", cons},
              {"objective", functional(p.objective)}};
}

SdpProblem sdp_problem_from_json(const Json& j) {
  SdpProblem p;
  p.psd_block_dims = j.at("psd_block_dims").get<std::vector<int>>();
  p.nonneg_dim = j.value("nonneg_dim", 0);
  p.free_dim = j.value("free_dim", 0);
  auto functional = [](const Json& arr) {
    LinearFunctional f;
    for (const Json& e : arr) {
      const std::string kind = e.at("kind").get<std::string>();
      Entry en;
      if (kind == "psd") en.kind = BlockKind::Psd;
      else if (kind == "nonneg") en.kind = BlockKind::Nonneg;
      else if (kind == "free") en.kind = BlockKind::Free;
      else throw std::invalid_argument("unknown entry kind: " + kind);
      en.block = e.value("block", 0);
      en.row = e.at("row").get<int>();
      en.col = e.value("col", 0);
      en.value = e.at("value").get<double>();
      f.entries.push_back(en);
    }
    return f;
  };
  for (const Json& c : j.at("constraints")) p.add_constraint(functional(c.at("lhs")), c.at("rhs").get<double>());
  if (j.contains("objective")) p.objective = functional(j["objective"]);
  p.validate();
  return p;
}

Json to_json(const SdpSolution& s) {
  Json blocks = Json::array();
  for (const Matrix& m : s.psd) {
    Json rows = Json::array();
    for (int i = 0; i < m.rows(); ++i) rows.push_back(std::vector<double>(m.row(i), m.row(i) + m.cols()));
    blocks.push_back(rows);
  }
  Json out{{"status", to_string(s.status)},
           {"iterations", s.iterations},
           {"residuals", {{"primal", s.residuals.primal_res}, {"dual", s.residuals.dual_res}, {"gap", s.residuals.gap}}},
           {"primal_objective", s.primal_objective},
           {"dual_objective", s.dual_objective},
           {"psd", blocks},
           {"nonneg", s.nonneg},
           {"free", s.free_vars},
           {"y", s.y}};
  if (!s.farkas.empty()) out["farkas"] = s.farkas;
  if (!s.message.empty()) out["message"] = s.message;
  if (!s.warnings.empty()) out["warnings"] = s.warnings;
  return out;
}

}  // namespace coposlab

