#include "coposlab/sos.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace coposlab {

int degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

Monomial operator+(const Monomial& a, const Monomial& b) {
  if (a.size() != b.size()) throw std::invalid_argument("monomial variable count mismatch");
  Monomial c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

std::string to_string(const Monomial& m) {
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!s.empty()) s += "*";
    s += "x" + std::to_string(i + 1);
    if (m[i] > 1) s += "^" + std::to_string(m[i]);
  }
  return s.empty() ? "1" : s;
}

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
  const int da = degree(a), db = degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

namespace {

void monomials_rec(int n, int var, int left, Monomial& cur, std::vector<Monomial>& out) {
  if (var == n - 1) {
    cur[var] = left;
    out.push_back(cur);
    return;
  }
  for (int e = left; e >= 0; --e) {
    cur[var] = e;
    monomials_rec(n, var + 1, left - e, cur, out);
  }
  cur[var] = 0;
}

}  // namespace

std::vector<Monomial> homogeneous_monomials(int n, int degree) {
  if (n < 1 || degree < 0) throw std::invalid_argument("homogeneous_monomials: bad arguments");
  std::vector<Monomial> out;
  Monomial cur(n, 0);
  monomials_rec(n, 0, degree, cur, out);
  return out;
}

GramPairs::GramPairs(std::vector<Monomial> basis) : basis_(std::move(basis)) {
  if (basis_.empty()) throw std::invalid_argument("GramPairs: empty basis");
  for (int a = 0; a < static_cast<int>(basis_.size()); ++a)
    for (int b = a; b < static_cast<int>(basis_.size()); ++b) pairs_[basis_[a] + basis_[b]].push_back({a, b});
}

void GramPairs::add_coefficient(LinearFunctional& f, int block, const Monomial& m, double scale) const {
  auto it = pairs_.find(m);
  if (it == pairs_.end()) return;
  for (const auto& [a, b] : it->second) f.psd(block, a, b, a == b ? scale : 2.0 * scale);
}

std::variant<SosAssembly, UnreachableMonomials> sos_gram_assemble(const PolyF& target, const std::vector<Monomial>& basis) {
  if (basis.empty()) throw std::invalid_argument("sos_gram_assemble: empty basis");
  const int d = degree(basis.front());
  for (const Monomial& m : basis)
    if (degree(m) != d || m.size() != basis.front().size()) throw std::invalid_argument("sos_gram_assemble: basis must be homogeneous");
  for (const auto& [m, c] : target)
    if (c != 0.0 && degree(m) != 2 * d) throw std::invalid_argument("sos_gram_assemble: target degree differs from twice the basis degree");

  GramPairs gp(basis);
  UnreachableMonomials bad;
  for (const auto& [m, c] : target)
    if (c != 0.0 && !gp.reachable(m)) bad.monomials.push_back(m);
  if (!bad.monomials.empty()) return bad;

  SosAssembly out;
  out.basis = basis;
  const int block = out.problem.add_psd_block(static_cast<int>(basis.size()));
  for (const auto& [m, prs] : gp.pairs()) {
    LinearFunctional f;
    gp.add_coefficient(f, block, m);
    auto it = target.find(m);
    out.problem.add_constraint(std::move(f), it == target.end() ? 0.0 : it->second);
    out.monomials.push_back(m);
  }
  return out;
}

PolyF gram_polynomial(const std::vector<Monomial>& basis, const Matrix& gram) {
  PolyF out;
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = 0; b < basis.size(); ++b) out[basis[a] + basis[b]] += gram(a, b);
  return out;
}

double gram_residual(const PolyF& target, const std::vector<Monomial>& basis, const Matrix& gram) {
  PolyF g = gram_polynomial(basis, gram);
  double r = 0.0;
  for (const auto& [m, c] : g) {
    auto it = target.find(m);
    r = std::max(r, std::abs(c - (it == target.end() ? 0.0 : it->second)));
  }
  for (const auto& [m, c] : target)
    if (!g.count(m)) r = std::max(r, std::abs(c));
  return r;
}

}  // namespace coposlab
