#include "coposlab/volume.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace coposlab {

namespace {

// Radii beyond this mean the section is unbounded along the ray.
constexpr double kMaxRadius = 1e6;

const char* const kConeNames[] = {"nn", "psd", "dnn", "spn", "cop", "cp", "lf", "ball"};
const char* const kModeNames[] = {"exact", "inner", "outer"};

double diff_pairing(const SymMatrixF& a, const SymMatrixF& b) {
  double s = 0;
  for (int k = 0; k < a.n(); ++k) {
    s += 24 * a(k, k) * b(k, k);
    for (int l = k + 1; l < a.n(); ++l) s += 16 * a(k, l) * b(k, l);
  }
  return s;
}

// Variable t at free index 0, capped by a slack so the program stays bounded.
int add_bounded_t(SdpProblem& p) {
  const int t = p.add_free(1);
  const int s = p.add_nonneg(1);
  LinearFunctional cap;
  cap.free_var(t, 1.0).nonneg(s, 1.0);
  p.add_constraint(std::move(cap), kMaxRadius);
  p.objective.free_var(t, -1.0);
  return t;
}

double solved_t(const SdpProblem& p, int t, double tol, const char* what) {
  SdpSolution s = sdp_solve(p, tol);
  if (s.status == SdpStatus::Infeasible) throw std::logic_error(std::string(what) + ": star center is outside the section");
  if (!s.feasible()) indeterminate(what, s);
  const double v = s.free_vars[t];
  if (v >= kMaxRadius * (1 - 1e-6)) throw std::runtime_error(std::string(what) + ": no boundary within radius 1e6");
  return std::max(0.0, v);
}

bool dnn(const SymMatrixF& a, double tol) { return membership_basic(a, ConeTag::DNN, tol).member; }

}  // namespace

std::string to_string(SectionCone c) { return kConeNames[static_cast<int>(c)]; }
std::string to_string(OracleMode m) { return kModeNames[static_cast<int>(m)]; }

SectionCone section_cone_from_string(const std::string& s) {
  for (int i = 0; i < 8; ++i)
    if (s == kConeNames[i]) return static_cast<SectionCone>(i);
  throw std::invalid_argument("unknown cone '" + s + "'");
}

OracleMode oracle_mode_from_string(const std::string& s) {
  for (int i = 0; i < 3; ++i)
    if (s == kModeNames[i]) return static_cast<OracleMode>(i);
  throw std::invalid_argument("unknown oracle mode '" + s + "'");
}

void validate_spec(const SectionSpec& spec) {
  if (spec.n < 3) throw std::invalid_argument("sections need n >= 3");
  if (!(spec.oracle_tol > 0)) throw std::invalid_argument("oracle_tol must be positive");
  const std::string what = to_string(spec.cone) + "/" + to_string(spec.mode) + " at n = " + std::to_string(spec.n);
  switch (spec.cone) {
    case SectionCone::NN:
    case SectionCone::PSD:
    case SectionCone::DNN:
    case SectionCone::SPN:
    case SectionCone::Ball:
      if (spec.mode != OracleMode::Exact) throw std::invalid_argument(what + ": this cone only has an exact oracle");
      break;
    case SectionCone::COP:
    case SectionCone::CP:
      if (spec.mode == OracleMode::Exact && spec.n > 4)
        throw std::invalid_argument(what + ": no exact oracle beyond n = 4; use inner or outer");
      if (spec.cone == SectionCone::COP && spec.mode == OracleMode::Inner && (spec.parrilo_r < 0 || spec.parrilo_r > 2))
        throw std::invalid_argument(what + ": Parrilo level must be 0, 1 or 2");
      break;
    case SectionCone::LF:
      if (spec.mode == OracleMode::Exact) throw std::invalid_argument(what + ": no exact oracle; use inner or outer");
      if (spec.n > 7) throw std::invalid_argument(what + ": permutation-closed generator sets are too large beyond n = 7");
      if (spec.lf_generators < 1) throw std::invalid_argument(what + ": need at least one generator");
      break;
  }
  if (spec.cone == SectionCone::Ball && !(spec.ball_radius > 0)) throw std::invalid_argument("ball radius must be positive");
}

EvenQuarticF default_center_quartic(int n) {
  SymMatrixF a = SymMatrixF::ones(n);
  a *= 1.0 / n;
  a += SymMatrixF::identity(n);
  // The sphere average of q_{I+J/n} is (4n+2)/(n(n+2)).
  a *= static_cast<double>(n * (n + 2)) / (4 * n + 2);
  return EvenQuarticF{a};
}

Section::Section(SectionSpec spec) : spec_(std::move(spec)) {
  validate_spec(spec_);
  const int n = spec_.n;
  basis_ = basis_M(n);

  if (spec_.cone == SectionCone::LF) {
    std::mt19937_64 rng(spec_.lf_seed);
    std::normal_distribution<double> normal;
    long orbit = 1;
    for (int i = 2; i <= n; ++i) orbit *= i;
    const long bases = (spec_.lf_generators + orbit - 1) / orbit;
    const double scale = n * (n + 2) / 3.0;  // unit v gives sphere average 3/(n(n+2))
    SymMatrixF mean(n);
    for (long b = 0; b < bases; ++b) {
      std::vector<double> v(n);
      double norm = 0;
      for (auto& x : v) {
        x = normal(rng);
        norm += x * x;
      }
      for (auto& x : v) x /= std::sqrt(norm);
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      do {
        std::vector<double> w(n);
        for (int i = 0; i < n; ++i) w[i] = v[perm[i]];
        SymMatrixF g = v4_project(w).a;
        g *= scale;
        mean += g;
        lf_gens_.push_back(std::move(g));
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    mean *= 1.0 / static_cast<double>(lf_gens_.size());

    // Nonnegative forms, scaled to <p, r^2>_d = 1.
    const SymMatrixF ones = SymMatrixF::ones(n);
    auto push_pos = [&](SymMatrixF p) {
      p *= 1.0 / diff_pairing(p, ones);
      pos_.push_back(std::move(p));
    };
    for (int k = 0; k < n; ++k)
      for (int l = k; l < n; ++l) {
        SymMatrixF p(n);
        p.set(k, l, 1.0);
        push_pos(p);
      }
    std::mt19937_64 prng(spec_.lf_seed + 1);
    for (int s = 0; s < 512; ++s) {
      SymMatrixF p(n);
      std::vector<double> u(n);
      for (auto& x : u) x = normal(prng);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) p.set(i, j, u[i] * u[j]);
      push_pos(p);
    }
    if (n >= 5) {
      // Horn form on a random 5-subset with a positive diagonal scaling.
      const SymMatrixF h = to_float(horn_matrix());
      std::uniform_real_distribution<double> logd(-1.0, 1.0);
      for (int s = 0; s < 128; ++s) {
        std::vector<int> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), prng);
        std::vector<double> d(5);
        for (auto& x : d) x = std::exp(logd(prng));
        SymMatrixF p(n);
        for (int i = 0; i < 5; ++i)
          for (int j = i; j < 5; ++j) p.set(idx[i], idx[j], d[i] * h(i, j) * d[j]);
        push_pos(p);
      }
    }
    if (spec_.star_center.empty()) spec_.star_center = coordinates(EvenQuarticF{mean});
  }

  if (spec_.star_center.empty()) {
    spec_.star_center = spec_.cone == SectionCone::Ball ? std::vector<double>(dim(), 0.0) : coordinates(default_center_quartic(n));
  }
  if (static_cast<int>(spec_.star_center.size()) != dim()) throw std::invalid_argument("star center has the wrong dimension");
  if (!contains(spec_.star_center)) throw std::invalid_argument("star center is not inside the " + to_string(spec_.cone) + " section");
}

SymMatrixF Section::matrix_at(const std::vector<double>& g) const {
  if (static_cast<int>(g.size()) != dim()) throw std::invalid_argument("section point has the wrong dimension");
  SymMatrixF a = SymMatrixF::ones(spec_.n);
  for (int i = 0; i < dim(); ++i) {
    if (!std::isfinite(g[i])) throw std::invalid_argument("section point is not finite");
    SymMatrixF b = basis_[i].a;
    b *= g[i];
    a += b;
  }
  return a;
}

std::vector<double> Section::coordinates(const EvenQuarticF& f) const {
  EvenQuarticF t = f;
  t.a -= SymMatrixF::ones(spec_.n);
  std::vector<double> g(dim());
  for (int i = 0; i < dim(); ++i) g[i] = l2_inner(t, basis_[i]);
  return g;
}

bool Section::lf_inner_contains(const SymMatrixF& a) const {
  const int n = spec_.n;
  SdpProblem p;
  p.add_nonneg(static_cast<int>(lf_gens_.size()));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      LinearFunctional f;
      for (std::size_t g = 0; g < lf_gens_.size(); ++g) f.nonneg(static_cast<int>(g), lf_gens_[g](i, j));
      p.add_constraint(std::move(f), a(i, j));
    }
  SdpSolution s = sdp_solve(p, spec_.oracle_tol);
  if (s.status == SdpStatus::Infeasible) return false;
  if (!s.feasible()) indeterminate("LF inner membership", s);
  return true;
}

bool Section::contains_matrix(const SymMatrixF& a, const std::vector<double>& g) const {
  const double tol = spec_.oracle_tol;
  switch (spec_.cone) {
    case SectionCone::Ball: {
      double s = 0;
      for (double x : g) s += x * x;
      return std::sqrt(s) <= spec_.ball_radius;
    }
    case SectionCone::NN:
      return membership_basic(a, ConeTag::NN, tol).member;
    case SectionCone::PSD:
      return membership_basic(a, ConeTag::PSD, tol).member;
    case SectionCone::DNN:
      return dnn(a, tol);
    case SectionCone::SPN:
      return std::holds_alternative<SpnPair>(spn_decompose(a, tol));
    case SectionCone::COP:
      // SPN = COP for n <= 4.
      if (spec_.mode == OracleMode::Exact) return std::holds_alternative<SpnPair>(spn_decompose(a, tol));
      if (spec_.mode == OracleMode::Inner) return std::holds_alternative<SosGram>(parrilo_member(a, spec_.parrilo_r, tol));
      return !cop_refute(a).has_value();
    case SectionCone::CP:
      // DNN = CP for n <= 4.
      if (spec_.mode == OracleMode::Exact) return dnn(a, tol);
      if (spec_.mode == OracleMode::Inner) return kaykobad_cp(a, tol);
      return dnn(a, tol) && !cp_refute(a, 1, tol).has_value();
    case SectionCone::LF:
      if (spec_.mode == OracleMode::Inner) return lf_inner_contains(a);
      return std::all_of(pos_.begin(), pos_.end(), [&](const SymMatrixF& p) { return diff_pairing(a, p) >= -tol; });
  }
  return false;
}

bool Section::contains(const std::vector<double>& g) const { return contains_matrix(matrix_at(g), g); }

double Section::bisect(const std::vector<double>& dir, double lo, double hi, double tol) const {
  std::vector<double> g(dim());
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    for (int i = 0; i < dim(); ++i) g[i] = center()[i] + mid * dir[i];
    if (contains(g)) lo = mid;
    else hi = mid;
  }
  return lo;
}

double Section::bracket_and_bisect(const std::vector<double>& dir, double tol) const {
  std::vector<double> g(dim());
  double lo = 0.0, hi = 1.0;
  for (;;) {
    for (int i = 0; i < dim(); ++i) g[i] = center()[i] + hi * dir[i];
    if (!contains(g)) break;
    lo = hi;
    hi *= 2;
    if (hi > kMaxRadius) throw std::runtime_error("radial: no boundary within radius 1e6");
  }
  return bisect(dir, lo, hi, tol);
}

double Section::max_t_spn(const SymMatrixF& c, const SymMatrixF& d) const {
  const int n = spec_.n;
  SdpProblem p;
  p.add_psd_block(n);
  const int t = add_bounded_t(p);
  const int nn = p.add_nonneg(n * (n + 1) / 2);
  int k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j, ++k) {
      LinearFunctional f;
      f.psd(0, i, j, 1.0).nonneg(nn + k, 1.0).free_var(t, -d(i, j));
      p.add_constraint(std::move(f), c(i, j));
    }
  return solved_t(p, t, spec_.oracle_tol, "SPN radial");
}

double Section::max_t_parrilo(const SymMatrixF& c, const SymMatrixF& d, int r) const {
  const PolyF tc = parrilo_target(c, r), td = parrilo_target(d, r);
  const std::vector<Monomial> basis = homogeneous_monomials(spec_.n, 2 + r);
  GramPairs gp(basis);
  SdpProblem p;
  const int gram = p.add_psd_block(static_cast<int>(basis.size()));
  const int t = add_bounded_t(p);
  for (const auto& [m, prs] : gp.pairs()) {
    LinearFunctional f;
    gp.add_coefficient(f, gram, m);
    auto it = td.find(m);
    if (it != td.end() && it->second != 0.0) f.free_var(t, -it->second);
    auto ic = tc.find(m);
    p.add_constraint(std::move(f), ic == tc.end() ? 0.0 : ic->second);
  }
  return solved_t(p, t, spec_.oracle_tol, "Parrilo radial");
}

double Section::max_t_lf_inner(const SymMatrixF& c, const SymMatrixF& d) const {
  const int n = spec_.n;
  SdpProblem p;
  const int t = add_bounded_t(p);
  const int lam = p.add_nonneg(static_cast<int>(lf_gens_.size()));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      LinearFunctional f;
      for (std::size_t g = 0; g < lf_gens_.size(); ++g) f.nonneg(lam + static_cast<int>(g), lf_gens_[g](i, j));
      f.free_var(t, -d(i, j));
      p.add_constraint(std::move(f), c(i, j));
    }
  return solved_t(p, t, spec_.oracle_tol, "LF inner radial");
}

double Section::max_t_lf_outer(const SymMatrixF& c, const SymMatrixF& d) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : pos_) {
    const double dp = diff_pairing(d, p);
    if (dp < 0) best = std::min(best, (diff_pairing(c, p) + spec_.oracle_tol) / -dp);
  }
  if (!(best < kMaxRadius)) throw std::runtime_error("LF outer radial: no boundary within radius 1e6");
  return std::max(0.0, best);
}

double Section::radial(const std::vector<double>& direction, double bisect_tol) const {
  if (static_cast<int>(direction.size()) != dim()) throw std::invalid_argument("direction has the wrong dimension");
  double norm = 0;
  for (double x : direction) norm += x * x;
  if (std::abs(std::sqrt(norm) - 1.0) > 1e-12) throw std::invalid_argument("direction must be a unit vector");
  if (!(bisect_tol > 0)) throw std::invalid_argument("bisect_tol must be positive");

  const SymMatrixF c = matrix_at(center());
  SymMatrixF d(spec_.n);
  for (int i = 0; i < dim(); ++i) {
    SymMatrixF b = basis_[i].a;
    b *= direction[i];
    d += b;
  }
  switch (spec_.cone) {
    case SectionCone::SPN:
      return max_t_spn(c, d);
    case SectionCone::COP:
      if (spec_.mode == OracleMode::Exact) return max_t_spn(c, d);
      if (spec_.mode == OracleMode::Inner) return max_t_parrilo(c, d, spec_.parrilo_r);
      return bracket_and_bisect(direction, bisect_tol);
    case SectionCone::LF:
      return spec_.mode == OracleMode::Inner ? max_t_lf_inner(c, d) : max_t_lf_outer(c, d);
    case SectionCone::CP:
      if (spec_.mode == OracleMode::Outer) {
        // CP-outer is DNN cut by the K^(1) dual; bisect the cheap DNN oracle first.
        SectionSpec dspec = spec_;
        dspec.cone = SectionCone::DNN;
        dspec.mode = OracleMode::Exact;
        const Section dsec(dspec);
        const double t_dnn = dsec.radial(direction, bisect_tol);
        std::vector<double> g(dim());
        for (int i = 0; i < dim(); ++i) g[i] = center()[i] + t_dnn * direction[i];
        if (contains(g)) return t_dnn;
        return bisect(direction, 0.0, t_dnn, bisect_tol);
      }
      return bracket_and_bisect(direction, bisect_tol);
    default:
      return bracket_and_bisect(direction, bisect_tol);
  }
}

bool section_membership(const SectionSpec& spec, const std::vector<double>& g) { return Section(spec).contains(g); }

double radial(const SectionSpec& spec, const std::vector<double>& direction, double bisect_tol) {
  return Section(spec).radial(direction, bisect_tol);
}

int sampling_threads(int requested) {
  int t = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  if (const char* env = std::getenv("COPOSLAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) t = std::min(t, cap);
  }
  return t;
}

std::vector<double> sample_direction(int dim, std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  std::vector<double> v(dim);
  double norm = 0;
  while (norm == 0) {
    norm = 0;
    for (auto& x : v) {
      x = normal(rng);
      norm += x * x;
    }
  }
  norm = std::sqrt(norm);
  for (auto& x : v) x /= norm;
  return v;
}

VradEstimate vrad_from_radii(const std::vector<double>& radii, int dim, int bootstrap, std::uint64_t seed) {
  if (radii.empty()) throw std::invalid_argument("no radii");
  const double rmax = *std::max_element(radii.begin(), radii.end());
  if (!(rmax > 0)) throw std::invalid_argument("all radii are zero");
  // Scaled by rmax^d to keep r^d representable for d up to 54.
  std::vector<double> w(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) w[i] = std::pow(radii[i] / rmax, dim);
  auto vrad_of_mean = [&](double mean) { return rmax * std::pow(mean, 1.0 / dim); };

  VradEstimate e;
  e.dim = dim;
  e.samples = static_cast<int>(radii.size());
  e.seed = seed;
  e.point_estimate = vrad_of_mean(std::accumulate(w.begin(), w.end(), 0.0) / w.size());

  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<std::size_t> pick(0, w.size() - 1);
  std::vector<double> boot(std::max(bootstrap, 1));
  for (auto& b : boot) {
    double s = 0;
    for (std::size_t i = 0; i < w.size(); ++i) s += w[pick(rng)];
    b = vrad_of_mean(s / w.size());
  }
  std::sort(boot.begin(), boot.end());
  const auto at = [&](double q) { return boot[static_cast<std::size_t>(q * (boot.size() - 1))]; };
  e.ci_low = std::min(at(0.025), e.point_estimate);
  e.ci_high = std::max(at(0.975), e.point_estimate);
  return e;
}

VradEstimate vrad_mc(const SectionSpec& spec, const VradOptions& opt) {
  if (opt.samples < 100) throw std::invalid_argument("vrad_mc needs at least 100 samples");
  const Section section(spec);
  const int d = section.dim();
  std::vector<double> radii(opt.samples);
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= opt.samples) return;
      try {
        radii[i] = section.radial(sample_direction(d, opt.seed, static_cast<std::uint64_t>(i)), opt.bisect_tol);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = opt.samples;
        return;
      }
    }
  };
  const int threads = std::min(sampling_threads(opt.threads), opt.samples);
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);

  VradEstimate e = vrad_from_radii(radii, d, opt.bootstrap, opt.seed);
  e.cone = spec.cone;
  e.mode = spec.mode;
  e.n = spec.n;
  return e;
}

std::vector<std::vector<double>> nn_vertex_coordinates(const Section& s) {
  const int n = s.spec().n;
  std::vector<std::vector<double>> out;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      EvenQuarticF f = to_float(nn_vertex(n, i, j));
      f.a += SymMatrixF::ones(n);
      out.push_back(s.coordinates(f));
    }
  return out;
}

double vrad_nn_exact(int n) {
  if (n < 3 || n > 10) throw std::invalid_argument("vrad_nn_exact needs 3 <= n <= 10");
  SectionSpec spec;
  spec.cone = SectionCone::NN;
  spec.n = n;
  const Section s(spec);
  const auto v = nn_vertex_coordinates(s);
  const int d = s.dim();
  Matrix e(d, d);
  for (int k = 0; k < d; ++k)
    for (int i = 0; i < d; ++i) e(k, i) = v[k + 1][i] - v[0][i];
  LuFactor lu;
  if (!lu_factor(e, lu)) throw std::logic_error("NN simplex is degenerate");
  double logdet = 0;
  for (int i = 0; i < d; ++i) logdet += std::log(std::abs(lu.lu(i, i)));
  const double log_vol = logdet - std::lgamma(d + 1.0);
  const double log_ball = 0.5 * d * std::log(M_PI) - std::lgamma(0.5 * d + 1.0);
  return std::exp((log_vol - log_ball) / d);
}

double vrad_lower_band(int n) { return 1.0 / (16.0 * std::sqrt(2.0) * n); }
double vrad_upper_band(int n) { return 256.0 * std::sqrt(2.0) / n; }

bool BoundsReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.passed; });
}

BoundsReport check_bounds(int n, const std::vector<VradEstimate>& estimates) {
  BoundsReport rep;
  rep.n = n;
  if (estimates.empty()) return rep;
  const double lo = vrad_lower_band(n), hi = vrad_upper_band(n);
  auto label = [](const VradEstimate& e) {
    return e.mode == OracleMode::Exact ? to_string(e.cone) : to_string(e.cone) + "-" + to_string(e.mode);
  };

  for (const auto& e : estimates) {
    if (e.n != n) throw std::invalid_argument("estimate for n = " + std::to_string(e.n) + " in a report for n = " + std::to_string(n));
    BoundCheck c{"band", label(e), false, std::min(e.ci_high - lo, hi - e.ci_low), ""};
    c.passed = c.margin >= 0;
    c.detail = "CI [" + std::to_string(e.ci_low) + ", " + std::to_string(e.ci_high) + "] vs band [" + std::to_string(lo) + ", " +
               std::to_string(hi) + "]";
    rep.checks.push_back(c);
  }

  // A lower bound of the smaller cone must not exceed an upper bound of the
  // larger one: exact or inner on the left, exact or outer on the right.
  auto find = [&](SectionCone cone, bool lower) -> const VradEstimate* {
    const VradEstimate* best = nullptr;
    for (const auto& e : estimates) {
      if (e.cone != cone) continue;
      if (e.mode == OracleMode::Exact) return &e;
      if ((lower && e.mode == OracleMode::Inner) || (!lower && e.mode == OracleMode::Outer)) best = &e;
    }
    return best;
  };
  using C = SectionCone;
  const std::pair<C, C> inclusions[] = {{C::CP, C::DNN},  {C::CP, C::PSD},  {C::CP, C::NN},   {C::CP, C::SPN},   {C::CP, C::COP},
                                        {C::DNN, C::PSD}, {C::DNN, C::NN},  {C::DNN, C::SPN}, {C::DNN, C::COP},  {C::PSD, C::SPN},
                                        {C::PSD, C::COP}, {C::NN, C::SPN},  {C::NN, C::COP},  {C::SPN, C::COP}};
  auto order = [&](const VradEstimate& small, const VradEstimate& large) {
    BoundCheck c{"order", label(small) + " <= " + label(large), false, large.ci_high - small.ci_low, ""};
    c.passed = c.margin >= 0;
    c.detail = std::to_string(small.point_estimate) + " vs " + std::to_string(large.point_estimate);
    rep.checks.push_back(c);
  };
  for (const auto& [a, b] : inclusions) {
    const VradEstimate* small = find(a, true);
    const VradEstimate* large = find(b, false);
    if (small && large) order(*small, *large);
  }
  for (C cone : {C::COP, C::CP, C::LF}) {
    const VradEstimate *in = nullptr, *out = nullptr;
    for (const auto& e : estimates) {
      if (e.cone != cone) continue;
      if (e.mode == OracleMode::Inner) in = &e;
      if (e.mode == OracleMode::Outer) out = &e;
    }
    if (in && out) order(*in, *out);
  }

  const bool has_nn = std::any_of(estimates.begin(), estimates.end(), [](const VradEstimate& e) { return e.cone == SectionCone::NN; });
  if (has_nn && n >= 3 && n <= 10) {
    const double exact = vrad_nn_exact(n);
    const double floor = 1.0 / (std::sqrt(2.0) * n);
    BoundCheck c{"nn-exact", "nn", exact >= floor, exact - floor, ""};
    c.detail = "vrad_nn_exact = " + std::to_string(exact) + ", lower bound 1/(sqrt2 n) = " + std::to_string(floor);
    for (const auto& e : estimates)
      if (e.cone == SectionCone::NN)
        c.detail += "; MC estimate " + std::to_string(e.point_estimate) + " (relative difference " +
                    std::to_string(std::abs(e.point_estimate - exact) / exact) + ")";
    rep.checks.push_back(c);
  }
  return rep;
}

Json to_json(const VradEstimate& e) {
  return Json{{"cone", to_string(e.cone)}, {"n", e.n},         {"mode", to_string(e.mode)},
              {"estimate", e.point_estimate}, {"ci", {e.ci_low, e.ci_high}}, {"samples", e.samples},
              {"seed", e.seed}, {"dim", e.dim}};
}

VradEstimate vrad_estimate_from_json(const Json& j) {
  try {
    VradEstimate e;
    e.cone = section_cone_from_string(j.at("cone").get<std::string>());
    e.mode = oracle_mode_from_string(j.at("mode").get<std::string>());
    e.n = j.at("n").get<int>();
    e.point_estimate = j.at("estimate").get<double>();
    e.ci_low = j.at("ci").at(0).get<double>();
    e.ci_high = j.at("ci").at(1).get<double>();
    e.samples = j.at("samples").get<int>();
    e.seed = j.at("seed").get<std::uint64_t>();
    e.dim = j.value("dim", e.n * (e.n + 1) / 2 - 1);
    return e;
  } catch (const Json::exception& ex) {
    throw MatrixFormatError(std::string("vrad estimate: ") + ex.what());
  }
}

Json to_json(const BoundsReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back(Json{{"kind", c.kind}, {"subject", c.subject}, {"passed", c.passed}, {"margin", c.margin}, {"detail", c.detail}});
  return Json{{"n", r.n}, {"checks", checks}, {"all_passed", r.all_passed()}};
}

}  // namespace coposlab
