#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coposlab/cones.hpp"
#include "coposlab/quartic.hpp"

namespace coposlab {

// Sections live in M, the average-zero even quartics, in basis_M
// coordinates: g stands for r^2 + sum_i g_i basis_M(n)[i].
enum class SectionCone { NN, PSD, DNN, SPN, COP, CP, LF, Ball };
enum class OracleMode { Exact, Inner, Outer };

std::string to_string(SectionCone c);
std::string to_string(OracleMode m);
SectionCone section_cone_from_string(const std::string& s);
OracleMode oracle_mode_from_string(const std::string& s);

struct SectionSpec {
  SectionCone cone = SectionCone::NN;
  OracleMode mode = OracleMode::Exact;
  int n = 5;
  double oracle_tol = 1e-9;
  int parrilo_r = 1;              // COP inner level
  int lf_generators = 512;        // rounded up to whole permutation orbits
  std::uint64_t lf_seed = 0;
  double ball_radius = 1.0;       // test-only cone
  std::vector<double> star_center;  // filled by Section when empty
};

// Rejects combinations without an implemented oracle, e.g. exact COP at n = 5.
void validate_spec(const SectionSpec& spec);

// Precomputed geometry for one spec; const after construction and safe to
// share between threads.
class Section {
 public:
  explicit Section(SectionSpec spec);

  const SectionSpec& spec() const { return spec_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<EvenQuarticF>& basis() const { return basis_; }
  const std::vector<double>& center() const { return spec_.star_center; }

  // Coefficient matrix of r^2 + sum g_i basis_i.
  SymMatrixF matrix_at(const std::vector<double>& g) const;
  // Coordinates of f - r^2 for f on the average-one hyperplane.
  std::vector<double> coordinates(const EvenQuarticF& f) const;

  bool contains(const std::vector<double>& g) const;

  // Largest t with center + t * direction inside, to bisect_tol.
  double radial(const std::vector<double>& direction, double bisect_tol = 1e-7) const;

  // LF only.
  const std::vector<SymMatrixF>& lf_generators() const { return lf_gens_; }

 private:
  bool contains_matrix(const SymMatrixF& a, const std::vector<double>& g) const;
  double bisect(const std::vector<double>& dir, double lo, double hi, double tol) const;
  double bracket_and_bisect(const std::vector<double>& dir, double tol) const;
  double max_t_spn(const SymMatrixF& c, const SymMatrixF& d) const;
  double max_t_parrilo(const SymMatrixF& c, const SymMatrixF& d, int r) const;
  double max_t_lf_inner(const SymMatrixF& c, const SymMatrixF& d) const;
  double max_t_lf_outer(const SymMatrixF& c, const SymMatrixF& d) const;
  bool lf_inner_contains(const SymMatrixF& a) const;

  SectionSpec spec_;
  std::vector<EvenQuarticF> basis_;
  std::vector<SymMatrixF> lf_gens_;  // normalized to sphere average one
  std::vector<SymMatrixF> pos_;      // nonnegative forms for the LF outer test
};

bool section_membership(const SectionSpec& spec, const std::vector<double>& g);
double radial(const SectionSpec& spec, const std::vector<double>& direction, double bisect_tol = 1e-7);

// Star center: q of I + J/n scaled to sphere average one, minus r^2.
EvenQuarticF default_center_quartic(int n);

struct VradEstimate {
  SectionCone cone = SectionCone::NN;
  OracleMode mode = OracleMode::Exact;
  int n = 0;
  double point_estimate = 0.0;
  double ci_low = 0.0, ci_high = 0.0;  // bootstrap 95%
  int samples = 0;
  std::uint64_t seed = 0;
  int dim = 0;
};

struct VradOptions {
  int samples = 20000;
  std::uint64_t seed = 0;
  int bootstrap = 2000;
  double bisect_tol = 1e-7;
  int threads = 0;  // 0: hardware concurrency capped by COPOSLAB_THREADS
};

// Thread count after applying the COPOSLAB_THREADS cap.
int sampling_threads(int requested);

// Unit direction number `index` of the stream for `seed`.
std::vector<double> sample_direction(int dim, std::uint64_t seed, std::uint64_t index);

// Vol = Vol(B_d) E[r(theta)^d], so vrad = E[r^d]^(1/d). The result depends
// only on (spec, samples, seed), not on the thread count.
VradEstimate vrad_mc(const SectionSpec& spec, const VradOptions& opt);
VradEstimate vrad_from_radii(const std::vector<double>& radii, int dim, int bootstrap, std::uint64_t seed);

// NN section is the simplex on nn_vertex(n, i, j), i <= j.
double vrad_nn_exact(int n);

// Coordinates of the NN vertices, in (i, j) order with i <= j.
std::vector<std::vector<double>> nn_vertex_coordinates(const Section& s);

struct BoundCheck {
  std::string kind;     // "band", "order" or "nn-exact"
  std::string subject;  // cone(s) concerned
  bool passed = false;
  double margin = 0.0;  // positive when satisfied
  std::string detail;
};

struct BoundsReport {
  int n = 0;
  std::vector<BoundCheck> checks;
  bool all_passed() const;
};

// (2^4 sqrt2)^-1 / n and 2^8 sqrt2 / n.
double vrad_lower_band(int n);
double vrad_upper_band(int n);

BoundsReport check_bounds(int n, const std::vector<VradEstimate>& estimates);

Json to_json(const VradEstimate& e);
VradEstimate vrad_estimate_from_json(const Json& j);
Json to_json(const BoundsReport& r);

}  // namespace coposlab
