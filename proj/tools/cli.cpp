#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "coposlab/cones.hpp"
#include "coposlab/exceptional.hpp"
#include "coposlab/matrix_json.hpp"
#include "coposlab/volume.hpp"

#ifndef COPOSLAB_DATA_DIR
#define COPOSLAB_DATA_DIR "data"
#endif

namespace coposlab::cli {
namespace {

namespace fs = std::filesystem;

// Input that cannot be used at all; maps to kUsage.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Report {
  int code = kPass;
  Json body;
};

struct Common {
  bool pretty = false;
  std::string out;
  std::string dump_sdp;
  double tol = 1e-9;
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

AnyMatrix read_matrix(const std::string& path) {
  const Json j = read_json_file(path);
  try {
    // Accept the output of construct-ednn as well as a bare matrix document.
    if (j.is_object() && j.contains("result") && j["result"].is_object() && j["result"].contains("A5"))
      return matrix_from_json(j["result"]["A5"]);
    if (j.is_object() && j.contains("A5")) return matrix_from_json(j["A5"]);
    return matrix_from_json(j);
  } catch (const MatrixFormatError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

Rational parse_fraction(const std::string& flag, const std::string& s) {
  try {
    return parse_rational(s);
  } catch (const std::invalid_argument&) {
    throw UsageError(flag + " expects p or p/q, got '" + s + "'");
  }
}

void dump_problem(const Common& c, const SdpProblem& p) {
  if (c.dump_sdp.empty()) return;
  std::ofstream f(c.dump_sdp);
  if (!f) throw UsageError("cannot write " + c.dump_sdp);
  f << to_json(p).dump() << '\n';
}

Report negative(Json body, const Certificate& cert) {
  body["certificate"] = to_json(cert);
  return {kNegative, std::move(body)};
}

Report member(Json body, const Certificate& cert) {
  body["certificate"] = to_json(cert);
  return {kPass, std::move(body)};
}

// ---- certify ----

struct CertifyArgs {
  std::string cone;
  std::string in;
  int r = 1;
  int restarts = 64;
  std::uint64_t seed = 0;
};

Report certify_cop(const AnyMatrix& any, const SymMatrixF& a, const CertifyArgs& args, const Common& c, Json body) {
  CopRefuteOptions opt;
  opt.attempts = args.restarts;
  opt.seed = args.seed;
  const auto witness = std::holds_alternative<SymMatrixQ>(any) ? cop_refute(std::get<SymMatrixQ>(any), opt)
                                                               : cop_refute(a, opt);
  if (witness) {
    body["verdict"] = "not-member";
    return negative(std::move(body), *witness);
  }
  if (a.n() <= 4) {
    // COP = SPN for n <= 4, so the SPN program decides.
    dump_problem(c, spn_problem(a));
    body["method"] = "spn (COP = SPN for n <= 4)";
    auto res = spn_decompose(a, c.tol);
    if (auto* pair = std::get_if<SpnPair>(&res)) {
      body["verdict"] = "member";
      return member(std::move(body), *pair);
    }
    body["verdict"] = "not-member";
    return negative(std::move(body), std::get<InfeasibilityCert>(res));
  }
  dump_problem(c, parrilo_assembly(a, args.r).problem);
  body["method"] = "parrilo r=" + std::to_string(args.r);
  auto res = parrilo_member(a, args.r, c.tol);
  if (auto* gram = std::get_if<SosGram>(&res)) {
    body["verdict"] = "member";
    return member(std::move(body), *gram);
  }
  body["verdict"] = "indeterminate";
  body["reason"] = "no refutation in " + std::to_string(args.restarts) + " restarts and not in K^(" +
                   std::to_string(args.r) + ")";
  body["certificate"] = to_json(Certificate{std::get<InfeasibilityCert>(res)});
  return {kIndeterminate, std::move(body)};
}

Report certify_cp(const SymMatrixF& a, const CertifyArgs& args, const Common& c, Json body) {
  const Membership dnn = membership_basic(a, ConeTag::DNN, c.tol);
  if (!dnn.member) {
    body["verdict"] = "not-member";
    body["method"] = "dnn";
    return negative(std::move(body), dnn.certificate);
  }
  if (a.n() <= 4) {
    body["verdict"] = "member";
    body["method"] = "dnn (CP = DNN for n <= 4)";
    return member(std::move(body), dnn.certificate);
  }
  if (kaykobad_cp(a)) {
    body["verdict"] = "member";
    body["method"] = "nonnegative and diagonally dominant";
    return member(std::move(body), dnn.certificate);
  }
  const int r = std::min(args.r, 1);
  dump_problem(c, cp_refute_problem(a, r));
  body["method"] = "cp_refute r=" + std::to_string(r);
  if (auto ref = cp_refute(a, r, c.tol)) {
    body["verdict"] = "not-member";
    return negative(std::move(body), *ref);
  }
  body["verdict"] = "indeterminate";
  body["reason"] = "DNN, not diagonally dominant, and no copositive witness in K^(" + std::to_string(r) + ")";
  return {kIndeterminate, std::move(body)};
}

Report certify(const CertifyArgs& args, const Common& c) {
  const AnyMatrix any = read_matrix(args.in);
  const SymMatrixF a = as_float(any);
  Json body{{"command", "certify"}, {"cone", args.cone}, {"n", a.n()}, {"tol", c.tol}};
  if (args.cone == "nn" || args.cone == "psd" || args.cone == "dnn") {
    const ConeTag tag = args.cone == "nn" ? ConeTag::NN : args.cone == "psd" ? ConeTag::PSD : ConeTag::DNN;
    const Membership m = membership_basic(a, tag, c.tol);
    body["verdict"] = m.member ? "member" : "not-member";
    return m.member ? member(std::move(body), m.certificate) : negative(std::move(body), m.certificate);
  }
  if (args.cone == "spn") {
    dump_problem(c, spn_problem(a));
    auto res = spn_decompose(a, c.tol);
    if (auto* pair = std::get_if<SpnPair>(&res)) {
      body["verdict"] = "member";
      return member(std::move(body), *pair);
    }
    body["verdict"] = "not-member";
    return negative(std::move(body), std::get<InfeasibilityCert>(res));
  }
  if (args.cone == "parrilo") {
    body["r"] = args.r;
    dump_problem(c, parrilo_assembly(a, args.r).problem);
    auto res = parrilo_member(a, args.r, c.tol);
    if (auto* gram = std::get_if<SosGram>(&res)) {
      body["verdict"] = "member";
      return member(std::move(body), *gram);
    }
    body["verdict"] = "not-member";
    return negative(std::move(body), std::get<InfeasibilityCert>(res));
  }
  if (args.cone == "cop") return certify_cop(any, a, args, c, std::move(body));
  return certify_cp(a, args, c, std::move(body));
}

// ---- construct-ednn / construct-ecop ----

struct EdnnArgs {
  std::string epsilon = "1/20";
  int m = 6;
  int mprime = 3;
};

Report construct_ednn_cmd(const EdnnArgs& args, const Common& c) {
  const Rational eps = parse_fraction("--epsilon", args.epsilon);
  if (!(eps > 0)) throw UsageError("--epsilon must be positive");
  if (args.m < 1 || args.mprime < 0 || args.mprime > args.m) throw UsageError("need m >= 1 and 0 <= mprime <= m");
  dump_problem(c, build_ednn_sdp(eps, args.m, args.mprime));
  Json body{{"command", "construct-ednn"}, {"epsilon", to_string(eps)}, {"m", args.m}, {"mprime", args.mprime}};
  auto res = construct_ednn(eps, args.m, args.mprime, c.tol);
  if (auto* r = std::get_if<EdnnResult>(&res)) {
    body["verdict"] = "feasible";
    body["result"] = to_json(*r);
    return {kPass, std::move(body)};
  }
  body["verdict"] = "infeasible";
  body["certificate"] = to_json(Certificate{std::get<InfeasibilityCert>(res)});
  return {kNegative, std::move(body)};
}

struct EcopArgs {
  std::string in;
  std::string epsilon = "1/10";
  int k = 1;
  int restarts = 64;
};

Report construct_ecop_cmd(const EcopArgs& args, const Common& c) {
  const SymMatrixF a = as_float(read_matrix(args.in));
  const Rational eps = parse_fraction("--epsilon", args.epsilon);
  if (eps < 0) throw UsageError("--epsilon must be nonnegative");
  if (!membership_basic(a, ConeTag::DNN, c.tol).member) throw UsageError(args.in + ": matrix is not DNN");
  dump_problem(c, build_ecop_sdp(a, eps, args.k));
  Json body{{"command", "construct-ecop"}, {"epsilon", to_string(eps)}, {"k", args.k}, {"n", a.n()}};
  auto res = construct_ecop(a, eps, args.k, c.tol);
  if (auto* r = std::get_if<EcopResult>(&res)) {
    body["verdict"] = "feasible";
    body["result"] = to_json(*r);
    CopRefuteOptions opt;
    opt.attempts = args.restarts;
    const auto witness = cop_refute(r->C, opt);
    body["cop_refute_witness"] = witness ? to_json(Certificate{*witness}) : Json(nullptr);
    return {kPass, std::move(body)};
  }
  body["verdict"] = "infeasible";
  body["certificate"] = to_json(Certificate{std::get<InfeasibilityCert>(res)});
  return {kNegative, std::move(body)};
}

// ---- vrad / check-bounds ----

struct VradArgs {
  std::string cone = "nn";
  std::string mode = "exact";
  int n = 5;
  int samples = 20000;
  std::uint64_t seed = 0;
  int bootstrap = 2000;
  double bisect_tol = 1e-7;
  int threads = 0;
  int parrilo_r = 1;
  int lf_generators = 512;
};

Report vrad_cmd(const VradArgs& args, const Common& c) {
  SectionSpec spec;
  try {
    spec.cone = section_cone_from_string(args.cone);
    spec.mode = oracle_mode_from_string(args.mode);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  spec.n = args.n;
  spec.oracle_tol = c.tol;
  spec.parrilo_r = args.parrilo_r;
  spec.lf_generators = args.lf_generators;
  spec.lf_seed = args.seed;
  try {
    validate_spec(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (args.samples < 2) throw UsageError("--samples must be at least 2");
  VradOptions opt;
  opt.samples = args.samples;
  opt.seed = args.seed;
  opt.bootstrap = args.bootstrap;
  opt.bisect_tol = args.bisect_tol;
  opt.threads = args.threads;
  return {kPass, to_json(vrad_mc(spec, opt))};
}

Report check_bounds_cmd(const std::string& dir, int only_n) {
  if (!fs::is_directory(dir)) throw UsageError(dir + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::map<int, std::vector<VradEstimate>> by_n;
  Json inputs = Json::array();
  for (const auto& f : files) {
    const Json j = read_json_file(f.string());
    VradEstimate e;
    try {
      e = vrad_estimate_from_json(j);
    } catch (const std::exception& ex) {
      throw UsageError(f.string() + ": " + ex.what());
    }
    if (only_n > 0 && e.n != only_n) continue;
    inputs.push_back(f.filename().string());
    by_n[e.n].push_back(e);
  }
  if (by_n.empty()) throw UsageError("no vrad estimates found in " + dir);
  Json reports = Json::array();
  bool ok = true;
  for (const auto& [n, est] : by_n) {
    const BoundsReport r = check_bounds(n, est);
    ok = ok && r.all_passed();
    reports.push_back(to_json(r));
  }
  return {ok ? kPass : kNegative,
          Json{{"command", "check-bounds"}, {"inputs", inputs}, {"reports", reports}, {"all_passed", ok}}};
}

Report verify_paper_cmd(const std::string& dir) {
  PaperData d;
  try {
    d = load_paper_data(dir);
  } catch (const MatrixFormatError& e) {
    throw UsageError(e.what());
  }
  const PaperReport r = verify_paper_examples(d);
  Json body = to_json(r);
  body["command"] = "verify-paper";
  body["data_dir"] = dir;
  return {r.all_passed() ? kPass : kNegative, std::move(body)};
}

int emit(const Report& r, const Common& c, std::ostream& out, std::ostream& err) {
  const std::string text = r.body.dump(c.pretty ? 2 : -1) + "\n";
  if (c.out.empty()) {
    out << text;
  } else {
    std::ofstream f(c.out);
    if (!f) {
      err << "cannot write " << c.out << '\n';
      return kUsage;
    }
    f << text;
  }
  return r.code;
}

int usage_error(const std::string& msg, const Common& c, std::ostream& out, std::ostream& err) {
  err << "coposlab: " << msg << '\n';
  Common plain = c;
  plain.out.clear();
  emit({kUsage, Json{{"error", "usage"}, {"message", msg}}}, plain, out, err);
  return kUsage;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certification, construction and volume estimation for copositive-type matrix cones", "coposlab"};
  app.require_subcommand(1);
  Common common;
  app.add_flag("--pretty", common.pretty, "Indent the JSON report");
  app.add_option("--out", common.out, "Write the report to a file instead of stdout");
  app.add_option("--tol", common.tol, "Solver and certificate tolerance")->capture_default_str()->check(CLI::PositiveNumber);

  CertifyArgs cert;
  auto* certify_app = app.add_subcommand("certify", "Decide membership of a matrix in a cone");
  certify_app->fallthrough();
  certify_app->add_option("--cone", cert.cone, "Target cone")
      ->required()
      ->check(CLI::IsMember({"nn", "psd", "dnn", "spn", "cop", "cp", "parrilo"}));
  certify_app->add_option("--in", cert.in, "Matrix JSON file")->required();
  certify_app->add_option("--r", cert.r, "Parrilo level (cop, parrilo) or refutation level (cp)")
      ->capture_default_str()
      ->check(CLI::Range(0, 2));
  certify_app->add_option("--restarts", cert.restarts, "Simplex restarts for the COP refuter")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  certify_app->add_option("--seed", cert.seed, "Seed for the COP refuter")->capture_default_str();
  certify_app->add_option("--dump-sdp", common.dump_sdp, "Write the SDP in JSON form");

  EdnnArgs ednn;
  auto* ednn_app = app.add_subcommand("construct-ednn", "Build a DNN matrix that is not CP from a cosine polynomial");
  ednn_app->fallthrough();
  ednn_app->add_option("--epsilon", ednn.epsilon, "Target <A5, H> = -epsilon, as p/q")->capture_default_str();
  ednn_app->add_option("--m", ednn.m, "Cosine degree")->capture_default_str();
  ednn_app->add_option("--mprime", ednn.mprime, "Gram degree")->capture_default_str();
  ednn_app->add_option("--dump-sdp", common.dump_sdp, "Write the SDP in JSON form");

  EcopArgs ecop;
  auto* ecop_app = app.add_subcommand("construct-ecop", "Build a copositive matrix separating a DNN matrix from COP*");
  ecop_app->fallthrough();
  ecop_app->add_option("--in", ecop.in, "DNN matrix JSON, or a construct-ednn report")->required();
  ecop_app->add_option("--epsilon", ecop.epsilon, "Target Tr(C A) = -epsilon, as p/q")->capture_default_str();
  ecop_app->add_option("--k", ecop.k, "Parrilo level of C")->capture_default_str()->check(CLI::Range(1, 2));
  ecop_app->add_option("--restarts", ecop.restarts, "Restarts for the copositivity re-check")->capture_default_str();
  ecop_app->add_option("--dump-sdp", common.dump_sdp, "Write the SDP in JSON form");

  VradArgs vrad;
  auto* vrad_app = app.add_subcommand("vrad", "Monte Carlo volume radius of a cone section");
  vrad_app->fallthrough();
  vrad_app->add_option("--cone", vrad.cone, "nn, psd, dnn, spn, cop, cp, lf or ball")->capture_default_str();
  vrad_app->add_option("-n", vrad.n, "Matrix size")->capture_default_str();
  vrad_app->add_option("--mode", vrad.mode, "exact, inner or outer")->capture_default_str();
  vrad_app->add_option("--samples", vrad.samples, "Number of directions")->capture_default_str();
  vrad_app->add_option("--seed", vrad.seed, "Direction stream seed")->capture_default_str();
  vrad_app->add_option("--bootstrap", vrad.bootstrap, "Bootstrap resamples for the CI")->capture_default_str();
  vrad_app->add_option("--bisect-tol", vrad.bisect_tol, "Radial bisection tolerance")->capture_default_str();
  vrad_app->add_option("--threads", vrad.threads, "Worker threads, 0 for all cores")->capture_default_str();
  vrad_app->add_option("--parrilo-r", vrad.parrilo_r, "Parrilo level of the COP inner oracle")->capture_default_str();
  vrad_app->add_option("--lf-generators", vrad.lf_generators, "LF inner hull size")->capture_default_str();

  std::string bounds_dir;
  int bounds_n = 0;
  auto* bounds_app = app.add_subcommand("check-bounds", "Check vrad reports against the volume bands");
  bounds_app->fallthrough();
  bounds_app->add_option("--dir", bounds_dir, "Directory of vrad JSON reports")->required();
  bounds_app->add_option("-n", bounds_n, "Only use reports for this n (0 for all)")->capture_default_str();

  std::string data_dir = COPOSLAB_DATA_DIR;
  auto* paper_app = app.add_subcommand("verify-paper", "Exact checks on the bundled example matrices");
  paper_app->fallthrough();
  paper_app->add_option("--data-dir", data_dir, "Directory with paper_A5.json, paper_B.json, paper_C.json")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return usage_error(e.what(), common, out, err);
  }

  try {
    Report r;
    if (*certify_app) r = certify(cert, common);
    else if (*ednn_app) r = construct_ednn_cmd(ednn, common);
    else if (*ecop_app) r = construct_ecop_cmd(ecop, common);
    else if (*vrad_app) r = vrad_cmd(vrad, common);
    else if (*bounds_app) r = check_bounds_cmd(bounds_dir, bounds_n);
    else r = verify_paper_cmd(data_dir);
    return emit(r, common, out, err);
  } catch (const UsageError& e) {
    return usage_error(e.what(), common, out, err);
  } catch (const MatrixFormatError& e) {
    return usage_error(e.what(), common, out, err);
  } catch (const IndeterminateError& e) {
    return emit({kIndeterminate, Json{{"verdict", "indeterminate"}, {"reason", e.what()}}}, common, out, err);
  } catch (const VerificationError& e) {
    return emit({kIndeterminate, Json{{"verdict", "indeterminate"}, {"reason", e.what()}}}, common, out, err);
  } catch (const std::invalid_argument& e) {
    return usage_error(e.what(), common, out, err);
  }
}

}  // namespace coposlab::cli
