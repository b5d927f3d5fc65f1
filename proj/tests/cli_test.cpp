#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cli.hpp"
#include "coposlab/cones.hpp"
#include "coposlab/sdp.hpp"
#include "coposlab/volume.hpp"
#include "support.hpp"

namespace coposlab {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "coposlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("coposlab_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string write_matrix(const std::string& name, const SymMatrixF& a) const {
    return write(name, matrix_to_json(a).dump());
  }

  fs::path dir_;
};

TEST_F(CliTest, SpnRejectsHornWithRay) {
  const CliRun r = run({"certify", "--cone", "spn", "--in", write_matrix("h.json", to_float(horn_matrix()))});
  ASSERT_EQ(r.code, cli::kNegative) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j.at("verdict"), "not-member");
  EXPECT_EQ(j.at("certificate").at("kind"), "InfeasibilityCert");
}

TEST_F(CliTest, CopAcceptsHornAtLevelOne) {
  const CliRun r = run({"certify", "--cone", "cop", "--in", write_matrix("h.json", to_float(horn_matrix()))});
  ASSERT_EQ(r.code, cli::kPass) << r.err;
  EXPECT_EQ(r.json().at("certificate").at("kind"), "SosGram");
}

TEST_F(CliTest, VerifyPaperReport) {
  const CliRun r = run({"verify-paper", "--data-dir", test::kDataDir});
  const Json j = r.json();
  ASSERT_EQ(j.at("checks").size(), 7u);
  EXPECT_EQ(r.code == cli::kPass, j.at("all_passed").get<bool>());
  EXPECT_TRUE(r.code == cli::kPass || r.code == cli::kNegative);
}

TEST_F(CliTest, VradNnNearExact) {
  const CliRun r = run({"vrad", "--cone", "nn", "-n", "5", "--samples", "20000", "--seed", "42"});
  ASSERT_EQ(r.code, cli::kPass) << r.err;
  const double est = r.json().at("estimate").get<double>();
  EXPECT_LE(std::abs(est - vrad_nn_exact(5)) / vrad_nn_exact(5), 0.10);
}

TEST_F(CliTest, VradRejectsUnsupportedOracle) {
  const CliRun r = run({"vrad", "--cone", "cop", "--mode", "exact", "-n", "5"});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_EQ(r.json().at("error"), "usage");
}

TEST_F(CliTest, MalformedMatrixIsUsageError) {
  const CliRun r = run({"certify", "--cone", "nn", "--in", write("bad.json", R"({"n": 2, "flavor": "float", "entries": [[1, 2], [3, 1]]})")});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_NE(r.err.find("entries[1][0]"), std::string::npos) << r.err;
}

TEST_F(CliTest, TruncatedJsonIsUsageError) {
  const CliRun r = run({"certify", "--cone", "nn", "--in", write("bad.json", "[[1, 0], [0")});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, UnknownConeIsUsageError) {
  EXPECT_EQ(run({"certify", "--cone", "pos", "--in", "x.json"}).code, cli::kUsage);
  EXPECT_EQ(run({"no-such-command"}).code, cli::kUsage);
  EXPECT_EQ(run({"certify", "--cone", "nn", "--in", (dir_ / "missing.json").string()}).code, cli::kUsage);
}

TEST_F(CliTest, RepeatRunsAreByteIdentical) {
  const std::string in = write_matrix("h.json", to_float(horn_matrix()));
  for (const char* cone : {"spn", "parrilo", "cop"}) {
    const CliRun a = run({"--pretty", "certify", "--cone", cone, "--in", in});
    const CliRun b = run({"--pretty", "certify", "--cone", cone, "--in", in});
    EXPECT_EQ(a.out, b.out) << cone;
  }
  const CliRun a = run({"vrad", "--cone", "dnn", "-n", "4", "--samples", "200", "--seed", "5", "--threads", "1"});
  const CliRun b = run({"vrad", "--cone", "dnn", "-n", "4", "--samples", "200", "--seed", "5", "--threads", "4"});
  EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, OutFileAndDumpSdp) {
  const std::string in = write_matrix("j.json", SymMatrixF::ones(4));
  const fs::path report = dir_ / "report.json", sdp = dir_ / "sdp.json";
  const CliRun r = run({"--out", report.string(), "certify", "--cone", "parrilo", "--r", "0", "--in", in, "--dump-sdp",
                     sdp.string()});
  ASSERT_EQ(r.code, cli::kPass) << r.err;
  std::ifstream rf(report);
  EXPECT_EQ(Json::parse(rf).at("verdict"), "member");
  std::ifstream sf(sdp);
  const SdpProblem p = sdp_problem_from_json(Json::parse(sf));
  EXPECT_NO_THROW(p.validate());
  EXPECT_TRUE(sdp_solve(p).feasible());
}

TEST_F(CliTest, ConstructEdnnInfeasibleExitsOne) {
  const CliRun r = run({"construct-ednn", "--epsilon", "1/20", "--m", "2", "--mprime", "2"});
  EXPECT_NE(r.code, cli::kPass);
  EXPECT_NE(r.code, cli::kUsage);
  EXPECT_EQ(run({"construct-ednn", "--epsilon", "abc"}).code, cli::kUsage);
  EXPECT_EQ(run({"construct-ednn", "--epsilon", "0"}).code, cli::kUsage);
}

TEST_F(CliTest, CheckBoundsOnDirectory) {
  const fs::path reports = dir_ / "reports";
  fs::create_directories(reports);
  for (const char* cone : {"nn", "dnn"}) {
    const CliRun r = run({"--out", (reports / (std::string(cone) + ".json")).string(), "vrad", "--cone", cone, "-n", "4",
                       "--samples", "300", "--seed", "1"});
    ASSERT_EQ(r.code, cli::kPass) << r.err;
  }
  const CliRun r = run({"check-bounds", "--dir", reports.string()});
  EXPECT_TRUE(r.code == cli::kPass || r.code == cli::kNegative) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j.at("inputs").size(), 2u);
  EXPECT_EQ(r.code == cli::kPass, j.at("all_passed").get<bool>());
  EXPECT_EQ(run({"check-bounds", "--dir", (dir_ / "empty").string()}).code, cli::kUsage);
}

}  // namespace
}  // namespace coposlab
