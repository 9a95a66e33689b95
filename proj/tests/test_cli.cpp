#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kgs/cli.hpp"

using namespace kgs;
namespace fs = std::filesystem;

namespace {
int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
  std::ostringstream out, err;
  int rc;
  try {
    cli::RunConfig cfg = cli::parse_args(args);
    rc = cli::run(cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    rc = 1;
  }
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return rc;
}

std::string tmpdir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / ("kgs_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}
}  // namespace

TEST_CASE("thresholds subcommand prints one consistent CSV row") {
  std::string out;
  int rc = run_cli({"thresholds", "a=1", "b=1", "q=1", "S=5.477",
                    "out=" + tmpdir("thr")}, &out);
  CHECK(rc == 0);
  CHECK(out.find("a,b,S,q,t0,s0,c_star,consistency_residual") == 0);
  // residual column below 1e-10
  auto last_comma = out.rfind(',');
  double resid = std::stod(out.substr(last_comma + 1));
  CHECK(resid < 1e-10);
}

TEST_CASE("unknown keys are parse errors naming the key") {
  std::string err;
  int rc = run_cli({"thresholds", "bananas=1"}, nullptr, &err);
  CHECK(rc == 1);
  CHECK(err.find("bananas") != std::string::npos);
}

TEST_CASE("config file keys load and the line number is reported") {
  std::string dir = tmpdir("cfg");
  {
    std::ofstream os(dir + "/bad.cfg");
    os << "a=1\n";
    os << "mystery=2\n";
  }
  std::string err;
  int rc = run_cli({"thresholds", "config", dir + "/bad.cfg"}, nullptr, &err);
  CHECK(rc == 1);
  CHECK(err.find("mystery") != std::string::npos);
  CHECK(err.find("line 2") != std::string::npos);
}

TEST_CASE("p outside (4,6) exits 1 citing the assumption") {
  std::string err;
  int rc = run_cli({"solve-const", "p=7", "grid.n=100", "grid.R=5"}, nullptr,
                   &err);
  CHECK(rc == 1);
  CHECK(err.find("(4,6)") != std::string::npos);
}

TEST_CASE("verify fibering suite exits 0") {
  std::string out;
  int rc = run_cli({"verify", "--suite", "mountain", "--seed", "7",
                    "out=" + tmpdir("ver")}, &out);
  CHECK(rc == 0);
  CHECK(out.find("suite,checks,violations") == 0);
  CHECK(out.find("mountain,20,0") != std::string::npos);
}

TEST_CASE("determinism: identical config and seed give identical bytes") {
  std::string dir1 = tmpdir("det1"), dir2 = tmpdir("det2");
  std::string out1, out2;
  CHECK(run_cli({"check-potentials", "potential.preset=competing",
                 "grid.m=21", "out=" + dir1}, &out1) == 0);
  CHECK(run_cli({"check-potentials", "potential.preset=competing",
                 "grid.m=21", "out=" + dir2}, &out2) == 0);
  CHECK(out1 == out2);
  std::ifstream f1(dir1 + "/conditions.csv"), f2(dir2 + "/conditions.csv");
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());
  CHECK(!s1.str().empty());
}

TEST_CASE("check-potentials emits the per-condition rows") {
  std::string out;
  int rc = run_cli({"check-potentials", "potential.preset=aligned",
                    "out=" + tmpdir("chk")}, &out);
  CHECK(rc == 0);
  CHECK(out.find("condition,pass,") == 0);
  CHECK(out.find("PQ1,") != std::string::npos);
  CHECK(out.find("VQ2,") != std::string::npos);
}
