#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "tdpair/report.hpp"

using namespace tdpair;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "tdpair");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string tmp_file(const std::string& name, const std::string& content) {
  std::filesystem::create_directories(TDPAIR_TEST_TMP_DIR);
  const auto path = std::filesystem::path(TDPAIR_TEST_TMP_DIR) / name;
  std::ofstream(path, std::ios::binary) << content;
  return path.string();
}

const std::string kAssets = TDPAIR_TEST_ASSET_DIR;

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("verify-appendix passes") {
    const Run r = run({"verify-appendix", "--d", "3", "--trials", "20", "--field", "fp", "--seed",
                       "7", "--assets", kAssets});
    CHECK(r.code == cli::kExitPass);
    const auto rep = report_from_json(r.out);
    CHECK(rep.overall);
    CHECK(rep.trials == 20);
    CHECK(rep.field.seed == 7);
    CHECK(rep.asset_version == "tdpair-appendix 1");
    CHECK(r.err.find("-> PASS") != std::string::npos);
  }

  TEST_CASE("feasible enumeration") {
    const Run r = run({"zz", "enumerate", "--d", "2", "--feasible"});
    CHECK(r.code == cli::kExitPass);
    const auto rep = report_from_json(r.out);
    REQUIRE(rep.data.count("words") == 1);
    CHECK(rep.data.at("words") == std::vector<std::string>{"e*0", "e1 e*0", "e2 e*0", "e*1 e2 e*0"});
  }

  TEST_CASE("check-params reports the failing condition") {
    const std::string bad = tmp_file(
        "zeta0.json", R"({"d":1,"theta":["1","-1"],"theta_star":["1","-1"],"zeta":["2","1"]})");
    const Run r = run({"check-params", "--input", bad, "--field", "qq"});
    CHECK(r.code == cli::kExitFail);
    const auto rep = report_from_json(r.out);
    bool found = false;
    for (const auto& c : rep.checks) {
      if (c.id == "(ii) ζ_0=1") {
        found = true;
        CHECK_FALSE(c.passed);
      }
    }
    CHECK(found);

    const std::string good = tmp_file(
        "good.json", R"({"d":1,"theta":["1","-1"],"theta_star":["1","-1"],"zeta":["1","1"]})");
    CHECK(run({"check-params", "--input", good}).code == cli::kExitPass);
    CHECK(run({"check-params", "--input", tmp_file("broken.json", "{")}).code == cli::kExitUsage);
    CHECK(run({"check-params", "--input", "/nonexistent.json"}).code == cli::kExitUsage);
  }

  TEST_CASE("usage errors") {
    CHECK(run({"verify-appendix", "--bogus"}).code == cli::kExitUsage);
    CHECK(run({}).code == cli::kExitUsage);
    CHECK(run({"verify-appendix", "--d", "9"}).code == cli::kExitUsage);
    CHECK(run({"verify-appendix", "--field", "zz"}).code == cli::kExitUsage);
    CHECK(run({"--help"}).code == cli::kExitPass);
  }

  TEST_CASE("output is deterministic across runs and thread counts") {
    const std::vector<std::string> base = {"mu-certificate", "--d", "2", "--trials", "6", "--seed",
                                           "11", "--assets", kAssets};
    auto with_jobs = [&](const char* jobs) {
      auto args = base;
      args.push_back("--jobs");
      args.push_back(jobs);
      return run(args).out;
    };
    const std::string one = with_jobs("1");
    CHECK(one == with_jobs("1"));
    CHECK(one == with_jobs("3"));
    CHECK(run({"zz", "rank", "--d", "3", "--trials", "4", "--jobs", "2", "--assets", kAssets}).out ==
          run({"zz", "rank", "--d", "3", "--trials", "4", "--jobs", "1", "--assets", kAssets}).out);
  }

  TEST_CASE("--output writes the report to a file") {
    const auto path = std::filesystem::path(TDPAIR_TEST_TMP_DIR) / "convex.json";
    std::filesystem::create_directories(TDPAIR_TEST_TMP_DIR);
    std::filesystem::remove(path);
    const Run r = run({"convex", "--d", "3", "--output", path.string()});
    CHECK(r.code == cli::kExitPass);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto rep = report_from_json(ss.str());
    CHECK(rep.data.at("r=3") == std::vector<std::string>{"()", "(1)", "(2,1)"});
  }

  TEST_CASE("shape command") {
    const Run r = run({"shape", "--d", "2", "--trials", "3", "--assets", kAssets});
    CHECK(r.code == cli::kExitPass);
  }

  TEST_CASE("tds roundtrip from a file and from random arrays") {
    const std::string path = tmp_file(
        "d1.json", R"({"d":1,"theta":["1","-1"],"theta_star":["1","-1"],"zeta":["1","1"]})");
    const Run r = run({"tds", "roundtrip", "--input", path, "--field", "qq", "--assets", kAssets});
    CHECK(r.code == cli::kExitPass);
    const Run g = run({"tds", "roundtrip", "--d", "2", "--trials", "2", "--assets", kAssets});
    CHECK(g.code == cli::kExitPass);
    const std::string bad = tmp_file(
        "d1bad.json", R"({"d":1,"theta":["1","-1"],"theta_star":["1","-1"],"zeta":["1","0"]})");
    CHECK(run({"tds", "roundtrip", "--input", bad, "--assets", kAssets}).code != cli::kExitPass);
  }
}
