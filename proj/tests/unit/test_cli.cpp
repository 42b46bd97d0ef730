#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "uniharm/cli.hpp"
#include "uniharm/parallel.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kData = UNIHARM_TEST_DATA_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "uniharm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = uniharm::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string spec(const std::string& name) { return (kData / "specs" / (name + ".json")).string(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string section_status(const Result& r, const char* section) {
  return json::parse(r.out)[section]["verdict"].get<std::string>();
}

}  // namespace

TEST_CASE("certify the two-term example") {
  const auto r = run({"certify", spec("t2_example")});
  CHECK(r.code == 0);
  CHECK(r.err.empty());
  const auto j = json::parse(r.out);
  CHECK(j["certify"]["verdict"] == "certified");
  CHECK(j["certify"]["sup"]["value"].get<double>() == 0.6);
  CHECK(j["certify"]["threshold"].get<double>() == 1.0);
  CHECK(r.out.find("\"value\":0.59999999999999998") != std::string::npos);
  CHECK(j["exit_code"] == 0);
  CHECK(j["command"] == "certify");
  CHECK(j["spec"]["digest"].get<std::string>().rfind("fnv1a64:", 0) == 0);
  CHECK(r.out == slurp(kData / "golden/certify_t2_example.json"));
}

TEST_CASE("certify verdicts map to exit codes") {
  struct Case {
    std::vector<std::string> args;
    const char* verdict;
    int code;
  };
  const std::vector<Case> cases = {
      {{"certify", spec("t2_example")}, "certified", 0},
      {{"certify", spec("t2_example"), "--estimate-M"}, "heuristic-pass", 1},
      {{"certify", spec("t2_example"), "--M", "2"}, "not-certified", 1},
      {{"certify", spec("degenerate"), "--M", "1"}, "degenerate", 1},
      {{"certify", spec("violation"), "--M", "1"}, "not-certified", 1},
      {{"certify", spec("log_example")}, "certified", 0},
  };
  for (const auto& c : cases) {
    CAPTURE(c.args[1]);
    const auto r = run(c.args);
    CHECK(r.code == c.code);
    CHECK(section_status(r, "certify") == c.verdict);
  }
  const auto degenerate = json::parse(run({"certify", spec("degenerate"), "--M", "1"}).out);
  CHECK(degenerate["certify"]["sup"]["value"].is_null());
  CHECK(degenerate["certify"]["sup"]["infinite"] == true);
  CHECK(degenerate["certify"]["margin"].is_null());
}

TEST_CASE("oracle verdicts map to exit codes") {
  auto status = [](const Result& r) { return json::parse(r.out)["oracle"]["verdict"]["status"].get<std::string>(); };

  const auto pass = run({"oracle", spec("shear")});
  CHECK(pass.code == 0);
  CHECK(status(pass) == "pass");

  const auto z4 = run({"oracle", spec("z4_abs4")});
  CHECK(z4.code == 1);
  CHECK(status(z4) == "boundary-anomaly");
  const auto inj = json::parse(z4.out)["oracle"]["injectivity"];
  CHECK(inj["status"] == "collision");
  CHECK(inj["residual"].get<double>() <= 1e-12);

  const auto conj = run({"oracle", spec("conj")});
  CHECK(conj.code == 1);
  CHECK(status(conj) == "jacobian-sign-failure");
}

TEST_CASE("sweep") {
  const auto ok = run({"sweep", spec("t6_example")});
  CHECK(ok.code == 0);
  const auto j = json::parse(ok.out);
  CHECK(j["sweep"]["all_pass"] == true);
  CHECK(j["sweep"]["entries"].size() == 16);

  const auto bad = run({"sweep", spec("violation"), "--na", "4", "--include-zero"});
  CHECK(bad.code == 1);
  CHECK(json::parse(bad.out)["sweep"]["entries"].size() == 5);

  CHECK(run({"sweep", spec("log_example")}).code == 2);
}

TEST_CASE("geometry of the disk") {
  const auto r = run({"geometry", spec("identity"), "--n", "2048"});
  CHECK(r.code == 0);
  const auto g = json::parse(r.out)["geometry"];
  CHECK(g["convex"] == true);
  CHECK(g["simple"] == true);
  const double mhat = g["connectivity"]["Mhat"].get<double>();
  CHECK(mhat >= 1.0);
  CHECK(mhat <= 1.001);
}

TEST_CASE("report merges certify, oracle and geometry") {
  const auto r = run({"report", spec("t2_example")});
  CHECK(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j.contains("certify"));
  CHECK(j.contains("oracle"));
  CHECK(j.contains("geometry"));
  CHECK(run({"report", spec("violation"), "--M", "1"}).code == 1);
}

TEST_CASE("invalid flags exit with 2") {
  const std::vector<std::vector<std::string>> cases = {
      {"certify", spec("t2_example"), "--grid", "3y4"},
      {"certify", spec("t2_example"), "--theorem", "T9"},
      {"certify", spec("t2_example"), "--t7-literal"},
      {"certify", spec("t2_example"), "--M", "0.5"},
      {"certify", spec("t2_example"), "--M", "2", "--convex"},
      {"certify", spec("cardioid"), "--convex"},
      {"certify", spec("t2_example"), "--no-such-flag"},
      {"boundary", spec("t2_example"), "--n", "0"},
      {"frobnicate"},
  };
  for (const auto& args : cases) {
    CAPTURE(args.back());
    const auto r = run(args);
    CHECK(r.code == 2);
    CHECK(r.out.empty());
    CHECK(r.err.rfind("uniharm: error: ", 0) == 0);
  }
  CHECK(run({"certify", spec("cardioid"), "--convex"}).err.find("convex-check-failed") != std::string::npos);
}

TEST_CASE("invalid spec corpus exits with 2 and names the field") {
  std::ifstream manifest(kData / "invalid/expected.tsv");
  std::string file, path;
  while (std::getline(manifest, file, '\t') && std::getline(manifest, path)) {
    CAPTURE(file);
    const auto r = run({"certify", (kData / "invalid" / file).string()});
    CHECK(r.code == 2);
    CHECK(r.err.rfind("uniharm: error: invalid-spec: " + path + ": ", 0) == 0);
  }
}

TEST_CASE("I/O failures exit with 3") {
  CHECK(run({"certify", (kData / "specs/missing.json").string()}).code == 3);
  const auto r = run({"certify", spec("t2_example"), "--json", "/nonexistent-dir/out.json"});
  CHECK(r.code == 3);
  CHECK(r.err.rfind("uniharm: error: io: ", 0) == 0);
}

TEST_CASE("output is deterministic") {
  const std::vector<std::vector<std::string>> commands = {
      {"certify", spec("cardioid"), "--estimate-M"},
      {"oracle", spec("violation")},
      {"sweep", spec("t6_example"), "--na", "4"},
      {"canon", spec("triharmonic")},
  };
  for (const auto& args : commands) {
    CAPTURE(args[0]);
    std::string first;
    for (int workers : {1, 4}) {
      uniharm::ScopedWorkerCount scope(workers);
      const auto a = run(args);
      const auto b = run(args);
      CHECK(a.out == b.out);
      if (first.empty()) first = a.out;
      CHECK(a.out == first);
    }
  }
}

TEST_CASE("--json writes the same bytes as stdout") {
  const fs::path dir = fs::temp_directory_path() / "uniharm_test_cli";
  fs::create_directories(dir);
  const auto r = run({"certify", spec("t2_example"), "--json", (dir / "r.json").string()});
  CHECK(r.code == 0);
  CHECK(slurp(dir / "r.json") == r.out);

  const auto csv = run({"certify", spec("t2_example"), "--csv", (dir / "b.csv").string(), "--csv-n", "16"});
  CHECK(csv.code == 0);
  // the reference map of this spec is z
  CHECK(slurp(dir / "b.csv") == run({"boundary", spec("identity"), "--n", "16"}).out);
  fs::remove_all(dir);
}

TEST_CASE("boundary and canon") {
  const auto b = run({"boundary", spec("t2_example"), "--n", "16"});
  CHECK(b.code == 0);
  CHECK(b.out == slurp(kData / "golden/t2_example_boundary16.csv"));

  const auto c = run({"canon", spec("t2_example")});
  CHECK(c.code == 0);
  CHECK(run({"canon", spec("t2_example")}).out == c.out);
  const fs::path tmp = fs::temp_directory_path() / "uniharm_canon.json";
  std::ofstream(tmp, std::ios::binary) << c.out;
  CHECK(run({"canon", tmp.string()}).out == c.out);
  fs::remove(tmp);
}

TEST_CASE("timing and help") {
  const auto t = run({"certify", spec("identity"), "--timing"});
  CHECK(json::parse(t.out)["wall_time_s"].get<double>() >= 0.0);
  CHECK(run({"certify", spec("identity")}).out.find("wall_time_s") == std::string::npos);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"certify", "--help"}).code == 0);
}
