#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rcount/cli.hpp"
#include "support/published.hpp"

using namespace rcount;

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "rcount");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int status = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {status, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("rcount_cli_" + name);
}

}  // namespace

TEST_CASE("decode and encode") {
  const Run k3 = run({"decode", "7"});
  CHECK(k3.status == kExitOk);
  CHECK(k3.out == "3\n1 2\n1 3\n2 3\n");

  CHECK(run({"decode", "7", "--n", "4"}).out == "4\n2 3\n2 4\n3 4\n");

  const auto path = temp_file("prism.txt");
  {
    std::ofstream f(path);
    f << run({"decode", "7916"}).out;
  }
  const Run enc = run({"encode", path.string()});
  CHECK(enc.status == kExitOk);
  CHECK(enc.out == "7916\n");
  std::filesystem::remove(path);
}

TEST_CASE("usage errors exit with status 2") {
  CHECK(run({}).status == kExitUsage);
  CHECK(run({"frobnicate"}).status == kExitUsage);
  CHECK(run({"decode", "7916", "--n", "4"}).status == kExitUsage);
  CHECK(run({"decode", "x7"}).status == kExitUsage);
  CHECK(run({"count", "7916"}).status == kExitUsage);
  CHECK(run({"count", "7916", "--dim", "2", "--model", "hyperbolic"}).status == kExitUsage);
  CHECK(run({"encode", "/nonexistent/graph.txt"}).status == kExitUsage);
  const Run help = run({"--help"});
  CHECK(help.status == kExitOk);
  CHECK(help.out.find("count") != std::string::npos);
}

TEST_CASE("rigidity report") {
  const Run r = run({"rigid", "7916", "--dim", "2"});
  CHECK(r.status == kExitOk);
  CHECK(r.out ==
        "rank 9 of 9\nrigid yes\nindependent yes\nminimally-rigid yes\npebble-game tight\n");
}

TEST_CASE("count") {
  const Run both = run({"count", "7916", "--dim", "2"});
  CHECK(both.status == kExitOk);
  CHECK(both.out == "c_2 = 12, c_2* = 16\n");

  CHECK(run({"count", "7916", "--dim", "2", "--model", "spherical", "--doubled"}).out ==
        "c_2* = 32 (doubled)\n");
  CHECK(run({"count", "15", "--dim", "2", "--n", "4"}).out == "c_2 = inf, c_2* = inf\n");

  const Run js = run({"count", "7916", "--dim", "2", "--model", "euclidean", "--json"});
  const auto j = nlohmann::json::parse(js.out);
  CHECK(j["code"] == "7916");
  CHECK(j["value"] == 12);
  CHECK(j["raw_count"] == 48);
  CHECK(j["model"] == "euclidean");
  CHECK(j["trials"].size() == 3);
}

TEST_CASE("enumerate") {
  const Run r = run({"enumerate", "--n", "6", "--min-degree", "3"});
  CHECK(r.status == kExitOk);
  CHECK(r.out == "7672\n7916\n");
  CHECK(run({"enumerate", "--n", "9"}).status == kExitUsage);
}

TEST_CASE("stats on the published table") {
  const Run r = run({"stats", testing::data_path("lower_bound_graphs.csv"), "--per-n"});
  CHECK(r.status == kExitOk);
  CHECK(r.out.find("n=12 ") != std::string::npos);
  CHECK(r.out.find("theta=160/63") != std::string::npos);
  CHECK(r.out.find("alpha bounds: 1.1139 ≤ α_2 ≤ 3.4642") != std::string::npos);
}

TEST_CASE("batch writes a record CSV") {
  const auto codes = temp_file("codes.txt");
  const auto out = temp_file("out.csv");
  {
    std::ofstream f(codes);
    f << "# two graphs\n7916\n7672\n";
  }
  const Run r = run({"batch", codes.string(), "--dim", "2", "--out", out.string()});
  CHECK(r.status == kExitOk);
  std::ifstream in(out);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(text.str().find("7916,6,2,12,16,4,3,1.333333333\n") != std::string::npos);
  CHECK(text.str().find("7672,6,2,8,8,1,1,1\n") != std::string::npos);

  const Run stats = run({"stats", out.string(), "--pairs"});
  CHECK(stats.out.find("8,8,1") != std::string::npos);
  std::filesystem::remove(codes);
  std::filesystem::remove(out);
}
