#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("nnshift_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const fs::path& dir, const std::string& args) {
  const std::string cmd = std::string(NNSHIFT_PATH) + " --out-dir " + dir.string() + " " + args + " > " +
                          (dir / "stdout.txt").string() + " 2> " + (dir / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json load(const fs::path& p) { return nlohmann::json::parse(slurp(p)); }

}  // namespace

TEST_CASE("simulate writes summary, histogram and manifest") {
  const auto dir = scratch("simulate");
  REQUIRE(run(dir, "simulate --reps 50 --n-nodes 200") == 0);
  const auto summary = load(dir / "summary.json");
  CHECK(summary["config"]["n_nodes"] == 200);
  CHECK(summary["summary"]["mean"].get<double>() > 0.1);
  CHECK(slurp(dir / "histogram.csv").rfind("# master_seed=1\ncount,frequency\n", 0) == 0);
  const auto manifest = load(dir / "simulate_manifest.json");
  CHECK(manifest["command"] == "simulate");
  CHECK(manifest["master_seed"] == 1);
  CHECK(manifest["outputs"].size() == 2);
}

TEST_CASE("validation failures exit with status 2") {
  const auto dir = scratch("invalid");
  CHECK(run(dir, "simulate --n-nodes 2 --k 2") == 2);
  CHECK(slurp(dir / "stderr.txt").find("k <= N-1") != std::string::npos);
  CHECK(run(dir, "simulate --d 4") == 2);
  CHECK(run(dir, "simulate --p 1.5") == 2);
  CHECK(run(dir, "event-sim --horizon 0") == 2);
  CHECK(run(dir, "constants --d 3 --k 1 --method integral") == 2);
  CHECK(run(dir, "constants --d 2 --k 2 --method table") == 2);
  CHECK(run(dir, "simulate --no-such-flag") == 2);
  CHECK(run(dir, "simulate --strategy lrnns --d 2") == 2);
}

TEST_CASE("config file with an unknown field is rejected") {
  const auto dir = scratch("config");
  std::ofstream(dir / "cfg.json") << R"({"d": 1, "bananas": 3})";
  CHECK(run(dir, "simulate --config " + (dir / "cfg.json").string()) == 2);
  CHECK(slurp(dir / "stderr.txt").find("bananas") != std::string::npos);
}

TEST_CASE("graph-stats on the four-point fixture") {
  const auto dir = scratch("graph");
  REQUIRE(run(dir, std::string("graph-stats --points ") + FIXTURE_DIR + "/four_points.csv") == 0);
  const auto degrees = slurp(dir / "degrees.csv");
  CHECK(degrees.find("index,in_degree\n0,1\n1,2\n2,1\n3,0\n") != std::string::npos);
  const auto summary = load(dir / "graph_summary.json");
  CHECK(summary["star_roundtrip_ok"] == true);
  CHECK(summary["edges_equal_nk"] == true);
}

TEST_CASE("constants from the reference table") {
  const auto dir = scratch("constants");
  REQUIRE(run(dir, "constants --d 1 --k 1 --method table") == 0);
  const auto t = load(dir / "constants.json");
  CHECK(t["q"][0].get<double>() == doctest::Approx(0.25));
  CHECK(t["q"][1].get<double>() == doctest::Approx(0.5));
  REQUIRE(run(dir, "constants --d 2 --k 1 --method table") == 0);
  CHECK(load(dir / "constants.json")["q"][1].get<double>() == doctest::Approx(0.463));
}

TEST_CASE("export-spatial writes one file per p") {
  const auto dir = scratch("spatial");
  REQUIRE(run(dir, "export-spatial --d 2 --n-nodes 100 --p-values 0.25,0.5,0.75,1") == 0);
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().filename().string().rfind("spatial_p", 0) == 0) ++files;
  CHECK(files == 4);
  CHECK(load(dir / "export-spatial_manifest.json")["outputs"].size() == 4);
}

TEST_CASE("event-sim reports rates") {
  const auto dir = scratch("event");
  REQUIRE(run(dir, "event-sim --n-nodes 100 --horizon 50") == 0);
  const auto s = load(dir / "event_summary.json");
  CHECK(s["total_arrivals"] == s["total_joins"]);
}

TEST_CASE("NNS_OUTPUT_DIR is honoured") {
  const auto dir = scratch("env");
  const std::string cmd = "NNS_OUTPUT_DIR=" + dir.string() + " " + NNSHIFT_PATH +
                          " constants --d 1 --k 1 > /dev/null 2>&1";
  REQUIRE(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(dir / "constants.json"));
}
