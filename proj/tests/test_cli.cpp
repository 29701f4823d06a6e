#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

#include "popcorn/version.hpp"

using nlohmann::json;

namespace {

struct RunResult {
  std::string out;
  int code = -1;
};

// Run the installed binary with the given arguments, capturing stdout.
// stderr is dropped unless merge_stderr is set.
RunResult run_cli(const std::string& args, bool merge_stderr = false) {
  const std::string cmd = std::string(CLI_BIN) + " " + args +
                          (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST_CASE("count emits the pinned CSV bytes", "[cli]") {
  const RunResult r = run_cli("count --mesh 1/4");
  REQUIRE(r.code == 0);
  REQUIRE(r.out == "mesh_num,mesh_den,count,method,q_max\n1,4,8,strip-fast,4\n");

  const RunResult multi = run_cli("count --mesh 1/4 --mesh 1/8 --mesh 1/16");
  REQUIRE(multi.code == 0);
  REQUIRE(multi.out ==
          "mesh_num,mesh_den,count,method,q_max\n"
          "1,4,8,strip-fast,4\n"
          "1,8,19,strip-fast,8\n"
          "1,16,48,strip-fast,16\n");
}

TEST_CASE("oracle subcommand agrees and is labeled", "[cli]") {
  const RunResult r = run_cli("oracle --mesh 1/4");
  REQUIRE(r.code == 0);
  REQUIRE(r.out ==
          "mesh_num,mesh_den,count,method,q_max\n1,4,8,brute-oracle,4\n");

  const RunResult strip_fast =
      run_cli("count --mesh 1/32 --region strip --k 1 --format json");
  const RunResult strip_slow =
      run_cli("oracle --mesh 1/32 --region strip --k 1 --format json");
  REQUIRE(strip_fast.code == 0);
  REQUIRE(strip_slow.code == 0);
  const json a = json::parse(strip_fast.out);
  const json b = json::parse(strip_slow.out);
  REQUIRE(a["rows"][0]["count"] == b["rows"][0]["count"]);
  REQUIRE(a["rows"][0]["region"]["kind"] == "strip");
  REQUIRE(b["rows"][0]["method"] == "brute-oracle");
}

TEST_CASE("count JSON carries meta and stays byte-stable", "[cli]") {
  const RunResult r = run_cli("count --mesh 1/4 --format json");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["meta"]["version"] == popcorn::kVersion);
  REQUIRE(j["meta"]["command"] == "count");
  REQUIRE_FALSE(j["meta"].contains("wall_ms"));
  REQUIRE(j["rows"][0]["count"] == 8);
  REQUIRE(j["rows"][0]["mesh_num"] == 1);
  REQUIRE(j["rows"][0]["mesh_den"] == 4);
  REQUIRE(j["rows"][0]["region"]["kind"] == "full-square");

  const RunResult timed = run_cli("count --mesh 1/4 --format json --timing");
  REQUIRE(json::parse(timed.out)["meta"].contains("wall_ms"));

  // identical configs, different worker counts: byte-identical output
  const RunResult w1 = run_cli("count --mesh 1/1024 --format json --workers 1");
  const RunResult w3 = run_cli("count --mesh 1/1024 --format json --workers 3");
  REQUIRE(w1.code == 0);
  REQUIRE(w1.out == w3.out);
  const RunResult w1csv = run_cli("count --mesh 1/1024 --workers 1");
  const RunResult w3csv = run_cli("count --mesh 1/1024 --workers 3");
  REQUIRE(w1csv.out == w3csv.out);
  REQUIRE(w1csv.out.find("1,1024,11888,strip-fast,1024") != std::string::npos);
}

TEST_CASE("count writes to --out instead of stdout", "[cli]") {
  const std::string path = "cli_out_test.csv";
  std::remove(path.c_str());
  const RunResult direct = run_cli("count --mesh 1/8");
  const RunResult filed = run_cli("count --mesh 1/8 --out " + path);
  REQUIRE(filed.code == 0);
  REQUIRE(filed.out.empty());
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  REQUIRE(ss.str() == direct.out);
  std::remove(path.c_str());
}

TEST_CASE("boxdim fits the full-set dimension", "[cli]") {
  const RunResult r = run_cli("boxdim --preset pow2 --kmin 8 --kmax 12");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["meta"]["config"]["preset"] == "pow2");
  const double slope = j["fit"]["slope"].get<double>();
  REQUIRE(slope >= 1.2);
  REQUIRE(slope <= 1.45);
  REQUIRE(j["rows"].size() == 5);
}

TEST_CASE("boxdim demo set fits near one half", "[cli]") {
  const RunResult r =
      run_cli("boxdim --set demo --preset pow2 --kmin 8 --kmax 16");
  REQUIRE(r.code == 0);
  const double slope = json::parse(r.out)["fit"]["slope"].get<double>();
  REQUIRE(slope >= 0.45);
  REQUIRE(slope <= 0.55);
}

TEST_CASE("boxdim tri-sixth default sweep reports without a fit", "[cli]") {
  const RunResult r = run_cli("boxdim --preset tri-sixth --set demo");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["rows"].size() == 2);
  REQUIRE(j["fit"].is_null());
}

TEST_CASE("spectrum JSON pins the theta=1/2 windows", "[cli]") {
  const RunResult r = run_cli("spectrum --theta 1/2 --nmin 2 --nmax 4");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  const json& est = j["estimates"][0];
  REQUIRE(est["theta"] == "1/2");
  REQUIRE(est["theoretical"] == "5/3");
  REQUIRE(est["trimmed_to_budget"] == false);
  REQUIRE(est["n_max_effective"] == 4);
  REQUIRE(est["points"].size() == 3);
  REQUIRE(est["points"][0]["count"] == 23);
  REQUIRE(est["points"][1]["count"] == 72);
  REQUIRE(est["points"][2]["count"] == 172);
  REQUIRE(est["points"][0]["mesh"] == "1/36");
  REQUIRE(est.contains("fitted_s"));

  const RunResult csv =
      run_cli("spectrum --theta 1/2 --nmin 2 --nmax 4 --format csv");
  REQUIRE(csv.code == 0);
  REQUIRE(csv.out.rfind(
              "theta,n,window_num,window_den,mesh_num,mesh_den,count,fitted_s\n",
              0) == 0);
  REQUIRE(csv.out.find("1/2,2,1,6,1,36,23,") != std::string::npos);
}

TEST_CASE("spectrum trims the default range to the budget", "[cli]") {
  // theta = 3/10 cannot afford n beyond 6 under the default budget; without
  // an explicit --nmax the sweep trims itself and reports that it did
  const RunResult r = run_cli("spectrum --theta 3/10 --nmin 3");
  REQUIRE(r.code == 0);
  const json est = json::parse(r.out)["estimates"][0];
  REQUIRE(est["trimmed_to_budget"] == true);
  REQUIRE(est["n_max_effective"] == 6);
  REQUIRE(est["points"].size() == 4);

  // an explicit --nmax is honored strictly: the guard aborts instead
  const RunResult hard = run_cli("spectrum --theta 3/10 --nmin 3 --nmax 12", true);
  REQUIRE(hard.code == 3);
  REQUIRE(hard.out.find("cost-guard abort") != std::string::npos);
  REQUIRE(hard.out.find("offending parameter 7") != std::string::npos);
}

TEST_CASE("verify duffin-schaeffer passes", "[cli]") {
  const RunResult r =
      run_cli("verify --suite duffin-schaeffer --nmax 50 --delta 1/10000000");
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  REQUIRE(j["pass"] == true);
  REQUIRE(j["suites"][0]["suite"] == "duffin-schaeffer");
  REQUIRE(j["suites"][0]["pass"] == true);
}

TEST_CASE("verify strip-lemma reports its counterexample", "[cli]") {
  const RunResult r = run_cli("verify --suite strip-lemma");
  REQUIRE(r.code == 2);
  const json s = json::parse(r.out)["suites"][0];
  REQUIRE(s["pass"] == false);
  REQUIRE(s["violations"] == 151);
  REQUIRE(s["first_violation"]["k"] == 135);
  REQUIRE(s["first_violation"]["gap"] == "55");
  REQUIRE(s["first_violation"]["upper"] == "40000/729");
}

TEST_CASE("verify chung-erdos certifies lower bounds", "[cli]") {
  const RunResult r = run_cli("verify --suite chung-erdos --delta 1/1024");
  REQUIRE(r.code == 0);
  const json s = json::parse(r.out)["suites"][0];
  REQUIRE(s["pass"] == true);
  REQUIRE(s["violations"] == 0);
  REQUIRE(s["per_delta"][0]["k_lo"] == 11);
  REQUIRE(s["per_delta"][0]["k_hi"] == 22);
  // single delta: no growth-rate regression is possible, so none is claimed
  REQUIRE_FALSE(s.contains("aggregated_slope"));
}

TEST_CASE("cost guard exits 3", "[cli]") {
  const RunResult r = run_cli("count --mesh 1/131072", true);
  REQUIRE(r.code == 3);
  REQUIRE(r.out.find("cost-guard abort") != std::string::npos);
  REQUIRE(r.out.find("131072") != std::string::npos);
}

TEST_CASE("usage errors exit 64", "[cli]") {
  REQUIRE(run_cli("count").code == 64);                   // missing --mesh
  REQUIRE(run_cli("count --mesh 0.25").code == 64);       // decimals rejected
  REQUIRE(run_cli("count --mesh 1/4 --bogus").code == 64);
  REQUIRE(run_cli("count --mesh 3/4").code == 64);        // mesh too coarse
  REQUIRE(run_cli("count --mesh 1/8 --mesh 1/4").code == 64);  // not decreasing
  REQUIRE(run_cli("verify --suite bogus").code == 64);
  REQUIRE(run_cli("verify").code == 64);                  // --suite required
  REQUIRE(run_cli("spectrum --theta 5/4").code == 64);
  REQUIRE(run_cli("frobnicate").code == 64);
  const RunResult msg = run_cli("count --mesh 0.25", true);
  REQUIRE(msg.out.find("expected a rational") != std::string::npos);
}

TEST_CASE("version flag", "[cli]") {
  const RunResult r = run_cli("--version");
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find(popcorn::kVersion) != std::string::npos);
}

TEST_CASE("svg output is a standalone plot", "[cli]") {
  const RunResult r =
      run_cli("count --mesh 1/4 --mesh 1/16 --mesh 1/64 --format svg");
  REQUIRE(r.code == 0);
  REQUIRE(r.out.rfind("<svg", 0) == 0);
  REQUIRE(r.out.find("</svg>") != std::string::npos);
  REQUIRE(r.out.find("circle") != std::string::npos);

  const RunResult box =
      run_cli("boxdim --preset pow2 --kmin 4 --kmax 8 --format svg");
  REQUIRE(box.code == 0);
  REQUIRE(box.out.find("stroke-dasharray") != std::string::npos);  // fit line
}
