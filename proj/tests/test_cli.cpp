// Copyright 2026 The allres Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "allres/cli.hpp"
#include "allres/report.hpp"

using namespace allres;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "allres");
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("allres_test_" + name);
  std::filesystem::remove_all(p);
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("grid and angle parsing") {
  CHECK(parse_grid("0:1:3") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK_THROWS_AS(parse_grid("0:1:0"), UsageError);
  CHECK_THROWS_AS(parse_grid("0:1"), UsageError);
  CHECK_THROWS_AS(parse_grid("a:1:2"), UsageError);
  CHECK(parse_thetas("0.5,1") == std::vector<double>{0.5, 1.0});
  CHECK_THROWS_AS(parse_thetas("0.5,,1"), UsageError);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"simulate"}).code == kExitUsage);
  CHECK(run({"simulate", "toffoli"}).code == kExitUsage);
  CHECK(run({"simulate", "cphase", "--theta", "0.1"}).code == kExitUsage);
  CHECK(run({"simulate", "cphase", "--table2-mode", "nope"}).code == kExitUsage);
  CHECK(run({"simulate", "cphase", "--config", "/nonexistent.cfg"}).code == kExitUsage);
  CHECK(run({"sweep", "kappa", "--grid", "0:1:0"}).code == kExitUsage);
  CHECK(run({"verify", "--inject-fault", "other"}).code == kExitUsage);
  const Run r = run({"--version"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find(kSoftwareVersion) != std::string::npos);
}

TEST_CASE("bad config value reports file and line") {
  const std::string dir = temp_dir("badcfg");
  write_text_file(dir + "/bad.cfg", "omega_a = 5.5 GHz\nkappa_a_inv = fast\n");
  const Run r = run({"simulate", "cphase", "--config", dir + "/bad.cfg"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("bad.cfg:2") != std::string::npos);
}

TEST_CASE("too coarse dt is rejected before running") {
  CHECK(run({"simulate", "cphase", "--dt", "0.05", "--out", temp_dir("dt")}).code == kExitUsage);
}

TEST_CASE("simulate with angles writes a deterministic report") {
  const std::string a = temp_dir("det_a");
  const std::string b = temp_dir("det_b");
  const std::vector<std::string> common = {"simulate", "swap", "--theta", "0.5,1.0", "--unitary-limit", "--density"};
  std::vector<std::string> args = common;
  args.insert(args.end(), {"--out", a});
  const Run ra = run(args);
  args = common;
  args.insert(args.end(), {"--out", b});
  const Run rb = run(args);
  REQUIRE(ra.code == kExitOk);
  CHECK(ra.out == rb.out);
  CHECK(ra.out.rfind("F=1.000000, T=61.27 ns", 0) == 0);
  // photon numbers exchange: sin^2(1.0) moves to r_a
  CHECK(ra.out.find("<n_a>=0.708073") != std::string::npos);
  const auto ja = nlohmann::ordered_json::parse(slurp(a + "/report_swap.json"));
  const auto jb = nlohmann::ordered_json::parse(slurp(b + "/report_swap.json"));
  CHECK(ja.contains("wall_time_s"));
  CHECK(deterministic_part(ja) == deterministic_part(jb));
  CHECK(ja["schema_version"] == kReportSchemaVersion);
  CHECK(ja["schedule"]["steps"].size() == 5);
  CHECK(slurp(a + "/density_swap_final_re.csv") == slurp(b + "/density_swap_final_re.csv"));
  const std::string csv = slurp(a + "/density_swap_final_im.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("simulate averaged c-phase") {
  const std::string dir = temp_dir("avg");
  const Run r = run({"simulate", "cphase", "--out", dir});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out == "F=0.996442, T=38.29 ns\n");
  const auto j = nlohmann::ordered_json::parse(slurp(dir + "/report_cphase.json"));
  CHECK(j["path"] == "channel");
  CHECK(j["propagations"] == 16);
  CHECK(j["config"]["omega_a"] == "5.5 GHz");
}

TEST_CASE("sweep writes a table") {
  const std::string dir = temp_dir("sweep");
  const Run r = run({"sweep", "kappa", "--grid", "0:0.001:2", "--gate", "cphase10", "--out", dir});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("non-increasing in kappa: yes") != std::string::npos);
  const std::string csv = slurp(dir + "/sweep_kappa_cphase10.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("verify detects the injected fault and exits 2") {
  const Run r = run({"verify", "--quick", "--inject-fault", "step2-area"});
  CHECK(r.code == kExitInvariant);
  CHECK(r.out.find("FAIL  cphase step ii state (integrated)") != std::string::npos);
  CHECK(r.out.find("PASS  cphase step i state (integrated)") != std::string::npos);
}
