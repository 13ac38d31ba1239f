// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "hslnr/cli.hpp"
#include "hslnr/config.hpp"

using namespace hslnr;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "hslnr");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
 public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / ("hslnr_test_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string str(const std::string& child = "") const { return (path_ / child).string(); }

 private:
  fs::path path_;
};

fs::path write_config(const TempDir& dir, const ExperimentConfig& c) {
  const auto p = dir.path() / "config.json";
  std::ofstream(p) << config_to_json(c);
  return p;
}

ExperimentConfig quick_sweep() {
  auto c = sum_rate_config();
  c.snr_grid_db = {-3.0, 6.0};
  c.n_channel_realizations = 4;
  c.ga.population_size = 8;
  c.ga.max_generations = 6;
  return c;
}

}  // namespace

TEST_CASE("cli usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"sweep", "--frobnicate"}).code == 2);
  CHECK(run({"sweep", "--format", "xml"}).code == 2);
  const auto missing = run({"sweep", "--config", "missing.json"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("missing.json") != std::string::npos);
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("oracle-check") != std::string::npos);
}

TEST_CASE("cli rejects invalid configs with exit 2") {
  TempDir dir("badcfg");
  const auto p = dir.path() / "config.json";
  std::ofstream(p) << R"({"n_rf": 1})";
  const auto r = run({"sweep", "--config", p.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("n_rf") != std::string::npos);
  std::ofstream(p, std::ios::trunc) << R"({"unknown_key": 1})";
  CHECK(run({"sweep", "--config", p.string()}).code == 2);
}

TEST_CASE("cli sweep is byte-identical across repeats and thread counts") {
  TempDir dir("sweep");
  const auto cfg = write_config(dir, quick_sweep());
  for (const char* fmt : {"csv", "json"}) {
    const auto a = run({"sweep", "--config", cfg.string(), "--out", dir.str("a"), "--format", fmt});
    const auto b = run({"sweep", "--config", cfg.string(), "--out", dir.str("b"), "--format", fmt, "--threads", "3"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    const std::string name = std::string("sweep.") + fmt;
    const auto ca = slurp(dir.path() / "a" / name);
    CHECK_FALSE(ca.empty());
    CHECK(ca == slurp(dir.path() / "b" / name));
  }
  const auto csv = slurp(dir.path() / "a" / "sweep.csv");
  CHECK(csv.find("scheme,snr_db,mean_sum_rate_bps_hz,std_err,n_realizations\n") != std::string::npos);
  const auto other = run({"sweep", "--config", cfg.string(), "--out", dir.str("c"), "--seed", "7"});
  REQUIRE(other.code == 0);
  const auto cc = slurp(dir.path() / "c" / "sweep.csv");
  CHECK(cc.find("# seed: 7\n") != std::string::npos);
  CHECK(cc != csv);
}

TEST_CASE("cli trace") {
  TempDir dir("trace");
  auto c = convergence_config();
  c.ga.max_generations = 12;
  const auto cfg = write_config(dir, c);
  const auto r = run({"trace", "--config", cfg.string(), "--out", dir.str(), "--snr-db", "5"});
  REQUIRE(r.code == 0);
  const auto text = slurp(dir.path() / "trace.csv");
  CHECK(text.find("generation,best_fitness,mean_fitness\n") != std::string::npos);
  std::size_t rows = 0;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') ++rows;
  }
  CHECK(rows == 1 + 13);
}

TEST_CASE("cli beams writes one file per scheme") {
  TempDir dir("beams");
  auto c = beam_pattern_config();
  c.ga.max_generations = 10;
  c.beam_grid_points = 181;
  const auto cfg = write_config(dir, c);
  const auto r = run({"beams", "--config", cfg.string(), "--out", dir.str()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("hybrid sidelobe above digital max sidelobe:") != std::string::npos);
  for (const char* scheme : {"digital_slnr", "hybrid_slnr"}) {
    const auto text = slurp(dir.path() / (std::string("beams_") + scheme + ".csv"));
    CHECK(text.find("angle_deg,node,gain_linear,gain_db\n") != std::string::npos);
    CHECK(text.find(std::string("# scheme: ") + scheme) != std::string::npos);
  }
}

TEST_CASE("cli oracle-check prints the hit rate") {
  const auto r = run({"oracle-check", "--runs", "4"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("GA reached the exhaustive maximum in") != std::string::npos);
  CHECK(r.out.find("/4 runs") != std::string::npos);
}
