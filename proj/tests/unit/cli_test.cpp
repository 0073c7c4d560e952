/*
 * Copyright 2026 The Springback Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"

using springback::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "springback");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("threshold") {
  auto r = call({"threshold", "springback", "--w", "0.5", "--lambda", "0.25", "--alpha", "1.3333"});
  CHECK(r.code == 0);
  double w = 0, v = 0;
  std::istringstream(r.out) >> w >> v;
  CHECK(v == doctest::Approx(0.375).epsilon(1e-4));
  r = call({"threshold", "soft", "--w", "1,-1,0.1"});
  CHECK(r.out == "1 0.75\n-1 -0.75\n0.1 0\n");
}

TEST_CASE("toy bounds") {
  const auto r = call({"bounds", "--toy"});
  CHECK(r.code == 0);
  for (const char* v : {"0.138509", "0.0271281", "0.233288", "0.139124", "0.0806814", "0.000286521"})
    CHECK(r.out.find(v) != std::string::npos);
  const auto rows = springback::cli::toy_thresholds();
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].condition_holds);
  CHECK_FALSE(rows[5].condition_holds);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(call({}).code == 2);
  CHECK(call({"frobnicate"}).code == 2);
  CHECK(call({"threshold", "soft", "--w", "1", "--bogus"}).code == 2);
  CHECK(call({"threshold", "hard", "--w", "1"}).code == 2);
  CHECK(call({"bounds"}).code == 2);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("missing config names the file") {
  const auto r = call({"bench", "--config", "missing.cfg"});
  CHECK(r.code != 0);
  CHECK(r.err.find("missing.cfg") != std::string::npos);
}

TEST_CASE("solve a generated instance") {
  auto r = call({"solve", "--m", "30", "--n", "80", "--sparsity", "4", "--seed", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("CONVERGED") != std::string::npos);
  r = call({"solve", "--solver", "aiht", "--problem", "nowhere.json"});
  CHECK(r.code == 1);
  CHECK(r.err.find("nowhere.json") != std::string::npos);
}

TEST_CASE("bench then report") {
  const auto dir = std::filesystem::temp_directory_path() / "springback_cli_test";
  std::filesystem::remove_all(dir);
  auto r = call({"bench", "--preset", "fig4", "--quiet", "--serial", "--out", dir.string(), "--set",
                 "experiment.trials=2", "--set", "experiment.values=6", "--set",
                 "experiment.solvers=dca_springback admm_l1"});
  REQUIRE(r.code == 0);
  r = call({"report", (dir / "records.csv").string()});
  CHECK(r.code == 0);
  std::ifstream in(dir / "summary.csv");
  std::stringstream stored;
  stored << in.rdbuf();
  CHECK(r.out == stored.str());
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
