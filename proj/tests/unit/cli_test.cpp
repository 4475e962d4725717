// Copyright 2026 The war Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "support.hpp"
#include "war/io.hpp"
#include "war/transport.hpp"

namespace war {
namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string slurp(const io::fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

io::Json error_of(const Outcome& o) { return io::Json::parse(o.err)["error"]; }

TEST_SUITE("cli") {
  TEST_CASE("simulate writes the kept maps") {
    const auto dir = testing::temp_dir("cli_sim");
    const auto path = (dir / "s.json").string();
    const Outcome o = run({"simulate", "--alpha", "0.5", "--s", "zeta:-2", "--steps", "300", "--burn-in", "100",
                           "--seed", "7", "--out", path});
    REQUIRE(o.code == 0);
    CHECK(io::Json::parse(o.out)["n"] == 200);
    const MapSeries s = io::read_map_series(path);
    CHECK(s.size() == 200);
    CHECK(s.meta.seed == Seed{7});
  }

  TEST_CASE("simulate is deterministic") {
    const auto dir = testing::temp_dir("cli_det");
    for (const char* name : {"a.json", "b.json"}) {
      REQUIRE(run({"simulate", "--alpha", "-0.4", "--s", "kinked", "--steps", "60", "--burn-in", "10",
                   "--seed", "3", "--m", "200", "--out", (dir / name).string()})
                  .code == 0);
    }
    CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
    CHECK(slurp(dir / "a.json").size() > 0);
  }

  TEST_CASE("alpha zero without noise repeats S") {
    const auto dir = testing::temp_dir("cli_const");
    REQUIRE(run({"simulate", "--alpha", "0", "--noise", "none", "--s", "zeta:-4", "--steps", "20", "--burn-in",
                 "5", "--out", (dir / "s.json").string()})
                .code == 0);
    const MapSeries s = io::read_map_series(dir / "s.json");
    const UnitMap target = builtin_map("zeta:-4");
    for (const UnitMap& t : s.maps) CHECK(t == target);
  }

  TEST_CASE("fit recovers alpha from a noiseless simulation") {
    const auto dir = testing::temp_dir("cli_fit");
    REQUIRE(run({"simulate", "--alpha", "0.35", "--noise", "none", "--s", "zeta:-2", "--steps", "150",
                 "--burn-in", "0", "--out", (dir / "s.json").string()})
                .code == 0);
    const Outcome o = run({"fit", "--in", (dir / "s.json").string(), "--out", (dir / "f.json").string()});
    REQUIRE(o.code == 0);
    const io::Json j = io::read_json(dir / "f.json");
    CHECK(std::fabs(j["alpha_hat"].get<double>() - 0.35) <= 1e-3);
    CHECK(io::fs::exists(dir / "f_s_hat.csv"));
    CHECK(io::fs::exists(dir / "f_profile.csv"));
    CHECK(lp_distance(io::read_unit_map(dir / "f_s_hat.csv"), builtin_map("zeta:-2"), 2.0) <= 5e-3);
  }

  TEST_CASE("fit dispatches on the system and the model") {
    const auto dir = testing::temp_dir("cli_dispatch");
    REQUIRE(run({"simulate", "--alpha", "0.3", "--system", "contract-about", "--s", "zeta:-2", "--steps", "120",
                 "--burn-in", "20", "--m", "200", "--distributions", (dir / "c.json").string(), "--model",
                 "increment", "--out", (dir / "s.json").string()})
                .code == 0);
    const Outcome alt = run({"fit", "--in", (dir / "s.json").string(), "--system", "contract-about", "--out",
                             (dir / "a.json").string()});
    REQUIRE(alt.code == 0);
    CHECK(io::Json::parse(alt.out)["system"] == "contract-about");

    const Outcome inc = run({"fit", "--in", (dir / "c.json").string(), "--model", "increment", "--out",
                             (dir / "i.json").string()});
    REQUIRE(inc.code == 0);
    CHECK(io::Json::parse(inc.out)["n_used"] == 98);  // 99 increments after dropping T_0 = id

    const Outcome missing = run({"fit", "--in", (dir / "c.json").string(), "--out", (dir / "x.json").string()});
    CHECK(missing.code == 2);
    CHECK(error_of(missing)["kind"] == "config");
  }

  TEST_CASE("transform operations") {
    const auto dir = testing::temp_dir("cli_transform");
    const auto inv = (dir / "inv.csv").string();
    REQUIRE(run({"transform", "--op", "invert", "--f", "zeta:-2", "--out", inv}).code == 0);
    const Outcome d = run({"transform", "--op", "distance", "--f", inv, "--g", "zeta:2"});
    REQUIRE(d.code == 0);
    CHECK(io::Json::parse(d.out)["lp"].get<double>() > 0.0);
    const Outcome e = run({"transform", "--op", "evaluate", "--f", "id", "--x", "0.25"});
    CHECK(io::Json::parse(e.out)["value"] == 0.25);
    const Outcome ca = run({"transform", "--op", "contract-about", "--f", "zeta:-2", "--g", "zeta:3", "--alpha",
                            "0", "--out", (dir / "ca.json").string()});
    REQUIRE(ca.code == 0);
    CHECK(io::read_unit_map(dir / "ca.json") == builtin_map("zeta:3"));
    CHECK(run({"transform", "--op", "compose", "--f", "id"}).code == 2);
  }

  TEST_CASE("ingest, check, compare and sweep run end to end") {
    const auto dir = testing::temp_dir("cli_misc");
    {
      std::ofstream csv(dir / "d.csv");
      csv << "period,value\n";
      for (int p = 0; p < 5; ++p) {
        for (int i = 0; i < 30; ++i) csv << p << ',' << (i * 7 + p * 3) % 31 + 0.5 * p << '\n';
      }
    }
    const Outcome ing = run({"ingest", "--in", (dir / "d.csv").string(), "--out", (dir / "c.json").string(),
                             "--m", "100"});
    REQUIRE(ing.code == 0);
    CHECK(io::Json::parse(ing.out)["periods"] == 5);

    const Outcome cmp = run({"compare", "--in", (dir / "c.json").string(), "--out", (dir / "r.json").string(),
                             "--alpha-step", "0.05"});
    REQUIRE(cmp.code == 0);
    CHECK(io::read_json(dir / "r.json")["bridging_holds"] == true);

    const Outcome chk = run({"check", "--alpha", "0.2", "--s", "zeta:-2"});
    REQUIRE(chk.code == 0);
    CHECK(io::Json::parse(chk.out)["satisfied"] == true);

    const Outcome swp = run({"sweep", "--pairs", "20", "--band", "0.5,2", "--m", "200"});
    REQUIRE(swp.code == 0);
    CHECK(io::Json::parse(swp.out)["violations"] == 0);
  }

  TEST_CASE("grid and rate subcommands") {
    const auto dir = testing::temp_dir("cli_grid");
    const Outcome g = run({"grid", "--alphas", "0,0.5", "--s-list", "zeta:-2", "--steps", "40", "--burn-in", "10",
                           "--replicates", "2", "--m", "100", "--alpha-step", "0.1", "--out",
                           (dir / "g.json").string(), "--csv", (dir / "g.csv").string()});
    REQUIRE(g.code == 0);
    CHECK(io::read_json(dir / "g.json")["cells"].size() == 2);
    CHECK(io::fs::exists(dir / "g.csv"));
    const Outcome r = run({"rate", "--ns", "10,20,40", "--replicates", "20", "--alpha", "0.3", "--burn-in", "5",
                           "--bootstrap", "10", "--m", "100", "--alpha-step", "0.1", "--out",
                           (dir / "r.json").string()});
    REQUIRE(r.code == 0);
    CHECK(io::read_json(dir / "r.json")["points"].size() == 3);
  }

  TEST_CASE("usage errors exit with code 2 and a JSON error") {
    const Outcome unknown = run({"simulate", "--alpha", "0.5", "--out", "x.json", "--bogus", "1"});
    CHECK(unknown.code == 2);
    CHECK(error_of(unknown)["kind"] == "usage");
    CHECK(error_of(unknown)["exit_code"] == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"simulate", "--out", "x.json"}).code == 2);  // --alpha is required
    const Outcome alpha = run({"simulate", "--alpha", "2", "--out", "x.json"});
    CHECK(alpha.code == 2);
    CHECK(error_of(alpha)["kind"] == "domain");
    const Outcome missing = run({"fit", "--in", "/nonexistent.json", "--out", "x.json"});
    CHECK(missing.code == 2);
    CHECK(error_of(missing)["kind"] == "input");
    CHECK(run({"simulate", "--alpha", "0.1", "--s", "nope", "--out", "x.json"}).code == 2);
  }

  TEST_CASE("help lists every flag") {
    const Outcome top = run({"--help"});
    CHECK(top.code == 0);
    for (const char* sub : {"simulate", "fit", "transform", "ingest", "check", "grid", "rate", "compare", "sweep"}) {
      CHECK(top.out.find(sub) != std::string::npos);
    }
    const Outcome sim = run({"simulate", "--help"});
    CHECK(sim.code == 0);
    for (const char* flag : {"--alpha", "--s", "--system", "--steps", "--burn-in", "--init", "--out",
                             "--distributions", "--model", "--reference", "--domain", "--noise", "--k-max",
                             "--weights", "--identity-prob", "--seed", "--m"}) {
      CHECK_MESSAGE(sim.out.find(flag) != std::string::npos, flag);
    }
    const Outcome fit = run({"fit", "--help"});
    for (const char* flag : {"--in", "--alpha-step", "--alpha-lo", "--alpha-hi", "--refine-tol", "--no-endpoints",
                             "--slope-rule"}) {
      CHECK_MESSAGE(fit.out.find(flag) != std::string::npos, flag);
    }
  }

  TEST_CASE("WAR_SEED overrides --seed") {
    const auto dir = testing::temp_dir("cli_env");
    auto sim = [&](const char* name, const char* seed) {
      return run({"simulate", "--alpha", "0.2", "--steps", "10", "--burn-in", "0", "--m", "50", "--seed", seed,
                  "--out", (dir / name).string()})
          .code;
    };
    REQUIRE(sim("a.json", "1") == 0);
    REQUIRE(sim("b.json", "2") == 0);
    ::setenv("WAR_SEED", "2", 1);
    const int code = sim("c.json", "1");
    ::unsetenv("WAR_SEED");
    REQUIRE(code == 0);
    CHECK(slurp(dir / "c.csv") == slurp(dir / "b.csv"));
    CHECK(slurp(dir / "a.csv") != slurp(dir / "b.csv"));
  }
}

}  // namespace
}  // namespace war
