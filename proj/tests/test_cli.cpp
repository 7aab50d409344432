// Copyright 2026 The slb Authors.
//
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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "slb/commands.hpp"
#include "slb/config.hpp"
#include "slb/errors.hpp"
#include "slb/format.hpp"

using namespace slb;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SLB_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string sample(const std::string& name) { return std::string(SLB_CONFIGS) + "/" + name; }

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("slb-cli-" + std::to_string(::getpid()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return (path_ / name).string();
  }

 private:
  fs::path path_;
};

}  // namespace

TEST_CASE("compare output") {
  const auto a = run("compare -f csv");
  CHECK(a.code == 0);
  CHECK(a.out.find("n,poisson,indep_alpha_n,indep_moment\r\n") == 0);
  CHECK(a.out.find("\r\n30,1.4969864550315") != std::string::npos);
  CHECK(run("compare -f csv").out == a.out);
  const auto j = json::parse(run("compare -f json").out);
  REQUIRE(j.size() == 10);
  CHECK(j[3]["n"] == 40);
  CHECK(j[3]["poisson"].get<double>() == doctest::Approx(4.40767).epsilon(1e-5));
  CHECK(j[3]["indep_alpha_n"].get<double>() == doctest::Approx(0.324195).epsilon(1e-5));
  CHECK(j[8]["poisson"].get<double>() == doctest::Approx(1227.67).epsilon(1e-5));
  CHECK(j[8]["indep_alpha_n"].get<double>() == doctest::Approx(136.300).epsilon(1e-5));
}

TEST_CASE("bounds output is deterministic and round-trips") {
  for (const char* cfg : {"reference-n30.json", "latent-n8.json", "explicit-joint.json"}) {
    const auto a = run("bounds -c " + sample(cfg) + " -f json");
    REQUIRE(a.code == 0);
    CHECK(run("bounds -c " + sample(cfg) + " -f json").out == a.out);
    const auto parsed = report_from_json(json::parse(a.out));
    const auto config = load_config(sample(cfg));
    CHECK(parsed == compile_report(config.model, config.options));
    CHECK(report_to_json(parsed).dump(2) + "\n" == a.out);
    const auto c = run("bounds -c " + sample(cfg) + " -f csv");
    CHECK(c.code == 0);
    CHECK(run("bounds -c " + sample(cfg) + " -f csv").out == c.out);
  }
}

TEST_CASE("bounds on the reference portfolio") {
  const auto j = json::parse(run("bounds -c " + sample("reference-n30.json") + " -f json").out);
  bool found = false;
  for (const auto& e : j["entries"]) {
    if (e["name"] == "indep_alpha_n") {
      found = true;
      CHECK(e["value"].get<double>() == doctest::Approx(0.109842).epsilon(1e-5));
    }
  }
  CHECK(found);
  const auto eq = json::parse(run("bounds -c " + sample("equal-p.json") + " -f json").out);
  CHECK(eq["best"]["value"].get<double>() <= 1e-12);
  const auto dep = json::parse(run("bounds -c " + sample("latent-n8.json") + " -f json").out);
  CHECK(dep.contains("exact_dsl"));
}

TEST_CASE("Monte Carlo output depends on the seed only") {
  const std::string base = "bounds -c " + sample("latent-n8.json") + " --monte-carlo -f json";
  const auto a = run(base + " --seed 5");
  REQUIRE(a.code == 0);
  CHECK(run(base + " --seed 5").out == a.out);
  CHECK(run(base + " --seed 6").out != a.out);
}

TEST_CASE("price") {
  const auto eq = json::parse(run("price -c " + sample("equal-p.json") + " -f json").out);
  REQUIRE(eq["tranches"].size() == 2);
  for (const auto& t : eq["tranches"]) CHECK(t["half_width"].get<double>() == 0.0);
  const auto lat = json::parse(run("price -c " + sample("latent-n8.json") + " -f json").out);
  for (const auto& t : lat["tranches"]) {
    const double exact = t["exact"].get<double>();
    CHECK(exact >= t["lower"].get<double>() - 1e-12);
    CHECK(exact <= t["upper"].get<double>() + 1e-12);
  }
  const auto by_path = run("price -c " + sample("portfolio-by-path.json") + " -f csv");
  CHECK(by_path.code == 0);
  CHECK(by_path.out.find("mezzanine") != std::string::npos);
}

TEST_CASE("exact distance curves") {
  const auto b = json::parse(run("exact-dsl -c " + sample("reference-n30.json") + " -f json").out);
  CHECK(b["against"] == "binomial");
  CHECK(b["d_sl"].get<double>() > 0.0);
  const auto p = json::parse(run("exact-dsl -c " + sample("reference-n30.json") + " --against poisson -f json").out);
  CHECK(p["lambda"].get<double>() == doctest::Approx(1.9).epsilon(1e-14));
}

TEST_CASE("exit codes") {
  TempDir dir;
  CHECK(run("compare").code == 0);
  CHECK(run("").code == 2);
  CHECK(run("no-such-command").code == 2);
  CHECK(run("compare -f xml").code == 2);
  CHECK(run("bounds -c /nonexistent/config.json").code == 2);
  CHECK(run("bounds -c " + dir.write("bad.json", "{ not json")).code == 2);
  CHECK(run("bounds -c " + dir.write("bad-p.json", R"({"n": 2, "p": [0.1, 1.5]})")).code == 2);
  CHECK(run("bounds -c " + sample("reference-n30.json") + " --samples 10").code == 2);
  CHECK(run("bounds -c " + sample("reference-n30.json") + " --p-chosen 1.5").code == 2);
  CHECK(run("price -c " + dir.write("no-tranches.json", R"({"n": 2, "p": [0.1, 0.2]})")).code == 2);
  // alpha = floor(1.9 / 0.99) = 1 fits; 0.95 on n = 2 does not
  CHECK(run("bounds -c " + dir.write("small.json", R"({"n": 2, "p": [0.1, 0.2]})") + " --p-chosen 0.95").code == 3);
  const std::string big = R"({"n": 80, "p": {"blocks": [{"count": 80, "p": 0.05}]},
                              "law": {"latent_one_dependent": {"theta": 0.4}}})";
  CHECK(run("bounds -c " + dir.write("big.json", big)).code == 4);
  const std::string mid = R"({"n": 30, "p": {"blocks": [{"count": 30, "p": 0.05}]},
                              "law": {"latent_one_dependent": {"theta": 0.4}}})";
  const auto path = dir.write("mid.json", mid);
  CHECK(run("exact-dsl -c " + path).code == 4);
  CHECK(run("bounds -c " + path + " --samples 2000").code == 0);
}

TEST_CASE("verify") {
  const auto ok = run("verify");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("FAIL ") == std::string::npos);
  CHECK(ok.out.find("KNOWN-FALSE  dg-tail-k1-branch") != std::string::npos);
  const auto mutated = run("verify --mutate-dg-constant 1.9");
  CHECK(mutated.code == 1);
  CHECK(mutated.out.find("FAIL         dg-uniform-bound") != std::string::npos);
}

TEST_CASE("config parsing") {
  SUBCASE("one portfolio source") {
    const auto both = json::parse(R"({"n": 1, "p": [0.1], "portfolio": {"n": 1, "p": [0.1]}})");
    CHECK_THROWS_AS(parse_config(both), ParseError);
    const auto inline_obj = parse_config(json::parse(R"({"portfolio": {"n": 2, "p": [0.1, 0.3]}})"));
    CHECK(inline_obj.model.n() == 2);
  }
  SUBCASE("schema errors are parse errors") {
    CHECK_THROWS_AS(parse_config(json::parse(R"([1, 2])")), ParseError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"n": 3, "p": [0.1]})")), ParseError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"n": 1, "p": [0.1], "law": "copula"})")), ParseError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"n": 1, "p": [0.1], "options": {"format": "xml"}})")),
                    ParseError);
    CHECK_THROWS_AS(
        parse_config(json::parse(R"({"n": 1, "p": [0.1], "tranches": [{"R": 1.0, "z_star": 0.1}]})")),
        ParseError);
    CHECK_THROWS_AS(parse_config(json::parse(R"({"n": 2, "p": [0.1, 0.2], "neighborhoods": [{"A": [1]}]})")),
                    ParseError);
  }
  SUBCASE("explicit neighborhoods are 1-based and round-trip") {
    const auto cfg = load_config(sample("explicit-joint.json"));
    CHECK(cfg.model.neighborhoods()[0].a == std::vector<int>{0, 1});
    const auto back = parse_config(model_to_json(cfg.model));
    CHECK(back.model.neighborhoods()[0].a == cfg.model.neighborhoods()[0].a);
    CHECK(back.model.neighborhoods()[2].b == cfg.model.neighborhoods()[2].b);
  }
  SUBCASE("options") {
    const auto cfg = load_config(sample("latent-n8.json"));
    CHECK(cfg.options.seed == 7);
    CHECK(cfg.tranches.size() == 3);
    CHECK(load_config(sample("equal-p.json")).format == OutputFormat::Markdown);
  }
}

TEST_CASE("near-zero display") {
  Table t({"x"});
  t.add_row({5e-15});
  t.add_row({0.0});
  const auto md = t.markdown();
  CHECK(md.find("| 0[^1] |") != std::string::npos);
  CHECK(md.find("[^1]: computed value 5e-15") != std::string::npos);
  CHECK(md.find("[^2]") == std::string::npos);
  CHECK(t.csv() == "x\r\n5e-15\r\n0\r\n");
  CHECK(human_number(1227.6712) == "1227.67");
  CHECK(csv_escape("a,\"b\"") == "\"a,\"\"b\"\"\"");
}
