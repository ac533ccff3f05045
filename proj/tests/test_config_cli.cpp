#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "aubry/config.hpp"
#include "doctest.h"

using namespace aubry;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int exit_code;
  std::string output;
};

CliRun run_cli(const std::string& args) {
  std::string cmd = std::string(AUBRY_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[512];
  while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

fs::path write_temp(const std::string& name, const std::string& text) {
  fs::path dir = fs::temp_directory_path() / "aubry_cli_tests";
  fs::create_directories(dir);
  fs::path p = dir / name;
  std::ofstream f(p, std::ios::binary);
  f << text;
  return p;
}

std::string small_config(const std::string& extra_lagrangian = "") {
  std::string lag = extra_lagrangian.empty()
                        ? std::string("{\"f_kind\":\"two_well\"}")
                        : extra_lagrangian;
  return "{\n"
         "  \"schema_version\": 1,\n"
         "  \"grid\": {\"n\": 16, \"h_time\": 0.125, \"speed_cap\": 3.0},\n"
         "  \"lagrangian\": " + lag + ",\n"
         "  \"sweep\": {\"seed\": 7, \"num_perturbations\": 1, \"amplitude\": 0.02,\n"
         "             \"fourier_degree\": 2, \"classes\": [[0,0]]}\n"
         "}\n";
}

int count_lines(const fs::path& p) {
  std::ifstream f(p);
  int lines = 0;
  std::string s;
  while (std::getline(f, s)) ++lines;
  return lines;
}

}  // namespace

TEST_SUITE_BEGIN("config_cli");

TEST_CASE("config parsing and validation") {
  Config cfg = Config::from_json_text(small_config());
  CHECK(cfg.grid.n == 16);
  CHECK(cfg.example.has_value());
  CHECK(cfg.example->f_kind == FKind::two_well);
  CHECK(cfg.sweep.num_perturbations == 1);

  // defaults when blocks are missing
  Config defaults = Config::from_json_text("{}");
  CHECK(defaults.grid.n == 64);
  CHECK(defaults.grid.h_time == doctest::Approx(1.0 / 32));

  // parse errors carry line/column
  try {
    Config::from_json_text("{\n  \"grid\": {\n    \"n\": oops\n  }\n}");
    FAIL("expected ConfigError");
  } catch (const ConfigError& ex) {
    CHECK(std::string(ex.what()).find("line 3") != std::string::npos);
  }

  // unknown fields and bad values are rejected with their path
  CHECK_THROWS_WITH_AS(Config::from_json_text("{\"grid\": {\"m\": 3}}"),
                       doctest::Contains("grid.m"), ConfigError);
  CHECK_THROWS_AS(Config::from_json_text("{\"schema_version\": 2}"), ConfigError);
  CHECK_THROWS_AS(Config::from_json_text("{\"grid\": {\"n\": 4}}"), ConfigError);
  CHECK_THROWS_AS(
      Config::from_json_text("{\"lagrangian\": {\"f_kind\": \"bogus\"}}"),
      ConfigError);

  // explicit one-form block
  Config one = Config::from_json_text(
      "{\"lagrangian\": {\"oneform\": {\"max_degree\": 1,"
      "\"coeffs1\": [], \"coeffs2\": [[0.5, 0.0, 1, 0]]}}}");
  CHECK_FALSE(one.example.has_value());
  REQUIRE(one.oneform.has_value());
  CHECK(one.oneform->comp2().size() == 1);
  CHECK(one.lagrangian().non_closed());
}

TEST_CASE("config echo is stable json") {
  Config cfg = Config::from_json_text(small_config());
  std::string echo1 = cfg.echo_json();
  std::string echo2 = Config::from_json_text(small_config()).echo_json();
  CHECK(echo1 == echo2);
  CHECK(echo1.find("\"n\": 16") != std::string::npos);
}

TEST_CASE("cli: example-verify smoke run") {
  fs::path cfg = write_temp("ok.json", small_config());
  fs::path out = fs::temp_directory_path() / "aubry_cli_tests" / "verify_out";
  fs::remove_all(out);
  CliRun r = run_cli("example-verify --config " + cfg.string() + " --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(out / "report.json"));
  CHECK(fs::exists(out / "alpha.csv"));
  CHECK(fs::exists(out / "classes.json"));
  CHECK(fs::exists(out / "measure.json"));
}

TEST_CASE("cli: validation failures exit 1") {
  fs::path bad = write_temp("bad_n.json", "{\"grid\": {\"n\": 4}}");
  CliRun r = run_cli("alpha --config " + bad.string());
  CHECK(r.exit_code == 1);

  fs::path malformed = write_temp("malformed.json", "{\n  \"grid\": {,}\n}\n");
  CliRun r2 = run_cli("alpha --config " + malformed.string());
  CHECK(r2.exit_code == 1);
  CHECK(r2.output.find("line") != std::string::npos);

  CliRun r3 = run_cli("alpha --n 4");
  CHECK(r3.exit_code == 1);
}

TEST_CASE("cli: classes-grid emits one row per class") {
  fs::path cfg = write_temp("ok2.json", small_config());
  fs::path out = fs::temp_directory_path() / "aubry_cli_tests" / "alpha_out";
  fs::remove_all(out);
  CliRun r = run_cli("alpha --config " + cfg.string() + " --classes-grid 3x3 --out " +
                     out.string());
  CHECK(r.exit_code == 0);
  CHECK(count_lines(out / "alpha.csv") == 10);  // header + 9 rows
}

TEST_CASE("cli: integrate and measure produce artifacts") {
  fs::path cfg = write_temp("ok3.json", small_config());
  fs::path out = fs::temp_directory_path() / "aubry_cli_tests" / "misc_out";
  fs::remove_all(out);
  CliRun r1 = run_cli("integrate --config " + cfg.string() + " --out " + out.string());
  CHECK(r1.exit_code == 0);
  CHECK(fs::exists(out / "trajectory.csv"));
  CliRun r2 = run_cli("measure --config " + cfg.string() + " --out " + out.string());
  CHECK(r2.exit_code == 0);
  CHECK(fs::exists(out / "measure.json"));
  CliRun r3 = run_cli("classes --config " + cfg.string() + " --out " + out.string());
  CHECK(r3.exit_code == 0);
  CHECK(fs::exists(out / "classes.json"));
}

TEST_CASE("cli: sweep runs and is reproducible") {
  fs::path cfg = write_temp("sweep.json", small_config());
  fs::path out1 = fs::temp_directory_path() / "aubry_cli_tests" / "sweep1";
  fs::path out2 = fs::temp_directory_path() / "aubry_cli_tests" / "sweep2";
  fs::remove_all(out1);
  fs::remove_all(out2);
  CliRun r1 = run_cli("sweep --config " + cfg.string() + " --out " + out1.string());
  CliRun r2 = run_cli("sweep --config " + cfg.string() + " --out " + out2.string());
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);
  std::ifstream f1(out1 / "sweep.csv"), f2(out2 / "sweep.csv");
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());
  CHECK(!s1.str().empty());
}

TEST_SUITE_END();
