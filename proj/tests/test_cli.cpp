#include "shortpath/report.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using shortpath::Json;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(SHORTPATH_CLI_PATH) + " " + args + " > cli_stdout.txt 2> cli_stderr.txt";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("gen writes a complete sk_pm instance") {
  REQUIRE(run("gen --model sk_pm --n 10 --seed 3 --out cli_inst.txt") == 0);
  std::ifstream f("cli_inst.txt");
  const shortpath::Instance inst = shortpath::load_instance(f);
  CHECK(inst.n_qubits() == 10);
  CHECK(inst.terms().size() == 45);
}

TEST_CASE("report contains every module's record") {
  REQUIRE(run("gen --model sk_pm --n 8 --seed 5 --out cli_inst8.txt") == 0);
  REQUIRE(run("report --in cli_inst8.txt --b 0.1 --K 3 --samples 2000 --out cli_report.json --csv cli_dos.csv") ==
          0);
  const Json r = Json::parse(slurp("cli_report.json"));
  CHECK(r["schema_version"] == shortpath::kReportSchemaVersion);
  CHECK(r["command"] == "report");
  for (const char* key :
       {"instance", "spectrum", "qgood", "mainconst", "kbound", "p_xk_norm", "simulation", "bw", "dos", "baseline"})
    CHECK_MESSAGE(r.contains(key), key);
  CHECK(r["bw"].contains("walk"));
  CHECK(r["bw"].contains("overlap"));
  CHECK(r["instance"]["K"] == 3);
  CHECK(slurp("cli_dos.csv").rfind("k,energy_low,count\n", 0) == 0);
}

TEST_CASE("identical configurations give byte-identical reports") {
  REQUIRE(run("report --model sk_pm --n 7 --seed 2 --b 0.05 --K 2 --samples 3000 --out cli_a.json") == 0);
  REQUIRE(run("report --model sk_pm --n 7 --seed 2 --b 0.05 --K 2 --samples 3000 --out cli_b.json") == 0);
  CHECK(slurp("cli_a.json") == slurp("cli_b.json"));
  REQUIRE(run("--workers 2 walk --model sk_pm --n 7 --seed 2 --b 0.05 --K 2 --samples 3000 --out cli_c.json") == 0);
  REQUIRE(run("--workers 2 walk --model sk_pm --n 7 --seed 2 --b 0.05 --K 2 --samples 3000 --out cli_d.json") == 0);
  CHECK(slurp("cli_c.json") == slurp("cli_d.json"));
  CHECK(Json::parse(slurp("cli_c.json"))["workers"] == 2);
  CHECK(Json::parse(slurp("cli_a.json"))["bw"]["walk"] == Json::parse(slurp("cli_c.json"))["bw"]["walk"]);
}

TEST_CASE("thm3 in the high regime reports mu = 0") {
  REQUIRE(run("thm3 --alpha 2 --c 1 --n 100000 --C 10 --out cli_thm3.json") == 0);
  const Json r = Json::parse(slurp("cli_thm3.json"));
  CHECK(r["parameters"]["regime"] == "high");
  CHECK(r["parameters"]["mu"] == 0.0);
  CHECK(r["parameters"]["K"] == 116.0);
}

TEST_CASE("failed theorem preconditions are findings, not errors") {
  REQUIRE(run("qgood --model toy --n 8 --n1 3 --p 0.5 --seed 1 --B 10 --K 1 --out cli_q.json") == 0);
  const Json r = Json::parse(slurp("cli_q.json"));
  CHECK(r["qgood"]["preconditions"][0]["pass"] == false);
  CHECK(r["qgood"]["conclusions"][0]["pass"].is_null());
}

TEST_CASE("subcommands emit their records") {
  CHECK(run("spectrum --model sk_pm --n 6 --seed 1 --b 0.1 --K 2 --csv cli_eig.csv") == 0);
  CHECK(Json::parse(slurp("cli_stdout.txt")).contains("spectrum"));
  CHECK(slurp("cli_eig.csv").rfind("index,eigenvalue\n", 0) == 0);
  // at N = 6 the K-bound saturates, so B = 0.1 |E0| > 1/4 leaves no branch; B = 0.2 decides branch 1
  CHECK(run("mainconst --model sk_pm --n 6 --seed 1 --b 0.1 --K 2") == 0);
  CHECK(Json::parse(slurp("cli_stdout.txt"))["mainconst"]["applicable"] == false);
  CHECK(run("mainconst --model sk_pm --n 6 --seed 1 --B 0.2 --K 2") == 0);
  CHECK(Json::parse(slurp("cli_stdout.txt"))["mainconst"]["branch"] == 1);
  CHECK(run("simulate --model sk_pm --n 6 --seed 1 --b 0 --K 1") == 0);
  const Json sim = Json::parse(slurp("cli_stdout.txt"));
  CHECK(sim["simulation"]["success_prob"].get<double>() ==
        doctest::Approx(sim["instance"]["n0"].get<double>() / 64.0).epsilon(1e-12));
  CHECK(run("dos --model sk_pm --n 10 --seed 1 --fit-min 1 --fit-max 8") == 0);
  CHECK(Json::parse(slurp("cli_stdout.txt"))["dos"]["total"] == 1024);
  CHECK(run("baseline --model sk_pm --n 8 --seed 1") == 0);
  CHECK(Json::parse(slurp("cli_stdout.txt"))["baseline"]["field_bound_holds"] == true);
}

TEST_CASE("operational errors exit nonzero") {
  CHECK(run("spectrum --model sk_pm --n 6 --b 0.1 --B 2") != 0);
  CHECK(run("spectrum --model nope --n 6 --b 0.1") != 0);
  CHECK(run("spectrum --in does_not_exist.txt --b 0.1") != 0);
  CHECK(run("spectrum --model sk_pm --n 6") != 0);
  CHECK(run("spectrum --model sk_pm --n 6 --b 1.5") != 0);
  CHECK(run("--max-qubits 4 spectrum --model sk_pm --n 6 --b 0.1") != 0);
  CHECK(run("frobnicate") != 0);
  CHECK(run("") != 0);
}
