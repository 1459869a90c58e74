#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zetares/error.hpp"
#include "zetares/experiment.hpp"

using namespace zr;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("zetares_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::string& args, std::string* out = nullptr) {
  const fs::path o = scratch() / "stdout.txt";
  const std::string cmd = std::string(ZETARES_CLI) + " " + args + " > " + o.string() + " 2> " +
                          (scratch() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  if (out) *out = slurp(o);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig cfg(const std::string& text) { return ExperimentConfig::from_json(json::parse(text)); }

}  // namespace

TEST_CASE("config JSON") {
  const ExperimentConfig c = cfg(R"({"command":"search","alpha":0.75,"T":"1000","step":0.05,"caps":{"max_T":5000}})");
  CHECK(c.command == "search");
  CHECK(*c.alpha == 0.75);
  CHECK(*c.T == 1000);
  CHECK(*c.caps.max_T == 5000);
  CHECK_FALSE(c.tau.has_value());
  const ExperimentConfig back = ExperimentConfig::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());
  CHECK_THROWS_AS(cfg(R"({"command":"search","alpah":0.75})"), InvalidArgument);
  CHECK_THROWS_AS(validate(cfg(R"({"alpha":0.75})")), InvalidArgument);
  CHECK_THROWS_AS(cfg(R"({"command":"search","alpha":"abc"})"), InvalidArgument);
  CHECK_THROWS_AS(cfg(R"({"command":"search","caps":{"max_q":1}})"), InvalidArgument);
}

TEST_CASE("merge precedence") {
  ExperimentConfig file = cfg(R"({"command":"search","alpha":0.6,"T":500,"step":0.1})");
  const ExperimentConfig flags = cfg(R"({"command":"search","alpha":0.8})");
  file.merge(flags);
  CHECK(*file.alpha == 0.8);
  CHECK(*file.T == 500);
  CHECK(*file.step == 0.1);
}

TEST_CASE("validation") {
  ExperimentConfig c = cfg(R"({"command":"search","alpha":0.4,"T":1000})");
  try {
    validate(c);
    FAIL("expected InvalidArgument");
  } catch (const InvalidArgument& e) {
    CHECK(std::string(e.what()).find("(1/2, 1)") != std::string::npos);
  }
  CHECK_THROWS_AS(validate(cfg(R"({"command":"fly"})")), InvalidArgument);
  CHECK_THROWS_AS(validate(cfg(R"({"command":"measure","alpha":0.75,"T":1000,"tau":0.5,"samples":10})")),
                  InvalidArgument);
}

TEST_CASE("run report round trip") {
  const RunReport r = run(cfg(R"({"command":"gcd-sum","alpha":0.75,"M":4,"mode":"compare"})"));
  CHECK(r.all_passed());
  CHECK(r.command == "gcd-sum");
  CHECK(r.version == version());
  const RunReport back = RunReport::from_json(r.to_json());
  CHECK(back.to_json() == r.to_json());
  CHECK(r.to_json()["all_passed"] == true);
  CHECK_THROWS_AS(plot_data_csv(r), InvalidArgument);
}

TEST_CASE("exit codes through execute") {
  CHECK(execute(cfg(R"({"command":"gcd-sum","alpha":0.75,"M":4})")).exit_code == 0);
  CHECK(execute(cfg(R"({"command":"gcd-sum","alpha":0.4,"M":4})")).exit_code == 2);
  CHECK(execute(cfg(R"({"command":"construct","M":30})")).exit_code == 3);
  CHECK(execute(cfg(R"({"command":"search","alpha":0.75,"T":1e9})")).exit_code == 3);
  CHECK(execute(cfg(R"({"command":"zeta","alpha":0.75,"t":1e4,"method":"corrected","x":10})")).exit_code == 2);
}

TEST_CASE("CSV grids") {
  const fs::path a = scratch() / "a.csv";
  const fs::path b = scratch() / "b.csv";
  const std::string base = R"({"command":"zeta","alpha":0.75,"method":"corrected","t_start":0,"t_stop":50,"points":26,"csv":")";
  REQUIRE(execute(cfg(base + a.string() + "\"}")).exit_code == 0);
  REQUIRE(execute(cfg(base + b.string() + "\"}")).exit_code == 0);
  const std::string ca = slurp(a);
  CHECK(ca == slurp(b));
  CHECK(ca.rfind("t,re,im,modulus,method\n", 0) == 0);
  CHECK(ca.find('\r') == std::string::npos);
  CHECK(std::count(ca.begin(), ca.end(), '\n') == 27);

  RunReport empty;
  empty.grid = PlotGrid{{"t", "note"}, {}};
  CHECK(plot_data_csv(empty) == "t,note\n");
  empty.grid->rows.push_back({"1", "a,b"});
  CHECK(plot_data_csv(empty) == "t,note\n1,\"a,b\"\n");
}

TEST_CASE("command-line binary") {
  std::string out;
  CHECK(cli("gcd-sum --alpha 0.75 --M 4", &out) == 0);
  const json j = json::parse(out);
  CHECK(j["command"] == "gcd-sum");
  CHECK(j["all_passed"] == true);
  CHECK(cli("gcd-sum --alpha 0.4 --M 4") == 2);
  CHECK(cli("construct --M 30") == 3);
  CHECK(cli("search --alpha 0.75 --T 1e9") == 3);
  CHECK(cli("frobnicate") == 2);
  CHECK(cli("gcd-sum --alpha 0.75 --M 4 --bogus 1") == 2);
  CHECK(cli("lemma-check --lemma 1c --alpha 0.75 --T 1e4 --M 8") == 0);

  // Flags override the file.
  const fs::path conf = scratch() / "conf.json";
  std::ofstream(conf) << R"({"command":"gcd-sum","alpha":0.6,"M":3})";
  CHECK(cli("gcd-sum --config " + conf.string() + " --alpha 0.75", &out) == 0);
  const json k = json::parse(out);
  CHECK(k["config"]["alpha"] == "0.75");
  CHECK(k["config"]["M"] == 3);

  const fs::path o1 = scratch() / "o1.json";
  const fs::path o2 = scratch() / "o2.json";
  CHECK(cli("measure --alpha 0.75 --tau 0.05 --T 1000 --samples 2000 --seed 5 --out " + o1.string()) <= 1);
  CHECK(cli("measure --alpha 0.75 --tau 0.05 --T 1000 --samples 2000 --seed 5 --out " + o2.string()) <= 1);
  json r1 = json::parse(slurp(o1));
  json r2 = json::parse(slurp(o2));
  for (json* r : {&r1, &r2}) {
    r->erase("wall_time_seconds");
    (*r)["config"].erase("out");
  }
  CHECK(r1 == r2);
}
