#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kData = RCM_DATA_DIR;

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("rcm_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(RCM_CLI_PATH) + " " + args + " > " + (scratch() / "stdout.txt").string() + " 2> " +
                          (scratch() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json report(const std::string& args, int expected_exit, const std::string& name = "report.json") {
  const auto out = scratch() / name;
  fs::remove(out);
  CHECK(run(args + " --out " + out.string()) == expected_exit);
  REQUIRE(fs::exists(out));
  return json::parse(slurp(out));
}

std::string data(const std::string& f) { return kData + "/" + f; }

}  // namespace

TEST_CASE("verify-kernels") {
  auto r = report("verify-kernels --dim 1", 0);
  CHECK(r["pass"] == true);
  CHECK(r["max_rel_err"].get<double>() < 1e-12);
  CHECK(r["exit_code"] == 0);
  CHECK(!r["rows"].empty());
  // p != 2 exposes the mismatch with the closed-form norm.
  r = report("verify-kernels --dim 2 --p 1.3333333333333333", 1);
  CHECK(r["pass"] == false);
  CHECK(r["max_rel_err_series"].get<double>() < r["max_rel_err"].get<double>());
}

TEST_CASE("criteria and equivalence") {
  auto r = report("criteria --measure " + data("sigma_d1.json"), 0);
  CHECK(r["agree"] == true);
  for (const auto& c : r["conditions"]) {
    CHECK(c["verdict"] == "positive");
    CHECK(c["trend"].back().get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(r["config"]["measure"] == "sigma_d1.json");
  CHECK(fs::exists(scratch() / "report.csv"));
  CHECK(slurp(scratch() / "report.csv").rfind("condition,index,parameter,value\n", 0) == 0);

  r = report("equivalence --measure " + data("half_sphere_d1.json"), 0);
  CHECK(r["agree"] == true);
  for (const auto& c : r["conditions"]) CHECK(c["verdict"] == "degenerate");

  r = report("equivalence --measure " + data("origin_atom_d1.json"), 0);
  for (const auto& c : r["conditions"]) CHECK(c["verdict"] == "degenerate");
}

TEST_CASE("pack") {
  auto r = report("pack --dim 1 --delta 0.5 --height 0.05", 0);
  CHECK(r["pass"] == true);
  CHECK(r["overlapping_pairs"] == 0);
  CHECK(r["uncovered"] == 0);
  CHECK(r["balls"].get<int>() == static_cast<int>(r["ball_centers"].size()));
  r = report("pack --dim 2 --delta 0.5 --height 0.3 --measure " + data("atoms_d2.json"), 0);
  CHECK(r["pass"] == true);
  CHECK(run("pack --dim 1 --delta 0.5 --height 0.6") == 2);
}

TEST_CASE("dbr-check") {
  auto r = report("dbr-check --symbol " + data("const_half.json") + " --measure " + data("sigma_d1.json"), 0);
  CHECK(r["necessary_condition"]["constant"].get<double>() == doctest::Approx(4.0 / 3.0));
  CHECK(r["one_minus_b_integral"]["verdict"] == "finite");
  r = report("dbr-check --symbol " + data("aleksandrov.json") + " --measure " + data("sigma_d1.json"), 0);
  CHECK(r["one_minus_b_integral"]["verdict"] == "divergent");
}

TEST_CASE("refute-sampling") {
  auto r = report("refute-sampling --symbol " + data("const_half.json") + " --points " + data("dyadic_e1.json"), 0);
  CHECK(r["verdict"] == "refuted");
  CHECK(r["candidate_boundary_mass"] == 0.0);
  r = report("refute-sampling --symbol " + data("blaschke.json") + " --points " + data("dyadic_e1.json"), 0);
  CHECK(r["verdict"] == "inconclusive");
  CHECK(r["non_inner_node"].is_null());
}

TEST_CASE("input errors exit with code 2") {
  CHECK(run("criteria --measure /nonexistent/m.json") == 2);
  CHECK(run("criteria --p 0") == 2);
  CHECK(run("criteria --measure " + data("sigma_d1.json") + " --dim 2") == 2);
  CHECK(run("--config " + data("malformed.toml") + " verify-kernels") == 2);
  CHECK(run("verify-kernels --p -1") == 2);
  CHECK(run("verify-kernels --dim 0") == 2);
  CHECK(run("bogus-command") == 2);
  CHECK(run("refute-sampling --symbol " + data("const_half.json")) == 2);
  const auto bad = scratch() / "bad_measure.json";
  std::ofstream(bad) << R"({"dimension": 1, "boundary_density": "1 +"})";
  CHECK(run("criteria --measure " + bad.string()) == 2);
  CHECK(slurp(scratch() / "stderr.txt").find("error") != std::string::npos);
}

TEST_CASE("criteria default to the surface measure") {
  auto r = report("criteria --refinements 2", 0);
  CHECK(r["agree"] == true);
  CHECK_FALSE(r["config"].contains("measure"));
}

TEST_CASE("config files supply option values") {
  auto r = report("--config " + data("kernels_d1.toml") + " verify-kernels", 0);
  CHECK(r["config"]["dim"] == 1);
  CHECK(r["config"]["seed"] == 3);
}

TEST_CASE("reports are byte-identical for the same seed") {
  const std::vector<std::string> cmds{
      "verify-kernels --dim 3 --seed 9",
      "criteria --measure " + data("tilted_density_d1.json"),
      "pack --dim 2 --delta 0.5 --height 0.3 --seed 4",
      "refute-sampling --symbol " + data("aleksandrov.json") + " --points " + data("dyadic_e1.json"),
  };
  for (const auto& c : cmds) {
    CAPTURE(c);
    const auto a = scratch() / "a.json", b = scratch() / "b.json";
    const int ea = run(c + " --out " + a.string());
    const std::string out_a = slurp(scratch() / "stdout.txt");
    const int eb = run(c + " --out " + b.string());
    CHECK(ea == eb);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(scratch() / "a.csv") == slurp(scratch() / "b.csv"));
    CHECK(out_a == slurp(scratch() / "stdout.txt"));
  }
}
