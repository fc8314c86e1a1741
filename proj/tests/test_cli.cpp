#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dfs/cli.hpp"
#include "doctest.h"

using dfs::cplx;
namespace cli = dfs::cli;

namespace {

int run_binary(const std::string& args) {
  const std::string cmd = std::string(DFSTELEPORT_BIN) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parse_complex: accepted forms") {
  CHECK(cli::parse_complex("2.5") == cplx(2.5, 0.0));
  CHECK(cli::parse_complex("-3") == cplx(-3.0, 0.0));
  CHECK(cli::parse_complex("2i") == cplx(0.0, 2.0));
  CHECK(cli::parse_complex("-0.5i") == cplx(0.0, -0.5));
  CHECK(cli::parse_complex("i") == cplx(0.0, 1.0));
  CHECK(cli::parse_complex("1+2i") == cplx(1.0, 2.0));
  CHECK(cli::parse_complex("1.5-0.25i") == cplx(1.5, -0.25));
  CHECK(cli::parse_complex("-1-i") == cplx(-1.0, -1.0));
  CHECK(cli::parse_complex("1e-3+2e-4i") == cplx(1e-3, 2e-4));
  CHECK_THROWS_AS(cli::parse_complex("abc"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_complex("1+2j"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_complex(""), cli::ConfigError);
}

TEST_CASE("format_complex round-trips through parse_complex") {
  for (cplx v : {cplx(0.0, 0.0), cplx(1.25, -3.5), cplx(-0.125, 0.75), cplx(1e-3, 2e-4)})
    CHECK(cli::parse_complex(cli::format_complex(v)) == v);
}

TEST_CASE("parse_config: defaults and overrides") {
  const auto cfg = cli::parse_config({"fidelity"});
  CHECK(cfg.command == "fidelity");
  CHECK(cfg.input_kind == "coherent");
  CHECK(cfg.route == dfs::Route::ClosedForm);
  CHECK(cfg.scenario.noise.is_ideal());

  const auto cfg2 = cli::parse_config(
      {"fidelity", "--alpha", "1+2i", "--n1", "3", "--R=0.5", "--route", "adaptive"});
  CHECK(std::get<dfs::CoherentState>(cfg2.scenario.input).alpha == cplx(1.0, 2.0));
  CHECK(cfg2.scenario.channel.n1 == 3);
  CHECK(cfg2.scenario.noise.R == 0.5);
  CHECK(cfg2.route == dfs::Route::Adaptive);
}

TEST_CASE("parse_config: validation messages name the offending key") {
  CHECK_THROWS_WITH_AS(cli::parse_config({"fidelity", "--R", "1.5"}),
                       doctest::Contains("R must lie in [0,1]"), cli::ConfigError);
  CHECK_THROWS_WITH_AS(cli::parse_config({"fidelity", "--bogus", "1"}),
                       doctest::Contains("unknown key 'bogus'"), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config({"teleport"}), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config({"fidelity", "--n1", "1.5"}), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config({"fidelity", "--input", "fock"}), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config({"fidelity", "--r", "1"}), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config({"sweep"}), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config({"figure"}), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config({"optimize"}), cli::ConfigError);
  CHECK_THROWS_AS(cli::parse_config({"fidelity", "--ideal", "--tau", "1"}), cli::ConfigError);
}

TEST_CASE("parse_config: config file with command-line override") {
  const std::string path = "/tmp/dfs_cli_test_config.txt";
  {
    std::ofstream f(path);
    f << "command = fidelity\n"
      << "alpha = 1+1i   # teleported state\n"
      << "R = 0.3\n"
      << "tau = 0.7\n";
  }
  const auto cfg = cli::parse_config({"--config", path, "--R", "0.6"});
  CHECK(cfg.command == "fidelity");
  CHECK(std::get<dfs::CoherentState>(cfg.scenario.input).alpha == cplx(1.0, 1.0));
  CHECK(cfg.scenario.noise.R == 0.6);  // flag wins over file
  CHECK(cfg.scenario.noise.tau == 0.7);
  std::remove(path.c_str());
}

TEST_CASE("parse_config_text: comments, blanks, and errors") {
  const auto kv = cli::parse_config_text("# header\n\n a = 1 \nb=2#inline\n");
  CHECK(kv.at("a") == "1");
  CHECK(kv.at("b") == "2");
  CHECK_THROWS_AS(cli::parse_config_text("no equals sign"), cli::ConfigError);
}

TEST_CASE("CSV preamble round-trips into an equivalent RunConfig") {
  const auto cfg = cli::parse_config({"sweep", "--input", "squeezed", "--r", "0.5",
                                      "--alpha1", "1-0.5i", "--tau", "0.4",
                                      "--axis", "phi=0:3:4", "--route", "gauss-hermite"});
  const std::string path = "/tmp/dfs_cli_test_table.csv";
  cli::emit_table({}, {"phi", "fidelity"}, cfg, path);

  // strip the '# ' prefix of the preamble and reparse it as a config file
  std::ifstream in(path);
  std::string line, text;
  while (std::getline(in, line))
    if (line.rfind("# ", 0) == 0 && line.find('=') != std::string::npos)
      text += line.substr(2) + "\n";
  const std::string cfg_path = "/tmp/dfs_cli_test_roundtrip.txt";
  {
    std::ofstream f(cfg_path);
    f << text;
  }
  const auto cfg2 = cli::parse_config({"--config", cfg_path});
  CHECK(cfg2.assignments == cfg.assignments);
  std::remove(path.c_str());
  std::remove(cfg_path.c_str());
}

TEST_CASE("figure recipes: known ids resolve, unknown id rejected") {
  const auto cfg = cli::parse_config({"figure", "--id", "fig2"});
  for (const auto& id : cli::known_figures()) {
    const auto sweeps = cli::figure_recipe(id, cfg);
    CHECK(!sweeps.empty());
    for (const auto& ls : sweeps) CHECK_NOTHROW(ls.spec.validate());
  }
  CHECK_THROWS_AS(cli::figure_recipe("fig99", cfg), cli::ConfigError);
}

TEST_CASE("binary: exit code 0 and parseable output on success") {
  const std::string path = "/tmp/dfs_cli_test_out.csv";
  REQUIRE(run_binary("fidelity --ideal --out " + path) == 0);
  const std::string text = slurp(path);
  CHECK(text.find("fidelity") != std::string::npos);
  CHECK(text.find("0.5") != std::string::npos);
  std::remove(path.c_str());
}

TEST_CASE("binary: exit code 2 on configuration errors") {
  CHECK(run_binary("fidelity --R 2.0") == 2);
  CHECK(run_binary("unknown-command") == 2);
  CHECK(run_binary("fidelity --config /nonexistent/config.txt") == 2);
}

TEST_CASE("binary: exit code 3 on unwritable output") {
  CHECK(run_binary("fidelity --ideal --out /nonexistent-dir/x.csv") == 3);
}

TEST_CASE("binary: exit code 4 on integration failure") {
  CHECK(run_binary("fidelity --route adaptive --n1 25 --abs-tol 1e-300 --rel-tol 1e-300 "
                   "--max-refinements 1") == 4);
}

TEST_CASE("binary: monte-carlo output is seed-deterministic") {
  const std::string p1 = "/tmp/dfs_cli_mc1.csv", p2 = "/tmp/dfs_cli_mc2.csv";
  const std::string args = "fidelity --route monte-carlo --alpha 1 --tau 0.3 --mc-samples 20000";
  REQUIRE(run_binary(args + " --seed 7 --out " + p1) == 0);
  REQUIRE(run_binary(args + " --seed 7 --out " + p2) == 0);
  CHECK(slurp(p1) == slurp(p2));
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}
