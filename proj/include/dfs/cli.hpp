#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dfs/sweep.hpp"

namespace dfs::cli {

// Configuration problem: exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Output problem: exit code 3.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;  // fidelity | sweep | figure | optimize | validate
  std::string input_kind = "coherent";
  Scenario scenario;
  Route route = Route::ClosedForm;
  QuadConfig quad;
  std::string output_path;  // empty -> stdout
  std::string figure_id;
  std::vector<SweepAxis> axes;
  std::vector<FreeParam> free_params;
  int opt_density = 11;
  double opt_tol = 1e-6;
  int validate_points = 0;  // 0 -> validate the single configured point
  std::uint64_t seed = 1;

  // every effective key = value assignment, for the metadata preamble
  std::vector<std::pair<std::string, std::string>> assignments;
};

// Parse "a", "bi", "a+bi", "a-bi".
cplx parse_complex(const std::string& text);
std::string format_complex(cplx v);

// argv-style tokens (without the program name). Values from a --config file
// are applied first; command-line flags override them.
RunConfig parse_config(const std::vector<std::string>& args);

// Same key = value format used by --config files and the CSV preamble.
std::map<std::string, std::string> parse_config_text(const std::string& text);

struct OutputRow {
  std::vector<std::string> cells;
};

// CSV with a '#' preamble carrying the full RunConfig; floating point cells
// should be pre-formatted with format_number.
void emit_table(const std::vector<OutputRow>& rows, const std::vector<std::string>& columns,
                const RunConfig& cfg, const std::string& path);

std::string format_number(double v);  // 12 significant digits

struct LabeledSweep {
  std::string label;
  std::vector<std::pair<std::string, std::string>> fixed;  // shown as columns
  SweepSpec spec;
};

// Exact parameter grids of the named figure (fig2 ... fig8_1).
std::vector<LabeledSweep> figure_recipe(const std::string& id, const RunConfig& base);
std::vector<std::string> known_figures();

// Full command dispatch; returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dfs::cli
