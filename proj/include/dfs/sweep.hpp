#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dfs/protocol.hpp"
#include "dfs/quad.hpp"

namespace dfs {

// One evaluation point: input state, channel and noise together.
struct Scenario {
  InputState input = CoherentState{cplx(0.0, 0.0)};
  DFSChannel channel;
  NoiseParams noise;
};

// Parameter paths: alpha.re alpha.im r phi alpha1.re alpha1.im alpha2.re
// alpha2.im n1 n2 g R tau nth, plus the coupled alpha12.re/alpha12.im
// (sets alpha1 = alpha2).
void set_param(Scenario& sc, const std::string& path, double value);
double get_param(const Scenario& sc, const std::string& path);
bool is_integer_param(const std::string& path);
const std::vector<std::string>& known_params();

struct SweepAxis {
  std::string path;
  std::vector<double> values;
};

struct SweepSpec {
  Scenario base;
  std::vector<SweepAxis> axes;  // 1..3
  Route route = Route::ClosedForm;
  QuadConfig cfg;

  void validate() const;
};

struct SweepRow {
  std::vector<double> params;  // one entry per axis, lexicographic order
  double fidelity = 0.0;
  double error = 0.0;
  Route route = Route::ClosedForm;
  std::string status = "ok";  // "ok" or the failure message
};

struct SweepTable {
  std::vector<std::string> columns;  // axis paths then fidelity, error, route, status
  std::vector<SweepRow> rows;
};

// Full Cartesian product in lexicographic axis order; per-row failures are
// recorded in the status column and never abort the sweep. Rows may be
// evaluated concurrently (DFS_THREADS overrides the worker count) but are
// always assembled positionally.
SweepTable run_sweep(const SweepSpec& s);

struct FreeParam {
  std::string path;
  double lo = 0.0;
  double hi = 0.0;
};

struct OptSpec {
  Scenario base;
  std::vector<FreeParam> free;  // continuous parameters only
  int grid_density = 11;        // >= 5 per axis
  double tol = 1e-6;
  Route route = Route::ClosedForm;
  QuadConfig cfg;

  void validate() const;
};

struct OptResult {
  std::vector<double> argmax;
  double value = 0.0;
  double coarse_value = 0.0;  // best value on the coarse grid
};

// Coarse grid scan followed by Nelder-Mead refinement on -F.
OptResult maximize_fidelity(const OptSpec& o);

// Axis value where the two curves' fidelity difference changes sign,
// bisected to 1e-3; nullopt when no sign change exists in range.
std::optional<double> find_crossover(const SweepSpec& curve_a, const SweepSpec& curve_b,
                                     const std::string& axis);

}  // namespace dfs
