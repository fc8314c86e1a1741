#include "dfs/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <stdexcept>
#include <thread>

namespace dfs {

namespace {

CoherentState& as_coherent(Scenario& sc) {
  if (auto* c = std::get_if<CoherentState>(&sc.input)) return *c;
  throw std::invalid_argument("parameter path requires a coherent input state");
}

SqueezedState& as_squeezed(Scenario& sc) {
  if (auto* s = std::get_if<SqueezedState>(&sc.input)) return *s;
  throw std::invalid_argument("parameter path requires a squeezed input state");
}

int round_int(double v, const std::string& path) {
  const double r = std::round(v);
  if (r < 0.0) throw std::domain_error(path + " must be a non-negative integer");
  return static_cast<int>(r);
}

}  // namespace

const std::vector<std::string>& known_params() {
  static const std::vector<std::string> names = {
      "alpha.re",  "alpha.im",  "r",          "phi",        "alpha1.re",
      "alpha1.im", "alpha2.re", "alpha2.im",  "alpha12.re", "alpha12.im",
      "n1",        "n2",        "g",          "R",          "tau",
      "nth"};
  return names;
}

bool is_integer_param(const std::string& path) { return path == "n1" || path == "n2"; }

void set_param(Scenario& sc, const std::string& path, double value) {
  auto& ch = sc.channel;
  auto& np = sc.noise;
  if (path == "alpha.re")
    as_coherent(sc).alpha = cplx(value, as_coherent(sc).alpha.imag());
  else if (path == "alpha.im")
    as_coherent(sc).alpha = cplx(as_coherent(sc).alpha.real(), value);
  else if (path == "r")
    as_squeezed(sc) = SqueezedState(value, as_squeezed(sc).phi);
  else if (path == "phi")
    as_squeezed(sc) = SqueezedState(as_squeezed(sc).r, value);
  else if (path == "alpha1.re")
    ch.alpha1 = cplx(value, ch.alpha1.imag());
  else if (path == "alpha1.im")
    ch.alpha1 = cplx(ch.alpha1.real(), value);
  else if (path == "alpha2.re")
    ch.alpha2 = cplx(value, ch.alpha2.imag());
  else if (path == "alpha2.im")
    ch.alpha2 = cplx(ch.alpha2.real(), value);
  else if (path == "alpha12.re") {
    ch.alpha1 = cplx(value, ch.alpha1.imag());
    ch.alpha2 = cplx(value, ch.alpha2.imag());
  } else if (path == "alpha12.im") {
    ch.alpha1 = cplx(ch.alpha1.real(), value);
    ch.alpha2 = cplx(ch.alpha2.real(), value);
  } else if (path == "n1")
    ch = DFSChannel(ch.alpha1, ch.alpha2, round_int(value, path), ch.n2);
  else if (path == "n2")
    ch = DFSChannel(ch.alpha1, ch.alpha2, ch.n1, round_int(value, path));
  else if (path == "g")
    np = NoiseParams(value, np.R, np.tau, np.n_th);
  else if (path == "R")
    np = NoiseParams(np.g, value, np.tau, np.n_th);
  else if (path == "tau")
    np = NoiseParams(np.g, np.R, value, np.n_th);
  else if (path == "nth")
    np = NoiseParams(np.g, np.R, np.tau, value);
  else
    throw std::invalid_argument("unknown parameter path '" + path + "'");
}

double get_param(const Scenario& sc, const std::string& path) {
  const auto& ch = sc.channel;
  const auto& np = sc.noise;
  Scenario& mut = const_cast<Scenario&>(sc);
  if (path == "alpha.re") return as_coherent(mut).alpha.real();
  if (path == "alpha.im") return as_coherent(mut).alpha.imag();
  if (path == "r") return as_squeezed(mut).r;
  if (path == "phi") return as_squeezed(mut).phi;
  if (path == "alpha1.re" || path == "alpha12.re") return ch.alpha1.real();
  if (path == "alpha1.im" || path == "alpha12.im") return ch.alpha1.imag();
  if (path == "alpha2.re") return ch.alpha2.real();
  if (path == "alpha2.im") return ch.alpha2.imag();
  if (path == "n1") return ch.n1;
  if (path == "n2") return ch.n2;
  if (path == "g") return np.g;
  if (path == "R") return np.R;
  if (path == "tau") return np.tau;
  if (path == "nth") return np.n_th;
  throw std::invalid_argument("unknown parameter path '" + path + "'");
}

void SweepSpec::validate() const {
  if (axes.empty() || axes.size() > 3)
    throw std::invalid_argument("SweepSpec: need between 1 and 3 axes");
  for (const auto& ax : axes) {
    if (ax.values.empty()) throw std::invalid_argument("SweepSpec: empty axis " + ax.path);
    Scenario probe = base;
    set_param(probe, ax.path, ax.values.front());  // path must resolve
  }
  cfg.validate();
}

namespace {

int worker_count() {
  if (const char* env = std::getenv("DFS_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

SweepRow evaluate_row(const SweepSpec& s, const std::vector<double>& point) {
  SweepRow row;
  row.params = point;
  row.route = s.route;
  try {
    Scenario sc = s.base;
    for (std::size_t i = 0; i < s.axes.size(); ++i) set_param(sc, s.axes[i].path, point[i]);
    const FidelityResult fr = fidelity(sc.input, sc.channel, sc.noise, s.route, s.cfg);
    row.fidelity = fr.value;
    row.error = fr.error;
  } catch (const std::exception& e) {
    row.status = e.what();
    row.fidelity = std::nan("");
    row.error = std::nan("");
  }
  return row;
}

}  // namespace

SweepTable run_sweep(const SweepSpec& s) {
  s.validate();

  std::vector<std::vector<double>> points;
  std::vector<double> point(s.axes.size());
  // lexicographic Cartesian product, first axis slowest
  std::size_t total = 1;
  for (const auto& ax : s.axes) total *= ax.values.size();
  points.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (std::size_t a = s.axes.size(); a-- > 0;) {
      const auto& vals = s.axes[a].values;
      point[a] = vals[rest % vals.size()];
      rest /= vals.size();
    }
    points.push_back(point);
  }

  SweepTable table;
  for (const auto& ax : s.axes) table.columns.push_back(ax.path);
  table.columns.insert(table.columns.end(), {"fidelity", "error", "route", "status"});
  table.rows.resize(total);

  const int workers = std::min<int>(worker_count(), static_cast<int>(total));
  if (workers <= 1) {
    for (std::size_t i = 0; i < total; ++i) table.rows[i] = evaluate_row(s, points[i]);
    return table;
  }
  std::vector<std::future<void>> futures;
  futures.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    futures.push_back(std::async(std::launch::async, [&, w]() {
      for (std::size_t i = w; i < total; i += workers)
        table.rows[i] = evaluate_row(s, points[i]);
    }));
  }
  for (auto& f : futures) f.get();
  return table;
}

void OptSpec::validate() const {
  if (free.empty()) throw std::invalid_argument("OptSpec: need at least one free parameter");
  if (grid_density < 5) throw std::invalid_argument("OptSpec: grid density must be >= 5");
  if (!(tol > 0.0)) throw std::invalid_argument("OptSpec: tolerance must be > 0");
  for (const auto& fp : free) {
    if (!std::isfinite(fp.lo) || !std::isfinite(fp.hi) || !(fp.lo < fp.hi))
      throw std::invalid_argument("OptSpec: bounds must be finite with lo < hi");
    if (is_integer_param(fp.path))
      throw std::invalid_argument("OptSpec: integer parameters are swept, not optimized");
  }
  cfg.validate();
}

namespace {

double eval_point(const OptSpec& o, const std::vector<double>& x) {
  Scenario sc = o.base;
  for (std::size_t i = 0; i < o.free.size(); ++i) {
    const double v = std::clamp(x[i], o.free[i].lo, o.free[i].hi);
    set_param(sc, o.free[i].path, v);
  }
  return fidelity(sc.input, sc.channel, sc.noise, o.route, o.cfg).value;
}

// Nelder-Mead on -F with clamping to the box.
std::pair<std::vector<double>, double> nelder_mead(const OptSpec& o,
                                                   std::vector<double> start,
                                                   double step_scale) {
  const std::size_t dim = start.size();
  std::vector<std::vector<double>> simplex;
  std::vector<double> values;
  simplex.push_back(start);
  values.push_back(-eval_point(o, start));
  for (std::size_t i = 0; i < dim; ++i) {
    auto v = start;
    const double span = o.free[i].hi - o.free[i].lo;
    v[i] += step_scale * span;
    if (v[i] > o.free[i].hi) v[i] = start[i] - step_scale * span;
    simplex.push_back(v);
    values.push_back(-eval_point(o, v));
  }

  auto order = [&]() {
    std::vector<std::size_t> idx(simplex.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    std::vector<std::vector<double>> s2;
    std::vector<double> v2;
    for (auto i : idx) {
      s2.push_back(simplex[i]);
      v2.push_back(values[i]);
    }
    simplex.swap(s2);
    values.swap(v2);
  };

  for (int iter = 0; iter < 400; ++iter) {
    order();
    double diam = 0.0;
    for (std::size_t i = 1; i < simplex.size(); ++i)
      for (std::size_t d = 0; d < dim; ++d)
        diam = std::max(diam, std::fabs(simplex[i][d] - simplex[0][d]));
    if (diam < o.tol) break;

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i + 1 < simplex.size(); ++i)
      for (std::size_t d = 0; d < dim; ++d) centroid[d] += simplex[i][d] / dim;

    auto blend = [&](double coef) {
      std::vector<double> p(dim);
      for (std::size_t d = 0; d < dim; ++d)
        p[d] = centroid[d] + coef * (simplex.back()[d] - centroid[d]);
      return p;
    };

    const auto reflected = blend(-1.0);
    const double fr = -eval_point(o, reflected);
    if (fr < values.front()) {
      const auto expanded = blend(-2.0);
      const double fe = -eval_point(o, expanded);
      if (fe < fr) {
        simplex.back() = expanded;
        values.back() = fe;
      } else {
        simplex.back() = reflected;
        values.back() = fr;
      }
    } else if (fr < values[values.size() - 2]) {
      simplex.back() = reflected;
      values.back() = fr;
    } else {
      const auto contracted = blend(0.5);
      const double fc = -eval_point(o, contracted);
      if (fc < values.back()) {
        simplex.back() = contracted;
        values.back() = fc;
      } else {
        for (std::size_t i = 1; i < simplex.size(); ++i) {
          for (std::size_t d = 0; d < dim; ++d)
            simplex[i][d] = 0.5 * (simplex[i][d] + simplex[0][d]);
          values[i] = -eval_point(o, simplex[i]);
        }
      }
    }
  }
  order();
  return {simplex.front(), -values.front()};
}

}  // namespace

OptResult maximize_fidelity(const OptSpec& o) {
  o.validate();

  // coarse scan
  std::vector<double> best;
  double best_val = -1.0;
  const int d = o.grid_density;
  std::size_t total = 1;
  for (std::size_t i = 0; i < o.free.size(); ++i) total *= d;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    std::vector<double> x(o.free.size());
    for (std::size_t i = 0; i < o.free.size(); ++i) {
      const int k = static_cast<int>(rest % d);
      rest /= d;
      x[i] = o.free[i].lo + (o.free[i].hi - o.free[i].lo) * k / (d - 1.0);
    }
    const double v = eval_point(o, x);
    if (v > best_val) {
      best_val = v;
      best = x;
    }
  }

  auto [argmax, value] = nelder_mead(o, best, 0.5 / d);
  OptResult res;
  res.coarse_value = best_val;
  if (value >= best_val) {
    for (std::size_t i = 0; i < argmax.size(); ++i)
      argmax[i] = std::clamp(argmax[i], o.free[i].lo, o.free[i].hi);
    res.argmax = argmax;
    res.value = value;
  } else {  // refinement never regresses
    res.argmax = best;
    res.value = best_val;
  }
  return res;
}

std::optional<double> find_crossover(const SweepSpec& curve_a, const SweepSpec& curve_b,
                                     const std::string& axis) {
  curve_a.validate();
  curve_b.validate();
  if (curve_a.axes.size() != 1 || curve_b.axes.size() != 1 ||
      curve_a.axes[0].path != axis || curve_b.axes[0].path != axis)
    throw std::invalid_argument("find_crossover: both specs must sweep exactly the given axis");
  if (curve_a.axes[0].values != curve_b.axes[0].values)
    throw std::invalid_argument("find_crossover: curves must share the axis grid");

  auto eval_at = [&](const SweepSpec& s, double v) {
    Scenario sc = s.base;
    set_param(sc, axis, v);
    return fidelity(sc.input, sc.channel, sc.noise, s.route, s.cfg).value;
  };

  const auto& grid = curve_a.axes[0].values;
  double prev_diff = eval_at(curve_a, grid[0]) - eval_at(curve_b, grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double diff = eval_at(curve_a, grid[i]) - eval_at(curve_b, grid[i]);
    if (prev_diff == 0.0) return grid[i - 1];
    if (prev_diff * diff < 0.0) {
      double lo = grid[i - 1], hi = grid[i];
      double flo = prev_diff;
      while (hi - lo > 1e-3) {
        const double mid = 0.5 * (lo + hi);
        const double fm = eval_at(curve_a, mid) - eval_at(curve_b, mid);
        if (fm == 0.0) return mid;
        if (flo * fm < 0.0)
          hi = mid;
        else {
          lo = mid;
          flo = fm;
        }
      }
      return 0.5 * (lo + hi);
    }
    prev_diff = diff;
  }
  return std::nullopt;
}

}  // namespace dfs
