#include "dfs/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace dfs::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

const std::vector<std::string> kKnownKeys = {
    "command", "input", "alpha", "r", "phi", "alpha1", "alpha2", "n1", "n2",
    "ideal", "g", "R", "tau", "nth", "route", "out", "config", "abs-tol",
    "rel-tol", "max-refinements", "gh-order", "mc-samples", "seed", "axis",
    "free", "density", "tol", "id", "points"};

bool known_key(const std::string& key) {
  std::string base = key;
  const auto dot = base.find('.');
  if (dot != std::string::npos && (base.substr(0, dot) == "axis" || base.substr(0, dot) == "free"))
    base = base.substr(0, dot);
  return std::find(kKnownKeys.begin(), kKnownKeys.end(), base) != kKnownKeys.end();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("invalid numeric value '" + value + "' for " + key);
  }
}

int parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (v != std::floor(v)) throw ConfigError(key + " must be an integer, got '" + value + "'");
  return static_cast<int>(v);
}

std::vector<double> parse_axis_values(const std::string& key, const std::string& text) {
  if (text.find(':') != std::string::npos) {
    // start:stop:count
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw ConfigError(key + ": expected start:stop:count, got '" + text + "'");
    const double start = parse_double(key, parts[0]);
    const double stop = parse_double(key, parts[1]);
    const int count = parse_int(key, parts[2]);
    if (count < 1) throw ConfigError(key + ": count must be >= 1");
    std::vector<double> vals(count);
    for (int i = 0; i < count; ++i)
      vals[i] = (count == 1) ? start : start + (stop - start) * i / (count - 1.0);
    return vals;
  }
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) vals.push_back(parse_double(key, item));
  if (vals.empty()) throw ConfigError(key + ": empty value list");
  return vals;
}

}  // namespace

cplx parse_complex(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) throw ConfigError("empty complex value");
  if (s.back() != 'i') {
    try {
      std::size_t pos = 0;
      const double v = std::stod(s, &pos);
      if (pos != s.size()) throw std::invalid_argument("");
      return cplx(v, 0.0);
    } catch (...) {
      throw ConfigError("invalid complex value '" + text + "' (expected a+bi)");
    }
  }
  const std::string body = s.substr(0, s.size() - 1);
  // split at the last +/- that is not an exponent sign and not leading
  std::size_t split = std::string::npos;
  for (std::size_t i = body.size(); i-- > 1;) {
    const char ch = body[i];
    if ((ch == '+' || ch == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  try {
    if (split == std::string::npos) {
      // pure imaginary; allow bare "i" / "-i"
      if (body.empty() || body == "+" || body == "-")
        return cplx(0.0, body == "-" ? -1.0 : 1.0);
      std::size_t pos = 0;
      const double im = std::stod(body, &pos);
      if (pos != body.size()) throw std::invalid_argument("");
      return cplx(0.0, im);
    }
    std::size_t pos = 0;
    const double re = std::stod(body.substr(0, split), &pos);
    if (pos != split) throw std::invalid_argument("");
    std::string imtext = body.substr(split);
    if (imtext == "+") imtext = "1";
    if (imtext == "-") imtext = "-1";
    pos = 0;
    const double im = std::stod(imtext, &pos);
    if (pos != imtext.size()) throw std::invalid_argument("");
    return cplx(re, im);
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    throw ConfigError("invalid complex value '" + text + "' (expected a+bi)");
  }
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string format_complex(cplx v) {
  std::string out = format_number(v.real());
  out += (v.imag() < 0.0) ? "-" : "+";
  out += format_number(std::fabs(v.imag()));
  out += "i";
  return out;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

namespace {

struct Assignment {
  std::string key;
  std::string value;
};

RunConfig build_config(const std::string& command, const std::vector<Assignment>& items) {
  static const std::vector<std::string> commands = {"fidelity", "sweep", "figure", "optimize",
                                                    "validate"};
  if (std::find(commands.begin(), commands.end(), command) == commands.end())
    throw ConfigError("unknown command '" + command +
                      "' (expected fidelity | sweep | figure | optimize | validate)");

  RunConfig cfg;
  cfg.command = command;

  // later assignments win for scalar keys; axis/free accumulate
  std::map<std::string, std::string> scalar;
  std::vector<std::string> axis_specs, free_specs;
  for (const auto& it : items) {
    if (!known_key(it.key)) throw ConfigError("unknown key '" + it.key + "'");
    std::string base = it.key;
    const auto dot = base.find('.');
    if (dot != std::string::npos) base = base.substr(0, dot);
    if (base == "axis")
      axis_specs.push_back(it.value);
    else if (base == "free")
      free_specs.push_back(it.value);
    else
      scalar[it.key] = it.value;
  }

  auto take = [&](const std::string& key) -> std::optional<std::string> {
    const auto it = scalar.find(key);
    if (it == scalar.end()) return std::nullopt;
    return it->second;
  };

  // input state
  cfg.input_kind = take("input").value_or("coherent");
  if (cfg.input_kind == "coherent") {
    CoherentState st;
    if (auto v = take("alpha")) st.alpha = parse_complex(*v);
    if (scalar.count("r") || scalar.count("phi"))
      throw ConfigError("r/phi apply only to a squeezed input");
    cfg.scenario.input = st;
  } else if (cfg.input_kind == "squeezed") {
    double r = 0.0, phi = 0.0;
    if (auto v = take("r")) r = parse_double("r", *v);
    if (auto v = take("phi")) phi = parse_double("phi", *v);
    if (scalar.count("alpha")) throw ConfigError("alpha applies only to a coherent input");
    if (r < 0.0) throw ConfigError("r must be >= 0");
    cfg.scenario.input = SqueezedState(r, phi);
  } else {
    throw ConfigError("input must be 'coherent' or 'squeezed', got '" + cfg.input_kind + "'");
  }

  // channel
  cplx a1 = 0.0, a2 = 0.0;
  int n1 = 0, n2 = 0;
  if (auto v = take("alpha1")) a1 = parse_complex(*v);
  if (auto v = take("alpha2")) a2 = parse_complex(*v);
  if (auto v = take("n1")) n1 = parse_int("n1", *v);
  if (auto v = take("n2")) n2 = parse_int("n2", *v);
  if (n1 < 0 || n2 < 0) throw ConfigError("n1 and n2 must be non-negative integers");
  cfg.scenario.channel = DFSChannel(a1, a2, n1, n2);

  // noise
  const bool ideal = scalar.count("ideal") && scalar.at("ideal") != "false";
  double g = 1.0, R = 0.0, tau = 0.0, nth = 0.0;
  if (auto v = take("g")) g = parse_double("g", *v);
  if (auto v = take("R")) R = parse_double("R", *v);
  if (auto v = take("tau")) tau = parse_double("tau", *v);
  if (auto v = take("nth")) nth = parse_double("nth", *v);
  if (ideal && (scalar.count("g") || scalar.count("R") || scalar.count("tau") || scalar.count("nth")))
    throw ConfigError("--ideal cannot be combined with g/R/tau/nth");
  if (ideal) {
    g = 1.0;
    R = 0.0;
    tau = 0.0;
    nth = 0.0;
  }
  if (!(R >= 0.0 && R <= 1.0)) throw ConfigError("R must lie in [0,1]");
  if (!(g >= 0.0)) throw ConfigError("g must be >= 0");
  if (!(tau >= 0.0)) throw ConfigError("tau must be >= 0");
  if (!(nth >= 0.0)) throw ConfigError("nth must be >= 0");
  cfg.scenario.noise = NoiseParams(g, R, tau, nth);

  // route and quadrature settings
  if (auto v = take("route")) {
    try {
      cfg.route = route_from_name(*v);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  if (auto v = take("abs-tol")) cfg.quad.abs_tol = parse_double("abs-tol", *v);
  if (auto v = take("rel-tol")) cfg.quad.rel_tol = parse_double("rel-tol", *v);
  if (auto v = take("max-refinements"))
    cfg.quad.max_refinements = parse_int("max-refinements", *v);
  if (auto v = take("gh-order")) cfg.quad.gh_order = parse_int("gh-order", *v);
  if (auto v = take("mc-samples")) cfg.quad.mc_samples = parse_int("mc-samples", *v);
  if (auto v = take("seed")) {
    cfg.seed = static_cast<std::uint64_t>(parse_double("seed", *v));
    cfg.quad.mc_seed = cfg.seed;
  }
  try {
    cfg.quad.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }

  if (auto v = take("out")) cfg.output_path = *v;
  if (auto v = take("id")) cfg.figure_id = *v;
  if (auto v = take("density")) cfg.opt_density = parse_int("density", *v);
  if (auto v = take("tol")) cfg.opt_tol = parse_double("tol", *v);
  if (auto v = take("points")) cfg.validate_points = parse_int("points", *v);

  for (const auto& spec : axis_specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
      throw ConfigError("axis: expected path=values, got '" + spec + "'");
    SweepAxis ax;
    ax.path = trim(spec.substr(0, eq));
    ax.values = parse_axis_values("axis " + ax.path, trim(spec.substr(eq + 1)));
    const auto& names = known_params();
    if (std::find(names.begin(), names.end(), ax.path) == names.end())
      throw ConfigError("axis: unknown parameter path '" + ax.path + "'");
    cfg.axes.push_back(std::move(ax));
  }
  for (const auto& spec : free_specs) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
      throw ConfigError("free: expected path=lo:hi, got '" + spec + "'");
    FreeParam fp;
    fp.path = trim(spec.substr(0, eq));
    const std::string range = trim(spec.substr(eq + 1));
    const auto colon = range.find(':');
    if (colon == std::string::npos)
      throw ConfigError("free: expected path=lo:hi, got '" + spec + "'");
    fp.lo = parse_double("free " + fp.path, range.substr(0, colon));
    fp.hi = parse_double("free " + fp.path, range.substr(colon + 1));
    cfg.free_params.push_back(std::move(fp));
  }

  // command-specific requirements
  if (cfg.command == "sweep" && cfg.axes.empty())
    throw ConfigError("sweep requires at least one --axis path=start:stop:count");
  if (cfg.command == "figure" && cfg.figure_id.empty())
    throw ConfigError("figure requires --id (one of fig2 fig3 fig4 fig5 fig6 fig6_1 fig7 fig8 fig8_1)");
  if (cfg.command == "optimize" && cfg.free_params.empty())
    throw ConfigError("optimize requires at least one --free path=lo:hi");

  // effective assignments, for the metadata preamble
  cfg.assignments.emplace_back("command", cfg.command);
  cfg.assignments.emplace_back("input", cfg.input_kind);
  if (cfg.input_kind == "coherent") {
    cfg.assignments.emplace_back("alpha",
                                 format_complex(std::get<CoherentState>(cfg.scenario.input).alpha));
  } else {
    const auto& sq = std::get<SqueezedState>(cfg.scenario.input);
    cfg.assignments.emplace_back("r", format_number(sq.r));
    cfg.assignments.emplace_back("phi", format_number(sq.phi));
  }
  cfg.assignments.emplace_back("alpha1", format_complex(cfg.scenario.channel.alpha1));
  cfg.assignments.emplace_back("alpha2", format_complex(cfg.scenario.channel.alpha2));
  cfg.assignments.emplace_back("n1", std::to_string(cfg.scenario.channel.n1));
  cfg.assignments.emplace_back("n2", std::to_string(cfg.scenario.channel.n2));
  cfg.assignments.emplace_back("g", format_number(cfg.scenario.noise.g));
  cfg.assignments.emplace_back("R", format_number(cfg.scenario.noise.R));
  cfg.assignments.emplace_back("tau", format_number(cfg.scenario.noise.tau));
  cfg.assignments.emplace_back("nth", format_number(cfg.scenario.noise.n_th));
  cfg.assignments.emplace_back("route", route_name(cfg.route));
  cfg.assignments.emplace_back("abs-tol", format_number(cfg.quad.abs_tol));
  cfg.assignments.emplace_back("rel-tol", format_number(cfg.quad.rel_tol));
  cfg.assignments.emplace_back("max-refinements", std::to_string(cfg.quad.max_refinements));
  cfg.assignments.emplace_back("gh-order", std::to_string(cfg.quad.gh_order));
  cfg.assignments.emplace_back("mc-samples", std::to_string(cfg.quad.mc_samples));
  cfg.assignments.emplace_back("seed", std::to_string(cfg.seed));
  if (!cfg.figure_id.empty()) cfg.assignments.emplace_back("id", cfg.figure_id);
  for (std::size_t i = 0; i < cfg.axes.size(); ++i) {
    std::string vals;
    for (std::size_t j = 0; j < cfg.axes[i].values.size(); ++j)
      vals += (j ? "," : "") + format_number(cfg.axes[i].values[j]);
    cfg.assignments.emplace_back("axis." + std::to_string(i), cfg.axes[i].path + "=" + vals);
  }
  for (std::size_t i = 0; i < cfg.free_params.size(); ++i)
    cfg.assignments.emplace_back("free." + std::to_string(i),
                                 cfg.free_params[i].path + "=" +
                                     format_number(cfg.free_params[i].lo) + ":" +
                                     format_number(cfg.free_params[i].hi));
  if (cfg.command == "optimize") {
    cfg.assignments.emplace_back("density", std::to_string(cfg.opt_density));
    cfg.assignments.emplace_back("tol", format_number(cfg.opt_tol));
  }
  if (cfg.command == "validate")
    cfg.assignments.emplace_back("points", std::to_string(cfg.validate_points));
  return cfg;
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  std::string command;
  std::vector<Assignment> cli_items;
  std::string config_path;

  std::size_t i = 0;
  if (i < args.size() && args[i].rfind("--", 0) != 0) command = args[i++];
  for (; i < args.size(); ++i) {
    std::string token = args[i];
    if (token.rfind("--", 0) != 0) throw ConfigError("unexpected positional argument '" + token + "'");
    token = token.substr(2);
    std::string value;
    const auto eq = token.find('=');
    if (eq != std::string::npos) {
      value = token.substr(eq + 1);
      token = token.substr(0, eq);
    } else if (token == "ideal") {
      value = "true";
    } else {
      if (i + 1 >= args.size()) throw ConfigError("missing value for --" + token);
      value = args[++i];
    }
    if (!known_key(token)) throw ConfigError("unknown key '" + token + "'");
    if (token == "config")
      config_path = value;
    else
      cli_items.push_back({token, value});
  }

  std::vector<Assignment> items;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot read config file '" + config_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    for (const auto& [k, v] : parse_config_text(buf.str())) {
      if (k == "command") {
        if (command.empty()) command = v;
      } else {
        items.push_back({k, v});
      }
    }
  }
  // command-line flags override file values
  items.insert(items.end(), cli_items.begin(), cli_items.end());
  if (command.empty())
    throw ConfigError("missing command (fidelity | sweep | figure | optimize | validate)");
  return build_config(command, items);
}

void emit_table(const std::vector<OutputRow>& rows, const std::vector<std::string>& columns,
                const RunConfig& cfg, const std::string& path) {
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!path.empty()) {
    file.open(path);
    if (!file) throw IoError("cannot open output file '" + path + "'");
    out = &file;
  }
  *out << "# dfsteleport v1.0\n";
  for (const auto& [k, v] : cfg.assignments) *out << "# " << k << " = " << v << "\n";
  for (std::size_t c = 0; c < columns.size(); ++c) *out << (c ? "," : "") << columns[c];
  *out << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.cells.size(); ++c) *out << (c ? "," : "") << row.cells[c];
    *out << "\n";
  }
  out->flush();
  if (!*out) throw IoError("failed writing output" + (path.empty() ? "" : " to '" + path + "'"));
}

std::vector<std::string> known_figures() {
  return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig6_1", "fig7", "fig8", "fig8_1"};
}

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = (n == 1) ? a : a + (b - a) * i / (n - 1.0);
  return v;
}

Scenario coherent_base(cplx alpha, cplx a1, cplx a2, int n1, int n2, NoiseParams np) {
  Scenario sc;
  sc.input = CoherentState{alpha};
  sc.channel = DFSChannel(a1, a2, n1, n2);
  sc.noise = np;
  return sc;
}

Scenario squeezed_base(double r, double phi, cplx a1, cplx a2, NoiseParams np) {
  Scenario sc;
  sc.input = SqueezedState(r, phi);
  sc.channel = DFSChannel(a1, a2, 0, 0);
  sc.noise = np;
  return sc;
}

}  // namespace

std::vector<LabeledSweep> figure_recipe(const std::string& id, const RunConfig& base) {
  // densities: 101 points per continuous axis, 41 x 41 for surfaces
  const int kCurve = 101;
  const int kSurf = 41;
  const std::vector<std::pair<int, int>> photon_cases = {{0, 0}, {1, 1}, {5, 5}, {3, 7}};
  const std::vector<std::pair<cplx, cplx>> panels = {
      {0.0, 0.0}, {0.0, 0.5}, {1.0, 0.0}};
  const NoiseParams realistic_thin(1.0, 0.8, 0.8, 0.0);
  const NoiseParams realistic_thick(1.0, 0.8, 0.02, 0.0);

  std::vector<LabeledSweep> out;
  auto add = [&](std::string label, std::vector<std::pair<std::string, std::string>> fixed,
                 Scenario sc, std::vector<SweepAxis> axes) {
    LabeledSweep ls;
    ls.label = std::move(label);
    ls.fixed = std::move(fixed);
    ls.spec.base = std::move(sc);
    ls.spec.axes = std::move(axes);
    ls.spec.route = base.route;
    ls.spec.cfg = base.quad;
    out.push_back(std::move(ls));
  };

  if (id == "fig2") {
    for (auto [n1, n2] : photon_cases)
      add("n1=" + std::to_string(n1) + ",n2=" + std::to_string(n2),
          {{"n1", std::to_string(n1)}, {"n2", std::to_string(n2)}},
          coherent_base(0.0, 0.0, 0.0, n1, n2, NoiseParams::ideal()),
          {{"alpha12.re", linspace(-3.0, 3.0, kCurve)}});
  } else if (id == "fig3") {
    for (double phi : {0.0, kPi})
      for (const auto& [a1, a2] : panels)
        add("phi=" + format_number(phi) + ",alpha1=" + format_number(a1.real()) +
                ",alpha2=" + format_number(a2.real()),
            {{"phi", format_number(phi)},
             {"alpha1", format_number(a1.real())},
             {"alpha2", format_number(a2.real())}},
            squeezed_base(0.0, phi, a1, a2, NoiseParams::ideal()),
            {{"r", linspace(0.0, 3.0, kCurve)}});
  } else if (id == "fig4" || id == "fig8") {
    const bool ideal = (id == "fig4");
    for (double phi : {0.0, kPi})
      for (double r : {0.0, 1.0, 2.0})
        for (const auto& np : ideal ? std::vector<NoiseParams>{NoiseParams::ideal()}
                                    : std::vector<NoiseParams>{realistic_thick, realistic_thin})
          add("r=" + format_number(r) + ",phi=" + format_number(phi) +
                  (ideal ? "" : ",tau=" + format_number(np.tau)),
              {{"r", format_number(r)},
               {"phi", format_number(phi)},
               {"tau", format_number(np.tau)}},
              squeezed_base(r, phi, 0.0, 0.0, np),
              {{"alpha1.re", linspace(-3.0, 3.0, kSurf)},
               {"alpha2.re", linspace(-3.0, 3.0, kSurf)}});
  } else if (id == "fig5") {
    for (const auto& np : {realistic_thick, realistic_thin})
      for (const auto& [a1, a2] : panels)
        for (auto [n1, n2] : photon_cases)
          add("tau=" + format_number(np.tau) + ",alpha1=" + format_number(a1.real()) +
                  ",alpha2=" + format_number(a2.real()) + ",n1=" + std::to_string(n1) +
                  ",n2=" + std::to_string(n2),
              {{"tau", format_number(np.tau)},
               {"alpha1", format_number(a1.real())},
               {"alpha2", format_number(a2.real())},
               {"n1", std::to_string(n1)},
               {"n2", std::to_string(n2)}},
              coherent_base(0.0, a1, a2, n1, n2, np),
              {{"alpha.re", linspace(0.0, 6.0, kCurve)}});
  } else if (id == "fig6") {
    for (const auto& np : {realistic_thick, realistic_thin})
      for (double alpha : {0.0, 2.0, 4.0})
        add("tau=" + format_number(np.tau) + ",alpha=" + format_number(alpha),
            {{"tau", format_number(np.tau)}, {"alpha", format_number(alpha)}},
            coherent_base(alpha, 0.0, 0.0, 0, 0, np),
            {{"alpha1.re", linspace(-3.0, 3.0, kSurf)},
             {"alpha2.re", linspace(-3.0, 3.0, kSurf)}});
  } else if (id == "fig6_1" || id == "fig8_1") {
    Scenario sc = (id == "fig6_1")
                      ? coherent_base(0.0, 1.0, 1.0, 0, 0, realistic_thin)
                      : squeezed_base(0.0, 0.0, 1.0, 1.0, realistic_thin);
    const std::vector<std::pair<std::string, std::pair<double, double>>> axes = {
        {"g", {0.0, 2.0}}, {"R", {0.0, 1.0}}, {"tau", {0.0, 3.0}}, {"nth", {0.0, 10.0}}};
    for (const auto& [path, range] : axes)
      add("vs " + path, {{"varies", path}}, sc,
          {{path, linspace(range.first, range.second, kCurve)}});
  } else if (id == "fig7") {
    for (const auto& np : {realistic_thick, realistic_thin})
      for (double phi : {0.0, kPi})
        for (const auto& [a1, a2] : panels)
          add("tau=" + format_number(np.tau) + ",phi=" + format_number(phi) +
                  ",alpha1=" + format_number(a1.real()) + ",alpha2=" + format_number(a2.real()),
              {{"tau", format_number(np.tau)},
               {"phi", format_number(phi)},
               {"alpha1", format_number(a1.real())},
               {"alpha2", format_number(a2.real())}},
              squeezed_base(0.0, phi, a1, a2, np),
              {{"r", linspace(0.0, 3.0, kCurve)}});
  } else {
    std::string valid;
    for (const auto& f : known_figures()) valid += (valid.empty() ? "" : " ") + f;
    throw ConfigError("unknown figure '" + id + "' (valid: " + valid + ")");
  }
  return out;
}

namespace {

std::string status_cell(const std::string& s) {
  std::string out = s;
  std::replace(out.begin(), out.end(), ',', ';');
  return out;
}

int run_fidelity(const RunConfig& cfg, std::ostream& out) {
  const auto& sc = cfg.scenario;
  const FidelityResult fr = fidelity(sc.input, sc.channel, sc.noise, cfg.route, cfg.quad);
  std::vector<std::string> columns;
  OutputRow row;
  for (const auto& [k, v] : cfg.assignments) {
    if (k == "command" || k == "route" || k.rfind("abs-", 0) == 0 || k.rfind("rel-", 0) == 0 ||
        k == "max-refinements" || k == "gh-order" || k == "mc-samples" || k == "seed")
      continue;
    columns.push_back(k);
    row.cells.push_back(v);
  }
  columns.insert(columns.end(), {"fidelity", "error", "imag_residual", "route"});
  row.cells.push_back(format_number(fr.value));
  row.cells.push_back(format_number(fr.error));
  row.cells.push_back(format_number(fr.imag_residual));
  row.cells.push_back(route_name(fr.route));
  emit_table({row}, columns, cfg, cfg.output_path);
  (void)out;
  return 0;
}

std::vector<OutputRow> table_rows(const SweepTable& t, const std::vector<std::string>& prefix) {
  std::vector<OutputRow> rows;
  rows.reserve(t.rows.size());
  for (const auto& r : t.rows) {
    OutputRow row;
    row.cells = prefix;
    for (double p : r.params) row.cells.push_back(format_number(p));
    row.cells.push_back(format_number(r.fidelity));
    row.cells.push_back(format_number(r.error));
    row.cells.push_back(route_name(r.route));
    row.cells.push_back(status_cell(r.status));
    rows.push_back(std::move(row));
  }
  return rows;
}

int run_sweep_cmd(const RunConfig& cfg) {
  SweepSpec spec;
  spec.base = cfg.scenario;
  spec.axes = cfg.axes;
  spec.route = cfg.route;
  spec.cfg = cfg.quad;
  try {
    spec.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  const SweepTable t = run_sweep(spec);
  emit_table(table_rows(t, {}), t.columns, cfg, cfg.output_path);
  return 0;
}

int run_figure(const RunConfig& cfg) {
  const auto sweeps = figure_recipe(cfg.figure_id, cfg);
  std::vector<std::string> columns = {"curve"};
  for (const auto& [k, v] : sweeps.front().fixed) columns.push_back(k);
  for (const auto& ax : sweeps.front().spec.axes) columns.push_back(ax.path);
  columns.insert(columns.end(), {"fidelity", "error", "route", "status"});

  std::vector<OutputRow> rows;
  for (const auto& ls : sweeps) {
    const SweepTable t = run_sweep(ls.spec);
    std::vector<std::string> prefix = {status_cell(ls.label)};
    for (const auto& [k, v] : ls.fixed) prefix.push_back(v);
    auto block = table_rows(t, prefix);
    rows.insert(rows.end(), block.begin(), block.end());
  }
  emit_table(rows, columns, cfg, cfg.output_path);
  return 0;
}

int run_optimize(const RunConfig& cfg) {
  OptSpec spec;
  spec.base = cfg.scenario;
  spec.free = cfg.free_params;
  spec.grid_density = cfg.opt_density;
  spec.tol = cfg.opt_tol;
  spec.route = cfg.route;
  spec.cfg = cfg.quad;
  try {
    spec.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  const OptResult res = maximize_fidelity(spec);
  std::vector<std::string> columns;
  OutputRow row;
  for (std::size_t i = 0; i < spec.free.size(); ++i) {
    columns.push_back(spec.free[i].path);
    row.cells.push_back(format_number(res.argmax[i]));
  }
  columns.insert(columns.end(), {"fidelity", "coarse_fidelity", "route"});
  row.cells.push_back(format_number(res.value));
  row.cells.push_back(format_number(res.coarse_value));
  row.cells.push_back(route_name(cfg.route));
  emit_table({row}, columns, cfg, cfg.output_path);
  return 0;
}

OutputRow validate_point(const Scenario& sc, const QuadConfig& quad, const std::string& label) {
  OutputRow row;
  row.cells.push_back(label);
  std::vector<double> values;
  for (Route route :
       {Route::Adaptive, Route::GaussHermite, Route::ClosedForm, Route::MonteCarlo}) {
    const FidelityResult fr = fidelity(sc.input, sc.channel, sc.noise, route, quad);
    values.push_back(fr.value);
    row.cells.push_back(format_number(fr.value));
  }
  double gap = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t j = i + 1; j < values.size(); ++j)
      gap = std::max(gap, std::fabs(values[i] - values[j]));
  row.cells.push_back(format_number(gap));
  return row;
}

int run_validate(const RunConfig& cfg) {
  const std::vector<std::string> columns = {"point",       "adaptive",    "gauss-hermite",
                                            "closed-form", "monte-carlo", "max-pairwise-gap"};
  std::vector<OutputRow> rows;
  if (cfg.validate_points <= 0) {
    rows.push_back(validate_point(cfg.scenario, cfg.quad, "configured"));
  } else {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < cfg.validate_points; ++i) {
      Scenario sc;
      if (unit(rng) < 0.5)
        sc.input = CoherentState{cplx(4.0 * unit(rng) - 2.0, 4.0 * unit(rng) - 2.0)};
      else
        sc.input = SqueezedState(1.2 * unit(rng), 2.0 * kPi * unit(rng));
      sc.channel = DFSChannel(cplx(3.0 * unit(rng) - 1.5, 3.0 * unit(rng) - 1.5),
                              cplx(3.0 * unit(rng) - 1.5, 3.0 * unit(rng) - 1.5),
                              static_cast<int>(5.0 * unit(rng)), static_cast<int>(5.0 * unit(rng)));
      sc.noise = NoiseParams(0.5 + unit(rng), 0.9 * unit(rng), 1.5 * unit(rng), 2.0 * unit(rng));
      rows.push_back(validate_point(sc, cfg.quad, std::to_string(i)));
    }
  }
  emit_table(rows, columns, cfg, cfg.output_path);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const RunConfig cfg = parse_config(args);
    switch (cfg.command[0]) {
      case 'f':
        return cfg.command == "fidelity" ? run_fidelity(cfg, out) : run_figure(cfg);
      case 's':
        return run_sweep_cmd(cfg);
      case 'o':
        return run_optimize(cfg);
      default:
        return run_validate(cfg);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return 3;
  } catch (const IntegrationFailure& e) {
    err << "integration failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace dfs::cli
