#include "cavfermi/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

namespace cavfermi {

namespace {

using json = nlohmann::json;

constexpr std::pair<Mode, std::string_view> kModeNames[] = {
    {Mode::coeffs, "coeffs"},         {Mode::steady, "steady"},
    {Mode::sweep_atoms, "sweep-atoms"}, {Mode::sweep_pump, "sweep-pump"},
    {Mode::dynamics, "dynamics"},     {Mode::basins, "basins"},
    {Mode::stability_check, "stability-check"},
};

/// Reads keys off one JSON object and remembers which ones were consumed.
class Reader {
 public:
  Reader(const json& object, std::string path) : object_(object), path_(std::move(path)) {
    if (!object_.is_object()) throw ConfigError(where(), "must be an object");
  }

  bool has(const std::string& key) const { return object_.contains(key); }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = object_.find(key);
    return it == object_.end() ? nullptr : &*it;
  }

  const json& require(const std::string& key) {
    const json* v = find(key);
    if (!v) throw ConfigError(key_path(key), "required key is missing");
    return *v;
  }

  double number(const std::string& key, double fallback) {
    const json* v = find(key);
    return v ? as_number(*v, key_path(key)) : fallback;
  }
  double number(const std::string& key) { return as_number(require(key), key_path(key)); }

  int integer(const std::string& key, int fallback) {
    const json* v = find(key);
    return v ? as_integer(*v, key_path(key)) : fallback;
  }
  int integer(const std::string& key) { return as_integer(require(key), key_path(key)); }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(key_path(key), "must be true or false");
    return v->get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(key_path(key), "must be a string");
    return v->get<std::string>();
  }

  /// Rejects keys nobody asked for.
  void finish() const {
    for (const auto& item : object_.items()) {
      if (!seen_.contains(item.key())) throw ConfigError(key_path(item.key()), "unknown key");
    }
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
    return d;
  }

  static int as_integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ConfigError(path, "must be an integer");
    const auto i = v.get<long long>();
    if (i < -2147483647LL || i > 2147483647LL) throw ConfigError(path, "out of range");
    return static_cast<int>(i);
  }

 private:
  std::string where() const { return path_.empty() ? "document" : path_; }

  const json& object_;
  std::string path_;
  std::set<std::string> seen_;
};

/// Array of numbers, or {"from", "to", "count", "spacing": "linear"|"log"}.
std::vector<double> read_real_list(const json& v, const std::string& path) {
  std::vector<double> out;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(Reader::as_number(v[i], path + "[" + std::to_string(i) + "]"));
    }
  } else {
    Reader r(v, path);
    const double from = r.number("from");
    const double to = r.number("to");
    const int count = r.integer("count");
    const std::string spacing = r.string("spacing", "linear");
    r.finish();
    if (count < 1) throw ConfigError(path + ".count", "must be >= 1");
    if (spacing != "linear" && spacing != "log") {
      throw ConfigError(path + ".spacing", "must be \"linear\" or \"log\"");
    }
    if (spacing == "log" && !(from > 0.0 && to > 0.0)) {
      throw ConfigError(path, "log spacing needs positive bounds");
    }
    for (int i = 0; i < count; ++i) {
      const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
      if (i == count - 1 && count > 1) {
        out.push_back(to);
      } else {
        out.push_back(spacing == "log" ? from * std::pow(to / from, f) : from + (to - from) * f);
      }
    }
  }
  if (out.empty()) throw ConfigError(path, "list must not be empty");
  return out;
}

/// Array of integers, or {"from", "to", "step"} inclusive.
std::vector<int> read_int_list(const json& v, const std::string& path) {
  std::vector<int> out;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(Reader::as_integer(v[i], path + "[" + std::to_string(i) + "]"));
    }
  } else {
    Reader r(v, path);
    const int from = r.integer("from");
    const int to = r.integer("to");
    const int step = r.integer("step", 1);
    r.finish();
    if (step < 1) throw ConfigError(path + ".step", "must be >= 1");
    for (int i = from; i <= to; i += step) out.push_back(i);
  }
  if (out.empty()) throw ConfigError(path, "list must not be empty");
  return out;
}

void check(bool ok, const std::string& key, const std::string& constraint) {
  if (!ok) throw ConfigError(key, constraint);
}

bool needs_atom_number(Mode mode) {
  return mode != Mode::coeffs && mode != Mode::sweep_atoms;
}

SystemParams read_params(const json& v, Mode mode) {
  Reader r(v, "params");
  SystemParams p;
  p.u0 = r.number("u0");
  p.delta_c = r.number("delta_c");
  p.eta = mode == Mode::sweep_pump ? r.number("eta", 0.0) : r.number("eta");
  p.kappa = r.number("kappa", p.kappa);
  p.n_sites = r.integer("n_sites");
  p.n_atoms = needs_atom_number(mode) ? r.integer("n_atoms") : r.integer("n_atoms", 0);
  p.s = r.integer("s", p.u0 < 0.0 ? -1 : 1);
  p.y_max = r.number("y_max", p.y_max);
  r.finish();
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    const std::string what = e.what();
    const auto colon = what.find(": ");
    if (colon == std::string::npos) throw ConfigError("params", what);
    throw ConfigError("params." + what.substr(0, colon), what.substr(colon + 2));
  }
  if (mode != Mode::coeffs && mode != Mode::dynamics && mode != Mode::basins) {
    check(p.u0 != 0.0, "params.u0", "must be nonzero (no lattice otherwise)");
  }
  return p;
}

SolverOptions read_solver(const json& v) {
  Reader r(v, "solver");
  SolverOptions o;
  o.y_lo = r.number("y_lo", o.y_lo);
  o.y_hi = r.number("y_hi", o.y_hi);
  o.n_scan = r.integer("n_scan", o.n_scan);
  r.finish();
  check(o.y_lo > 0.0, "solver.y_lo", "must be > 0");
  check(o.y_hi > o.y_lo, "solver.y_hi", "must exceed y_lo");
  check(o.n_scan >= 100, "solver.n_scan", "must be >= 100");
  return o;
}

DynamicsOptions read_integrator(const json& v) {
  Reader r(v, "integrator");
  DynamicsOptions o;
  o.dt = r.number("dt", o.dt);
  o.t_max = r.number("t_max", o.t_max);
  o.stride = r.integer("stride", o.stride);
  o.n_floor = r.number("n_floor", o.n_floor);
  o.window = r.number("window", o.window);
  o.converge_rtol = r.number("converge_rtol", o.converge_rtol);
  o.stop_rtol = r.number("stop_rtol", o.stop_rtol);
  o.early_stop = r.boolean("early_stop", o.early_stop);
  r.finish();
  check(o.dt > 0.0, "integrator.dt", "must be > 0");
  check(o.t_max > o.dt, "integrator.t_max", "must exceed dt");
  check(o.stride >= 1, "integrator.stride", "must be >= 1");
  check(o.n_floor >= 0.0, "integrator.n_floor", "must be >= 0");
  check(o.window > 0.0, "integrator.window", "must be > 0");
  check(o.converge_rtol > 0.0, "integrator.converge_rtol", "must be > 0");
  check(o.stop_rtol >= 0.0, "integrator.stop_rtol", "must be >= 0");
  return o;
}

void read_stability(const json& v, RunConfig& c) {
  Reader r(v, "stability");
  c.classify = r.boolean("classify", c.classify);
  c.stability.epsilon = r.number("epsilon", c.stability.epsilon);
  c.stability.t_max = r.number("t_max", c.stability.t_max);
  c.stability.return_band = r.number("return_band", c.stability.return_band);
  r.finish();
  check(c.stability.epsilon > 0.0 && c.stability.epsilon < 1.0, "stability.epsilon",
        "must lie in (0, 1)");
  check(c.stability.return_band > 0.0, "stability.return_band", "must be > 0");
}

void read_mode_block(const json& v, RunConfig& c) {
  const std::string path(to_string(c.mode));
  Reader r(v, path);
  switch (c.mode) {
    case Mode::coeffs:
      c.y_list = read_real_list(r.require("y"), path + ".y");
      for (double y : c.y_list) check(y > 0.0, path + ".y", "values must be > 0");
      check(c.params.u0 != 0.0, "params.u0", "must be nonzero to convert y to photon number");
      break;
    case Mode::steady:
      break;
    case Mode::sweep_atoms:
      c.n_list = read_int_list(r.require("n_atoms"), path + ".n_atoms");
      for (int n : c.n_list) {
        check(n >= 0 && n <= c.params.n_sites, path + ".n_atoms",
              "values must lie in [0, n_sites] (one polarized fermion per site)");
      }
      break;
    case Mode::sweep_pump:
      c.eta_list = read_real_list(r.require("eta"), path + ".eta");
      for (double e : c.eta_list) check(e >= 0.0, path + ".eta", "values must be >= 0");
      if (const json* h = r.find("hysteresis")) {
        Reader hr(*h, path + ".hysteresis");
        HysteresisSweep sweep;
        sweep.n0_low = hr.number("n0_low", sweep.n0_low);
        sweep.n0_high = hr.number("n0_high", sweep.n0_high);
        hr.finish();
        check(sweep.n0_low > 0.0 && sweep.n0_high > 0.0, path + ".hysteresis",
              "initial photon numbers must be > 0");
        c.hysteresis = sweep;
      }
      break;
    case Mode::dynamics:
      c.n0 = r.number("n0");
      check(c.n0 > 0.0, path + ".n0", "must be > 0");
      break;
    case Mode::basins:
      c.n0_list = read_real_list(r.require("n0"), path + ".n0");
      for (double n : c.n0_list) check(n > 0.0, path + ".n0", "values must be > 0");
      break;
    case Mode::stability_check:
      c.trials = r.integer("trials", c.trials);
      check(c.trials >= 1, path + ".trials", "must be >= 1");
      if (const json* n = r.find("n_photons")) {
        c.n_photons = Reader::as_number(*n, path + ".n_photons");
        check(*c.n_photons > 0.0, path + ".n_photons", "must be > 0");
      }
      break;
  }
  r.finish();
}

json real_list(const std::vector<double>& v) { return json(v); }

}  // namespace

std::string_view to_string(Mode mode) {
  for (const auto& [m, name] : kModeNames) {
    if (m == mode) return name;
  }
  return "unknown";
}

Mode parse_mode(std::string_view name) {
  for (const auto& [m, n] : kModeNames) {
    if (n == name) return m;
  }
  throw ConfigError("mode", "unknown mode '" + std::string(name) + "'");
}

RunConfig parse_config(std::string_view text, std::optional<Mode> cli_mode) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("document", std::string("malformed JSON: ") + e.what());
  }
  Reader r(doc, "");
  RunConfig c;

  const std::string doc_mode = r.string("mode", "");
  if (cli_mode) {
    c.mode = *cli_mode;
    if (!doc_mode.empty() && parse_mode(doc_mode) != c.mode) {
      throw ConfigError("mode", "document mode '" + doc_mode + "' disagrees with '" +
                                    std::string(to_string(c.mode)) + "'");
    }
  } else {
    if (doc_mode.empty()) throw ConfigError("mode", "required key is missing");
    c.mode = parse_mode(doc_mode);
  }

  for (const auto& [m, name] : kModeNames) {
    if (m != c.mode && r.has(std::string(name))) {
      throw ConfigError(std::string(name), "block does not match mode '" +
                                               std::string(to_string(c.mode)) + "'");
    }
  }

  c.params = read_params(r.require("params"), c.mode);
  if (const json* v = r.find("solver")) c.solver = read_solver(*v);
  if (const json* v = r.find("stability")) read_stability(*v, c);
  if (const json* v = r.find("integrator")) c.integrator = read_integrator(*v);
  c.stability.dynamics = c.integrator;

  if (const json* v = r.find("seed")) {
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
      throw ConfigError("seed", "must be a non-negative integer");
    }
    c.seed = v->get<std::uint64_t>();
  }
  c.output = r.string("output", "");
  c.threads = r.integer("threads", 0);
  check(c.threads >= 0, "threads", "must be >= 0");

  const std::string block(to_string(c.mode));
  if (const json* v = r.find(block)) {
    read_mode_block(*v, c);
  } else if (c.mode == Mode::steady || c.mode == Mode::stability_check) {
    read_mode_block(json::object(), c);
  } else {
    throw ConfigError(block, "required mode block is missing");
  }
  r.finish();
  return c;
}

std::string emit_config(const RunConfig& c, int indent) {
  json doc;
  doc["mode"] = std::string(to_string(c.mode));
  doc["params"] = {{"u0", c.params.u0},           {"delta_c", c.params.delta_c},
                   {"eta", c.params.eta},         {"kappa", c.params.kappa},
                   {"n_atoms", c.params.n_atoms}, {"n_sites", c.params.n_sites},
                   {"s", c.params.s},             {"y_max", c.params.y_max}};
  doc["solver"] = {{"y_lo", c.solver.y_lo}, {"y_hi", c.solver.y_hi}, {"n_scan", c.solver.n_scan}};
  doc["stability"] = {{"classify", c.classify},
                      {"epsilon", c.stability.epsilon},
                      {"t_max", c.stability.t_max},
                      {"return_band", c.stability.return_band}};
  doc["integrator"] = {{"dt", c.integrator.dt},
                       {"t_max", c.integrator.t_max},
                       {"stride", c.integrator.stride},
                       {"n_floor", c.integrator.n_floor},
                       {"window", c.integrator.window},
                       {"converge_rtol", c.integrator.converge_rtol},
                       {"stop_rtol", c.integrator.stop_rtol},
                       {"early_stop", c.integrator.early_stop}};
  doc["seed"] = c.seed;
  doc["output"] = c.output;
  doc["threads"] = c.threads;

  json block = json::object();
  switch (c.mode) {
    case Mode::coeffs: block["y"] = real_list(c.y_list); break;
    case Mode::steady: break;
    case Mode::sweep_atoms: block["n_atoms"] = c.n_list; break;
    case Mode::sweep_pump:
      block["eta"] = real_list(c.eta_list);
      if (c.hysteresis) {
        block["hysteresis"] = {{"n0_low", c.hysteresis->n0_low},
                               {"n0_high", c.hysteresis->n0_high}};
      }
      break;
    case Mode::dynamics: block["n0"] = c.n0; break;
    case Mode::basins: block["n0"] = real_list(c.n0_list); break;
    case Mode::stability_check:
      block["trials"] = c.trials;
      if (c.n_photons) block["n_photons"] = *c.n_photons;
      break;
  }
  doc[std::string(to_string(c.mode))] = block;
  return doc.dump(indent);
}

}  // namespace cavfermi
