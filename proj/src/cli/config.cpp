#include "specbound/cli/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace specbound::cli {

using nlohmann::json;

namespace {

std::string located(const std::string& message, const std::string& path, int line) {
  if (path.empty()) return message;
  if (line > 0) return path + ":" + std::to_string(line) + ": " + message;
  return path + ": " + message;
}

// Maps keys back to source lines for diagnostics.
class Reader {
 public:
  Reader(const std::string& text, std::string path) : text_(text), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    throw ConfigError(message, path_, line_of(key));
  }

  int line_of(const std::string& key) const {
    const auto pos = text_.find("\"" + key + "\"");
    if (pos == std::string::npos) return 0;
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
  }

  void only(const json& object, const std::string& where, std::initializer_list<const char*> keys) const {
    if (!object.is_object()) fail(where, "'" + where + "' must be an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = object.begin(); it != object.end(); ++it) {
      if (!allowed.count(it.key())) fail(it.key(), "unknown key '" + it.key() + "' in " + where);
    }
  }

  double number(const json& j, const std::string& key) const {
    if (!j.is_number()) fail(key, "'" + key + "' must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(key, "'" + key + "' must be finite");
    return v;
  }

  Index integer(const json& j, const std::string& key, Index lo) const {
    if (!j.is_number_integer()) fail(key, "'" + key + "' must be an integer");
    const auto v = j.get<std::int64_t>();
    if (v < lo) fail(key, "'" + key + "' must be >= " + std::to_string(lo));
    return static_cast<Index>(v);
  }

  std::string string(const json& j, const std::string& key) const {
    if (!j.is_string()) fail(key, "'" + key + "' must be a string");
    return j.get<std::string>();
  }

  Matrix matrix(const json& j, const std::string& key) const {
    if (!j.is_array() || j.empty() || !j.front().is_array()) fail(key, "'" + key + "' must be a list of rows");
    const Index rows = static_cast<Index>(j.size());
    const Index cols = static_cast<Index>(j.front().size());
    Matrix m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
      const json& row = j[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Index>(row.size()) != cols) fail(key, "'" + key + "' rows differ in length");
      for (Index c = 0; c < cols; ++c) m(r, c) = number(row[static_cast<std::size_t>(c)], key);
    }
    return m;
  }

  const std::string& path() const { return path_; }

 private:
  const std::string& text_;
  std::string path_;
};

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json to_json(const ExperimentConfig& c, bool full) {
  json j;
  json model{{"kind", c.model.kind}, {"rho", c.model.rho}, {"channels", c.model.channels}};
  if (c.model.kind == "state_space") {
    model["A"] = matrix_json(c.model.A);
    model["B"] = matrix_json(c.model.B);
    model["C"] = matrix_json(c.model.C);
    model["D"] = matrix_json(c.model.D);
  }
  if (c.model.rho_target) model["rho_target"] = *c.model.rho_target;
  j["model"] = model;
  j["noise"] = c.noise;
  if (c.sigma) j["sigma"] = *c.sigma;
  j["estimator"] = {{"kind", c.estimator.kind}, {"M", c.estimator.M}, {"K", c.estimator.K},
                    {"S", c.estimator.S},       {"L", c.estimator.L}, {"window", c.estimator.window}};
  // N = 0 means unset.
  if (c.estimator.N > 0) j["estimator"]["N"] = c.estimator.N;
  j["sweep"] = {{"variable", c.sweep_variable}, {"values", c.sweep}};
  j["grid"] = {{"points", c.grid.points}, {"band", c.grid.full_band ? "full" : "half"}, {"values", c.grid.values}};
  j["trials"] = c.trials;
  j["delta"] = c.delta;
  if (full) j["seed"] = c.seed;
  if (full) j["output"] = c.output;
  json ctx = json::object();
  if (c.context.phi_inf) ctx["phi_inf"] = *c.context.phi_inf;
  if (c.context.r1) ctx["r1"] = *c.context.r1;
  if (c.context.gamma) ctx["gamma"] = *c.context.gamma;
  if (c.context.rho) ctx["rho"] = *c.context.rho;
  j["context"] = ctx;
  j["certify"] = {{"epsilon", c.epsilon}, {"estimate_file", c.estimate_file}};
  j["data_file"] = c.data_file;
  j["concentration"] = {{"dims", c.concentration.dims},
                        {"trials", c.concentration.trials},
                        {"points", c.concentration.points}};
  return j;
}

// Cross-field invariants; `fail(key, message)` must throw.
template <class Fail>
void check(const ExperimentConfig& c, Fail&& fail) {
  if (!(c.delta > 0.0 && c.delta < 1.0)) fail("delta", "delta must lie in (0, 1)");
  for (double s : c.grid.values) {
    if (!(s >= -0.5 && s <= 0.5)) fail("grid", "grid values must lie in [-1/2, 1/2]");
  }
  if (c.noise != "gaussian" && c.noise != "uniform") fail("noise", "noise must be \"gaussian\" or \"uniform\"");
  if (c.sigma && !(*c.sigma >= 1.0)) fail("sigma", "sigma must be >= 1");
  if (!(c.epsilon > 0.0)) fail("epsilon", "certify epsilon must be positive");
  if (c.model.kind == "geometric" && !(c.model.rho >= 0.0 && c.model.rho < 1.0)) {
    fail("rho", "model rho must lie in [0, 1)");
  }
  if (c.sweep_variable != "S") fail("variable", "sweep variable must be \"S\" (blocks for Welch/Bartlett)");
  const std::set<std::string> windows{"rectangular", "rect", "triangular", "bartlett", "hann", "hamming", "blackman"};
  if (!windows.count(c.estimator.window)) fail("window", "unknown window '" + c.estimator.window + "'");
  const std::set<std::string> kinds{"biased_periodogram", "unbiased_periodogram", "blackman_tukey", "bartlett", "welch"};
  if (!kinds.count(c.estimator.kind)) fail("kind", "unknown estimator kind '" + c.estimator.kind + "'");
}

}  // namespace

ConfigError::ConfigError(const std::string& message, std::string path, int line)
    : std::runtime_error(located(message, path, line)), path_(std::move(path)), line_(line) {}

ExperimentConfig parse_config(const std::string& text, const std::string& path) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    throw ConfigError(std::string("malformed JSON: ") + e.what(), path, line);
  }
  const Reader rd(text, path);
  rd.only(root, "config",
          {"model", "noise", "sigma", "estimator", "sweep", "grid", "trials", "delta", "seed", "output", "context",
           "certify", "data_file", "concentration"});

  ExperimentConfig c;
  if (root.contains("model")) {
    const json& m = root["model"];
    rd.only(m, "model", {"kind", "rho", "channels", "A", "B", "C", "D", "rho_target"});
    if (m.contains("kind")) c.model.kind = rd.string(m["kind"], "kind");
    const std::set<std::string> kinds{"geometric", "white_noise", "state_space", "example2", "none"};
    if (!kinds.count(c.model.kind)) rd.fail("kind", "unknown model kind '" + c.model.kind + "'");
    if (m.contains("rho")) c.model.rho = rd.number(m["rho"], "rho");
    if (m.contains("channels")) c.model.channels = rd.integer(m["channels"], "channels", 1);
    if (m.contains("rho_target")) c.model.rho_target = rd.number(m["rho_target"], "rho_target");
    if (c.model.kind == "state_space") {
      for (const char* key : {"A", "B", "C", "D"}) {
        if (!m.contains(key)) rd.fail("model", std::string("state_space model needs '") + key + "'");
      }
      c.model.A = rd.matrix(m["A"], "A");
      c.model.B = rd.matrix(m["B"], "B");
      c.model.C = rd.matrix(m["C"], "C");
      c.model.D = rd.matrix(m["D"], "D");
    }
  }
  if (root.contains("noise")) c.noise = rd.string(root["noise"], "noise");
  if (root.contains("sigma")) c.sigma = rd.number(root["sigma"], "sigma");
  if (root.contains("estimator")) {
    const json& e = root["estimator"];
    rd.only(e, "estimator", {"kind", "N", "M", "K", "S", "L", "window"});
    if (e.contains("kind")) c.estimator.kind = rd.string(e["kind"], "kind");
    if (e.contains("N")) c.estimator.N = rd.integer(e["N"], "N", 1);
    if (e.contains("M")) c.estimator.M = rd.integer(e["M"], "M", 1);
    if (e.contains("K")) c.estimator.K = rd.integer(e["K"], "K", 1);
    if (e.contains("S")) c.estimator.S = rd.integer(e["S"], "S", 1);
    if (e.contains("L")) c.estimator.L = rd.integer(e["L"], "L", 1);
    if (e.contains("window")) c.estimator.window = rd.string(e["window"], "window");
  }
  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    rd.only(s, "sweep", {"variable", "values"});
    if (s.contains("variable")) c.sweep_variable = rd.string(s["variable"], "variable");
    if (s.contains("values")) {
      if (!s["values"].is_array() || s["values"].empty()) rd.fail("values", "'values' must be a non-empty list");
      c.sweep.clear();
      for (const auto& v : s["values"]) c.sweep.push_back(rd.integer(v, "values", 1));
    }
  }
  if (root.contains("grid")) {
    const json& g = root["grid"];
    rd.only(g, "grid", {"points", "band", "values"});
    if (g.contains("points")) c.grid.points = static_cast<std::size_t>(rd.integer(g["points"], "points", 1));
    if (g.contains("band")) {
      const std::string band = rd.string(g["band"], "band");
      if (band != "half" && band != "full") rd.fail("band", "'band' must be \"half\" or \"full\"");
      c.grid.full_band = band == "full";
    }
    if (g.contains("values")) {
      if (!g["values"].is_array()) rd.fail("values", "grid 'values' must be a list");
      for (const auto& v : g["values"]) c.grid.values.push_back(rd.number(v, "values"));
    }
  }
  if (root.contains("trials")) c.trials = static_cast<std::size_t>(rd.integer(root["trials"], "trials", 1));
  if (root.contains("delta")) c.delta = rd.number(root["delta"], "delta");
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned() && !root["seed"].is_number_integer()) rd.fail("seed", "'seed' must be an integer");
    if (root["seed"].is_number_integer() && root["seed"].get<std::int64_t>() < 0) rd.fail("seed", "'seed' must be >= 0");
    c.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("output")) c.output = rd.string(root["output"], "output");
  if (root.contains("context")) {
    const json& x = root["context"];
    rd.only(x, "context", {"phi_inf", "r1", "gamma", "rho"});
    if (x.contains("phi_inf")) c.context.phi_inf = rd.number(x["phi_inf"], "phi_inf");
    if (x.contains("r1")) c.context.r1 = rd.number(x["r1"], "r1");
    if (x.contains("gamma")) c.context.gamma = rd.number(x["gamma"], "gamma");
    if (x.contains("rho")) c.context.rho = rd.number(x["rho"], "rho");
  }
  if (root.contains("certify")) {
    const json& x = root["certify"];
    rd.only(x, "certify", {"epsilon", "estimate_file"});
    if (x.contains("epsilon")) c.epsilon = rd.number(x["epsilon"], "epsilon");
    if (x.contains("estimate_file")) c.estimate_file = rd.string(x["estimate_file"], "estimate_file");
  }
  if (root.contains("data_file")) c.data_file = rd.string(root["data_file"], "data_file");
  if (root.contains("concentration")) {
    const json& x = root["concentration"];
    rd.only(x, "concentration", {"dims", "trials", "points"});
    if (x.contains("dims")) {
      if (!x["dims"].is_array() || x["dims"].empty()) rd.fail("dims", "'dims' must be a non-empty list");
      c.concentration.dims.clear();
      for (const auto& v : x["dims"]) c.concentration.dims.push_back(rd.integer(v, "dims", 1));
    }
    if (x.contains("trials")) c.concentration.trials = static_cast<std::size_t>(rd.integer(x["trials"], "trials", 1));
    if (x.contains("points")) c.concentration.points = static_cast<std::size_t>(rd.integer(x["points"], "points", 2));
  }

  check(c, [&](const char* key, const std::string& msg) { rd.fail(key, msg); });
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file", path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path);
}

void validate(const ExperimentConfig& c, const std::string& path) {
  check(c, [&](const char*, const std::string& msg) { throw ConfigError(msg, path); });
}

std::string canonical_json(const ExperimentConfig& config) { return to_json(config, true).dump(); }

std::uint64_t config_hash(const ExperimentConfig& config) {
  const std::string text = to_json(config, false).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<double> frequency_grid(const ExperimentConfig& config) {
  if (!config.grid.values.empty()) return config.grid.values;
  if (config.grid.full_band) return full_band_grid(config.grid.points);
  return half_band_grid(config.grid.points);
}

}  // namespace specbound::cli
