#include "sepbeam/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sepbeam {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config error at '" + path + "': " + what);
}

// Every object is checked against the exact key set it may carry, so typos
// and stale keys fail loudly instead of being silently ignored.
void check_keys(const json& j, const std::string& path,
                const std::set<std::string>& allowed) {
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      fail(path + "." + item.key(), "unknown key");
}

const json& require(const json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing field");
  return *it;
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::uint64_t as_u64(const json& j, const std::string& path) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() &&
                                 j.get<std::int64_t>() < 0))
    fail(path, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected a boolean");
  return j.get<bool>();
}

cdouble as_complex(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2)
    fail(path, "expected a [re, im] pair");
  return {as_double(j[0], path + "[0]"), as_double(j[1], path + "[1]")};
}

CMat as_matrix(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object with rows/cols/data");
  check_keys(j, path, {"rows", "cols", "data"});
  const int rows = as_int(require(j, path, "rows"), path + ".rows");
  const int cols = as_int(require(j, path, "cols"), path + ".cols");
  if (rows <= 0 || cols <= 0) fail(path, "rows and cols must be positive");
  const json& data = require(j, path, "data");
  if (!data.is_array()) fail(path + ".data", "expected an array of [re, im] pairs");
  if (static_cast<int>(data.size()) != rows * cols)
    fail(path + ".data", "expected " + std::to_string(rows * cols) +
                             " entries (rows * cols), got " + std::to_string(data.size()));
  CMat m(rows, cols);
  for (size_t k = 0; k < data.size(); ++k)
    m.a[k] = as_complex(data[k], path + ".data[" + std::to_string(k) + "]");
  return m;
}

WiretapSystem parse_system(const json& j) {
  const std::string path = "system";
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, path, {"h_b", "h_e", "n_b", "n_e", "power"});
  WiretapSystem sys;
  sys.h_b = as_matrix(require(j, path, "h_b"), path + ".h_b");
  sys.h_e = as_matrix(require(j, path, "h_e"), path + ".h_e");
  sys.n_b = as_double(require(j, path, "n_b"), path + ".n_b");
  sys.n_e = as_double(require(j, path, "n_e"), path + ".n_e");
  sys.power = as_double(require(j, path, "power"), path + ".power");
  return sys;
}

AntipodalConfig parse_antipodal(const json& j) {
  const std::string path = "antipodal";
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, path, {"amplitude", "eve_sep_min", "sweep_points", "eq_tol"});
  AntipodalConfig cfg;
  cfg.spec.amplitude = as_complex(require(j, path, "amplitude"), path + ".amplitude");
  cfg.spec.eve_sep_min =
      as_double(require(j, path, "eve_sep_min"), path + ".eve_sep_min");
  if (j.contains("sweep_points"))
    cfg.sweep_points = as_int(j["sweep_points"], path + ".sweep_points");
  if (j.contains("eq_tol")) cfg.eq_tol = as_double(j["eq_tol"], path + ".eq_tol");
  return cfg;
}

Constellation parse_constellation(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty())
    fail(path, "expected a non-empty array of symbols");
  Constellation cons;
  for (size_t i = 0; i < j.size(); ++i) {
    const std::string spath = path + "[" + std::to_string(i) + "]";
    const json& sym = j[i];
    if (!sym.is_array() || sym.empty())
      fail(spath, "expected a non-empty array of [re, im] pairs");
    CVec s(sym.size());
    for (size_t k = 0; k < sym.size(); ++k)
      s[k] = as_complex(sym[k], spath + "[" + std::to_string(k) + "]");
    if (!cons.symbols.empty() && s.size() != cons.symbols.front().size())
      fail(spath, "symbol length differs from symbol 0");
    cons.symbols.push_back(std::move(s));
  }
  return cons;
}

MaryConfig parse_mary(const json& j) {
  const std::string path = "mary";
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, path,
             {"constellation", "eve_lb_min", "gamma", "alpha", "eps", "max_iters",
              "restarts", "seed", "structured"});
  MaryConfig cfg;
  cfg.constellation =
      parse_constellation(require(j, path, "constellation"), path + ".constellation");
  cfg.constellation.eve_lb_min = 0.01;
  if (j.contains("eve_lb_min"))
    cfg.constellation.eve_lb_min = as_double(j["eve_lb_min"], path + ".eve_lb_min");
  cfg.gamma = as_double(require(j, path, "gamma"), path + ".gamma");
  if (j.contains("alpha")) cfg.alpha = as_double(j["alpha"], path + ".alpha");
  if (j.contains("eps")) cfg.eps = as_double(j["eps"], path + ".eps");
  if (j.contains("max_iters")) cfg.max_iters = as_int(j["max_iters"], path + ".max_iters");
  if (j.contains("restarts")) cfg.restarts = as_int(j["restarts"], path + ".restarts");
  if (j.contains("seed")) cfg.seed = as_u64(j["seed"], path + ".seed");
  if (j.contains("structured")) cfg.structured = as_bool(j["structured"], path + ".structured");
  return cfg;
}

SimConfig parse_sim(const json& j) {
  const std::string path = "sim";
  if (!j.is_object()) fail(path, "expected an object");
  check_keys(j, path, {"trials", "seed", "snr_db"});
  SimConfig cfg;
  cfg.trials = as_u64(require(j, path, "trials"), path + ".trials");
  cfg.seed = as_u64(require(j, path, "seed"), path + ".seed");
  const json& snr = require(j, path, "snr_db");
  if (snr.is_number()) {
    cfg.snr_db.push_back(snr.get<double>());
  } else if (snr.is_array() && !snr.empty()) {
    for (size_t k = 0; k < snr.size(); ++k)
      cfg.snr_db.push_back(as_double(snr[k], path + ".snr_db[" + std::to_string(k) + "]"));
  } else {
    fail(path + ".snr_db", "expected a number or a non-empty array of numbers");
  }
  return cfg;
}

json dump_matrix(const CMat& m) {
  json data = json::array();
  for (const auto& v : m.a) data.push_back({v.real(), v.imag()});
  return json{{"rows", m.rows}, {"cols", m.cols}, {"data", std::move(data)}};
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) fail("(root)", "expected a JSON object");
  check_keys(j, "(root)", {"system", "antipodal", "mary", "sim"});
  RunConfig cfg;
  cfg.system = parse_system(require(j, "(root)", "system"));
  if (j.contains("antipodal")) cfg.antipodal = parse_antipodal(j["antipodal"]);
  if (j.contains("mary")) cfg.mary = parse_mary(j["mary"]);
  if (j.contains("sim")) cfg.sim = parse_sim(j["sim"]);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string save_config(const RunConfig& cfg) {
  json j;
  j["system"] = {{"h_b", dump_matrix(cfg.system.h_b)},
                 {"h_e", dump_matrix(cfg.system.h_e)},
                 {"n_b", cfg.system.n_b},
                 {"n_e", cfg.system.n_e},
                 {"power", cfg.system.power}};
  if (cfg.antipodal) {
    const auto& a = *cfg.antipodal;
    j["antipodal"] = {
        {"amplitude", {a.spec.amplitude.real(), a.spec.amplitude.imag()}},
        {"eve_sep_min", a.spec.eve_sep_min},
        {"sweep_points", a.sweep_points},
        {"eq_tol", a.eq_tol}};
  }
  if (cfg.mary) {
    const auto& m = *cfg.mary;
    json cons = json::array();
    for (const auto& s : m.constellation.symbols) {
      json sym = json::array();
      for (const auto& v : s) sym.push_back({v.real(), v.imag()});
      cons.push_back(std::move(sym));
    }
    j["mary"] = {{"constellation", std::move(cons)},
                 {"eve_lb_min", m.constellation.eve_lb_min},
                 {"gamma", m.gamma},
                 {"alpha", m.alpha},
                 {"eps", m.eps},
                 {"max_iters", m.max_iters},
                 {"restarts", m.restarts},
                 {"seed", m.seed},
                 {"structured", m.structured}};
  }
  if (cfg.sim) {
    j["sim"] = {{"trials", cfg.sim->trials},
                {"seed", cfg.sim->seed},
                {"snr_db", cfg.sim->snr_db}};
  }
  return j.dump(2) + "\n";
}

}  // namespace sepbeam
