#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sepbeam/model.hpp"

namespace sepbeam {

// Raised on malformed configuration text. The message always names the
// offending field as a dotted path (e.g. "system.h_e" or
// "mary.constellation[2][0]").
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AntipodalConfig {
  AntipodalSpec spec;
  int sweep_points = 2000;
  double eq_tol = 1e-3;
};

struct MaryConfig {
  Constellation constellation;  // carries the optional eve_lb_min floor
  double gamma = 0.0;
  double alpha = 0.0;  // <= 0 selects the default step size
  double eps = 1e-5;
  int max_iters = 300;
  int restarts = 100;
  std::uint64_t seed = 0;
  bool structured = false;
};

struct SimConfig {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> snr_db;  // a scalar in the file parses to one element
};

// Parsed configuration file: the system section is mandatory, the method
// sections are present only when the file carries them.
struct RunConfig {
  WiretapSystem system;
  std::optional<AntipodalConfig> antipodal;
  std::optional<MaryConfig> mary;
  std::optional<SimConfig> sim;
};

// Strict parse of the JSON schema (unknown keys rejected, every error names
// its field); does not run the deeper model validation.
RunConfig parse_config(const std::string& text);

// Reads and parses a configuration file; throws ConfigError when the file
// cannot be read.
RunConfig load_config(const std::string& path);

// Serializes back to the schema accepted by parse_config. Doubles are
// printed with shortest round-trip formatting, so save/load is bit-exact.
std::string save_config(const RunConfig& cfg);

// Embedded copies of the shipped preset files, keyed by preset name.
const std::map<std::string, std::string>& preset_table();

}  // namespace sepbeam
