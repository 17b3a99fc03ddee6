#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sepbeam/config.hpp"
#include "sepbeam/mary_pgd.hpp"
#include "sepbeam/model.hpp"
#include "sepbeam/sweep.hpp"

namespace {

using namespace sepbeam;

constexpr int kExitOk = 0;
constexpr int kExitInfeasible = 2;
constexpr int kExitConfig = 3;

struct CommonFlags {
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--out", flags->out, "CSV output path (omit to skip the CSV)");
  cmd->add_option("--seed", flags->seed, "run seed for Monte-Carlo substreams");
  cmd->add_option("--trials", flags->trials, "Monte-Carlo trials per point (0 = analytic only)");
  cmd->add_option("--threads", flags->threads, "worker threads for Monte-Carlo trials")
      ->check(CLI::PositiveNumber);
}

// Semantic checks beyond the structural parse; throws ConfigError naming the
// offending field.
void validate_loaded(const RunConfig& cfg) {
  auto msgs = validate_system(cfg.system);
  if (!msgs.empty()) throw ConfigError("config error at 'system': " + msgs.front());
  if (cfg.antipodal) {
    const AntipodalConfig& a = *cfg.antipodal;
    if (std::abs(a.spec.amplitude) <= 0.0)
      throw ConfigError("config error at 'antipodal.amplitude': must be nonzero");
    if (!(a.spec.eve_sep_min > 0.0 && a.spec.eve_sep_min <= 0.5))
      throw ConfigError("config error at 'antipodal.eve_sep_min': must lie in (0, 0.5]");
    if (a.sweep_points < 2)
      throw ConfigError("config error at 'antipodal.sweep_points': must be at least 2");
    if (!(a.eq_tol > 0.0))
      throw ConfigError("config error at 'antipodal.eq_tol': must be positive");
  }
  if (cfg.mary) {
    const MaryConfig& m = *cfg.mary;
    auto cons_msgs = validate_constellation(m.constellation, cfg.system);
    if (!cons_msgs.empty())
      throw ConfigError("config error at 'mary.constellation': " + cons_msgs.front());
    if (m.gamma < 0.0) throw ConfigError("config error at 'mary.gamma': must be nonnegative");
    if (!(m.eps > 0.0)) throw ConfigError("config error at 'mary.eps': must be positive");
    if (m.max_iters < 1)
      throw ConfigError("config error at 'mary.max_iters': must be at least 1");
    if (m.restarts < 1)
      throw ConfigError("config error at 'mary.restarts': must be at least 1");
  }
  if (cfg.sim && cfg.sim->trials == 0)
    throw ConfigError("config error at 'sim.trials': must be positive");
}

std::string fmt(double v) {
  if (std::isnan(v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void print_summary(const std::vector<SweepRow>& rows) {
  for (const auto& row : rows) {
    std::string line = row.method + "  snr=" + fmt(row.snr_db) + " dB";
    if (row.feasible != "true") {
      std::cout << line << "  infeasible\n";
      continue;
    }
    if (!row.case_label.empty()) line += "  case=" + row.case_label;
    if (!std::isnan(row.lambda1)) line += "  lambda1=" + fmt(row.lambda1);
    if (!std::isnan(row.lambda2)) line += "  lambda2=" + fmt(row.lambda2);
    line += "  sep_bob=" + fmt(row.sep_bob_analytic) + "  sep_eve=" + fmt(row.sep_eve_analytic);
    if (!std::isnan(row.ser_bob_mc))
      line += "  ser_bob=" + fmt(row.ser_bob_mc) + " [" + fmt(row.ci_lo) + ", " +
              fmt(row.ci_hi) + "]  ser_eve=" + fmt(row.ser_eve_mc);
    if (!std::isnan(row.secrecy_rate)) line += "  secrecy=" + fmt(row.secrecy_rate);
    std::cout << line << "\n";
  }
}

void print_mary_traces(const std::vector<PgdTrace>& traces) {
  for (const auto& trace : traces) {
    double mean = 0.0;
    for (double v : trace.restart_objectives) mean += v;
    if (!trace.restart_objectives.empty()) mean /= trace.restart_objectives.size();
    std::cout << "  pgd: best objective=" << fmt(trace.best_objective)
              << " (restart " << trace.best_restart << ")"
              << "  mean over restarts=" << fmt(mean)
              << "  iters=" << trace.iters
              << (trace.stop_reason == PgdStop::Tolerance ? "  stop=tolerance"
                                                          : "  stop=max-iters")
              << "\n";
  }
}

int finish(const std::vector<SweepRow>& rows, const std::string& out_path) {
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file: " + out_path);
    write_csv(out, rows);
    if (!out) throw ConfigError("failed while writing output file: " + out_path);
  }
  bool any_feasible = false;
  for (const auto& row : rows) any_feasible = any_feasible || row.feasible == "true";
  return any_feasible ? kExitOk : kExitInfeasible;
}

SweepContext make_context(const RunConfig& cfg, const CommonFlags& flags,
                          const std::string& preset, std::uint64_t default_trials) {
  SweepContext ctx;
  ctx.preset = preset;
  ctx.trials = flags.trials.value_or(default_trials);
  ctx.seed = flags.seed ? *flags.seed : (cfg.sim ? cfg.sim->seed : 0);
  ctx.threads = flags.threads;
  std::cout << "# run" << (preset.empty() ? "" : " preset=" + preset)
            << " seed=" << ctx.seed << " trials=" << ctx.trials
            << " threads=" << ctx.threads << "\n";
  return ctx;
}

// Methods a config file supports without extra flags: the KKT design and the
// SINR baseline whenever an antipodal section exists, the PGD design whenever
// a mary section exists.
std::vector<Method> default_methods(const RunConfig& cfg) {
  std::vector<Method> methods;
  if (cfg.antipodal) {
    methods.push_back(Method::Antipodal);
    methods.push_back(Method::SinrBf);
  }
  if (cfg.mary) methods.push_back(Method::Mary);
  if (methods.empty())
    throw ConfigError("config error: no method section (antipodal or mary) present");
  return methods;
}

int run_single(Method method, const std::string& config_path, const CommonFlags& flags,
               double bob_cap, int sdr_samples) {
  RunConfig cfg = load_config(config_path);
  validate_loaded(cfg);
  SweepContext ctx = make_context(cfg, flags, "", 0);
  ctx.sdr_bob_cap = bob_cap;
  ctx.sdr_samples = sdr_samples;
  std::vector<GridPoint> grid{implied_point(cfg.system)};
  std::vector<PgdTrace> traces;
  std::vector<SweepRow> rows =
      sweep_rows(method, cfg, grid, ctx, method == Method::Mary ? &traces : nullptr);
  print_summary(rows);
  print_mary_traces(traces);
  return finish(rows, flags.out);
}

int run_grid(const RunConfig& cfg, const std::vector<Method>& methods,
             const std::string& preset, const CommonFlags& flags,
             std::uint64_t default_trials, double bob_cap, int sdr_samples) {
  validate_loaded(cfg);
  if (!cfg.sim)
    throw ConfigError("config error at 'sim': section required for a sweep");
  SweepContext ctx = make_context(cfg, flags, preset, default_trials);
  ctx.sdr_bob_cap = bob_cap;
  ctx.sdr_samples = sdr_samples;
  std::vector<SweepRow> rows;
  std::vector<PgdTrace> traces;
  for (Method method : methods) {
    std::vector<SweepRow> part =
        sweep_snr(method, cfg, ctx, method == Method::Mary ? &traces : nullptr);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  print_summary(rows);
  print_mary_traces(traces);
  return finish(rows, flags.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Transmit beamforming designs for MIMO Gaussian wiretap channels:\n"
      "symbol-error-probability constrained solvers, an SDR alternative, an\n"
      "SINR baseline, and seeded Monte-Carlo validation with CSV output."};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string config_path, preset_name, method_filter;
  double bob_cap = 0.0;
  int sdr_samples = 500;

  CLI::App* antipodal = app.add_subcommand(
      "antipodal", "Closed-form KKT design for antipodal signalling");
  antipodal->add_option("config", config_path, "configuration file")->required();
  add_common(antipodal, &flags);

  CLI::App* sdr = app.add_subcommand(
      "sdr", "Semidefinite-relaxation design (minimize Eve energy under a Bob SEP cap)");
  sdr->add_option("config", config_path, "configuration file")->required();
  sdr->add_option("--bob-cap", bob_cap, "Bob SEP cap in (0, 0.5]")->required();
  sdr->add_option("--samples", sdr_samples, "randomization draws")->check(CLI::PositiveNumber);
  add_common(sdr, &flags);

  CLI::App* mary = app.add_subcommand(
      "mary", "Projected-gradient M-ary design on the real embedding");
  mary->add_option("config", config_path, "configuration file")->required();
  add_common(mary, &flags);

  CLI::App* sinr = app.add_subcommand("sinr-bf", "Generalized-eigenvector SINR baseline");
  sinr->add_option("config", config_path, "configuration file")->required();
  add_common(sinr, &flags);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte-Carlo SER validation over the configured SNR grid");
  simulate->add_option("config", config_path, "configuration file")->required();
  add_common(simulate, &flags);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Analytic metrics over the configured SNR grid");
  sweep->add_option("config", config_path, "configuration file")->required();
  sweep->add_option("--method", method_filter,
                    "restrict to one method: antipodal, sdr, mary, sinr-bf");
  sweep->add_option("--bob-cap", bob_cap, "Bob SEP cap for --method sdr");
  sweep->add_option("--samples", sdr_samples, "randomization draws for --method sdr")
      ->check(CLI::PositiveNumber);
  add_common(sweep, &flags);

  CLI::App* reproduce = app.add_subcommand(
      "reproduce", "Run a shipped preset (setup1, setup2, setup3, fig3-orthogonal, "
                   "fig4-gaussian, fig9-qam4)");
  reproduce->add_option("preset", preset_name, "preset name")->required();
  add_common(reproduce, &flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (antipodal->parsed())
      return run_single(Method::Antipodal, config_path, flags, 0.0, sdr_samples);
    if (sdr->parsed())
      return run_single(Method::Sdr, config_path, flags, bob_cap, sdr_samples);
    if (mary->parsed())
      return run_single(Method::Mary, config_path, flags, 0.0, sdr_samples);
    if (sinr->parsed())
      return run_single(Method::SinrBf, config_path, flags, 0.0, sdr_samples);

    if (simulate->parsed()) {
      RunConfig cfg = load_config(config_path);
      if (!cfg.sim)
        throw ConfigError("config error at 'sim': section required by simulate");
      return run_grid(cfg, default_methods(cfg), "", flags, cfg.sim->trials, bob_cap,
                      sdr_samples);
    }
    if (sweep->parsed()) {
      RunConfig cfg = load_config(config_path);
      std::vector<Method> methods;
      if (method_filter.empty()) {
        methods = default_methods(cfg);
      } else if (method_filter == "antipodal") {
        methods = {Method::Antipodal};
      } else if (method_filter == "sdr") {
        methods = {Method::Sdr};
      } else if (method_filter == "mary") {
        methods = {Method::Mary};
      } else if (method_filter == "sinr-bf") {
        methods = {Method::SinrBf};
      } else {
        throw ConfigError("unknown --method '" + method_filter +
                          "' (expected antipodal, sdr, mary, or sinr-bf)");
      }
      return run_grid(cfg, methods, "", flags, 0, bob_cap, sdr_samples);
    }
    if (reproduce->parsed()) {
      const auto& table = preset_table();
      auto it = table.find(preset_name);
      if (it == table.end()) {
        std::string names;
        for (const auto& [name, text] : table) names += " " + name;
        throw ConfigError("unknown preset '" + preset_name + "'; available:" + names);
      }
      RunConfig cfg = parse_config(it->second);
      return run_grid(cfg, default_methods(cfg), preset_name, flags, 0, 0.0, sdr_samples);
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
