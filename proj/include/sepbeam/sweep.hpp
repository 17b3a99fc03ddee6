#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "sepbeam/config.hpp"
#include "sepbeam/mary_pgd.hpp"

namespace sepbeam {

// Beamforming routes the sweep can evaluate on a common SNR grid.
enum class Method { Antipodal, Sdr, Mary, SinrBf };

std::string method_name(Method m);

// One CSV row. Numeric fields default to quiet NaN, which prints as an empty
// cell; string fields print verbatim.
struct SweepRow {
  std::string method;
  std::string preset;
  double snr_db = std::numeric_limits<double>::quiet_NaN();
  std::string case_label;
  double lambda1 = std::numeric_limits<double>::quiet_NaN();
  double lambda2 = std::numeric_limits<double>::quiet_NaN();
  double sep_bob_analytic = std::numeric_limits<double>::quiet_NaN();
  double sep_eve_analytic = std::numeric_limits<double>::quiet_NaN();
  double ser_bob_mc = std::numeric_limits<double>::quiet_NaN();
  double ser_eve_mc = std::numeric_limits<double>::quiet_NaN();
  double ci_lo = std::numeric_limits<double>::quiet_NaN();
  double ci_hi = std::numeric_limits<double>::quiet_NaN();
  double secrecy_rate = std::numeric_limits<double>::quiet_NaN();
  std::string feasible;  // "true" / "false"
  std::string seed;      // run seed in decimal; empty when no randomness ran
};

// Run-level knobs shared by every row of a sweep.
struct SweepContext {
  std::string preset;        // label for the CSV preset column (may be empty)
  std::uint64_t trials = 0;  // 0 disables the Monte-Carlo columns
  std::uint64_t seed = 0;    // run seed; per-row substreams are derived from it
  int threads = 1;
  double sdr_bob_cap = 0.0;  // Bob SEP target, required by Method::Sdr
  int sdr_samples = 500;     // randomization draws per SDR point
};

// One sweep evaluation point: the power that realizes snr_db on Bob's channel.
struct GridPoint {
  double snr_db = 0.0;
  double power = 0.0;
};

// P = 10^(snr/10) * n_b for each requested SNR.
std::vector<GridPoint> snr_grid(const WiretapSystem& sys, const std::vector<double>& snr_db);

// The configured budget expressed as a grid point (snr = 10 log10(P / n_b)).
GridPoint implied_point(const WiretapSystem& sys);

// Evaluate one method at each grid point. A point where the design is
// infeasible or a solver throws yields a feasible="false" row with empty
// numeric cells; the sweep itself never throws on such points.
// Missing config sections required by the method do throw ConfigError.
// When `mary_traces` is non-null, Method::Mary appends each point's full
// solver trace (restart statistics for reporting).
std::vector<SweepRow> sweep_rows(Method method, const RunConfig& cfg,
                                 const std::vector<GridPoint>& grid,
                                 const SweepContext& ctx,
                                 std::vector<PgdTrace>* mary_traces = nullptr);

// sweep_rows over the grid configured in cfg.sim (ConfigError when absent).
std::vector<SweepRow> sweep_snr(Method method, const RunConfig& cfg,
                                const SweepContext& ctx,
                                std::vector<PgdTrace>* mary_traces = nullptr);

std::string csv_header();
std::string csv_row(const SweepRow& row);
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace sepbeam
