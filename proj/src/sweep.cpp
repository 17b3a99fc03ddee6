#include "sepbeam/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "sepbeam/antipodal_kkt.hpp"
#include "sepbeam/baseline_sinr.hpp"
#include "sepbeam/mary_pgd.hpp"
#include "sepbeam/numerics.hpp"
#include "sepbeam/philox.hpp"
#include "sepbeam/sdr_alt.hpp"
#include "sepbeam/sep_metrics.hpp"
#include "sepbeam/simulate.hpp"

namespace sepbeam {
namespace {

CVec physical_beam(const CVec& w_bar, double power) {
  return vscale(w_bar, std::sqrt(power));
}

// Rank-one input covariance |a|^2 w w^H of an antipodal transmission.
CMat antipodal_covariance(const CVec& w, cdouble a) {
  return scale(outer(w, w), std::norm(a));
}

// Per-row substreams: Bob's Monte-Carlo, Eve's Monte-Carlo, and the SDR
// randomization each get an independent key so adding one consumer never
// shifts another's draws.
std::uint64_t row_key(const SweepContext& ctx, size_t row, int consumer) {
  return derive_key(ctx.seed, 3 * static_cast<std::uint64_t>(row) + consumer);
}

void attach_antipodal_mc(SweepRow& out, const WiretapSystem& sys, const CVec& w,
                         cdouble a, const SweepContext& ctx, size_t row) {
  if (ctx.trials == 0) return;
  McEstimate bob = simulate_antipodal_ser(sys.h_b, sys.n_b, w, a, ctx.trials,
                                          row_key(ctx, row, 0), ctx.threads);
  McEstimate eve = simulate_antipodal_ser(sys.h_e, sys.n_e, w, a, ctx.trials,
                                          row_key(ctx, row, 1), ctx.threads);
  out.ser_bob_mc = bob.ser;
  out.ser_eve_mc = eve.ser;
  out.ci_lo = bob.ci_lo;
  out.ci_hi = bob.ci_hi;
}

SweepRow base_row(Method method, const SweepContext& ctx, const GridPoint& pt) {
  SweepRow out;
  out.method = method_name(method);
  out.preset = ctx.preset;
  out.snr_db = pt.snr_db;
  out.feasible = "true";
  return out;
}

SweepRow antipodal_row(const RunConfig& cfg, const GridPoint& pt,
                       const SweepContext& ctx, size_t row) {
  SweepRow out = base_row(Method::Antipodal, ctx, pt);
  const AntipodalConfig& acfg = *cfg.antipodal;
  WiretapSystem sys = cfg.system;
  sys.power = pt.power;
  AntipodalOptions opt;
  opt.sweep_points = acfg.sweep_points;
  opt.eq_tol = acfg.eq_tol;
  KktReport rep = solve_antipodal(sys, acfg.spec, opt);
  if (!rep.feasible) {
    out.feasible = "false";
    return out;
  }
  out.case_label = "Case" + std::to_string(rep.best.case_id);
  out.lambda1 = rep.best.lambda1;
  out.lambda2 = rep.best.lambda2;
  out.sep_bob_analytic = rep.best.sep_bob;
  out.sep_eve_analytic = rep.best.sep_eve;
  const CVec w = physical_beam(rep.best.w_bar, sys.power);
  out.secrecy_rate = secrecy_rate(sys, antipodal_covariance(w, acfg.spec.amplitude)).rate;
  attach_antipodal_mc(out, sys, w, acfg.spec.amplitude, ctx, row);
  if (ctx.trials > 0) out.seed = std::to_string(ctx.seed);
  return out;
}

SweepRow sinr_bf_row(const RunConfig& cfg, const GridPoint& pt,
                     const SweepContext& ctx, size_t row) {
  SweepRow out = base_row(Method::SinrBf, ctx, pt);
  WiretapSystem sys = cfg.system;
  sys.power = pt.power;
  const cdouble a = cfg.antipodal ? cfg.antipodal->spec.amplitude : cdouble{1.0, 0.0};
  BeamVector beam = sinr_bf(sys);
  const CVec w = physical_beam(beam.w_bar, beam.power);
  out.sep_bob_analytic = sep_antipodal(sys.h_b, w, a, sys.n_b);
  out.sep_eve_analytic = sep_antipodal(sys.h_e, w, a, sys.n_e);
  out.secrecy_rate = secrecy_rate(sys, antipodal_covariance(w, a)).rate;
  attach_antipodal_mc(out, sys, w, a, ctx, row);
  if (ctx.trials > 0) out.seed = std::to_string(ctx.seed);
  return out;
}

SweepRow sdr_row(const RunConfig& cfg, const GridPoint& pt, const SweepContext& ctx,
                 size_t row) {
  SweepRow out = base_row(Method::Sdr, ctx, pt);
  out.seed = std::to_string(ctx.seed);
  const cdouble a = cfg.antipodal->spec.amplitude;
  WiretapSystem sys = cfg.system;
  sys.power = pt.power;
  SdrOptions opt;
  opt.rand_samples = ctx.sdr_samples;
  SdrSolution sol = solve_sdr(sys, ctx.sdr_bob_cap, a, opt);
  if (!sol.feasible) {
    out.feasible = "false";
    return out;
  }
  SdrBeam beam = randomize_beam(sol, sys, a, row_key(ctx, row, 2), opt);
  out.sep_bob_analytic = beam.sep_bob;
  out.sep_eve_analytic = beam.sep_eve;
  out.secrecy_rate = secrecy_rate(sys, antipodal_covariance(beam.w, a)).rate;
  attach_antipodal_mc(out, sys, beam.w, a, ctx, row);
  return out;
}

SweepRow mary_row(const RunConfig& cfg, const GridPoint& pt, const SweepContext& ctx,
                  size_t row, std::vector<PgdTrace>* traces) {
  SweepRow out = base_row(Method::Mary, ctx, pt);
  out.seed = std::to_string(ctx.seed);
  const MaryConfig& mcfg = *cfg.mary;
  WiretapSystem sys = cfg.system;
  sys.power = pt.power;
  PgdOptions opt;
  opt.gamma = mcfg.gamma;
  opt.alpha = mcfg.alpha;
  opt.eps = mcfg.eps;
  opt.max_iters = mcfg.max_iters;
  opt.restarts = mcfg.restarts;
  opt.structured = mcfg.structured;
  opt.seed = derive_key(mcfg.seed, row);
  PgdTrace trace = pgd_solve(sys, mcfg.constellation, opt);
  if (traces) traces->push_back(trace);
  const RMat& w_tilde = trace.best_w.w_tilde;
  EmbeddedMary prob = embed_mary(sys, mcfg.constellation);
  out.sep_bob_analytic = mary_objective(prob, w_tilde, 0.0);
  out.sep_eve_analytic = eve_pair_bound(prob, w_tilde).value;
  if (ctx.trials > 0) {
    std::vector<RVec> symbols;
    for (const auto& s : mcfg.constellation.symbols)
      symbols.push_back(real_embed_vector(s));
    McEstimate bob = simulate_mary_ser(prob.h_b, sys.n_b, w_tilde, symbols, ctx.trials,
                                       row_key(ctx, row, 0), ctx.threads);
    McEstimate eve = simulate_mary_ser(prob.h_e, sys.n_e, w_tilde, symbols, ctx.trials,
                                       row_key(ctx, row, 1), ctx.threads);
    out.ser_bob_mc = bob.ser;
    out.ser_eve_mc = eve.ser;
    out.ci_lo = bob.ci_lo;
    out.ci_hi = bob.ci_hi;
  }
  return out;
}

void format_cell(std::string& line, double v) {
  if (!std::isnan(v)) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10e", v);
    line += buf;
  }
  line += ',';
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::Antipodal: return "antipodal";
    case Method::Sdr: return "sdr";
    case Method::Mary: return "mary";
    case Method::SinrBf: return "sinr-bf";
  }
  return "?";
}

std::vector<GridPoint> snr_grid(const WiretapSystem& sys, const std::vector<double>& snr_db) {
  std::vector<GridPoint> grid;
  grid.reserve(snr_db.size());
  for (double s : snr_db)
    grid.push_back({s, std::pow(10.0, s / 10.0) * sys.n_b});
  return grid;
}

GridPoint implied_point(const WiretapSystem& sys) {
  return {10.0 * std::log10(sys.power / sys.n_b), sys.power};
}

std::vector<SweepRow> sweep_rows(Method method, const RunConfig& cfg,
                                 const std::vector<GridPoint>& grid,
                                 const SweepContext& ctx,
                                 std::vector<PgdTrace>* mary_traces) {
  if ((method == Method::Antipodal || method == Method::Sdr) && !cfg.antipodal)
    throw ConfigError("config error at 'antipodal': section required by method " +
                      method_name(method));
  if (method == Method::Mary && !cfg.mary)
    throw ConfigError("config error at 'mary': section required by method mary");
  if (method == Method::Sdr && !(ctx.sdr_bob_cap > 0.0))
    throw ConfigError("sdr requires a positive Bob SEP cap");

  std::vector<SweepRow> rows;
  rows.reserve(grid.size());
  for (size_t r = 0; r < grid.size(); ++r) {
    try {
      switch (method) {
        case Method::Antipodal: rows.push_back(antipodal_row(cfg, grid[r], ctx, r)); break;
        case Method::Sdr: rows.push_back(sdr_row(cfg, grid[r], ctx, r)); break;
        case Method::Mary: rows.push_back(mary_row(cfg, grid[r], ctx, r, mary_traces)); break;
        case Method::SinrBf: rows.push_back(sinr_bf_row(cfg, grid[r], ctx, r)); break;
      }
    } catch (const std::exception&) {
      // A solver failure at one point (no feasible randomized sample, a
      // degenerate pencil, ...) must not lose the rest of the sweep.
      SweepRow out = base_row(method, ctx, grid[r]);
      out.feasible = "false";
      out.seed.clear();
      rows.push_back(out);
    }
  }
  return rows;
}

std::vector<SweepRow> sweep_snr(Method method, const RunConfig& cfg,
                                const SweepContext& ctx,
                                std::vector<PgdTrace>* mary_traces) {
  if (!cfg.sim) throw ConfigError("config error at 'sim': section required for a sweep");
  return sweep_rows(method, cfg, snr_grid(cfg.system, cfg.sim->snr_db), ctx, mary_traces);
}

std::string csv_header() {
  return "method,preset,snr_db,case,lambda1,lambda2,sep_bob_analytic,sep_eve_analytic,"
         "ser_bob_mc,ser_eve_mc,ci_lo,ci_hi,secrecy_rate,feasible,seed\n";
}

std::string csv_row(const SweepRow& row) {
  std::string line;
  line += row.method;
  line += ',';
  line += row.preset;
  line += ',';
  format_cell(line, row.snr_db);
  line += row.case_label;
  line += ',';
  format_cell(line, row.lambda1);
  format_cell(line, row.lambda2);
  format_cell(line, row.sep_bob_analytic);
  format_cell(line, row.sep_eve_analytic);
  format_cell(line, row.ser_bob_mc);
  format_cell(line, row.ser_eve_mc);
  format_cell(line, row.ci_lo);
  format_cell(line, row.ci_hi);
  format_cell(line, row.secrecy_rate);
  line += row.feasible;
  line += ',';
  line += row.seed;
  line += '\n';
  return line;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << csv_header();
  for (const auto& row : rows) os << csv_row(row);
}

}  // namespace sepbeam
