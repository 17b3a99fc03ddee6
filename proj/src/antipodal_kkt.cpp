#include "sepbeam/antipodal_kkt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sepbeam/numerics.hpp"
#include "sepbeam/sep_metrics.hpp"

namespace sepbeam {

namespace {

void validate(const WiretapSystem& sys, const AntipodalSpec& spec) {
  const auto problems = validate_system(sys);
  if (!problems.empty()) throw std::invalid_argument("solve_antipodal: " + problems.front());
  if (!(std::abs(spec.amplitude) > 0.0))
    throw std::invalid_argument("solve_antipodal: amplitude must be nonzero");
}

// Finish a candidate: canonical phase, physical SEP values at power P.
CaseCandidate finish(const WiretapSystem& sys, const AntipodalSpec& spec, int case_id,
                     double lambda1, double lambda2, const CVec& w_bar, const CMat& a_e) {
  CaseCandidate c;
  c.case_id = case_id;
  c.lambda1 = lambda1;
  c.lambda2 = lambda2;
  c.w_bar = canonical_phase(w_bar);
  c.eve_energy = quad_form(a_e, c.w_bar);
  const double sqrt_p = std::sqrt(sys.power);
  CVec w_phys = c.w_bar;
  for (auto& v : w_phys) v *= sqrt_p;
  c.sep_bob = sep_antipodal(sys.h_b, w_phys, spec.amplitude, sys.n_b);
  c.sep_eve = sep_antipodal(sys.h_e, w_phys, spec.amplitude, sys.n_e);
  return c;
}

}  // namespace

double eve_threshold(const WiretapSystem& sys, const AntipodalSpec& spec) {
  const double d = spec.eve_sep_min;
  if (!(d > 0.0) || d > 0.5)
    throw std::domain_error("eve_threshold: eve_sep_min must lie in (0, 0.5]");
  const double amp = std::abs(spec.amplitude);
  const double qd = (d == 0.5) ? 0.0 : q_inv(d);
  const double ratio = qd / amp;
  return sys.n_e / (2.0 * sys.power) * ratio * ratio;
}

double lambda1_upper_bound(const CMat& a_b, const CMat& a_e) {
  const EigenPairs eb = herm_eig(a_b);
  const EigenPairs ee = herm_eig(a_e);
  const double bmax = eb.values.back();
  const double etol = 1e-12 * std::max(1e-300, ee.values.back());
  double emin_pos = 0.0;
  for (const double v : ee.values) {
    if (v > etol) {
      emin_pos = v;
      break;
    }
  }
  if (emin_pos <= 0.0)
    throw std::domain_error("lambda1_upper_bound: A_E has no positive eigenvalue");
  return bmax / emin_pos;
}

std::vector<CaseCandidate> solve_case2(const WiretapSystem& sys, const AntipodalSpec& spec,
                                       double t, double eq_tol) {
  const CMat a_b = gram(sys.h_b);
  const CMat a_e = gram(sys.h_e);
  const EigenPairs eb = herm_eig(a_b);
  const double pos_tol = 1e-14 * std::max(1.0, eb.values.back());

  std::vector<CaseCandidate> out;
  for (std::size_t k = 0; k < eb.values.size(); ++k) {
    const double lambda2 = eb.values[k];
    if (lambda2 <= pos_tol) continue;  // needs a strictly positive Bob gain
    const CVec& v = eb.vectors[k];
    const double eve_e = quad_form(a_e, v);
    if (!(eve_e < t * (1.0 - eq_tol))) continue;  // Eve cap must stay slack
    out.push_back(finish(sys, spec, 2, 0.0, lambda2, v, a_e));
  }
  return out;
}

std::vector<CaseCandidate> solve_case3(const WiretapSystem& sys, const AntipodalSpec& spec,
                                       double t, double eq_tol) {
  const CMat a_b = gram(sys.h_b);
  const CMat a_e = gram(sys.h_e);

  std::vector<CaseCandidate> out;
  if (!(t > 0.0)) return out;  // a zero cap only admits the zero beam
  GenEigenPairs ge;
  try {
    ge = gen_herm_eig(a_b, a_e);
  } catch (const std::exception&) {
    return out;  // no usable finite pencil (e.g. A_E ~ 0)
  }
  if (ge.values.empty()) return out;

  // Only the top finite pair is a constrained maximiser of Bob gain on the
  // Eve-cap ellipsoid; interior pairs are saddle points of the ratio.
  const std::size_t k = ge.values.size() - 1;
  const double lambda1 = ge.values[k];
  if (!(lambda1 > 0.0)) return out;
  const CVec& v = ge.vectors[k];
  const double eve_e = quad_form(a_e, v);
  if (!(eve_e > 0.0)) return out;
  const double s = std::sqrt(t / eve_e);
  CVec w = v;
  for (auto& x : w) x *= s;
  if (!(norm2(w) < 1.0 - eq_tol)) return out;  // power must stay slack
  out.push_back(finish(sys, spec, 3, lambda1, 0.0, w, a_e));
  return out;
}

std::vector<CaseCandidate> solve_case4(const WiretapSystem& sys, const AntipodalSpec& spec,
                                       double t, const AntipodalOptions& opt,
                                       SweepTrace* trace) {
  const CMat a_b = gram(sys.h_b);
  const CMat a_e = gram(sys.h_e);
  const int n = a_b.rows;
  const int points = std::max(2, opt.sweep_points);
  const double tau = opt.eq_tol;

  std::vector<CaseCandidate> out;
  SweepTrace sw;
  sw.points = points;

  double ub = 0.0;
  try {
    ub = lambda1_upper_bound(a_b, a_e);
  } catch (const std::domain_error&) {
    if (trace) *trace = sw;
    return out;  // Eve channel carries no energy: the cap cannot bind
  }
  sw.lambda1_lo = ub / points;
  sw.lambda1_hi = ub;

  const double pos_tol = 1e-14 * std::max(1.0, herm_eig(a_b).values.back());

  // residual(j, l1) = Eve energy of the j-th ascending eigenvector of
  // A_B - l1 A_E, minus the cap t.  A candidate needs residual in
  // [-tau t, 0] (feasible side of the active cap) and a positive Bob-gain
  // multiplier lambda2.
  struct BranchEval {
    double lambda2 = 0.0;
    double residual = 0.0;
    CVec v;
  };
  const auto eval = [&](double l1) {
    CMat s = sub(a_b, scale(a_e, l1));
    const EigenPairs es = herm_eig(s);
    std::vector<BranchEval> evs(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      evs[static_cast<std::size_t>(j)].lambda2 = es.values[static_cast<std::size_t>(j)];
      evs[static_cast<std::size_t>(j)].v = es.vectors[static_cast<std::size_t>(j)];
      evs[static_cast<std::size_t>(j)].residual =
          quad_form(a_e, es.vectors[static_cast<std::size_t>(j)]) - t;
    }
    return evs;
  };
  const auto accept = [&](const BranchEval& be) {
    return be.lambda2 > pos_tol && be.residual <= 0.0 && be.residual >= -tau * t;
  };

  std::vector<std::vector<BranchEval>> grid(static_cast<std::size_t>(points));
  std::vector<bool> branch_has_candidate(static_cast<std::size_t>(n), false);
  for (int v = 1; v <= points; ++v) {
    const double l1 = ub * static_cast<double>(v) / static_cast<double>(points);
    grid[static_cast<std::size_t>(v - 1)] = eval(l1);
    for (int j = 0; j < n; ++j) {
      const BranchEval& be = grid[static_cast<std::size_t>(v - 1)][static_cast<std::size_t>(j)];
      if (accept(be)) {
        out.push_back(finish(sys, spec, 4, l1, be.lambda2, be.v, a_e));
        branch_has_candidate[static_cast<std::size_t>(j)] = true;
      }
    }
  }

  // Per-branch refinement: when a branch crossed the cap between grid points
  // without landing inside the acceptance band, bisect the bracket.
  for (int j = 0; j < n; ++j) {
    if (branch_has_candidate[static_cast<std::size_t>(j)]) continue;
    for (int v = 1; v < points; ++v) {
      const double ra = grid[static_cast<std::size_t>(v - 1)][static_cast<std::size_t>(j)].residual;
      const double rb = grid[static_cast<std::size_t>(v)][static_cast<std::size_t>(j)].residual;
      if (!(ra * rb < 0.0)) continue;
      double la = ub * static_cast<double>(v) / static_cast<double>(points);
      double lb = ub * static_cast<double>(v + 1) / static_cast<double>(points);
      double fa = ra;
      BranchEval best_feasible;
      bool have = false;
      if (ra <= 0.0) {
        best_feasible = grid[static_cast<std::size_t>(v - 1)][static_cast<std::size_t>(j)];
        have = true;
      } else if (rb <= 0.0) {
        best_feasible = grid[static_cast<std::size_t>(v)][static_cast<std::size_t>(j)];
        have = true;
      }
      double l_feasible = (ra <= 0.0) ? la : lb;
      for (int it = 0; it < 200; ++it) {
        const double lm = 0.5 * (la + lb);
        const BranchEval bm = eval(lm)[static_cast<std::size_t>(j)];
        if (bm.residual <= 0.0) {
          best_feasible = bm;
          l_feasible = lm;
          have = true;
        }
        if (bm.residual <= 0.0 && bm.residual >= -0.5 * tau * t) break;
        if ((bm.residual < 0.0) == (fa < 0.0)) {
          la = lm;
          fa = bm.residual;
        } else {
          lb = lm;
        }
        if (lb - la < 1e-15 * std::max(1.0, ub)) break;
      }
      if (have && accept(best_feasible)) {
        out.push_back(finish(sys, spec, 4, l_feasible, best_feasible.lambda2, best_feasible.v, a_e));
        branch_has_candidate[static_cast<std::size_t>(j)] = true;
        ++sw.bisection_roots;
      }
      if (branch_has_candidate[static_cast<std::size_t>(j)]) break;
    }
  }

  if (trace) *trace = sw;
  return out;
}

KktReport solve_antipodal(const WiretapSystem& sys, const AntipodalSpec& spec,
                          const AntipodalOptions& opt) {
  validate(sys, spec);
  KktReport rep;
  rep.t = eve_threshold(sys, spec);
  rep.case2 = solve_case2(sys, spec, rep.t, opt.eq_tol);
  rep.case3 = solve_case3(sys, spec, rep.t, opt.eq_tol);
  rep.case4 = solve_case4(sys, spec, rep.t, opt, &rep.sweep);

  const auto consider = [&](const CaseCandidate& c) {
    if (!rep.feasible || c.sep_bob < rep.best.sep_bob) {
      rep.best = c;
      rep.feasible = true;
    }
  };
  for (const auto& c : rep.case2) consider(c);
  for (const auto& c : rep.case3) consider(c);
  for (const auto& c : rep.case4) consider(c);
  return rep;
}

}  // namespace sepbeam
