#pragma once

#include <vector>

#include "sepbeam/linalg.hpp"
#include "sepbeam/model.hpp"

namespace sepbeam {

// Closed-form KKT solver for antipodal signalling: minimise Bob's symbol
// error probability over beam directions w_bar (||w_bar|| <= 1, transmit
// power P folded into the amplitude) subject to keeping Eve's symbol error
// probability at or above a floor D.  The Eve constraint is equivalent to an
// energy cap  w_bar^H A_E w_bar <= t  with t = (n_e / (2P)) (Q^{-1}(D)/|a|)^2.
//
// Stationary points split into mutually exclusive activity patterns:
//   case 2: power active, Eve cap slack      -> eigenvectors of A_B
//   case 3: Eve cap active, power slack      -> top generalized pair (A_B, A_E)
//   case 4: both active                      -> eigenpairs of A_B - l1 A_E
//                                               swept over the multiplier l1
// (The all-slack pattern only admits w_bar = 0 and is never a minimiser.)

struct AntipodalOptions {
  int sweep_points = 2000;  // multiplier grid resolution for case 4
  double eq_tol = 1e-3;     // relative activity tolerance tau on constraints
};

struct CaseCandidate {
  int case_id = 0;       // 2, 3, or 4
  double lambda1 = 0.0;  // Eve-cap multiplier (0 when slack)
  double lambda2 = 0.0;  // power multiplier / Bob gain at the candidate
  CVec w_bar;            // beam direction, ||w_bar|| <= 1, canonical phase
  double eve_energy = 0.0;
  double sep_bob = 1.0;
  double sep_eve = 0.0;
};

struct SweepTrace {
  double lambda1_lo = 0.0;  // first grid multiplier (ub / points)
  double lambda1_hi = 0.0;  // last grid multiplier (ub)
  int points = 0;
  int bisection_roots = 0;  // candidates recovered by per-branch refinement
};

struct KktReport {
  double t = 0.0;  // Eve energy cap
  std::vector<CaseCandidate> case2, case3, case4;
  bool feasible = false;
  CaseCandidate best;  // minimum Bob SEP among all candidates
  SweepTrace sweep;
};

// Eve energy cap; throws std::domain_error unless 0 < eve_sep_min <= 0.5.
double eve_threshold(const WiretapSystem& sys, const AntipodalSpec& spec);

// Upper end of the case-4 multiplier sweep: lambda_max(A_B) divided by the
// smallest strictly positive eigenvalue of A_E.
double lambda1_upper_bound(const CMat& a_b, const CMat& a_e);

std::vector<CaseCandidate> solve_case2(const WiretapSystem& sys, const AntipodalSpec& spec,
                                       double t, double eq_tol);
std::vector<CaseCandidate> solve_case3(const WiretapSystem& sys, const AntipodalSpec& spec,
                                       double t, double eq_tol);
std::vector<CaseCandidate> solve_case4(const WiretapSystem& sys, const AntipodalSpec& spec,
                                       double t, const AntipodalOptions& opt, SweepTrace* trace);

KktReport solve_antipodal(const WiretapSystem& sys, const AntipodalSpec& spec,
                          const AntipodalOptions& opt = {});

}  // namespace sepbeam
