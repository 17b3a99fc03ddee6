#pragma once

#include <cstdint>
#include <stdexcept>

#include "sepbeam/linalg.hpp"
#include "sepbeam/model.hpp"

namespace sepbeam {

// Semidefinite-relaxation route for the mirrored design problem: minimise
// Eve's received energy subject to a Bob quality target,
//
//   minimise <A_E, X>   s.t.  <A_B, X> >= t_b,  Tr X <= P,  X >= 0,
//
// where t_b = (n_b / 2) (Q^{-1}(D_b)/|a|)^2 caps Bob's SEP at D_b.  The SDP
// is solved with ADMM (projection onto the two half-spaces, PSD projection,
// over-relaxation, adaptive penalty), then a beam is extracted from X* by
// Gaussian-phase randomization.

struct SdrOptions {
  double rho = 1.0;         // initial ADMM penalty
  double over_relax = 1.6;  // ADMM over-relaxation factor
  double tol = 1e-8;        // stop when both residual norms fall below this
  int max_iters = 50000;
  int rand_samples = 500;  // randomization draws
};

struct SdrSolution {
  CMat x;                  // converged matrix (PSD by construction)
  double objective = 0.0;  // <A_E, X*>, clamped to >= 0
  double bob_value = 0.0;  // <A_B, X*>
  double trace = 0.0;      // Tr X*
  double t_b = 0.0;
  int iters = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double rho_final = 0.0;
  bool feasible = false;  // t_b attainable within the power budget
  bool converged = false;
};

struct SdrBeam {
  CVec w;  // physical beam, ||w||^2 <= P, canonical phase
  double eve_energy = 0.0;
  double bob_energy = 0.0;
  double sep_bob = 1.0;
  double sep_eve = 0.0;
  int accepted_samples = 0;
  int rejected_samples = 0;
};

struct NoFeasibleSample : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bob energy target; throws std::domain_error unless 0 < bob_sep_max <= 0.5.
double bob_threshold(const WiretapSystem& sys, double bob_sep_max, cdouble amplitude);

SdrSolution solve_sdr(const WiretapSystem& sys, double bob_sep_max, cdouble amplitude,
                      const SdrOptions& opt = {});

// Extract a rank-one beam from a solved relaxation: draw unit-modulus phase
// vectors through the factor of X*, rescale Bob-violating draws, and keep
// the feasible sample with the lowest Eve energy.  Throws NoFeasibleSample
// if every draw lands outside the power budget.
SdrBeam randomize_beam(const SdrSolution& sol, const WiretapSystem& sys, cdouble amplitude,
                       std::uint64_t key, const SdrOptions& opt = {});

}  // namespace sepbeam
