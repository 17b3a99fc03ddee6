#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sepbeam/model.hpp"

namespace sepbeam {

// M-ary beamforming over the real embedding.  The complex channels become
// [[Re, -Im], [Im, Re]] blocks, symbols become stacked [Re; Im] vectors, and
// the beam is an unconstrained real 2N x 2L matrix inside a Frobenius ball.
// The struct caches everything the objective/gradient loops touch: the
// embedded channels, their Gram matrices, and the M(M-1) ordered-pair
// difference vectors in row-major pair order.
struct EmbeddedMary {
  RMat h_b;  // 2K_B x 2N
  RMat h_e;  // 2K_E x 2N
  RMat m_b;  // h_b^T h_b
  RMat m_e;  // h_e^T h_e
  double n_b = 0;
  double n_e = 0;
  double power = 0;  // complex-domain budget P
  int m = 0;         // symbol count
  std::vector<RVec> diffs;                // s~_i - s~_j over ordered pairs
  std::vector<std::pair<int, int>> pairs; // 0-based (i, j), row-major order
};

// Validates the system/constellation pair and builds the embedded problem.
// Throws std::invalid_argument on any model violation.
EmbeddedMary embed_mary(const WiretapSystem& sys, const Constellation& cons);

struct PgdOptions {
  double gamma = 0.0;      // Eve trade-off weight (>= 0)
  double alpha = 0.0;      // step size; <= 0 selects 0.05 P / (1 + lmax(m_b))
  double eps = 1e-5;       // stop when f(k) - f(k+1) <= eps (after >= 1 step)
  int max_iters = 300;
  int restarts = 100;
  std::uint64_t seed = 0;  // restart r, attempt a draws stream 2r + a
  double init_scale = -1;  // Frobenius norm of the start; < 0 selects sqrt(budget)
  // Re-impose the [[A, -B], [B, A]] block form by block-averaging after each
  // projection.  The embedded budget becomes 2P, since a structured matrix
  // carries twice the Frobenius energy of the complex beam it represents.
  bool structured = false;
};

enum class PgdStop { Tolerance, MaxIters };

struct PgdTrace {
  // Objective of the accepted iterate, winning restart; [0] is the start.
  std::vector<double> objective_per_iter;
  // Eve critical pair used at each iteration of the winning restart.
  std::vector<std::pair<int, int>> critical_pairs;
  RealBeamMatrix best_w;       // best iterate across all restarts
  double best_objective = 0;
  PgdStop stop_reason = PgdStop::MaxIters;
  int iters = 0;               // iterations taken by the winning restart
  int best_restart = 0;
  std::vector<double> restart_objectives;  // best objective of each restart
};

// Raised when a pair distance ||H~ W~ d~|| falls below 1e-12 while the term
// still depends on the beam: the gradient of Q(sqrt(.)) is undefined there.
struct SingularPoint : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by tune_gamma when the bracket endpoints do not straddle the target.
struct BracketFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvePairBound {
  double value = 0;  // min over ordered pairs of Q(||H~_E W~ d~|| / (2 sqrt(n_e/2)))
  int pair = 0;      // index into prob.pairs; ties keep the first pair
};

EvePairBound eve_pair_bound(const EmbeddedMary& prob, const RMat& w_tilde);
std::pair<int, int> critical_pair(const EmbeddedMary& prob, const RMat& w_tilde);

// f(W~, gamma) = (1/M) sum_{i != j} Q(||H~_B W~ d~_ij|| / (2 sqrt(n_b/2)))
//                - gamma * Q(||H~_E W~ d~_*|| / (2 sqrt(n_e/2)))
// with d~_* the critical pair of this same W~.
double mary_objective(const EmbeddedMary& prob, const RMat& w_tilde, double gamma);

// Closed-form gradient of mary_objective.  Each Bob pair contributes
// -(1/M) phi(s) / (2 s n_b) * (m_b W~ d~) d~^T with s the pair's Q argument;
// the Eve critical pair adds +gamma * phi(s)/(2 s n_e) * (m_e W~ d~) d~^T.
// Pairs whose Q term is constant in W~ (zero channel or coincident symbols)
// contribute nothing; any other pair with distance below 1e-12 throws
// SingularPoint.
RMat mary_gradient(const EmbeddedMary& prob, const RMat& w_tilde, double gamma);

// Frobenius-ball projection: g unchanged when ||g||_F <= sqrt(p), otherwise
// scaled to the boundary.
RMat project_power(const RMat& g, double p);

// Orthogonal projection onto the structured subspace [[A, -B], [B, A]]:
// A = (G11 + G22)/2, B = (G21 - G12)/2.  Never increases the Frobenius norm.
RMat structure_project(const RMat& g);

// Default step size 0.05 P / (1 + lmax(m_b)).
double pgd_default_alpha(const EmbeddedMary& prob);

// Projected gradient descent with backtracking (up to 20 halvings per step),
// best-iterate tracking, and independent seeded restarts; returns the
// feasible iterate with the smallest objective (ties keep the earliest
// restart).  A restart that hits a SingularPoint is resampled once; the
// restart is dropped if the resample fails too, and the error propagates
// only when every restart failed.
PgdTrace pgd_solve(const WiretapSystem& sys, const Constellation& cons,
                   const PgdOptions& opt);

struct GammaTune {
  double gamma = 0;     // last gamma evaluated
  double achieved = 0;  // Eve pair bound of that solve's best beam
  int steps = 0;        // bisection steps taken
};

// Bisection on gamma, re-running pgd_solve with the fixed seed in `opt`,
// until |achieved - target| <= 1e-3 or 30 steps.  Returns gamma_lo
// immediately when its bound already meets or exceeds the target; throws
// BracketFailure when even gamma_hi falls short of it.
GammaTune tune_gamma(const WiretapSystem& sys, const Constellation& cons,
                     double target, const PgdOptions& opt, double gamma_lo,
                     double gamma_hi);

}  // namespace sepbeam
