#pragma once

#include <cstdint>
#include <vector>

#include "sepbeam/kernels.hpp"
#include "sepbeam/linalg.hpp"

namespace sepbeam {

// Monte-Carlo symbol-error estimate with a Wilson 95% score interval.
struct McEstimate {
  std::uint64_t errors = 0;
  std::uint64_t trials = 0;
  double ser = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 1.0;
};

McEstimate mc_estimate(std::uint64_t errors, std::uint64_t trials);

// Run the counting kernel over `trials` trials, optionally across threads.
// Trials are split into fixed 65536-trial chunks assigned round-robin, and
// each trial's randomness is indexed by its absolute trial number, so the
// result is exactly independent of the thread count.
McEstimate run_ser_mc(const kernels::SerProblem& problem, std::uint64_t trials,
                      std::uint64_t key, int threads);

// Received-space candidate points (real embedding of C^K as R^{2K}).
// Antipodal signalling: the two points are +-(H w a).
std::vector<double> antipodal_rx_points(const CMat& h, const CVec& w, cdouble amplitude);
// General constellation through a real (widely linear) precoder:
// point_i = h_tilde * (w_tilde * s_i) for embedded symbols s_i.
std::vector<double> mary_rx_points(const RMat& h_tilde, const RMat& w_tilde,
                                   const std::vector<RVec>& symbols);

// End-to-end SER estimators.  Receiver noise is circular complex Gaussian
// with per-entry variance n0 (n0/2 per real component); decisions are
// minimum-distance, which is maximum-likelihood for these models.
McEstimate simulate_antipodal_ser(const CMat& h, double n0, const CVec& w, cdouble amplitude,
                                  std::uint64_t trials, std::uint64_t key, int threads = 1);
McEstimate simulate_mary_ser(const RMat& h_tilde, double n0, const RMat& w_tilde,
                             const std::vector<RVec>& symbols, std::uint64_t trials,
                             std::uint64_t key, int threads = 1);

// iid Gaussian channel draws.  complex_entries=true gives circularly
// symmetric entries with E|h|^2 = sigma^2; otherwise real N(0, sigma^2).
// Draws are indexed by (seed, stream), independent of call order.
CMat gen_gaussian_channel(int rows, int cols, double sigma, bool complex_entries,
                          std::uint64_t seed, std::uint64_t stream);

}  // namespace sepbeam
