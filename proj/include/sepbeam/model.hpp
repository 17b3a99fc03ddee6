#pragma once

#include <string>

#include "sepbeam/linalg.hpp"

namespace sepbeam {

// Alice -> Bob / Alice -> Eve channel pair with noise powers and power budget.
struct WiretapSystem {
  CMat h_b;       // main channel, K_B x N
  CMat h_e;       // eavesdropper channel, K_E x N
  double n_b = 0; // Bob noise power (watts)
  double n_e = 0; // Eve noise power (watts)
  double power = 0;  // transmit budget P (watts)
};

struct AntipodalSpec {
  cdouble amplitude{1.0, 0.0};  // symbol amplitude a (symbols are +a / -a)
  double eve_sep_min = 0.0;     // Eve error floor D in [0, 0.5]
};

struct Constellation {
  std::vector<CVec> symbols;  // M complex L-vectors
  double eve_lb_min = 0.0;    // Eve lower-bound floor for the M-ary design
};

struct BeamVector {
  CVec w_bar;        // unit-ball direction, ||w_bar|| <= 1
  double power = 0;  // de-normalization: w = sqrt(power) * w_bar
};

struct RealBeamMatrix {
  RMat w_tilde;      // real 2N x 2L beamforming matrix
  double power = 0;  // Frobenius budget: tr(W W^T) <= power
};

// Returns an empty list when the system is valid; otherwise one message per
// violated invariant. Never throws.
std::vector<std::string> validate_system(const WiretapSystem& sys);

std::vector<std::string> validate_constellation(const Constellation& cons,
                                                const WiretapSystem& sys);

// Canonical eigenvector phase: rotate so the first component with magnitude
// above tol * ||v|| becomes real nonnegative.
CVec canonical_phase(const CVec& v, double tol = 1e-9);

}  // namespace sepbeam
