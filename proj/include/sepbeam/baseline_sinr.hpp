#pragma once

#include "sepbeam/model.hpp"

namespace sepbeam {

// SINR-style baseline beamformer: maximize ||H_B w||^2 / ||H_E w||^2.
//
// K_E <= N: generalized eigenvector of (H_B^H H_B, H_E^H H_E) for the largest
// generalized eigenvalue.  Directions in null(H_E^H H_E) with positive Bob
// gain have infinite ratio and win outright; among them the one maximizing
// the Bob gain is returned.  K_E > N: eigenvector of (H_E^H H_E, H_B^H H_B)
// for the smallest generalized eigenvalue.
//
// The returned direction is unit-norm with canonical phase; the physical beam
// sqrt(P) * w_bar carries exactly the full budget.  Throws
// std::invalid_argument on model violations and std::runtime_error when the
// pencil is degenerate (both quadratic forms vanish on every candidate).
BeamVector sinr_bf(const WiretapSystem& sys);

}  // namespace sepbeam
