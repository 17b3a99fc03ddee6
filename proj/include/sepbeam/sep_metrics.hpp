#pragma once

#include <utility>

#include "sepbeam/model.hpp"

namespace sepbeam {

// Binary antipodal SEP: Q(||H w a|| / sqrt(n0/2)). `w` is the full
// (de-normalized) beamforming vector.
double sep_antipodal(const CMat& h, const CVec& w, cdouble a, double n0);

// Union bound on M-ary SEP:
// (1/M) sum_i sum_{j != i} Q(||H W (s_i - s_j)|| / (2 sqrt(n0/2))).
double sep_union_bound(const CMat& h, const CMat& w_mat, const Constellation& cons,
                       double n0);

struct EveLowerBound {
  double value = 0.0;
  int i = 0;  // critical pair, 0-based, lexicographic tie-break
  int j = 0;
};

// min over ordered pairs i != j of the pairwise Q term on Eve's channel.
EveLowerBound eve_lower_bound(const CMat& h_e, const CMat& w_mat,
                              const Constellation& cons, double n_e);

struct SecrecyRate {
  double rate = 0.0;  // c_b - c_e, bits
  double c_b = 0.0;   // log2 |I + H_B Q_a H_B^H|
  double c_e = 0.0;   // log2 |I + H_E Q_a H_E^H|
};

// Log-det secrecy rate for input covariance q_a (PSD, N x N), computed
// exactly as written (no noise normalization).
SecrecyRate secrecy_rate(const WiretapSystem& sys, const CMat& q_a);

}  // namespace sepbeam
