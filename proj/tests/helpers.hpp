#pragma once

#include <random>

#include "sepbeam/model.hpp"

namespace sepbeam::test {

// Reference system: 2x2 real channels, N_B = N_E = 0.01, P = 1.
inline WiretapSystem make_setup1() {
  WiretapSystem sys;
  sys.h_b = CMat(2, 2, {0.21, 0.011, 0.09, 0.3});
  sys.h_e = CMat(2, 2, {0.01, 0.02, 0.017, 0.01});
  sys.n_b = 0.01;
  sys.n_e = 0.01;
  sys.power = 1.0;
  return sys;
}

// Same main channel as setup 1 with a different eavesdropper.
inline WiretapSystem make_setup2() {
  WiretapSystem sys = make_setup1();
  sys.h_e = CMat(2, 2, {-0.01, 0.02, 0.01, 0.01});
  return sys;
}

inline WiretapSystem make_setup3() {
  WiretapSystem sys = make_setup1();
  sys.h_b = CMat(2, 2, {0.21, 0.015, 0.1, 0.12});
  sys.h_e = CMat(2, 2, {0.01, 0.071, 0.01, 0.01});
  return sys;
}

// Orthogonal-channel configuration: rank-one main channel whose top
// direction lies in Eve's null space. N_B = N_E = 0.1.
inline WiretapSystem make_orthogonal() {
  WiretapSystem sys;
  sys.h_b = CMat(2, 2, {0.21, 0.21, 0.21, 0.21});
  sys.h_e = CMat(2, 2, {0.21, -0.21, -0.21, 0.21});
  sys.n_b = 0.1;
  sys.n_e = 0.1;
  sys.power = 1.0;
  return sys;
}

inline CMat rand_cmat(std::mt19937_64& rng, int rows, int cols, double sigma,
                      bool complex_entries = true) {
  std::normal_distribution<double> nd(0.0, sigma);
  CMat m(rows, cols);
  for (auto& v : m.a)
    v = complex_entries ? cdouble(nd(rng), nd(rng)) : cdouble(nd(rng), 0.0);
  return m;
}

inline CMat rand_hermitian(std::mt19937_64& rng, int n, double sigma = 1.0) {
  CMat g = rand_cmat(rng, n, n, sigma);
  CMat h(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) h(i, j) = 0.5 * (g(i, j) + std::conj(g(j, i)));
  for (int i = 0; i < n; ++i) h(i, i) = cdouble(h(i, i).real(), 0.0);
  return h;
}

}  // namespace sepbeam::test
