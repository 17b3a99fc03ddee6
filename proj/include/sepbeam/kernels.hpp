#pragma once

#include <cstddef>
#include <cstdint>

namespace sepbeam::kernels {

// Nearest-point decision problem evaluated by the Monte-Carlo inner loop:
// `m` candidate points in R^dim (row-major, m x dim), additive white Gaussian
// noise with standard deviation `sigma` per component.  One trial draws a
// uniformly random transmit point, perturbs it, and decodes by minimum
// Euclidean distance; the kernel counts decision errors.
struct SerProblem {
  const double* points = nullptr;
  int m = 0;
  int dim = 0;
  double sigma = 0.0;
};

inline constexpr int kMaxPoints = 64;
inline constexpr int kMaxDim = 32;

// Count decoding errors over trials [trial0, trial0 + trials).  The result is
// a pure function of (problem, trial range, key): trial i always consumes the
// same counter-indexed randomness, so partial ranges compose exactly and the
// count is independent of threading or instruction set.
std::uint64_t count_ser_errors(const SerProblem& problem, std::uint64_t trial0,
                               std::uint64_t trials, std::uint64_t key);

// Fill out[0..n) with standard normal draws at absolute indices
// idx0 .. idx0+n-1 of the stream identified by `key`.  Overlapping ranges
// agree bit-for-bit.
void fill_normals(double* out, std::size_t n, std::uint64_t idx0, std::uint64_t key);

// Implementation selection.  The dispatcher prefers the AVX2 variant when the
// CPU supports it; set_force_scalar(true) pins the scalar reference path
// (used by the equivalence tests and for diagnostics).
bool avx2_supported();
void set_force_scalar(bool force);
bool using_avx2();

// Direct entry points for equivalence testing.  The *_avx2 functions fall
// back to the scalar implementation when the binary was built without AVX2
// support; call avx2_supported() first when exercising the vector path.
std::uint64_t count_ser_errors_scalar(const SerProblem& problem, std::uint64_t trial0,
                                      std::uint64_t trials, std::uint64_t key);
std::uint64_t count_ser_errors_avx2(const SerProblem& problem, std::uint64_t trial0,
                                    std::uint64_t trials, std::uint64_t key);
void fill_normals_scalar(double* out, std::size_t n, std::uint64_t idx0, std::uint64_t key);
void fill_normals_avx2(double* out, std::size_t n, std::uint64_t idx0, std::uint64_t key);

}  // namespace sepbeam::kernels
