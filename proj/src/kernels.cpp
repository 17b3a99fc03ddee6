#include "sepbeam/kernels.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>

namespace sepbeam::kernels {

namespace {

std::atomic<bool> g_force_scalar{false};

void validate(const SerProblem& p) {
  if (p.points == nullptr) throw std::invalid_argument("SerProblem: points is null");
  if (p.m < 2 || p.m > kMaxPoints)
    throw std::invalid_argument("SerProblem: m must be in [2, 64]");
  if (p.dim < 1 || p.dim > kMaxDim)
    throw std::invalid_argument("SerProblem: dim must be in [1, 32]");
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma))
    throw std::invalid_argument("SerProblem: sigma must be positive and finite");
  for (int i = 0; i < p.m * p.dim; ++i) {
    if (!std::isfinite(p.points[i]))
      throw std::invalid_argument("SerProblem: points must be finite");
  }
}

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

void set_force_scalar(bool force) { g_force_scalar.store(force, std::memory_order_relaxed); }

bool using_avx2() {
  return avx2_supported() && !g_force_scalar.load(std::memory_order_relaxed);
}

std::uint64_t count_ser_errors(const SerProblem& problem, std::uint64_t trial0,
                               std::uint64_t trials, std::uint64_t key) {
  validate(problem);
  return using_avx2() ? count_ser_errors_avx2(problem, trial0, trials, key)
                      : count_ser_errors_scalar(problem, trial0, trials, key);
}

void fill_normals(double* out, std::size_t n, std::uint64_t idx0, std::uint64_t key) {
  if (n == 0) return;
  if (out == nullptr) throw std::invalid_argument("fill_normals: out is null");
  if (using_avx2()) {
    fill_normals_avx2(out, n, idx0, key);
  } else {
    fill_normals_scalar(out, n, idx0, key);
  }
}

}  // namespace sepbeam::kernels
