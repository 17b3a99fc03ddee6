#include "kernels_impl.hpp"

// Compiled with AVX2 code generation enabled; the dispatcher only routes here
// after a runtime CPU check.  If the toolchain did not enable AVX2 for this
// translation unit, fall back to the scalar implementation so the symbols
// stay well defined.

namespace sepbeam::kernels {

#if defined(__AVX2__)

std::uint64_t count_ser_errors_avx2(const SerProblem& problem, std::uint64_t trial0,
                                    std::uint64_t trials, std::uint64_t key) {
  return detail::count_ser_errors_impl<detail::LaneAvx2>(problem, trial0, trials, key);
}

void fill_normals_avx2(double* out, std::size_t n, std::uint64_t idx0, std::uint64_t key) {
  detail::fill_normals_impl<detail::LaneAvx2>(out, n, idx0, key);
}

#else

std::uint64_t count_ser_errors_avx2(const SerProblem& problem, std::uint64_t trial0,
                                    std::uint64_t trials, std::uint64_t key) {
  return detail::count_ser_errors_impl<detail::LaneScalar>(problem, trial0, trials, key);
}

void fill_normals_avx2(double* out, std::size_t n, std::uint64_t idx0, std::uint64_t key) {
  detail::fill_normals_impl<detail::LaneScalar>(out, n, idx0, key);
}

#endif

}  // namespace sepbeam::kernels
