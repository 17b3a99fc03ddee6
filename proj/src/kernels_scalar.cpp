#include "kernels_impl.hpp"

namespace sepbeam::kernels {

std::uint64_t count_ser_errors_scalar(const SerProblem& problem, std::uint64_t trial0,
                                      std::uint64_t trials, std::uint64_t key) {
  return detail::count_ser_errors_impl<detail::LaneScalar>(problem, trial0, trials, key);
}

void fill_normals_scalar(double* out, std::size_t n, std::uint64_t idx0, std::uint64_t key) {
  detail::fill_normals_impl<detail::LaneScalar>(out, n, idx0, key);
}

}  // namespace sepbeam::kernels
