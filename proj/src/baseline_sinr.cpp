#include "sepbeam/baseline_sinr.hpp"

#include <cmath>
#include <stdexcept>

#include "sepbeam/numerics.hpp"

namespace sepbeam {

namespace {

// Maximize v^H A v over a span of orthonormal vectors: top eigenpair of the
// basis-restricted matrix, mapped back to the full space.
struct RestrictedTop {
  double value = 0.0;
  CVec vector;
};

RestrictedTop restricted_top(const CMat& a, const std::vector<CVec>& basis) {
  RestrictedTop out;
  if (basis.empty()) return out;
  const int k = static_cast<int>(basis.size());
  CMat small(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      cdouble s = 0.0;
      const CVec av = matvec(a, basis[static_cast<size_t>(j)]);
      for (size_t t = 0; t < av.size(); ++t)
        s += std::conj(basis[static_cast<size_t>(i)][t]) * av[t];
      small(i, j) = s;
    }
  const EigenPairs eig = herm_eig(small);
  out.value = eig.values.back();
  const CVec& c = eig.vectors.back();
  out.vector.assign(basis.front().size(), 0.0);
  for (int j = 0; j < k; ++j)
    for (size_t t = 0; t < out.vector.size(); ++t)
      out.vector[t] += c[static_cast<size_t>(j)] * basis[static_cast<size_t>(j)][t];
  return out;
}

}  // namespace

BeamVector sinr_bf(const WiretapSystem& sys) {
  const auto problems = validate_system(sys);
  if (!problems.empty()) throw std::invalid_argument("sinr_bf: " + problems.front());

  const CMat a_b = gram(sys.h_b);
  const CMat a_e = gram(sys.h_e);
  if (fro_norm(a_b) == 0.0 && fro_norm(a_e) == 0.0)
    throw std::runtime_error("sinr_bf: both channels vanish");

  const int n = sys.h_b.cols;
  const int k_e = sys.h_e.rows;
  const double gain_tol = 1e-12 * std::max(1.0, fro_norm(a_b));

  CVec dir;
  if (k_e <= n) {
    const GenEigenPairs ge = gen_herm_eig(a_b, a_e);
    // Null(A_E) directions with positive Bob gain beat every finite ratio.
    const RestrictedTop top = restricted_top(a_b, ge.null_basis);
    if (top.value > gain_tol) {
      dir = top.vector;
    } else if (!ge.values.empty()) {
      dir = ge.vectors.back();
    } else {
      throw std::runtime_error("sinr_bf: degenerate pencil");
    }
  } else {
    const GenEigenPairs ge = gen_herm_eig(a_e, a_b);
    if (ge.values.empty()) throw std::runtime_error("sinr_bf: degenerate pencil");
    dir = ge.vectors.front();
  }

  const double norm = norm2(dir);
  if (!(norm > 0.0)) throw std::runtime_error("sinr_bf: degenerate pencil");
  for (auto& v : dir) v /= norm;
  if (quad_form(a_b, dir) <= gain_tol &&
      quad_form(a_e, dir) <= 1e-12 * std::max(1.0, fro_norm(a_e)))
    throw std::runtime_error("sinr_bf: degenerate pencil");

  BeamVector out;
  out.w_bar = canonical_phase(dir);
  out.power = sys.power;
  return out;
}

}  // namespace sepbeam
