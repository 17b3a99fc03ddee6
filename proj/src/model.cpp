#include "sepbeam/model.hpp"

#include <cmath>

namespace sepbeam {

namespace {
bool all_finite(const CMat& m) {
  for (const auto& v : m.a)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}
}  // namespace

std::vector<std::string> validate_system(const WiretapSystem& sys) {
  std::vector<std::string> issues;
  if (sys.h_b.rows <= 0 || sys.h_b.cols <= 0) issues.push_back("h_b is empty");
  if (sys.h_e.rows <= 0 || sys.h_e.cols <= 0) issues.push_back("h_e is empty");
  if (sys.h_b.cols > 0 && sys.h_e.cols > 0 && sys.h_b.cols != sys.h_e.cols)
    issues.push_back("h_b and h_e column counts differ");
  if (!(sys.n_b > 0.0)) issues.push_back("n_b must be strictly positive");
  if (!(sys.n_e > 0.0)) issues.push_back("n_e must be strictly positive");
  if (!(sys.power > 0.0)) issues.push_back("power must be strictly positive");
  if (!all_finite(sys.h_b)) issues.push_back("h_b has non-finite entries");
  if (!all_finite(sys.h_e)) issues.push_back("h_e has non-finite entries");
  return issues;
}

std::vector<std::string> validate_constellation(const Constellation& cons,
                                                const WiretapSystem& sys) {
  std::vector<std::string> issues;
  const size_t m = cons.symbols.size();
  if (m < 2) issues.push_back("constellation needs at least 2 symbols");
  size_t l = m ? cons.symbols[0].size() : 0;
  for (const auto& s : cons.symbols)
    if (s.size() != l) issues.push_back("constellation symbols have mixed lengths");
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j) {
      double d = 0.0;
      for (size_t k = 0; k < l; ++k) d += std::norm(cons.symbols[i][k] - cons.symbols[j][k]);
      if (d == 0.0) issues.push_back("constellation symbols must be distinct");
    }
  const int kmin = std::min(sys.h_b.rows, sys.h_e.rows);
  if (l > 0 && sys.h_b.cols > 0 &&
      static_cast<int>(l) > std::min(sys.h_b.cols, kmin))
    issues.push_back("symbol length L exceeds min(N, K)");
  if (!(cons.eve_lb_min > 0.0)) issues.push_back("eve_lb_min must be positive");
  return issues;
}

CVec canonical_phase(const CVec& v, double tol) {
  double nn = norm2(v);
  if (nn == 0.0) return v;
  for (const auto& x : v) {
    if (std::abs(x) > tol * nn) {
      cdouble rot = std::conj(x) / std::abs(x);
      return vscale(v, rot);
    }
  }
  return v;
}

}  // namespace sepbeam
