#include "sepbeam/sep_metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "sepbeam/numerics.hpp"

namespace sepbeam {

double sep_antipodal(const CMat& h, const CVec& w, cdouble a, double n0) {
  if (h.cols != static_cast<int>(w.size()))
    throw std::invalid_argument("sep_antipodal: dimension mismatch");
  if (!(n0 > 0.0)) throw std::invalid_argument("sep_antipodal: n0 must be positive");
  CVec hw = matvec(h, w);
  double arg = norm2(hw) * std::abs(a) / std::sqrt(n0 / 2.0);
  return q(arg);
}

namespace {
// ||H W (s_i - s_j)|| for one ordered pair.
double pair_distance(const CMat& h, const CMat& w_mat, const CVec& si, const CVec& sj) {
  CVec d(si.size());
  for (size_t k = 0; k < si.size(); ++k) d[k] = si[k] - sj[k];
  return norm2(matvec(h, matvec(w_mat, d)));
}
}  // namespace

double sep_union_bound(const CMat& h, const CMat& w_mat, const Constellation& cons,
                       double n0) {
  const int m = static_cast<int>(cons.symbols.size());
  if (m < 2) throw std::invalid_argument("sep_union_bound: need at least 2 symbols");
  if (w_mat.cols != static_cast<int>(cons.symbols[0].size()) || h.cols != w_mat.rows)
    throw std::invalid_argument("sep_union_bound: dimension mismatch");
  const double denom = 2.0 * std::sqrt(n0 / 2.0);
  double total = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      total += q(pair_distance(h, w_mat, cons.symbols[i], cons.symbols[j]) / denom);
    }
  return total / m;
}

EveLowerBound eve_lower_bound(const CMat& h_e, const CMat& w_mat,
                              const Constellation& cons, double n_e) {
  const int m = static_cast<int>(cons.symbols.size());
  if (m < 2) throw std::invalid_argument("eve_lower_bound: need at least 2 symbols");
  const double denom = 2.0 * std::sqrt(n_e / 2.0);
  EveLowerBound best;
  bool first = true;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      double val = q(pair_distance(h_e, w_mat, cons.symbols[i], cons.symbols[j]) / denom);
      if (first || val < best.value) {  // strict: lexicographic tie-break
        best.value = val;
        best.i = i;
        best.j = j;
        first = false;
      }
    }
  return best;
}

namespace {
// log2 |I + H Q H^H| through the (Hermitian) eigenvalues of H Q H^H.
double log2_det_term(const CMat& h, const CMat& q_a) {
  CMat hqh = matmul(h, matmul(q_a, adjoint(h)));
  EigenPairs ep = herm_eig(hqh);
  double acc = 0.0;
  for (double lam : ep.values) {
    // Clamp tiny negative eigenvalues introduced by roundoff of a PSD product.
    double x = std::max(lam, 0.0);
    acc += std::log2(1.0 + x);
  }
  return acc;
}
}  // namespace

SecrecyRate secrecy_rate(const WiretapSystem& sys, const CMat& q_a) {
  if (q_a.rows != q_a.cols || q_a.rows != sys.h_b.cols)
    throw std::invalid_argument("secrecy_rate: q_a must be N x N");
  EigenPairs eq = herm_eig(q_a);
  if (!eq.values.empty() && eq.values.front() < -1e-9 * std::max(1.0, eq.values.back()))
    throw std::invalid_argument("secrecy_rate: q_a is not PSD");
  SecrecyRate out;
  out.c_b = log2_det_term(sys.h_b, q_a);
  out.c_e = log2_det_term(sys.h_e, q_a);
  out.rate = out.c_b - out.c_e;
  return out;
}

}  // namespace sepbeam
