#include "sepbeam/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sepbeam {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1/sqrt(2*pi)
}  // namespace

double phi(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double q(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double q_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("q_inv: p must lie in (0, 1)");
  // Rational initial guess for the standard normal quantile (Acklam's
  // approximation, |rel err| < 1.15e-9), mapped through x = -Phi^{-1}(p).
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  double x;  // quantile of p (Phi^{-1}), negated at the end
  if (p < plow) {
    double r = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  } else if (p <= 1.0 - plow) {
    double r = p - 0.5;
    double s = r * r;
    x = (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * r /
        (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
  } else {
    double r = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
        ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
  }
  x = -x;  // Q^{-1}(p) = -Phi^{-1}(p)
  // Newton polish on q(x) = p; two steps take the rational seed to full
  // double accuracy wherever phi does not underflow.
  for (int it = 0; it < 3; ++it) {
    double f = q(x) - p;
    double df = phi(x);
    if (df <= 0.0) break;
    double step = f / df;
    if (!std::isfinite(step)) break;
    x += step;
    if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi for complex Hermitian matrices.
namespace {

double off_norm(const CMat& m) {
  double s = 0.0;
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      if (i != j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

void symmetrize(CMat& m) {
  for (int i = 0; i < m.rows; ++i) {
    m(i, i) = cdouble(m(i, i).real(), 0.0);
    for (int j = i + 1; j < m.cols; ++j) {
      cdouble v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
  }
}

}  // namespace

EigenPairs herm_eig(const CMat& a_in) {
  if (a_in.rows != a_in.cols) throw std::invalid_argument("herm_eig: non-square input");
  const int n = a_in.rows;
  CMat a = a_in;
  symmetrize(a);
  CMat v = identity(n);
  const double norm_a = fro_norm(a);
  const double tol = 1e-14 * std::max(norm_a, 1e-300);

  for (int sweep = 0; sweep < 60 && off_norm(a) > tol; ++sweep) {
    for (int p = 0; p < n - 1; ++p) {
      for (int qi = p + 1; qi < n; ++qi) {
        const cdouble apq = a(p, qi);
        const double m = std::abs(apq);
        if (m <= tol / (n * n + 1.0)) continue;
        const cdouble alpha = apq / m;  // phase of the pivot
        const double app = a(p, p).real();
        const double aqq = a(qi, qi).real();
        const double tau = (aqq - app) / (2.0 * m);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // U = [[c, s], [-s*conj(alpha), c*conj(alpha)]] diagonalizes the
        // (p,q) pivot block; apply A <- U^H A U, V <- V U.
        const cdouble u11 = c, u12 = s;
        const cdouble u21 = -s * std::conj(alpha), u22 = c * std::conj(alpha);
        for (int k = 0; k < n; ++k) {  // column update
          const cdouble akp = a(k, p), akq = a(k, qi);
          a(k, p) = akp * u11 + akq * u21;
          a(k, qi) = akp * u12 + akq * u22;
        }
        for (int k = 0; k < n; ++k) {  // row update with U^H
          const cdouble apk = a(p, k), aqk = a(qi, k);
          a(p, k) = std::conj(u11) * apk + std::conj(u21) * aqk;
          a(qi, k) = std::conj(u12) * apk + std::conj(u22) * aqk;
        }
        a(p, qi) = 0.0;
        a(qi, p) = 0.0;
        a(p, p) = cdouble(a(p, p).real(), 0.0);
        a(qi, qi) = cdouble(a(qi, qi).real(), 0.0);
        for (int k = 0; k < n; ++k) {
          const cdouble vkp = v(k, p), vkq = v(k, qi);
          v(k, p) = vkp * u11 + vkq * u21;
          v(k, qi) = vkp * u12 + vkq * u22;
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return a(i, i).real() < a(j, j).real(); });
  EigenPairs out;
  out.values.resize(n);
  out.vectors.resize(n);
  for (int i = 0; i < n; ++i) {
    out.values[i] = a(order[i], order[i]).real();
    CVec col(n);
    for (int k = 0; k < n; ++k) col[k] = v(k, order[i]);
    double nn = norm2(col);
    if (nn > 0) for (auto& x : col) x /= nn;
    out.vectors[i] = std::move(col);
  }
  return out;
}

// ---------------------------------------------------------------------------
namespace {

// Lower Cholesky factor of a Hermitian positive definite matrix.
CMat cholesky(const CMat& b) {
  const int n = b.rows;
  CMat l(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      cdouble s = b(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      if (i == j) {
        double d = s.real();
        if (d <= 0.0) throw std::runtime_error("cholesky: matrix not positive definite");
        l(i, j) = std::sqrt(d);
      } else {
        l(i, j) = s / l(j, j).real();
      }
    }
  }
  return l;
}

// Solve L X = R (L lower triangular) column by column.
CMat forward_solve(const CMat& l, const CMat& r) {
  const int n = l.rows;
  CMat x(n, r.cols);
  for (int j = 0; j < r.cols; ++j) {
    for (int i = 0; i < n; ++i) {
      cdouble s = r(i, j);
      for (int k = 0; k < i; ++k) s -= l(i, k) * x(k, j);
      x(i, j) = s / l(i, i).real();
    }
  }
  return x;
}

// Solve L^H x = y for a single vector (back substitution).
CVec adjoint_solve(const CMat& l, const CVec& y) {
  const int n = l.rows;
  CVec x(n);
  for (int i = n - 1; i >= 0; --i) {
    cdouble s = y[i];
    for (int k = i + 1; k < n; ++k) s -= std::conj(l(k, i)) * x[k];
    x[i] = s / l(i, i).real();
  }
  return x;
}

// Solves the pencil with positive definite B via triangular square-root
// reduction: C = L^{-1} A L^{-H}, then back-transforms eigenvectors.
GenEigenPairs gen_eig_pd(const CMat& a, const CMat& b) {
  CMat l = cholesky(b);
  CMat x = forward_solve(l, a);           // X = L^{-1} A
  CMat c = adjoint(forward_solve(l, adjoint(x)));  // C = (L^{-1} X^H)^H = L^{-1} A L^{-H}
  EigenPairs ep = herm_eig(c);
  GenEigenPairs out;
  for (size_t i = 0; i < ep.values.size(); ++i) {
    CVec v = adjoint_solve(l, ep.vectors[i]);
    double nn = norm2(v);
    for (auto& z : v) z /= nn;
    out.values.push_back(ep.values[i]);
    out.vectors.push_back(std::move(v));
  }
  return out;
}

CMat columns_to_mat(const std::vector<CVec>& cols) {
  const int n = cols.empty() ? 0 : static_cast<int>(cols[0].size());
  CMat m(n, static_cast<int>(cols.size()));
  for (int j = 0; j < m.cols; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = cols[j][i];
  return m;
}

}  // namespace

GenEigenPairs gen_herm_eig(const CMat& a, const CMat& b) {
  if (a.rows != a.cols || b.rows != b.cols || a.rows != b.rows)
    throw std::invalid_argument("gen_herm_eig: dimension mismatch");
  const int n = a.rows;
  EigenPairs eb = herm_eig(b);
  const double bmax = eb.values.empty() ? 0.0 : std::max(0.0, eb.values.back());
  const double rank_tol = 1e-10 * std::max(bmax, 1e-300);
  std::vector<CVec> range_cols, null_cols;
  std::vector<double> range_vals;
  for (int i = 0; i < n; ++i) {
    if (eb.values[i] > rank_tol) {
      range_cols.push_back(eb.vectors[i]);
      range_vals.push_back(eb.values[i]);
    } else {
      null_cols.push_back(eb.vectors[i]);
    }
  }

  if (null_cols.empty()) return gen_eig_pd(a, b);

  GenEigenPairs out;
  out.b_singular = true;
  out.null_basis = null_cols;
  if (range_cols.empty()) return out;  // B = 0: no finite eigenvalues

  // Deflate null(B). With v = U1 y + U0 z, the null-space block of the pencil
  // equation forces z = -A00^+ A10^H y, leaving the Schur-complement pencil
  // (A11 - A10 A00^+ A10^H) y = lambda (U1^H B U1) y on the range of B.
  CMat u1 = columns_to_mat(range_cols);
  CMat u0 = columns_to_mat(null_cols);
  CMat a11 = matmul(adjoint(u1), matmul(a, u1));
  CMat a10 = matmul(adjoint(u1), matmul(a, u0));
  CMat a00 = matmul(adjoint(u0), matmul(a, u0));
  CMat br = matmul(adjoint(u1), matmul(b, u1));

  // Pseudo-inverse of the PSD block A00 through its positive eigenspace.
  EigenPairs e00 = herm_eig(a00);
  const double amax = fro_norm(a);
  const double a_tol = 1e-12 * std::max(amax, 1e-300);
  const int r0 = a00.rows;
  CMat a00_pinv(r0, r0);
  for (int i = 0; i < r0; ++i) {
    if (e00.values[i] > a_tol) {
      CMat vv = outer(e00.vectors[i], e00.vectors[i]);
      a00_pinv = add(a00_pinv, scale(vv, 1.0 / e00.values[i]));
    }
  }
  CMat schur = sub(a11, matmul(a10, matmul(a00_pinv, adjoint(a10))));
  symmetrize(schur);

  GenEigenPairs reduced = gen_eig_pd(schur, br);
  for (size_t i = 0; i < reduced.values.size(); ++i) {
    const CVec& y = reduced.vectors[i];
    CVec z = matvec(a00_pinv, matvec(adjoint(a10), y));
    for (auto& v : z) v = -v;
    CVec full = matvec(u1, y);
    CVec tail = matvec(u0, z);
    for (int k = 0; k < n; ++k) full[k] += tail[k];
    double nn = norm2(full);
    for (auto& v : full) v /= nn;
    out.values.push_back(reduced.values[i]);
    out.vectors.push_back(std::move(full));
  }
  return out;
}

CMat psd_project(const CMat& s) {
  EigenPairs ep = herm_eig(s);
  const int n = s.rows;
  CMat out(n, n);
  for (int i = 0; i < n; ++i) {
    double lam = ep.values[i];
    if (lam <= 0.0) continue;
    out = add(out, scale(outer(ep.vectors[i], ep.vectors[i]), lam));
  }
  symmetrize(out);
  return out;
}

RMat real_embed_matrix(const CMat& h) {
  RMat m(2 * h.rows, 2 * h.cols);
  for (int i = 0; i < h.rows; ++i)
    for (int j = 0; j < h.cols; ++j) {
      const double re = h(i, j).real(), im = h(i, j).imag();
      m(i, j) = re;
      m(i, j + h.cols) = -im;
      m(i + h.rows, j) = im;
      m(i + h.rows, j + h.cols) = re;
    }
  return m;
}

RVec real_embed_vector(const CVec& s) {
  RVec v(2 * s.size());
  for (size_t i = 0; i < s.size(); ++i) {
    v[i] = s[i].real();
    v[i + s.size()] = s[i].imag();
  }
  return v;
}

}  // namespace sepbeam
