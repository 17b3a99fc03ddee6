#include "sepbeam/linalg.hpp"

#include <cmath>

namespace sepbeam {

CMat identity(int n) {
  CMat m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMat adjoint(const CMat& m) {
  CMat r(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) r(j, i) = std::conj(m(i, j));
  return r;
}

CMat matmul(const CMat& x, const CMat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("matmul: dimension mismatch");
  CMat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const cdouble xv = x(i, k);
      for (int j = 0; j < y.cols; ++j) r(i, j) += xv * y(k, j);
    }
  return r;
}

CVec matvec(const CMat& m, const CVec& v) {
  if (m.cols != static_cast<int>(v.size()))
    throw std::invalid_argument("matvec: dimension mismatch");
  CVec r(m.rows, 0.0);
  for (int i = 0; i < m.rows; ++i) {
    cdouble s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

CMat gram(const CMat& h) {
  CMat g = matmul(adjoint(h), h);
  // Resymmetrize so downstream eigensolves see an exactly Hermitian matrix.
  for (int i = 0; i < g.rows; ++i) {
    g(i, i) = cdouble(g(i, i).real(), 0.0);
    for (int j = i + 1; j < g.cols; ++j) {
      cdouble v = 0.5 * (g(i, j) + std::conj(g(j, i)));
      g(i, j) = v;
      g(j, i) = std::conj(v);
    }
  }
  return g;
}

CMat scale(const CMat& m, cdouble c) {
  CMat r = m;
  for (auto& v : r.a) v *= c;
  return r;
}

CMat add(const CMat& x, const CMat& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("add: dimension mismatch");
  CMat r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
  return r;
}

CMat sub(const CMat& x, const CMat& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw std::invalid_argument("sub: dimension mismatch");
  CMat r = x;
  for (size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
  return r;
}

CMat outer(const CVec& x, const CVec& y) {
  CMat r(static_cast<int>(x.size()), static_cast<int>(y.size()));
  for (int i = 0; i < r.rows; ++i)
    for (int j = 0; j < r.cols; ++j) r(i, j) = x[i] * std::conj(y[j]);
  return r;
}

cdouble trace(const CMat& m) {
  cdouble s = 0.0;
  for (int i = 0; i < std::min(m.rows, m.cols); ++i) s += m(i, i);
  return s;
}

double inner(const CMat& x, const CMat& y) {
  double s = 0.0;
  for (size_t i = 0; i < x.a.size(); ++i)
    s += (std::conj(x.a[i]) * y.a[i]).real();
  return s;
}

double fro_norm(const CMat& m) {
  double s = 0.0;
  for (const auto& v : m.a) s += std::norm(v);
  return std::sqrt(s);
}

double norm2(const CVec& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

cdouble dot(const CVec& x, const CVec& y) {
  cdouble s = 0.0;
  for (size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

double quad_form(const CMat& m, const CVec& v) {
  return dot(v, matvec(m, v)).real();
}

CVec vscale(const CVec& v, cdouble c) {
  CVec r = v;
  for (auto& x : r) x *= c;
  return r;
}

RMat rmatmul(const RMat& x, const RMat& y) {
  if (x.cols != y.rows) throw std::invalid_argument("rmatmul: dimension mismatch");
  RMat r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const double xv = x(i, k);
      for (int j = 0; j < y.cols; ++j) r(i, j) += xv * y(k, j);
    }
  return r;
}

RVec rmatvec(const RMat& m, const RVec& v) {
  if (m.cols != static_cast<int>(v.size()))
    throw std::invalid_argument("rmatvec: dimension mismatch");
  RVec r(m.rows, 0.0);
  for (int i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

RMat rtranspose(const RMat& m) {
  RMat r(m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j) r(j, i) = m(i, j);
  return r;
}

double rfro_norm(const RMat& m) {
  double s = 0.0;
  for (double v : m.a) s += v * v;
  return std::sqrt(s);
}

double rnorm2(const RVec& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace sepbeam
