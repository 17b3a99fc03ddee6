#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace sepbeam {

using cdouble = std::complex<double>;
using CVec = std::vector<cdouble>;
using RVec = std::vector<double>;

// Dense row-major complex matrix. Sizes in this library are tiny (N <= ~16),
// so everything is plain loops over contiguous storage.
struct CMat {
  int rows = 0;
  int cols = 0;
  std::vector<cdouble> a;

  CMat() = default;
  CMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
  CMat(int r, int c, std::initializer_list<cdouble> vals) : CMat(r, c) {
    if (static_cast<int>(vals.size()) != r * c)
      throw std::invalid_argument("CMat: initializer size mismatch");
    std::copy(vals.begin(), vals.end(), a.begin());
  }
  cdouble& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const cdouble& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

// Dense row-major real matrix (used by the embedded formulation).
struct RMat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  RMat() = default;
  RMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}
  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const double& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
};

CMat identity(int n);
CMat adjoint(const CMat& m);
CMat matmul(const CMat& x, const CMat& y);
CVec matvec(const CMat& m, const CVec& v);
// A^H A for a channel matrix (Hermitian PSD by construction, resymmetrized).
CMat gram(const CMat& h);
CMat scale(const CMat& m, cdouble c);
CMat add(const CMat& x, const CMat& y);
CMat sub(const CMat& x, const CMat& y);
CMat outer(const CVec& x, const CVec& y);  // x y^H

cdouble trace(const CMat& m);
// Real Frobenius inner product <X, Y> = Re tr(X^H Y).
double inner(const CMat& x, const CMat& y);
double fro_norm(const CMat& m);
double norm2(const CVec& v);
cdouble dot(const CVec& x, const CVec& y);  // x^H y
// v^H M v for Hermitian M (returns the real part).
double quad_form(const CMat& m, const CVec& v);
CVec vscale(const CVec& v, cdouble c);

RMat rmatmul(const RMat& x, const RMat& y);
RVec rmatvec(const RMat& m, const RVec& v);
RMat rtranspose(const RMat& m);
double rfro_norm(const RMat& m);
double rnorm2(const RVec& v);

}  // namespace sepbeam
