#pragma once

#include "sepbeam/linalg.hpp"

namespace sepbeam {

// Gaussian tail probability Q(x) = P(Z > x), Z ~ N(0,1).
// Saturates to 0 (resp. 1) in the far tails instead of raising errors.
double q(double x);

// Standard normal density phi(x) = exp(-x^2/2) / sqrt(2 pi).
double phi(double x);

// Inverse of q on (0, 1): rational initial guess polished by Newton steps so
// that q(q_inv(p)) = p to relative error <= 1e-10. Throws std::domain_error
// outside (0, 1).
double q_inv(double p);

struct EigenPairs {
  // Ascending eigenvalues with matching unit-norm eigenvectors.
  std::vector<double> values;
  std::vector<CVec> vectors;
};

struct GenEigenPairs {
  // Finite generalized eigenvalues of A v = lambda B v, ascending.
  std::vector<double> values;
  std::vector<CVec> vectors;
  // Set when B was singular and the infinite-eigenvalue subspace was deflated.
  bool b_singular = false;
  // Orthonormal basis of null(B) (empty when b_singular is false).
  std::vector<CVec> null_basis;
};

// Full spectrum of a Hermitian matrix by cyclic Jacobi; converges to
// off(A) <= 1e-14 * ||A||_F. Input is symmetrized first.
EigenPairs herm_eig(const CMat& a);

// Generalized Hermitian eigenproblem A v = lambda B v with A, B PSD.
// Positive definite B: Cholesky reduction. Singular B: null(B) is deflated
// (rank tolerance 1e-10 relative) and only finite pairs are returned.
GenEigenPairs gen_herm_eig(const CMat& a, const CMat& b);

// Frobenius-nearest PSD matrix: eigenvalue clipping at zero.
CMat psd_project(const CMat& s);

// [[Re, -Im], [Im, Re]] block embedding; preserves ||H s|| = ||H~ s~||.
RMat real_embed_matrix(const CMat& h);
// Stacked [Re; Im] embedding.
RVec real_embed_vector(const CVec& s);

}  // namespace sepbeam
