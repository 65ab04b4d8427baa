#pragma once

#include <cstdint>
#include <vector>

namespace specbm {

// Dense symmetric reduction toolkit used by the eigensolver's dense path.
// Works on a full row-major n*n buffer owned by the caller.

// Householder reduction to symmetric tridiagonal form T = Q' A Q.
// On return: d (size n) holds the diagonal, e (size n-1) the subdiagonal,
// and `a` retains the Householder vectors (column k below the diagonal)
// together with their squared norms in `beta` for back-transformation.
struct TridiagFactors {
  int n = 0;
  std::vector<double> d, e;
  std::vector<double> beta;  // v'v per step; 0 marks a skipped reflection
};
TridiagFactors householder_tridiag(std::vector<double>& a, int n);

// All eigenvalues of the tridiagonal (d, e), ascending. Implicit-shift QL.
std::vector<double> tridiag_eigenvalues(std::vector<double> d,
                                        std::vector<double> e);

// Eigenvector of (d, e) for one eigenvalue via inverse iteration with a
// deterministic seeded start; `ortho` vectors (same length) are projected
// out each pass to split clusters. Returns a unit vector.
std::vector<double> tridiag_eigenvector(
    const std::vector<double>& d, const std::vector<double>& e, double lambda,
    const std::vector<std::vector<double>>& ortho, std::uint64_t seed);

// Map an eigenvector of T back to the original basis: z <- Q z using the
// factors stored in `a` by householder_tridiag.
void householder_backtransform(const std::vector<double>& a,
                               const TridiagFactors& f, std::vector<double>& z);

}  // namespace specbm
