#pragma once

#include <vector>

namespace specbm {

// Full eigensystem of a small symmetric matrix by the cyclic Jacobi method.
// `full` is row-major n*n (symmetric). Values come back ascending with
// matching unit eigenvectors. Intended for n up to a few hundred; used as an
// internal cross-check path, independent of the tridiagonalization solver.
struct JacobiResult {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};

JacobiResult jacobi_eigensystem(std::vector<double> full, int n);

}  // namespace specbm
