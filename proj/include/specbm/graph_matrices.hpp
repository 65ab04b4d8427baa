#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "specbm/config.hpp"
#include "specbm/labeling.hpp"
#include "specbm/sbm.hpp"
#include "specbm/sym_matrix.hpp"

namespace specbm {

// Per-vertex degree statistics plus the cross-community degree vector.
struct DegreeProfile {
  std::vector<double> degrees;  // d_i = sum_j A_ij (self-loop counted once)
  double d_min = 0.0, d_max = 0.0;
  std::vector<double> d_out;    // edges from i into the other community
  // n*q/2 when the model parameters are known.
  std::optional<double> d_out_star_scale;
};

DegreeProfile degree_profile(const SymMatrix& A, const Labeling& reference);
DegreeProfile degree_profile(const SampledGraph& g);

// L = D - A with D = diag(row sums).
SymMatrix unnormalized_laplacian(const SymMatrix& A);

// Lsym = D^{-1/2} L D^{-1/2}. Throws IsolatedVertexError if any degree is 0.
SymMatrix normalized_laplacian(const SymMatrix& A);

// Matrix-free symmetric operator y = Op(x), with dimension attached.
struct LinOp {
  int n = 0;
  std::function<void(const double*, double*)> apply;
};

LinOp as_linop(const SymMatrix& M);

// Lsym - Lsym* as an operator: Lsym* = I - 2/(n(p+q)) Astar is applied in
// O(n) through the block structure, A through its stored form.
LinOp normalized_diff_op(const SampledGraph& g);

// A - Astar.
LinOp adjacency_diff_op(const SampledGraph& g);

// Spectral norm |M|_2 = max |eigenvalue|. Exact dense spectrum for
// n <= power_exact_cutoff, else power iteration on M^2 (robust to +/- pairs)
// with a deterministic seeded start. NumericError on non-convergence.
double spectral_norm(const LinOp& op, double tol,
                     const Tolerances& cfg = default_tolerances());
double spectral_norm(const SymMatrix& M, double tol,
                     const Tolerances& cfg = default_tolerances());

}  // namespace specbm
