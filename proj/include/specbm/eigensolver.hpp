#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "specbm/config.hpp"
#include "specbm/graph_matrices.hpp"
#include "specbm/sym_matrix.hpp"

namespace specbm {

// Smallest-k eigenpairs with residual certificates.
struct Spectrum {
  std::vector<double> eigenvalues;               // ascending, length k
  std::vector<std::vector<double>> eigenvectors;  // unit norm, length k
  std::vector<double> residuals;                 // |Mu - lambda u| per pair
  bool gap_flag = false;  // |l2 - l3| below gap tolerance (degenerate gap)
  double norm_estimate = 0.0;
  int iterations = 0;  // Krylov dimension used (0 on the dense path)
};

struct EigOptions {
  double tol = 1e-10;
  int dense_cutoff = 2048;
  int lanczos_max_dim = 500;
  double gap_rel = 1e-8;
  std::uint64_t seed = 0x51CB57A27ULL;  // start-vector seed (Lanczos, invit)
  // Known exact kernel vector (e.g. the all-ones vector for L, D^{1/2} 1 for
  // the normalized Laplacian). Deflated explicitly on both solver paths so
  // multiplicity at 0 cannot contaminate the returned Fiedler vector.
  std::optional<std::vector<double>> kernel_hint;

  static EigOptions from(const Tolerances& t) {
    EigOptions o;
    o.tol = t.solver_tol;
    o.dense_cutoff = t.dense_cutoff;
    o.lanczos_max_dim = t.lanczos_max_dim;
    o.gap_rel = t.gap_rel;
    return o;
  }
};

// k algebraically smallest eigenpairs of symmetric M. Dense
// (tridiagonalization + implicit QL + inverse iteration) for
// n <= dense_cutoff, Lanczos with full reorthogonalization above.
Spectrum smallest_k(const SymMatrix& M, int k, const EigOptions& opts = {});

// Operator form (always Lanczos); norm_hint helps convergence checks.
Spectrum smallest_k_op(const LinOp& op, int k, const EigOptions& opts = {});

// Generalized problem (L, D) with positive diagonal D, solved through the
// symmetric reduction Lsym = D^{-1/2} L D^{-1/2}; returned vectors are
// D^{-1/2} v renormalized to unit Euclidean norm, eigenvalues those of Lsym,
// residuals |Lu - lambda D u| / |D^{1/2} u|.
Spectrum generalized_smallest_k(const SymMatrix& L, const std::vector<double>& D,
                                int k, const EigOptions& opts = {});

// s*u with s in {+1,-1} such that <s*u, reference> >= 0; ties keep +1.
std::vector<double> orient(std::vector<double> u,
                           const std::vector<double>& reference);

}  // namespace specbm
