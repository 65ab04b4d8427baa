#pragma once

#include <vector>

#include "specbm/eigensolver.hpp"
#include "specbm/labeling.hpp"
#include "specbm/sbm.hpp"
#include "specbm/sym_matrix.hpp"

namespace specbm {

enum class Method { Unnormalized, Normalized };

const char* method_name(Method m);

struct ClusterResult {
  Method method = Method::Unnormalized;
  Labeling labeling;
  std::vector<double> fiedler;  // unit norm; oriented against u2star when
                                // ground truth is known, else first nonzero
                                // entry made positive
  double lambda1 = 0.0, lambda2 = 0.0, lambda3 = 0.0;
  bool gap_flag = false;   // degenerate gap |l2 - l3| below tolerance
  int zero_entries = 0;    // Fiedler entries with |u_i| < zero_tol (rounded +1)
  double residual = 0.0;   // certificate for the Fiedler pair
};

// Two-step spectral clustering. Unnormalized: Fiedler vector of L = D - A.
// Normalized: Fiedler vector of the pencil (L, D) via the symmetric
// reduction; throws IsolatedVertexError when a degree is zero.
ClusterResult cluster(const SymMatrix& A, Method method,
                      const EigOptions& opts = {},
                      const std::vector<double>* orient_reference = nullptr);

ClusterResult cluster_unnormalized(const SymMatrix& A, double tol = 1e-10);
ClusterResult cluster_normalized(const SymMatrix& A, double tol = 1e-10);

// Convenience on a sampled graph: orients the Fiedler vector against u2star.
ClusterResult cluster(const SampledGraph& g, Method method,
                      const EigOptions& opts = {});

// True iff agreement is exactly 1 and no Fiedler entry was rounded from 0.
bool exactly_recovered(const ClusterResult& result, const Labeling& truth);

}  // namespace specbm
