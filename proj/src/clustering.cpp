#include "specbm/clustering.hpp"

#include <cmath>

#include "specbm/config.hpp"
#include "specbm/errors.hpp"
#include "specbm/graph_matrices.hpp"
#include "specbm/vec.hpp"

namespace specbm {

const char* method_name(Method m) {
  return m == Method::Unnormalized ? "unnormalized" : "normalized";
}

ClusterResult cluster(const SymMatrix& A, Method method, const EigOptions& opts,
                      const std::vector<double>* orient_reference) {
  const int n = A.n();
  if (n < 2) throw ParameterError("cluster: need n >= 2");
  const double zero_tol = default_tolerances().zero_tol;

  EigOptions eopts = opts;
  eopts.kernel_hint = std::vector<double>(n, 1.0);  // L 1 = 0 and (L,D) 1 = 0
  const int k = std::min(3, n);

  Spectrum spec;
  if (method == Method::Unnormalized) {
    SymMatrix L = unnormalized_laplacian(A);
    spec = smallest_k(L, k, eopts);
  } else {
    SymMatrix L = unnormalized_laplacian(A);
    std::vector<double> d = A.row_sums();
    spec = generalized_smallest_k(L, d, k, eopts);
  }

  ClusterResult r;
  r.method = method;
  r.lambda1 = spec.eigenvalues[0];
  r.lambda2 = spec.eigenvalues[1];
  r.lambda3 = k >= 3 ? spec.eigenvalues[2] : spec.eigenvalues[1];
  r.gap_flag = spec.gap_flag;
  r.residual = spec.residuals[1];
  r.fiedler = std::move(spec.eigenvectors[1]);

  if (orient_reference) {
    r.fiedler = orient(std::move(r.fiedler), *orient_reference);
  } else {
    // Canonical sign: first entry of magnitude above zero_tol made positive.
    for (int i = 0; i < n; ++i) {
      if (std::fabs(r.fiedler[i]) > zero_tol) {
        if (r.fiedler[i] < 0.0)
          for (double& v : r.fiedler) v = -v;
        break;
      }
    }
  }

  r.labeling.signs.resize(n);
  for (int i = 0; i < n; ++i) {
    double v = r.fiedler[i];
    if (std::fabs(v) < zero_tol) {
      // sgn(0) is undefined; make rounding total but account for it.
      r.labeling.signs[i] = 1;
      ++r.zero_entries;
    } else {
      r.labeling.signs[i] = v > 0.0 ? 1 : -1;
    }
  }
  return r;
}

ClusterResult cluster_unnormalized(const SymMatrix& A, double tol) {
  EigOptions o;
  o.tol = tol;
  return cluster(A, Method::Unnormalized, o);
}

ClusterResult cluster_normalized(const SymMatrix& A, double tol) {
  EigOptions o;
  o.tol = tol;
  return cluster(A, Method::Normalized, o);
}

ClusterResult cluster(const SampledGraph& g, Method method,
                      const EigOptions& opts) {
  std::vector<double> ref = u2star(g.params.n);
  return cluster(g.adjacency, method, opts, &ref);
}

bool exactly_recovered(const ClusterResult& result, const Labeling& truth) {
  return result.zero_entries == 0 && agreement(result.labeling, truth) == 1.0;
}

}  // namespace specbm
