#include "specbm/graph_matrices.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "specbm/errors.hpp"
#include "specbm/jacobi.hpp"
#include "specbm/rng.hpp"
#include "specbm/vec.hpp"

namespace specbm {

DegreeProfile degree_profile(const SymMatrix& A, const Labeling& reference) {
  const int n = A.n();
  if (reference.n() != n)
    throw ParameterError("degree_profile: labeling length != matrix dimension");
  DegreeProfile p;
  p.degrees = A.row_sums();
  p.d_min = *std::min_element(p.degrees.begin(), p.degrees.end());
  p.d_max = *std::max_element(p.degrees.begin(), p.degrees.end());
  // One matvec against the +1-community indicator gives, for each vertex,
  // its number of neighbors inside that community.
  std::vector<double> plus(n, 0.0);
  for (int i = 0; i < n; ++i)
    if (reference.signs[i] > 0) plus[i] = 1.0;
  std::vector<double> to_plus = A.symv(plus);
  p.d_out.resize(n);
  for (int i = 0; i < n; ++i)
    p.d_out[i] = reference.signs[i] > 0 ? p.degrees[i] - to_plus[i] : to_plus[i];
  return p;
}

DegreeProfile degree_profile(const SampledGraph& g) {
  DegreeProfile p = degree_profile(g.adjacency, g.ground_truth);
  p.d_out_star_scale = g.params.n * g.params.q / 2.0;
  return p;
}

namespace {

// Shared builder: row i of the output gets A's off-diagonal lower entries
// scaled by -w_ij plus an explicit diagonal. Covers L and Lsym.
SymMatrix build_laplacian(const SymMatrix& A, const std::vector<double>& d,
                          const std::vector<double>* invsqrt) {
  const int n = A.n();
  auto offdiag = [&](int i, int j, double a) {
    return invsqrt ? -a * (*invsqrt)[i] * (*invsqrt)[j] : -a;
  };
  auto diag = [&](int i) {
    double aii = A.at(i, i);
    return invsqrt ? 1.0 - aii / d[i] : d[i] - aii;
  };
  if (A.is_dense()) {
    SymMatrix L = SymMatrix::dense(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) {
        double a = A.at(i, j);
        if (a != 0.0) L.set(i, j, offdiag(i, j, a));
      }
      L.set(i, i, diag(i));
    }
    return L;
  }
  const auto& arp = A.lower_rowptr();
  const auto& acol = A.lower_col();
  const auto& aval = A.lower_val();
  std::vector<int> rowptr(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    int count = 1;  // explicit diagonal
    for (int e = arp[i]; e < arp[i + 1]; ++e)
      if (acol[e] < i) ++count;
    rowptr[i + 1] = rowptr[i] + count;
  }
  std::vector<int> col(rowptr[n]);
  std::vector<double> val(rowptr[n]);
  for (int i = 0; i < n; ++i) {
    int at = rowptr[i];
    for (int e = arp[i]; e < arp[i + 1]; ++e)
      if (acol[e] < i) {
        col[at] = acol[e];
        val[at] = offdiag(i, acol[e], aval[e]);
        ++at;
      }
    col[at] = i;
    val[at] = diag(i);
  }
  return SymMatrix::sparse_lower(n, std::move(rowptr), std::move(col),
                                 std::move(val));
}

}  // namespace

SymMatrix unnormalized_laplacian(const SymMatrix& A) {
  std::vector<double> d = A.row_sums();
  return build_laplacian(A, d, nullptr);
}

SymMatrix normalized_laplacian(const SymMatrix& A) {
  const int n = A.n();
  std::vector<double> d = A.row_sums();
  for (int i = 0; i < n; ++i)
    if (d[i] <= 0.0) throw IsolatedVertexError(i);
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) s[i] = 1.0 / std::sqrt(d[i]);
  return build_laplacian(A, d, &s);
}

LinOp as_linop(const SymMatrix& M) {
  LinOp op;
  op.n = M.n();
  op.apply = [&M](const double* x, double* y) { M.symv(x, y); };
  return op;
}

LinOp normalized_diff_op(const SampledGraph& g) {
  const int n = g.params.n;
  std::vector<double> d = g.adjacency.row_sums();
  for (int i = 0; i < n; ++i)
    if (d[i] <= 0.0) throw IsolatedVertexError(i);
  auto s = std::make_shared<std::vector<double>>(n);
  for (int i = 0; i < n; ++i) (*s)[i] = 1.0 / std::sqrt(d[i]);
  const double scale = 2.0 / (n * (g.params.p + g.params.q));
  const SymMatrix* A = &g.adjacency;
  SbmParams params = g.params;
  LinOp op;
  op.n = n;
  // (Lsym - Lsym*) x = -D^{-1/2} A D^{-1/2} x + 2/(n(p+q)) Astar x;
  // the identity parts cancel. Valid while the graph outlives the operator.
  op.apply = [A, s, scale, params, n](const double* x, double* y) {
    std::vector<double> sx(n), asx(n), ax(n);
    for (int i = 0; i < n; ++i) sx[i] = (*s)[i] * x[i];
    A->symv(sx.data(), asx.data());
    astar_apply(params, x, ax.data());
    for (int i = 0; i < n; ++i) y[i] = -(*s)[i] * asx[i] + scale * ax[i];
  };
  return op;
}

LinOp adjacency_diff_op(const SampledGraph& g) {
  const int n = g.params.n;
  const SymMatrix* A = &g.adjacency;
  SbmParams params = g.params;
  LinOp op;
  op.n = n;
  op.apply = [A, params, n](const double* x, double* y) {
    std::vector<double> ax(n);
    astar_apply(params, x, ax.data());
    A->symv(x, y);
    for (int i = 0; i < n; ++i) y[i] -= ax[i];
  };
  return op;
}

double spectral_norm(const LinOp& op, double tol, const Tolerances& cfg) {
  const int n = op.n;
  if (n == 0) return 0.0;
  if (n <= cfg.power_exact_cutoff) {
    // Materialize column by column and take the exact extreme eigenvalues.
    std::vector<double> full(static_cast<std::size_t>(n) * n);
    std::vector<double> e(n, 0.0), colv(n);
    for (int j = 0; j < n; ++j) {
      e[j] = 1.0;
      op.apply(e.data(), colv.data());
      e[j] = 0.0;
      for (int i = 0; i < n; ++i)
        full[static_cast<std::size_t>(i) * n + j] = colv[i];
    }
    JacobiResult r = jacobi_eigensystem(std::move(full), n);
    return std::max(std::fabs(r.values.front()), std::fabs(r.values.back()));
  }
  // Power iteration on M^2 (two applications per step): converges to
  // |lambda|_max even when the extremes come as a +/- pair.
  CounterRng rng(0x5BEC7A11C0DEULL);
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) x[i] = rng.uniform(i) - 0.5;
  double xn = norm2(x);
  for (double& v : x) v /= xn;
  double est = 0.0;
  for (int it = 0; it < cfg.power_max_iter; ++it) {
    op.apply(x.data(), y.data());
    op.apply(y.data(), x.data());
    double m2 = norm2(x);  // |M^2 x| with |x| = 1 on entry
    if (m2 == 0.0) return 0.0;
    double next = std::sqrt(m2);
    for (double& v : x) v /= m2;
    if (it > 0 && std::fabs(next - est) <= 0.5 * tol * next) return next;
    est = next;
  }
  throw NumericError("spectral_norm: power iteration did not converge in " +
                     std::to_string(cfg.power_max_iter) + " iterations");
}

double spectral_norm(const SymMatrix& M, double tol, const Tolerances& cfg) {
  return spectral_norm(as_linop(M), tol, cfg);
}

}  // namespace specbm
