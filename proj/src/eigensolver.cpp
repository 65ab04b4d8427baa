#include "specbm/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include "specbm/errors.hpp"
#include "specbm/rng.hpp"
#include "specbm/tridiagonal.hpp"
#include "specbm/vec.hpp"

namespace specbm {

namespace {

constexpr double kClusterRel = 1e-7;   // eigenvalues closer than this (rel.
                                       // to |T|) share an invit cluster
constexpr double kHardResidRel = 1e-6;  // residual above this is a failure

struct DensePairs {
  std::vector<double> all_values;  // every eigenvalue, ascending
  std::vector<double> values;      // kk smallest
  std::vector<std::vector<double>> vectors;
};

// kk smallest eigenpairs of a full row-major symmetric buffer (destroyed).
DensePairs dense_pairs(std::vector<double> full, int n, int kk,
                       std::uint64_t seed) {
  DensePairs out;
  if (n == 1) {
    out.all_values = {full[0]};
    out.values = {full[0]};
    out.vectors = {{1.0}};
    return out;
  }
  TridiagFactors f = householder_tridiag(full, n);
  out.all_values = tridiag_eigenvalues(f.d, f.e);
  double tnorm = std::max(std::fabs(out.all_values.front()),
                          std::fabs(out.all_values.back()));
  const double cluster_tol = kClusterRel * std::max(tnorm, 1e-300);
  std::vector<std::vector<double>> tvecs;
  for (int i = 0; i < kk; ++i) {
    double lambda = out.all_values[i];
    // Orthogonalize against earlier members of the same eigenvalue cluster;
    // nudge the shift so the LU factors differ between members.
    std::vector<std::vector<double>> ortho;
    int in_cluster = 0;
    for (int j = i - 1; j >= 0; --j) {
      if (lambda - out.all_values[j] <= cluster_tol) {
        ortho.push_back(tvecs[j]);
        ++in_cluster;
      } else {
        break;
      }
    }
    double shift = lambda + in_cluster * 1e-14 * std::max(tnorm, 1.0);
    std::vector<double> z =
        tridiag_eigenvector(f.d, f.e, shift, ortho, seed_combine(seed, 7700 + i));
    tvecs.push_back(std::move(z));
  }
  for (int i = 0; i < kk; ++i) {
    householder_backtransform(full, f, tvecs[i]);
    double nn = norm2(tvecs[i]);
    for (double& v : tvecs[i]) v /= nn;
    out.values.push_back(out.all_values[i]);
  }
  out.vectors = std::move(tvecs);
  return out;
}

double op_residual(const LinOp& op, const std::vector<double>& u, double lambda) {
  std::vector<double> y(op.n);
  op.apply(u.data(), y.data());
  double s = 0.0;
  for (int i = 0; i < op.n; ++i) {
    double r = y[i] - lambda * u[i];
    s += r * r;
  }
  return std::sqrt(s);
}

struct Candidate {
  double value;
  std::vector<double> vector;
};

Spectrum assemble(const LinOp& op, std::vector<Candidate> cands,
                  std::vector<double> all_values, int k,
                  const EigOptions& opts) {
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return a.value < b.value;
                   });
  std::sort(all_values.begin(), all_values.end());
  Spectrum s;
  s.norm_estimate = std::max(std::fabs(all_values.front()),
                             std::fabs(all_values.back()));
  for (int i = 0; i < k; ++i) {
    s.eigenvalues.push_back(cands[i].value);
    s.residuals.push_back(op_residual(op, cands[i].vector, cands[i].value));
    s.eigenvectors.push_back(std::move(cands[i].vector));
  }
  if (all_values.size() >= 3)
    s.gap_flag = std::fabs(all_values[1] - all_values[2]) <
                 opts.gap_rel * std::max(1.0, s.norm_estimate);
  for (double r : s.residuals)
    if (r > kHardResidRel * std::max(1.0, s.norm_estimate))
      throw NumericError("eigensolver: residual " + std::to_string(r) +
                         " exceeds safety threshold");
  return s;
}

Spectrum dense_path(const SymMatrix& M, int k, const EigOptions& opts) {
  const int n = M.n();
  std::vector<double> full;
  M.unpack_full(full);
  LinOp op = as_linop(M);
  const int kk = std::min(std::max(k, 3), n);

  if (!opts.kernel_hint) {
    DensePairs p = dense_pairs(std::move(full), n, kk, opts.seed);
    std::vector<Candidate> cands;
    for (int i = 0; i < kk; ++i)
      cands.push_back({p.values[i], std::move(p.vectors[i])});
    return assemble(op, std::move(cands), std::move(p.all_values), k, opts);
  }

  // Deflate the known kernel vector by a Householder similarity that maps
  // it onto e_1, then solve the decoupled trailing block.
  std::vector<double> h = *opts.kernel_hint;
  double hn = norm2(h);
  if (hn == 0.0) throw ParameterError("kernel_hint: zero vector");
  for (double& v : h) v /= hn;
  std::vector<double> u = h;
  u[0] += h[0] >= 0.0 ? 1.0 : -1.0;  // H h = -sign(h0) e1
  const double uu = dot(u, u);       // >= 1 always: |u0| = |h0| + 1
  const double tau = 2.0 / uu;
  {
    std::vector<double> p(n), q(n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      const double* row = &full[static_cast<std::size_t>(i) * n];
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += row[j] * u[j];
      p[i] = tau * acc;
    }
    double up = dot(u, p);
    for (int i = 0; i < n; ++i) q[i] = p[i] - 0.5 * tau * up * u[i];
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      double* row = &full[static_cast<std::size_t>(i) * n];
      const double ui = u[i], qi = q[i];
      for (int j = 0; j < n; ++j) row[j] -= ui * q[j] + qi * u[j];
    }
  }
  const double lambda_hint = full[0];
  const int m = n - 1;
  std::vector<double> block(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      block[static_cast<std::size_t>(i) * m + j] =
          full[static_cast<std::size_t>(i + 1) * n + (j + 1)];

  const int kb = std::min(kk, m);
  DensePairs p = dense_pairs(std::move(block), m, kb, opts.seed);

  std::vector<Candidate> cands;
  cands.push_back({lambda_hint, h});
  for (int i = 0; i < kb; ++i) {
    std::vector<double> z(n, 0.0);
    for (int j = 0; j < m; ++j) z[j + 1] = p.vectors[i][j];
    double uz = dot(u, z);
    axpy(-tau * uz, u, z);
    double nn = norm2(z);
    for (double& v : z) v /= nn;
    cands.push_back({p.values[i], std::move(z)});
  }
  std::vector<double> all = p.all_values;
  all.push_back(lambda_hint);
  return assemble(op, std::move(cands), std::move(all), k, opts);
}

// One Lanczos run with full reorthogonalization against `lock` and its own
// basis. Returns converged Ritz pairs, or throws on non-convergence; on
// breakdown (invariant subspace), converged pairs plus the basis come back
// so the caller can deflate and restart.
struct LanczosRun {
  std::vector<Candidate> pairs;     // Ritz pairs with explicit vectors
  std::vector<double> ritz_values;  // all Ritz values of the final T
  std::vector<std::vector<double>> basis;
  bool breakdown = false;
  int iterations = 0;
};

LanczosRun lanczos_run(const LinOp& op, int k,
                       const std::vector<std::vector<double>>& lock,
                       const EigOptions& opts, int restart_index,
                       double norm_floor) {
  const int n = op.n;
  const int m = std::min(opts.lanczos_max_dim, n);
  LanczosRun run;
  CounterRng rng(seed_combine(opts.seed, 40 + restart_index));
  std::vector<double> v(n), vprev(n, 0.0), w(n);
  for (int i = 0; i < n; ++i) v[i] = rng.uniform(i) - 0.5;
  for (int rep = 0; rep < 2; ++rep)
    for (const auto& b : lock) {
      double pr = dot(v, b);
      axpy(-pr, b, v);
    }
  double vn = norm2(v);
  if (vn < 1e-12) throw NumericError("lanczos: start vector annihilated");
  for (double& x : v) x /= vn;

  std::vector<double> alpha, beta;
  std::vector<std::vector<double>>& V = run.basis;
  double normest = norm_floor;
  double beta_prev = 0.0;

  for (int j = 0; j < m; ++j) {
    V.push_back(v);
    op.apply(v.data(), w.data());
    double a = dot(v, w);
    alpha.push_back(a);
    for (int i = 0; i < n; ++i) w[i] -= a * v[i] + beta_prev * vprev[i];
    // Full reorthogonalization (two passes) against locked vectors and the
    // whole basis: robustness over speed.
    for (int rep = 0; rep < 2; ++rep) {
      for (const auto& b : lock) {
        double pr = dot(w, b);
        axpy(-pr, b, w);
      }
      for (const auto& b : V) {
        double pr = dot(w, b);
        axpy(-pr, b, w);
      }
    }
    double b = norm2(w);
    normest = std::max(normest, std::fabs(a) + b + beta_prev);
    run.iterations = j + 1;

    const bool exhausted = j + 1 == m || j + 1 == n;
    const bool broke = b <= 1e-13 * std::max(normest, 1.0);
    const bool check = broke || exhausted || (j + 1 >= k + 2 && (j % 4) == 3);
    if (check) {
      std::vector<double> d = alpha;
      std::vector<double> e(beta.begin(), beta.end());
      std::vector<double> ritz = tridiag_eigenvalues(d, e);
      const int kk = std::min<int>(std::max(k, 3), ritz.size());
      double tnorm =
          std::max(std::fabs(ritz.front()), std::fabs(ritz.back()));
      const double cluster_tol = kClusterRel * std::max(tnorm, 1e-300);
      bool all_ok = true;
      std::vector<std::vector<double>> svecs;
      for (int i = 0; i < kk; ++i) {
        std::vector<std::vector<double>> ortho;
        int in_cluster = 0;
        for (int t = i - 1; t >= 0; --t) {
          if (ritz[i] - ritz[t] <= cluster_tol) {
            ortho.push_back(svecs[t]);
            ++in_cluster;
          } else {
            break;
          }
        }
        double shift = ritz[i] + in_cluster * 1e-14 * std::max(tnorm, 1.0);
        std::vector<double> s = tridiag_eigenvector(
            d, e, shift, ortho, seed_combine(opts.seed, 9900 + i));
        double rest = b * std::fabs(s.back());
        if (!broke && rest > 0.1 * opts.tol * std::max(1.0, normest))
          all_ok = false;
        svecs.push_back(std::move(s));
        if (!all_ok) break;
      }
      if (all_ok || broke) {
        run.ritz_values = ritz;
        for (int i = 0; i < static_cast<int>(svecs.size()); ++i) {
          std::vector<double> y(n, 0.0);
          for (std::size_t t = 0; t < V.size(); ++t)
            axpy(svecs[i][t], V[t], y);
          double nn = norm2(y);
          if (nn == 0.0) continue;
          for (double& x : y) x /= nn;
          run.pairs.push_back({ritz[i], std::move(y)});
        }
        run.breakdown = broke && static_cast<int>(run.pairs.size()) < k;
        return run;
      }
      if (exhausted)
        throw NumericError(
            "lanczos: no convergence (dim " + std::to_string(j + 1) +
            ", n=" + std::to_string(n) + ", tol=" + std::to_string(opts.tol) +
            ")");
    }
    beta.push_back(b);
    beta_prev = b;
    vprev = v;
    for (int i = 0; i < n; ++i) v[i] = w[i] / b;
  }
  throw NumericError("lanczos: iteration limit reached");
}

}  // namespace

Spectrum smallest_k_op(const LinOp& op, int k, const EigOptions& opts) {
  const int n = op.n;
  if (k < 1 || k > n) throw ParameterError("smallest_k: need 1 <= k <= n");

  std::vector<std::vector<double>> lock;
  std::vector<Candidate> found;
  // Union of Ritz values across runs: runs act on mutually orthogonal
  // complements, so appending approximates the spectrum without duplicates.
  std::vector<double> all_values;
  if (opts.kernel_hint) {
    std::vector<double> h = *opts.kernel_hint;
    double hn = norm2(h);
    if (hn == 0.0) throw ParameterError("kernel_hint: zero vector");
    for (double& v : h) v /= hn;
    std::vector<double> y(n);
    op.apply(h.data(), y.data());
    double lam = dot(h, y);
    lock.push_back(h);
    found.push_back({lam, std::move(h)});
    all_values.push_back(lam);
  }

  int krylov = 0;
  for (int restart = 0; restart < 8; ++restart) {
    LanczosRun run = lanczos_run(op, k, lock, opts, restart, 0.0);
    for (auto& pr : run.pairs) found.push_back(std::move(pr));
    for (double v : run.ritz_values) all_values.push_back(v);
    krylov += run.iterations;
    if (!run.breakdown) break;
    // Invariant subspace exhausted before k pairs converged: lock the whole
    // basis and continue in its orthogonal complement.
    for (auto& b : run.basis) lock.push_back(std::move(b));
    if (static_cast<int>(lock.size()) >= n) break;
  }
  if (static_cast<int>(found.size()) < k)
    throw NumericError("lanczos: only " + std::to_string(found.size()) +
                       " of " + std::to_string(k) + " pairs converged");
  if (all_values.empty()) all_values.push_back(0.0);
  Spectrum s = assemble(op, std::move(found), std::move(all_values), k, opts);
  s.iterations = krylov;
  return s;
}

Spectrum smallest_k(const SymMatrix& M, int k, const EigOptions& opts) {
  const int n = M.n();
  if (k < 1 || k > n) throw ParameterError("smallest_k: need 1 <= k <= n");
  if (n <= opts.dense_cutoff) return dense_path(M, k, opts);
  return smallest_k_op(as_linop(M), k, opts);
}

Spectrum generalized_smallest_k(const SymMatrix& L, const std::vector<double>& D,
                                int k, const EigOptions& opts) {
  const int n = L.n();
  if (static_cast<int>(D.size()) != n)
    throw ParameterError("generalized_smallest_k: diagonal size mismatch");
  for (int i = 0; i < n; ++i)
    if (!(D[i] > 0.0)) throw IsolatedVertexError(i);
  std::vector<double> s(n);
  for (int i = 0; i < n; ++i) s[i] = 1.0 / std::sqrt(D[i]);

  // Hint arrives in generalized (u-space) coordinates; the reduced problem
  // wants D^{1/2} u.
  EigOptions ropts = opts;
  if (opts.kernel_hint) {
    std::vector<double> h = *opts.kernel_hint;
    for (int i = 0; i < n; ++i) h[i] /= s[i];
    ropts.kernel_hint = std::move(h);
  }

  Spectrum red;
  if (n <= opts.dense_cutoff) {
    // Materialize Lsym densely from L.
    std::vector<double> full;
    L.unpack_full(full);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        full[static_cast<std::size_t>(i) * n + j] *= s[i] * s[j];
    // Wrap the scaled buffer as an operator for residual checks.
    SymMatrix Lsym = SymMatrix::dense(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j)
        Lsym.set(i, j, full[static_cast<std::size_t>(i) * n + j]);
    red = smallest_k(Lsym, k, ropts);
  } else {
    const SymMatrix* Lp = &L;
    auto sp = std::make_shared<std::vector<double>>(s);
    LinOp op;
    op.n = n;
    op.apply = [Lp, sp, n](const double* x, double* y) {
      std::vector<double> sx(n);
      for (int i = 0; i < n; ++i) sx[i] = (*sp)[i] * x[i];
      Lp->symv(sx.data(), y);
      for (int i = 0; i < n; ++i) y[i] *= (*sp)[i];
    };
    red = smallest_k_op(op, k, ropts);
  }

  // Map v -> D^{-1/2} v, renormalize, and recompute generalized residuals
  // |Lu - lambda D u| / |D^{1/2} u| against the original pencil.
  Spectrum out = red;
  for (int i = 0; i < k; ++i) {
    std::vector<double>& u = out.eigenvectors[i];
    for (int j = 0; j < n; ++j) u[j] *= s[j];
    double nn = norm2(u);
    for (double& x : u) x /= nn;
    std::vector<double> Lu = L.symv(u);
    double num = 0.0, den = 0.0;
    for (int j = 0; j < n; ++j) {
      double r = Lu[j] - out.eigenvalues[i] * D[j] * u[j];
      num += r * r;
      den += D[j] * u[j] * u[j];
    }
    out.residuals[i] = std::sqrt(num) / std::sqrt(den);
  }
  return out;
}

std::vector<double> orient(std::vector<double> u,
                           const std::vector<double>& reference) {
  if (u.size() != reference.size())
    throw ParameterError("orient: length mismatch");
  double nn = norm2(u);
  if (nn == 0.0) throw ParameterError("orient: zero vector");
  if (dot(u, reference) < 0.0)
    for (double& v : u) v = -v;
  return u;
}

}  // namespace specbm
