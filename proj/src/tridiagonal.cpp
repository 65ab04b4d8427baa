#include "specbm/tridiagonal.hpp"

#include <algorithm>
#include <cmath>

#include "specbm/errors.hpp"
#include "specbm/rng.hpp"
#include "specbm/vec.hpp"

namespace specbm {

TridiagFactors householder_tridiag(std::vector<double>& a, int n) {
  TridiagFactors f;
  f.n = n;
  f.d.assign(n, 0.0);
  f.e.assign(std::max(0, n - 1), 0.0);
  f.beta.assign(std::max(0, n - 2), 0.0);
  auto A = [&](int i, int j) -> double& {
    return a[static_cast<std::size_t>(i) * n + j];
  };

  std::vector<double> v(n), w(n), u(n);
  for (int k = 0; k + 2 < n; ++k) {
    const int lo = k + 1;
    // Column below the diagonal.
    double sigma2 = 0.0;
    for (int i = lo; i < n; ++i) {
      v[i] = A(i, k);
      sigma2 += v[i] * v[i];
    }
    double sigma = std::sqrt(sigma2);
    if (sigma == 0.0) {
      f.e[k] = 0.0;
      continue;
    }
    double x0 = v[lo];
    double alpha = x0 >= 0.0 ? -sigma : sigma;
    v[lo] = x0 - alpha;  // no cancellation: |v0| = |x0| + sigma
    double beta = 2.0 * sigma * (sigma + std::fabs(x0));
    const double tau = 2.0 / beta;

    // w = S v over the trailing block (full rows: contiguous access).
#pragma omp parallel for schedule(static)
    for (int i = lo; i < n; ++i) {
      const double* row = &a[static_cast<std::size_t>(i) * n];
      double acc = 0.0;
      for (int j = lo; j < n; ++j) acc += row[j] * v[j];
      w[i] = acc;
    }
    double vw = 0.0;
    for (int i = lo; i < n; ++i) vw += v[i] * w[i];
    const double gamma = tau * tau * vw / 2.0;
    for (int i = lo; i < n; ++i) u[i] = tau * w[i] - gamma * v[i];

    // S <- S - v u' - u v' on the full trailing square.
#pragma omp parallel for schedule(static)
    for (int i = lo; i < n; ++i) {
      double* row = &a[static_cast<std::size_t>(i) * n];
      const double vi = v[i], ui = u[i];
      for (int j = lo; j < n; ++j) row[j] -= vi * u[j] + ui * v[j];
    }

    f.e[k] = alpha;
    f.beta[k] = beta;
    // Keep v in column k below the diagonal for the back-transformation.
    for (int i = lo; i < n; ++i) A(i, k) = v[i];
  }
  if (n >= 2) f.e[n - 2] = A(n - 1, n - 2);
  for (int i = 0; i < n; ++i) f.d[i] = A(i, i);
  return f;
}

std::vector<double> tridiag_eigenvalues(std::vector<double> d,
                                        std::vector<double> e) {
  const int n = static_cast<int>(d.size());
  if (n == 0) return {};
  e.resize(n, 0.0);  // e[n-1] sentinel
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
        if (std::fabs(e[m]) <= 1e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 80)
          throw NumericError("tridiag_eigenvalues: QL did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double fv = s * e[i], b = c * e[i];
          r = std::hypot(fv, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = fv / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

namespace {

// Solve (T - lambda I) x = b by LU with partial pivoting; tridiagonal with
// one extra superdiagonal of fill. Overwrites b with the solution.
void shifted_tridiag_solve(const std::vector<double>& d,
                           const std::vector<double>& e, double lambda,
                           double pivot_floor, std::vector<double>& b) {
  const int n = static_cast<int>(d.size());
  std::vector<double> u0(n), u1(std::max(0, n - 1), 0.0),
      u2(std::max(0, n - 2), 0.0), sub(std::max(0, n - 1), 0.0);
  for (int i = 0; i < n; ++i) u0[i] = d[i] - lambda;
  for (int i = 0; i + 1 < n; ++i) { u1[i] = e[i]; sub[i] = e[i]; }
  std::vector<int> swapped(std::max(0, n - 1), 0);
  for (int i = 0; i + 1 < n; ++i) {
    if (std::fabs(sub[i]) > std::fabs(u0[i])) {
      swapped[i] = 1;
      std::swap(u0[i], sub[i]);
      std::swap(u1[i], u0[i + 1]);
      if (i + 2 < n) std::swap(u2[i], u1[i + 1]);
      std::swap(b[i], b[i + 1]);
    }
    if (std::fabs(u0[i]) < pivot_floor)
      u0[i] = std::copysign(pivot_floor, u0[i] == 0.0 ? 1.0 : u0[i]);
    double m = sub[i] / u0[i];
    u0[i + 1] -= m * u1[i];
    if (i + 2 < n) u1[i + 1] -= m * u2[i];
    b[i + 1] -= m * b[i];
  }
  if (std::fabs(u0[n - 1]) < pivot_floor)
    u0[n - 1] = std::copysign(pivot_floor, u0[n - 1] == 0.0 ? 1.0 : u0[n - 1]);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    if (i + 1 < n) s -= u1[i] * b[i + 1];
    if (i + 2 < n) s -= u2[i] * b[i + 2];
    b[i] = s / u0[i];
  }
}

}  // namespace

std::vector<double> tridiag_eigenvector(
    const std::vector<double>& d, const std::vector<double>& e, double lambda,
    const std::vector<std::vector<double>>& ortho, std::uint64_t seed) {
  const int n = static_cast<int>(d.size());
  double tnorm = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = std::fabs(d[i]);
    if (i > 0) row += std::fabs(e[i - 1]);
    if (i + 1 < n) row += std::fabs(e[i]);
    tnorm = std::max(tnorm, row);
  }
  tnorm = std::max(tnorm, 1e-300);
  const double pivot_floor = 1e-300 + 2.3e-16 * tnorm;

  CounterRng rng(seed);
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = rng.uniform(i) - 0.5;
  for (int pass = 0; pass < 4; ++pass) {
    for (const auto& o : ortho) {
      double pr = dot(x, o);
      axpy(-pr, o, x);
    }
    double nrm = norm2(x);
    if (nrm == 0.0) {
      // Degenerate start (fully inside the excluded span): reseed.
      for (int i = 0; i < n; ++i) x[i] = rng.uniform(1000 + pass * n + i) - 0.5;
      continue;
    }
    for (double& v : x) v /= nrm;
    shifted_tridiag_solve(d, e, lambda, pivot_floor, x);
    double growth = norm2(x);
    for (double& v : x) v /= growth;
    // Growth ~ 1/(distance to lambda); once it hits 1/(eps*|T|) the iterate
    // is as good as it gets.
    if (pass >= 1 && growth > 0.1 / (2.3e-16 * tnorm * n)) break;
  }
  for (const auto& o : ortho) {
    double pr = dot(x, o);
    axpy(-pr, o, x);
  }
  double nrm = norm2(x);
  if (nrm == 0.0)
    throw NumericError("tridiag_eigenvector: inverse iteration collapsed");
  for (double& v : x) v /= nrm;
  return x;
}

void householder_backtransform(const std::vector<double>& a,
                               const TridiagFactors& f,
                               std::vector<double>& z) {
  const int n = f.n;
  for (int k = n - 3; k >= 0; --k) {
    if (f.beta[k] == 0.0) continue;
    const double tau = 2.0 / f.beta[k];
    double vz = 0.0;
    for (int i = k + 1; i < n; ++i)
      vz += a[static_cast<std::size_t>(i) * n + k] * z[i];
    const double c = tau * vz;
    for (int i = k + 1; i < n; ++i)
      z[i] -= c * a[static_cast<std::size_t>(i) * n + k];
  }
}

}  // namespace specbm
