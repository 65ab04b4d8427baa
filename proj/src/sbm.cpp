#include "specbm/sbm.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <utility>

#include "specbm/errors.hpp"
#include "specbm/rng.hpp"

namespace specbm {

namespace {

void validate(const SbmParams& params) {
  if (params.n < 4 || params.n % 2 != 0)
    throw ParameterError("SbmParams: n must be even and >= 4, got " +
                         std::to_string(params.n));
  if (!(params.q >= 0.0) || !(params.p >= params.q) || !(params.p <= 1.0))
    throw ParameterError("SbmParams: need 0 <= q <= p <= 1 (p=" +
                         std::to_string(params.p) +
                         ", q=" + std::to_string(params.q) + ")");
}

inline bool same_block(int i, int j, int half) {
  return (i < half) == (j < half);
}

}  // namespace

SbmParams SbmParams::direct(int n, double p, double q, bool self_loops) {
  SbmParams params;
  params.n = n;
  params.p = p;
  params.q = q;
  params.self_loops = self_loops;
  validate(params);
  return params;
}

SbmParams SbmParams::critical(int n, double alpha, double beta,
                              bool self_loops) {
  if (!(alpha > 0.0) || !(beta >= 0.0))
    throw ParameterError("SbmParams: critical regime needs alpha > 0, beta >= 0");
  SbmParams params;
  params.n = n;
  if (n > 0) {
    params.p = alpha * std::log(static_cast<double>(n)) / n;
    params.q = beta * std::log(static_cast<double>(n)) / n;
  }
  params.self_loops = self_loops;
  params.alpha = alpha;
  params.beta = beta;
  validate(params);
  return params;
}

SampledGraph sample(const SbmParams& params, std::uint64_t seed) {
  validate(params);
  const int n = params.n;
  const int half = n / 2;
  const CounterRng rng(seed);
  const std::uint64_t un = static_cast<std::uint64_t>(n);

  SampledGraph g;
  g.params = params;
  g.seed = seed;
  g.ground_truth = Labeling::ground_truth(n);

  // Stored entry (r, c) with r >= c is the unordered pair {c, r}, drawn with
  // counter c*n + r: a pure function of (seed, pair), independent of order.
  if (n <= 4096) {
    SymMatrix A = SymMatrix::dense(n);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < n; ++r) {
      int cmax = params.self_loops ? r : r - 1;
      for (int c = 0; c <= cmax; ++c) {
        double prob = same_block(r, c, half) ? params.p : params.q;
        if (rng.uniform(static_cast<std::uint64_t>(c) * un + r) < prob)
          A.set(r, c, 1.0);
      }
    }
    g.adjacency = std::move(A);
    return g;
  }

  std::vector<int> rowptr(n + 1, 0);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < n; ++r) {
    int cmax = params.self_loops ? r : r - 1;
    int count = 0;
    for (int c = 0; c <= cmax; ++c) {
      double prob = same_block(r, c, half) ? params.p : params.q;
      if (rng.uniform(static_cast<std::uint64_t>(c) * un + r) < prob) ++count;
    }
    rowptr[r + 1] = count;
  }
  for (int r = 0; r < n; ++r) rowptr[r + 1] += rowptr[r];
  std::vector<int> col(rowptr[n]);
  std::vector<double> val(rowptr[n], 1.0);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < n; ++r) {
    int cmax = params.self_loops ? r : r - 1;
    int at = rowptr[r];
    for (int c = 0; c <= cmax; ++c) {
      double prob = same_block(r, c, half) ? params.p : params.q;
      if (rng.uniform(static_cast<std::uint64_t>(c) * un + r) < prob)
        col[at++] = c;
    }
  }
  g.adjacency = SymMatrix::sparse_lower(n, std::move(rowptr), std::move(col),
                                        std::move(val));
  return g;
}

std::vector<double> u2star(int n) {
  std::vector<double> u(n, 1.0 / std::sqrt(static_cast<double>(n)));
  for (int i = n / 2; i < n; ++i) u[i] = -u[i];
  return u;
}

Expectation expectation_matrices(const SbmParams& params) {
  validate(params);
  const int n = params.n;
  const int half = n / 2;
  Expectation e;
  e.Astar = SymMatrix::dense(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c <= r; ++c)
      e.Astar.set(r, c, same_block(r, c, half) ? params.p : params.q);
  e.DstarScale = n * (params.p + params.q) / 2.0;
  e.u2star = u2star(n);
  return e;
}

void astar_apply(const SbmParams& params, const double* x, double* y) {
  const int n = params.n;
  const int half = n / 2;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < half; ++i) s1 += x[i];
  for (int i = half; i < n; ++i) s2 += x[i];
  for (int i = 0; i < half; ++i) y[i] = params.p * s1 + params.q * s2;
  for (int i = half; i < n; ++i) y[i] = params.q * s1 + params.p * s2;
}

void write_edge_list(const SymMatrix& adjacency, std::ostream& os) {
  const int n = adjacency.n();
  std::vector<std::pair<int, int>> edges;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c <= r; ++c)
      if (adjacency.at(r, c) != 0.0) edges.emplace_back(c, r);
  std::sort(edges.begin(), edges.end());
  os << "n " << n << "\n";
  for (const auto& [i, j] : edges) os << i + 1 << " " << j + 1 << "\n";
}

SymMatrix read_edge_list(std::istream& is) {
  std::string tag;
  int n = 0;
  if (!(is >> tag >> n) || tag != "n" || n <= 0)
    throw IoError("edge list: expected header 'n <count>'");
  std::vector<std::pair<int, int>> edges;
  long long i, j;
  while (is >> i >> j) {
    if (i < 1 || j < i || j > n)
      throw IoError("edge list: bad pair " + std::to_string(i) + " " +
                    std::to_string(j));
    edges.emplace_back(static_cast<int>(j) - 1, static_cast<int>(i) - 1);
  }
  if (!is.eof() && is.fail()) throw IoError("edge list: malformed line");
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (n <= 4096) {
    SymMatrix A = SymMatrix::dense(n);
    for (const auto& [r, c] : edges) A.set(r, c, 1.0);
    return A;
  }
  std::vector<int> rowptr(n + 1, 0);
  for (const auto& [r, c] : edges) ++rowptr[r + 1];
  for (int r = 0; r < n; ++r) rowptr[r + 1] += rowptr[r];
  std::vector<int> col(edges.size());
  std::vector<double> val(edges.size(), 1.0);
  std::vector<int> cursor(rowptr.begin(), rowptr.end() - 1);
  for (const auto& [r, c] : edges) col[cursor[r]++] = c;
  return SymMatrix::sparse_lower(n, std::move(rowptr), std::move(col),
                                 std::move(val));
}

}  // namespace specbm
