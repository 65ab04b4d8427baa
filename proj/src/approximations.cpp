#include "specbm/approximations.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <utility>

#include "specbm/errors.hpp"
#include "specbm/graph_matrices.hpp"
#include "specbm/labeling.hpp"
#include "specbm/rng.hpp"
#include "specbm/vec.hpp"

namespace specbm {

namespace {

constexpr std::uint64_t kLooSalt = 0x10013A3D1EULL;

// Divides (A u2star)_i by (d_i - lambda) entrywise, guarding tiny pivots.
std::vector<double> diagonal_resolvent(const std::vector<double>& au,
                                       const std::vector<double>& degrees,
                                       double lambda, double tol) {
  const std::size_t n = au.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double pivot = degrees[i] - lambda;
    if (std::fabs(pivot) <= tol) {
      throw NearSingularResolventError(static_cast<int>(i), std::fabs(pivot));
    }
    out[i] = au[i] / pivot;
  }
  return out;
}

// Divides (A u2star)_i by d_i * factor entrywise.
std::vector<double> normalized_formula(const std::vector<double>& au,
                                       const std::vector<double>& degrees,
                                       double factor, double tol) {
  const std::size_t n = au.size();
  if (std::fabs(factor) <= tol) {
    throw NumericError("near-singular scalar 1 - lambda2 = " +
                       std::to_string(factor) +
                       " in normalized approximation");
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (degrees[i] <= 0.0) throw IsolatedVertexError(static_cast<int>(i));
    out[i] = au[i] / (degrees[i] * factor);
  }
  return out;
}

}  // namespace

const char* approx_kind_name(ApproxKind kind) {
  switch (kind) {
    case ApproxKind::U2Star:
      return "u2star";
    case ApproxKind::ShiftedPower:
      return "shifted_power";
    case ApproxKind::ResolventLambda2L:
      return "resolvent_lambda2_L";
    case ApproxKind::ResolventLambda2LStar:
      return "resolvent_lambda2_Lstar";
    case ApproxKind::NormalizedLambda2:
      return "normalized_lambda2";
    case ApproxKind::NormalizedLambda2Star:
      return "normalized_lambda2_star";
  }
  return "unknown";
}

const std::vector<ApproxKind>& all_approx_kinds() {
  static const std::vector<ApproxKind> kinds = {
      ApproxKind::U2Star,
      ApproxKind::ShiftedPower,
      ApproxKind::ResolventLambda2L,
      ApproxKind::ResolventLambda2LStar,
      ApproxKind::NormalizedLambda2,
      ApproxKind::NormalizedLambda2Star,
  };
  return kinds;
}

std::vector<double> approx_vector(ApproxKind kind, const SampledGraph& graph,
                                  const ApproxSpectra& spectra,
                                  const Tolerances& cfg) {
  const int n = graph.params.n;
  const double p = graph.params.p;
  const double q = graph.params.q;
  const std::vector<double> us = u2star(n);
  if (kind == ApproxKind::U2Star) return us;

  std::vector<double> au(n);
  graph.adjacency.symv(us.data(), au.data());

  switch (kind) {
    case ApproxKind::ShiftedPower: {
      const double shift = n * (p + q) / 2.0;
      const double den = shift - spectra.lambda2_L;
      if (std::fabs(den) <= cfg.resolvent_tol) {
        throw NumericError("near-singular shift denominator " +
                           std::to_string(den) +
                           " in shifted-power approximation");
      }
      const std::vector<double> degrees = graph.adjacency.row_sums();
      double mean = 0.0;
      for (double v : us) mean += v;
      mean /= n;
      std::vector<double> out(n);
      for (int i = 0; i < n; ++i) {
        const double proj = us[i] - mean;                // (P u2star)_i
        const double lap = degrees[i] * us[i] - au[i];   // (L u2star)_i
        out[i] = (shift * proj - lap) / den;
      }
      return out;
    }
    case ApproxKind::ResolventLambda2L:
      return diagonal_resolvent(au, graph.adjacency.row_sums(),
                                spectra.lambda2_L, cfg.resolvent_tol);
    case ApproxKind::ResolventLambda2LStar:
      return diagonal_resolvent(au, graph.adjacency.row_sums(), n * q,
                                cfg.resolvent_tol);
    case ApproxKind::NormalizedLambda2:
      return normalized_formula(au, graph.adjacency.row_sums(),
                                1.0 - spectra.lambda2_Lsym, cfg.resolvent_tol);
    case ApproxKind::NormalizedLambda2Star:
      return normalized_formula(au, graph.adjacency.row_sums(),
                                (p - q) / (p + q), cfg.resolvent_tol);
    case ApproxKind::U2Star:
      break;  // handled above
  }
  throw ParameterError("unknown approximation kind");
}

ApproxReport approx_report(ApproxKind kind, const SampledGraph& graph,
                           const std::vector<double>& u2,
                           const std::vector<double>& utilde) {
  const int n = graph.params.n;
  if (static_cast<int>(u2.size()) != n ||
      static_cast<int>(utilde.size()) != n) {
    throw ParameterError("approx_report: vector length mismatch");
  }
  const double root_n = std::sqrt(static_cast<double>(n));
  const Labeling truth = Labeling::ground_truth(n);

  ApproxReport rep;
  rep.kind = kind;
  double sup = 0.0;
  double margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    sup = std::max(sup, std::fabs(u2[i] - utilde[i]));
    margin = std::min(margin, truth.signs[i] * utilde[i]);
  }
  rep.sup_error = root_n * sup;
  rep.margin = root_n * margin;
  rep.recovered_by_sign = rep.margin > 0.0;
  return rep;
}

ApproxReport approx_report(ApproxKind kind, const SampledGraph& graph,
                           const std::vector<double>& u2,
                           const ApproxSpectra& spectra,
                           const Tolerances& cfg) {
  return approx_report(kind, graph, u2,
                       approx_vector(kind, graph, spectra, cfg));
}

SymMatrix leave_one_out_matrix(const SampledGraph& graph, int m) {
  const int n = graph.params.n;
  if (m < 0 || m >= n) throw ParameterError("leave_one_out_matrix: bad vertex");
  const double p = graph.params.p;
  const double q = graph.params.q;

  SymMatrix out = SymMatrix::dense(n);
  const SymMatrix& a = graph.adjacency;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      out.set(i, j, a.at(i, j));
    }
  }
  const int half = n / 2;
  const bool m_first = m < half;
  for (int j = 0; j < n; ++j) {
    double star;
    if (j == m) {
      star = graph.params.self_loops ? p : 0.0;
    } else {
      const bool j_first = j < half;
      star = (j_first == m_first) ? p : q;
    }
    out.set(std::max(m, j), std::min(m, j), star);
  }
  return out;
}

std::vector<int> default_loo_vertices(const SampledGraph& graph, int count) {
  const int n = graph.params.n;
  if (count < 1 || count > n) {
    throw ParameterError("default_loo_vertices: bad count");
  }
  CounterRng rng(seed_combine(graph.seed, kLooSalt));
  std::vector<int> picked;
  picked.reserve(count);
  std::uint64_t k = 0;
  while (static_cast<int>(picked.size()) < count) {
    const int v = static_cast<int>(rng.raw(k++) % static_cast<std::uint64_t>(n));
    if (std::find(picked.begin(), picked.end(), v) == picked.end()) {
      picked.push_back(v);
    }
  }
  return picked;
}

std::vector<double> leave_one_out_diagnostic(const SampledGraph& graph,
                                             Method method,
                                             const std::vector<int>& sample_m,
                                             const EigOptions& opts) {
  const int n = graph.params.n;
  const ClusterResult base = cluster(graph, method, opts);
  const std::vector<double>& u2 = base.fiedler;
  const double u2_inf = norm_inf(u2);
  if (u2_inf <= 0.0) throw NumericError("leave_one_out: zero Fiedler vector");

  // The loo matrix is still a Laplacian source: the all-ones kernel hint holds.
  EigOptions eopts = opts;
  eopts.kernel_hint = std::vector<double>(n, 1.0);

  std::vector<double> ratios;
  ratios.reserve(sample_m.size());
  for (int m : sample_m) {
    const SymMatrix am = leave_one_out_matrix(graph, m);
    Spectrum spec;
    if (method == Method::Unnormalized) {
      spec = smallest_k(unnormalized_laplacian(am), 2, eopts);
    } else {
      spec = generalized_smallest_k(unnormalized_laplacian(am), am.row_sums(),
                                    2, eopts);
    }
    std::vector<double> um = spec.eigenvectors[1];
    // Sign-align: the loo Fiedler vector carries an arbitrary orientation.
    if (dot(u2, um) < 0.0) scale(um, -1.0);
    double diff2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = u2[i] - um[i];
      diff2 += d * d;
    }
    ratios.push_back(std::sqrt(diff2) / u2_inf);
  }
  return ratios;
}

}  // namespace specbm
