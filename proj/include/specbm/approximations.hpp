#pragma once

#include <cstdint>
#include <vector>

#include "specbm/clustering.hpp"
#include "specbm/config.hpp"
#include "specbm/eigensolver.hpp"
#include "specbm/sbm.hpp"

namespace specbm {

// The candidate closed-form approximations of the Fiedler vector.
enum class ApproxKind {
  U2Star,                 // u2star itself
  ShiftedPower,           // (n(p+q)/2 P - L) u2star / (n(p+q)/2 - l2(L)), P = I - J/n
  ResolventLambda2L,      // (D - l2(L) I)^{-1} A u2star
  ResolventLambda2LStar,  // (D - nq I)^{-1} A u2star
  NormalizedLambda2,      // (1 - l2(Lsym))^{-1} D^{-1} A u2star
  NormalizedLambda2Star,  // (1 - 2q/(p+q))^{-1} D^{-1} A u2star
};

const char* approx_kind_name(ApproxKind kind);
const std::vector<ApproxKind>& all_approx_kinds();

// Eigenvalues consumed by the data-dependent kinds.
struct ApproxSpectra {
  double lambda2_L = 0.0;
  double lambda2_Lsym = 0.0;
};

// The raw formula output; never re-normalized (the quality metrics are
// scale-sensitive). Throws NearSingularResolventError / IsolatedVertexError
// when a diagonal resolvent or degree inverse degenerates.
std::vector<double> approx_vector(ApproxKind kind, const SampledGraph& graph,
                                  const ApproxSpectra& spectra,
                                  const Tolerances& cfg = default_tolerances());

struct ApproxReport {
  ApproxKind kind = ApproxKind::U2Star;
  double sup_error = 0.0;  // sqrt(n) |u2 - utilde|_inf, u2 sign-aligned
  double margin = 0.0;     // sqrt(n) min_i z_i (utilde)_i
  bool recovered_by_sign = false;  // margin > 0
};

// u2 must already be oriented against u2star (see orient()).
ApproxReport approx_report(ApproxKind kind, const SampledGraph& graph,
                           const std::vector<double>& u2,
                           const std::vector<double>& utilde);
ApproxReport approx_report(ApproxKind kind, const SampledGraph& graph,
                           const std::vector<double>& u2,
                           const ApproxSpectra& spectra,
                           const Tolerances& cfg = default_tolerances());

// Leave-one-out matrix A^(m): row/column m replaced by its expectation
// (fractional p/q entries). Dense storage only.
SymMatrix leave_one_out_matrix(const SampledGraph& graph, int m);

// Deterministic without-replacement vertex sample for the diagnostic.
std::vector<int> default_loo_vertices(const SampledGraph& graph, int count);

// For each m: |u2 - u2^(m)|_2 / |u2|_inf, sign-aligned, where u2^(m) is the
// Fiedler vector of the leave-one-out Laplacian (same method as u2).
std::vector<double> leave_one_out_diagnostic(const SampledGraph& graph,
                                             Method method,
                                             const std::vector<int>& sample_m,
                                             const EigOptions& opts = {});

}  // namespace specbm
