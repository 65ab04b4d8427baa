#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <set>
#include <vector>

#include "specbm/approximations.hpp"
#include "specbm/clustering.hpp"
#include "specbm/errors.hpp"
#include "specbm/sbm.hpp"
#include "specbm/vec.hpp"

using namespace specbm;

namespace {

// A graph whose adjacency is exactly the expectation matrix Astar. On it,
// D = n(p+q)/2 I exactly and A u2star = n(p-q)/2 u2star, so every
// approximation formula evaluates to u2star in closed form.
SampledGraph expectation_graph(int n, double p, double q) {
  SampledGraph g;
  g.params = SbmParams::direct(n, p, q);
  g.adjacency = expectation_matrices(g.params).Astar;
  g.seed = 0;
  g.ground_truth = Labeling::ground_truth(n);
  return g;
}

SampledGraph two_cliques(int n) {
  return sample(SbmParams::direct(n, 1.0, 0.0), 1);
}

}  // namespace

TEST_CASE("kind names and enumeration order") {
  const auto& kinds = all_approx_kinds();
  REQUIRE(kinds.size() == 6);
  const char* names[6] = {"u2star",
                          "shifted_power",
                          "resolvent_lambda2_L",
                          "resolvent_lambda2_Lstar",
                          "normalized_lambda2",
                          "normalized_lambda2_star"};
  for (int i = 0; i < 6; ++i) {
    CHECK(kinds[i] == static_cast<ApproxKind>(i));
    CHECK(std::strcmp(approx_kind_name(kinds[i]), names[i]) == 0);
  }
}

TEST_CASE("every kind reproduces u2star exactly on the expectation graph") {
  const int n = 50;
  const double p = 0.4, q = 0.1;
  const SampledGraph g = expectation_graph(n, p, q);
  const std::vector<double> us = u2star(n);

  // On the expectation graph the data-dependent eigenvalues equal their
  // closed forms, so both members of each star/data pair coincide.
  ApproxSpectra spectra;
  spectra.lambda2_L = n * q;
  spectra.lambda2_Lsym = 2.0 * q / (p + q);

  for (ApproxKind kind : all_approx_kinds()) {
    CAPTURE(approx_kind_name(kind));
    const std::vector<double> ut = approx_vector(kind, g, spectra);
    REQUIRE(static_cast<int>(ut.size()) == n);
    for (int i = 0; i < n; ++i) {
      CHECK(std::fabs(ut[i] - us[i]) <= 1e-10);
    }
    const ApproxReport rep = approx_report(kind, g, us, spectra);
    CHECK(rep.kind == kind);
    CHECK(rep.sup_error <= 1e-8);
    CHECK(std::fabs(rep.margin - 1.0) <= 1e-8);  // sqrt(n) * 1/sqrt(n)
    CHECK(rep.recovered_by_sign);
  }
}

TEST_CASE("report metrics match hand-computed values") {
  SampledGraph g;
  g.params = SbmParams::direct(4, 0.5, 0.25);
  g.adjacency = SymMatrix::dense(4);
  g.ground_truth = Labeling::ground_truth(4);

  const std::vector<double> u2 = u2star(4);  // (.5, .5, -.5, -.5)
  const std::vector<double> ut = {0.6, 0.4, -0.45, -0.55};
  const ApproxReport rep = approx_report(ApproxKind::U2Star, g, u2, ut);
  // sup_error = 2 * max(.1, .1, .05, .05); margin = 2 * min(z_i ut_i).
  CHECK(std::fabs(rep.sup_error - 0.2) <= 1e-12);
  CHECK(std::fabs(rep.margin - 0.8) <= 1e-12);
  CHECK(rep.recovered_by_sign);

  // One entry on the wrong side drives the margin negative.
  const std::vector<double> bad = {0.6, -0.4, -0.45, -0.55};
  const ApproxReport rep2 = approx_report(ApproxKind::U2Star, g, u2, bad);
  CHECK(std::fabs(rep2.margin - (-0.8)) <= 1e-12);
  CHECK_FALSE(rep2.recovered_by_sign);
  // sup_error ignores signs of the truth, only the difference counts:
  // 2 * max(.1, .9, .05, .05) from the flipped second entry.
  CHECK(std::fabs(rep2.sup_error - 1.8) <= 1e-12);

  // utilde == u2 gives a zero sup error.
  const ApproxReport rep3 = approx_report(ApproxKind::U2Star, g, u2, u2);
  CHECK(rep3.sup_error == 0.0);
  CHECK(std::fabs(rep3.margin - 1.0) <= 1e-12);

  const std::vector<double> short_vec = {1.0, 2.0};
  CHECK_THROWS_AS(approx_report(ApproxKind::U2Star, g, u2, short_vec),
                  ParameterError);
}

TEST_CASE("approximations track the fiedler vector on a sampled graph") {
  const SbmParams params = SbmParams::critical(400, 10.0, 2.0);
  const SampledGraph g = sample(params, 3);

  EigOptions opts;
  opts.kernel_hint = std::vector<double>(params.n, 1.0);
  const SymMatrix L = unnormalized_laplacian(g.adjacency);
  const Spectrum sl = smallest_k(L, 3, opts);
  const Spectrum sn =
      generalized_smallest_k(L, g.adjacency.row_sums(), 2, opts);

  ApproxSpectra spectra;
  spectra.lambda2_L = sl.eigenvalues[1];
  spectra.lambda2_Lsym = sn.eigenvalues[1];

  const std::vector<double> ref = u2star(params.n);
  const std::vector<double> u2L = orient(sl.eigenvectors[1], ref);
  const std::vector<double> u2N = orient(sn.eigenvectors[1], ref);

  for (ApproxKind kind : all_approx_kinds()) {
    CAPTURE(approx_kind_name(kind));
    const bool normalized = kind == ApproxKind::NormalizedLambda2 ||
                            kind == ApproxKind::NormalizedLambda2Star;
    const std::vector<double>& u2 = normalized ? u2N : u2L;
    const ApproxReport rep = approx_report(kind, g, u2, spectra);
    // Well inside the exact-recovery regime every candidate stays close to
    // the Fiedler vector and recovers the partition by sign.
    CHECK(rep.sup_error > 0.0);
    CHECK(rep.sup_error < 2.0);
    CHECK(rep.margin > 0.0);
    CHECK(rep.recovered_by_sign);
  }
}

TEST_CASE("shifted power rejects a near-singular shift denominator") {
  const SampledGraph g = two_cliques(8);  // n(p+q)/2 = 4
  ApproxSpectra spectra;
  spectra.lambda2_L = 4.0;
  CHECK_THROWS_AS(approx_vector(ApproxKind::ShiftedPower, g, spectra),
                  NumericError);
}

TEST_CASE("resolvent reports the first near-singular pivot") {
  const SampledGraph g = two_cliques(8);  // all degrees are 4
  ApproxSpectra spectra;
  spectra.lambda2_L = 4.0;
  CHECK_THROWS_AS(approx_vector(ApproxKind::ResolventLambda2L, g, spectra),
                  NearSingularResolventError);
  try {
    approx_vector(ApproxKind::ResolventLambda2L, g, spectra);
  } catch (const NearSingularResolventError& e) {
    CHECK(e.vertex() == 0);
  }
  // The Lstar variant shifts by nq = 0 here and stays regular.
  CHECK_NOTHROW(approx_vector(ApproxKind::ResolventLambda2LStar, g, spectra));
}

TEST_CASE("normalized kinds reject isolated vertices and unit lambda2") {
  const SampledGraph empty = sample(SbmParams::direct(6, 0.0, 0.0), 1);
  ApproxSpectra spectra;
  spectra.lambda2_Lsym = 0.5;
  CHECK_THROWS_AS(approx_vector(ApproxKind::NormalizedLambda2, empty, spectra),
                  IsolatedVertexError);

  const SampledGraph g = two_cliques(8);
  spectra.lambda2_Lsym = 1.0;  // factor 1 - lambda2 = 0
  CHECK_THROWS_AS(approx_vector(ApproxKind::NormalizedLambda2, g, spectra),
                  NumericError);
}

TEST_CASE("leave-one-out matrix replaces one row and column by expectations") {
  const SbmParams params = SbmParams::direct(6, 0.7, 0.2);
  const SampledGraph g = sample(params, 9);
  const int m = 4;  // in the second block
  const SymMatrix am = leave_one_out_matrix(g, m);

  REQUIRE(am.n() == 6);
  CHECK(am.is_dense());
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const double got = am.at(i, j);
      double want;
      if (i != m && j != m) {
        want = g.adjacency.at(i, j);
      } else if (i == m && j == m) {
        want = 0.7;  // self_loops on: the diagonal expectation is p
      } else {
        const int other = i == m ? j : i;
        want = (other >= 3) ? 0.7 : 0.2;  // same block as m = second half
      }
      CAPTURE(i);
      CAPTURE(j);
      CHECK(got == want);
    }
  }

  // Without self loops the replaced diagonal entry is zero.
  const SampledGraph g2 = sample(SbmParams::direct(6, 0.7, 0.2, false), 9);
  CHECK(leave_one_out_matrix(g2, m).at(m, m) == 0.0);

  CHECK_THROWS_AS(leave_one_out_matrix(g, -1), ParameterError);
  CHECK_THROWS_AS(leave_one_out_matrix(g, 6), ParameterError);
}

TEST_CASE("default leave-one-out vertices are deterministic and distinct") {
  const SampledGraph g = sample(SbmParams::critical(100, 8.0, 1.0), 21);
  const std::vector<int> a = default_loo_vertices(g, 10);
  const std::vector<int> b = default_loo_vertices(g, 10);
  REQUIRE(a.size() == 10);
  CHECK(a == b);
  std::set<int> uniq(a.begin(), a.end());
  CHECK(uniq.size() == 10);
  for (int v : a) {
    CHECK(v >= 0);
    CHECK(v < 100);
  }
  // A different graph seed draws a different sample.
  const SampledGraph g2 = sample(SbmParams::critical(100, 8.0, 1.0), 22);
  CHECK(default_loo_vertices(g2, 10) != a);

  CHECK_THROWS_AS(default_loo_vertices(g, 0), ParameterError);
  CHECK_THROWS_AS(default_loo_vertices(g, 101), ParameterError);
}

TEST_CASE("leave-one-out diagnostic is zero when the replacement is exact") {
  // p = q = 1 with loops: every entry of A is 1, which is also its
  // expectation, so A^(m) == A and the ratio vanishes identically.
  const SampledGraph g = sample(SbmParams::direct(10, 1.0, 1.0), 1);
  const std::vector<double> ratios =
      leave_one_out_diagnostic(g, Method::Unnormalized, {0, 3, 7});
  REQUIRE(ratios.size() == 3);
  for (double r : ratios) CHECK(r <= 1e-10);
}

TEST_CASE("leave-one-out diagnostic stays bounded on a recoverable graph") {
  const SampledGraph g = sample(SbmParams::critical(120, 12.0, 1.0), 13);
  for (Method m : {Method::Unnormalized, Method::Normalized}) {
    CAPTURE(method_name(m));
    const std::vector<double> ratios =
        leave_one_out_diagnostic(g, m, default_loo_vertices(g, 5));
    REQUIRE(ratios.size() == 5);
    for (double r : ratios) {
      CHECK(std::isfinite(r));
      CHECK(r >= 0.0);
      CHECK(r < 50.0);
    }
  }
}
