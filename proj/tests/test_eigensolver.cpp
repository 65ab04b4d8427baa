#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "specbm/eigensolver.hpp"
#include "specbm/errors.hpp"
#include "specbm/graph_matrices.hpp"
#include "specbm/rng.hpp"
#include "specbm/sbm.hpp"
#include "specbm/vec.hpp"

#ifdef SPECBM_HAVE_EIGEN
#include <Eigen/Dense>
#endif

using namespace specbm;

namespace {

SymMatrix random_sym(int n, std::uint64_t seed) {
  SymMatrix m = SymMatrix::dense(n);
  CounterRng rng(seed);
  std::uint64_t k = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m.set(i, j, 2.0 * rng.uniform(k++) - 1.0);
  return m;
}

double residual_of(const SymMatrix& m, double lam, const std::vector<double>& u) {
  std::vector<double> y = m.symv(u);
  axpy(-lam, u, y);
  return norm2(y);
}

}  // namespace

#ifdef SPECBM_HAVE_EIGEN
TEST_CASE("smallest_k matches a dense oracle on random matrices up to n=64") {
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(CounterRng(500).raw(trial) % 64);
    const SymMatrix m = random_sym(n, 9000 + trial);
    Eigen::MatrixXd em(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) em(i, j) = m.at(i, j);
    const Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(em).eigenvalues();
    const double norm = std::max(std::fabs(ev(0)), std::fabs(ev(n - 1)));

    const int k = std::min(3, n);
    const Spectrum s = smallest_k(m, k);
    for (int i = 0; i < k; ++i) {
      REQUIRE(std::fabs(s.eigenvalues[i] - ev(i)) <= 1e-9 * std::max(1.0, norm));
      REQUIRE(residual_of(m, s.eigenvalues[i], s.eigenvectors[i]) <=
              1e-10 * std::max(1.0, norm));
      REQUIRE(std::fabs(norm2(s.eigenvectors[i]) - 1.0) <= 1e-12);
    }
    ++checked;
  }
  CHECK(checked == 300);
}
#endif

TEST_CASE("shift invariance (Weyl): eigenvalues of M + tI shift by t") {
  const SymMatrix m = random_sym(40, 123);
  SymMatrix shifted = SymMatrix::dense(40);
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j <= i; ++j)
      shifted.set(i, j, m.at(i, j) + (i == j ? 2.5 : 0.0));
  const Spectrum a = smallest_k(m, 3);
  const Spectrum b = smallest_k(shifted, 3);
  for (int i = 0; i < 3; ++i)
    CHECK(b.eigenvalues[i] ==
          doctest::Approx(a.eigenvalues[i] + 2.5).epsilon(1e-9));
}

TEST_CASE("Rayleigh quotients never undercut the smallest eigenvalue") {
  const SymMatrix m = random_sym(30, 55);
  const Spectrum s = smallest_k(m, 1);
  CounterRng rng(77);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> x(30);
    for (int i = 0; i < 30; ++i) x[i] = 2.0 * rng.uniform(rep * 30 + i) - 1.0;
    const double nrm = norm2(x);
    const double rq = m.quad(x) / (nrm * nrm);
    CHECK(rq >= s.eigenvalues[0] - 1e-9);
  }
}

TEST_CASE("repeated eigenvalues: identity matrix") {
  SymMatrix eye = SymMatrix::dense(12);
  for (int i = 0; i < 12; ++i) eye.set(i, i, 1.0);
  const Spectrum s = smallest_k(eye, 3);
  for (int i = 0; i < 3; ++i) {
    CHECK(s.eigenvalues[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.residuals[i] <= 1e-12);
  }
  // Orthonormal basis of the eigenspace.
  CHECK(std::fabs(dot(s.eigenvectors[0], s.eigenvectors[1])) <= 1e-10);
  CHECK(std::fabs(dot(s.eigenvectors[0], s.eigenvectors[2])) <= 1e-10);
  CHECK(s.gap_flag);  // fully degenerate gap
}

TEST_CASE("kernel hint pins the Laplacian null vector") {
  const SampledGraph g = sample(SbmParams::critical(100, 12.0, 3.0), 6);
  const SymMatrix L = unnormalized_laplacian(g.adjacency);
  EigOptions opts;
  opts.kernel_hint = std::vector<double>(100, 1.0);
  const Spectrum s = smallest_k(L, 3, opts);
  CHECK(std::fabs(s.eigenvalues[0]) <= 1e-10);
  for (double v : s.eigenvectors[0])
    CHECK(v == doctest::Approx(0.1).epsilon(1e-10));  // 1/sqrt(100)
  CHECK(s.eigenvalues[1] > 1.0);  // well-connected sample, real gap
  CHECK(!s.gap_flag);
}

TEST_CASE("Lanczos path agrees with the dense path") {
  const SampledGraph g = sample(SbmParams::critical(160, 10.0, 2.0), 17);
  const SymMatrix L = unnormalized_laplacian(g.adjacency);
  EigOptions dense_opts;
  EigOptions lanczos_opts;
  lanczos_opts.dense_cutoff = 0;  // force the operator path
  for (auto* o : {&dense_opts, &lanczos_opts}) {
    o->kernel_hint = std::vector<double>(160, 1.0);
  }
  const Spectrum d = smallest_k(L, 3, dense_opts);
  const Spectrum l = smallest_k(L, 3, lanczos_opts);
  CHECK(l.iterations > 0);
  CHECK(d.iterations == 0);
  for (int i = 0; i < 3; ++i) {
    CHECK(l.eigenvalues[i] == doctest::Approx(d.eigenvalues[i]).epsilon(1e-8));
    CHECK(std::fabs(std::fabs(dot(l.eigenvectors[i], d.eigenvectors[i])) - 1.0) <=
          1e-6);
    CHECK(residual_of(L, l.eigenvalues[i], l.eigenvectors[i]) <=
          1e-8 * std::max(1.0, l.norm_estimate));
  }
}

TEST_CASE("generalized pencil equals the normalized Laplacian spectrum") {
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const SampledGraph g = sample(SbmParams::critical(120, 11.0, 3.0), s);
    const SymMatrix L = unnormalized_laplacian(g.adjacency);
    const std::vector<double> d = g.adjacency.row_sums();
    const Spectrum gen = generalized_smallest_k(L, d, 3);
    const Spectrum sym = smallest_k(normalized_laplacian(g.adjacency), 3);
    for (int i = 0; i < 3; ++i)
      CHECK(gen.eigenvalues[i] ==
            doctest::Approx(sym.eigenvalues[i]).epsilon(1e-8));
    // Generalized residual certificate: |L u - lambda D u| / |D^{1/2} u|.
    for (int i = 0; i < 3; ++i) CHECK(gen.residuals[i] <= 1e-8);
  }
}

TEST_CASE("generalized solve rejects non-positive D") {
  const SymMatrix L = unnormalized_laplacian(random_sym(6, 2));
  std::vector<double> d(6, 1.0);
  d[4] = 0.0;
  try {
    generalized_smallest_k(L, d, 2);
    FAIL("expected IsolatedVertexError");
  } catch (const IsolatedVertexError& e) {
    CHECK(e.vertex() == 4);
  }
}

TEST_CASE("argument validation") {
  const SymMatrix m = random_sym(8, 3);
  CHECK_THROWS_AS(smallest_k(m, 0), ParameterError);
  CHECK_THROWS_AS(smallest_k(m, 9), ParameterError);
  CHECK_NOTHROW(smallest_k(m, 8));  // k = n allowed
}

TEST_CASE("tiny dimensions") {
  SymMatrix one = SymMatrix::dense(1);
  one.set(0, 0, 4.2);
  const Spectrum s1 = smallest_k(one, 1);
  CHECK(s1.eigenvalues[0] == doctest::Approx(4.2).epsilon(1e-14));
  CHECK(std::fabs(std::fabs(s1.eigenvectors[0][0]) - 1.0) <= 1e-14);

  SymMatrix two = SymMatrix::dense(2);
  two.set(0, 0, 1.0);
  two.set(1, 1, 3.0);
  two.set(1, 0, 1.0);  // eigenvalues 2 -/+ sqrt(2)
  const Spectrum s2 = smallest_k(two, 2);
  CHECK(s2.eigenvalues[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
  CHECK(s2.eigenvalues[1] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("gap_flag reports a degenerate lambda2/lambda3 gap") {
  // K4 Laplacian has spectrum {0, 4, 4, 4}: the 2-3 gap is exactly zero.
  SymMatrix k4 = SymMatrix::dense(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < i; ++j) k4.set(i, j, 1.0);
  const Spectrum s = smallest_k(unnormalized_laplacian(k4), 3);
  CHECK(s.gap_flag);

  // A well-separated diagonal matrix must not raise it.
  SymMatrix diag = SymMatrix::dense(4);
  for (int i = 0; i < 4; ++i) diag.set(i, i, i * 2.0);
  CHECK(!smallest_k(diag, 3).gap_flag);
}

TEST_CASE("orient aligns and validates") {
  const std::vector<double> ref = {1.0, 1.0, -1.0};
  std::vector<double> u = {-0.5, -0.5, 0.5};
  const std::vector<double> flipped = orient(u, ref);
  CHECK(flipped[0] == 0.5);
  CHECK(flipped[2] == -0.5);
  const std::vector<double> kept = orient(std::vector<double>{0.5, 0.5, -0.5}, ref);
  CHECK(kept[0] == 0.5);
  CHECK_THROWS_AS(orient(std::vector<double>{1.0}, ref), ParameterError);
}

TEST_CASE("norm estimate brackets the true norm loosely") {
  const SymMatrix m = random_sym(50, 31);
  const Spectrum s = smallest_k(m, 2);
  const double exact = spectral_norm(m, 1e-9);
  CHECK(s.norm_estimate >= 0.3 * exact);   // coarse but must be same scale
  CHECK(s.norm_estimate <= 3.0 * exact + 1e-9);
}
