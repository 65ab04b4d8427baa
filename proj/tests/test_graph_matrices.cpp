#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "specbm/eigensolver.hpp"
#include "specbm/errors.hpp"
#include "specbm/graph_matrices.hpp"
#include "specbm/jacobi.hpp"
#include "specbm/rng.hpp"
#include "specbm/sbm.hpp"
#include "specbm/vec.hpp"

#ifdef SPECBM_HAVE_EIGEN
#include <Eigen/Dense>
#endif

using namespace specbm;

namespace {

SymMatrix from_entries(int n, const std::vector<std::vector<double>>& rows) {
  SymMatrix m = SymMatrix::dense(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) m.set(i, j, rows[i][j]);
  return m;
}

std::vector<double> jacobi_values(const SymMatrix& m) {
  std::vector<double> full;
  m.unpack_full(full);
  return jacobi_eigensystem(full, m.n()).values;
}

SymMatrix complete_graph(int n) {  // no loops
  SymMatrix m = SymMatrix::dense(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) m.set(i, j, 1.0);
  return m;
}

}  // namespace

TEST_CASE("degree_profile on the textbook examples") {
  const Labeling ref = Labeling::ground_truth(4);

  SymMatrix ones = SymMatrix::dense(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j <= i; ++j) ones.set(i, j, 1.0);
  DegreeProfile p = degree_profile(ones, ref);
  CHECK(p.degrees == std::vector<double>{4, 4, 4, 4});
  CHECK(p.d_out == std::vector<double>{2, 2, 2, 2});
  CHECK(p.d_min == 4);
  CHECK(p.d_max == 4);

  const SymMatrix zero = SymMatrix::dense(4);
  p = degree_profile(zero, ref);
  CHECK(p.degrees == std::vector<double>{0, 0, 0, 0});
  CHECK(p.d_min == 0);

  SymMatrix single = SymMatrix::dense(4);
  single.set(2, 0, 1.0);  // edge between vertex 1 and vertex 3 (1-based)
  p = degree_profile(single, ref);
  CHECK(p.degrees == std::vector<double>{1, 0, 1, 0});
  CHECK(p.d_out == std::vector<double>{1, 0, 1, 0});

  CHECK_THROWS_AS(degree_profile(single, Labeling::ground_truth(6)),
                  ParameterError);
}

TEST_CASE("degree_profile on a sampled graph carries the nq/2 scale") {
  const SampledGraph g = sample(SbmParams::critical(100, 8.0, 2.0), 3);
  const DegreeProfile p = degree_profile(g);
  REQUIRE(p.d_out_star_scale.has_value());
  CHECK(*p.d_out_star_scale ==
        doctest::Approx(100.0 * g.params.q / 2.0).epsilon(1e-15));
  // d_out bounded by degree, and cross-edges counted correctly by brute force.
  for (int i = 0; i < 100; ++i) {
    CHECK(p.d_out[i] >= 0.0);
    CHECK(p.d_out[i] <= p.degrees[i]);
    double manual = 0.0;
    for (int j = 0; j < 100; ++j) {
      const bool cross = (i < 50) != (j < 50);
      if (cross) manual += g.adjacency.at(i, j);
    }
    CHECK(p.d_out[i] == manual);
  }
}

TEST_CASE("unnormalized Laplacian closed-form spectra") {
  // Path graph 1-2-3.
  const SymMatrix path =
      from_entries(3, {{0}, {1, 0}, {0, 1, 0}});
  const std::vector<double> pv = jacobi_values(unnormalized_laplacian(path));
  CHECK(pv[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pv[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pv[2] == doctest::Approx(3.0).epsilon(1e-12));

  // Complete graph K4 without loops: spectrum {0, 4, 4, 4}.
  const std::vector<double> kv =
      jacobi_values(unnormalized_laplacian(complete_graph(4)));
  CHECK(kv[0] == doctest::Approx(0.0).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) CHECK(kv[i] == doctest::Approx(4.0).epsilon(1e-12));

  // Zero graph: zero Laplacian.
  const SymMatrix zl = unnormalized_laplacian(SymMatrix::dense(5));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(zl.at(i, j) == 0.0);
}

TEST_CASE("Laplacian row sums vanish on sampled graphs") {
  const SampledGraph g = sample(SbmParams::critical(150, 7.0, 2.0), 11);
  const SymMatrix L = unnormalized_laplacian(g.adjacency);
  const std::vector<double> ones(150, 1.0);
  const std::vector<double> y = L.symv(ones);
  for (double v : y) CHECK(std::fabs(v) <= 1e-12);
}

TEST_CASE("normalized Laplacian closed-form spectra and kernel") {
  const std::vector<double> kv =
      jacobi_values(normalized_laplacian(complete_graph(4)));
  CHECK(kv[0] == doctest::Approx(0.0).epsilon(1e-12));
  for (int i = 1; i < 4; ++i)
    CHECK(kv[i] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

  // Single edge on two vertices: {0, 2}.
  const SymMatrix edge = from_entries(2, {{0}, {1, 0}});
  const std::vector<double> ev = jacobi_values(normalized_laplacian(edge));
  CHECK(ev[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(2.0).epsilon(1e-12));

  // Kernel direction D^{1/2} 1.
  const SampledGraph g = sample(SbmParams::critical(80, 9.0, 3.0), 21);
  const SymMatrix Ls = normalized_laplacian(g.adjacency);
  const std::vector<double> d = g.adjacency.row_sums();
  std::vector<double> v(80);
  for (int i = 0; i < 80; ++i) v[i] = std::sqrt(d[i]);
  const std::vector<double> y = Ls.symv(v);
  CHECK(norm2(y) <= 1e-10 * norm2(v));
}

TEST_CASE("isolated vertex rejected with its index") {
  SymMatrix m = SymMatrix::dense(4);
  m.set(1, 0, 1.0);
  m.set(3, 2, 0.0);  // vertices 3 and 4 isolated
  try {
    normalized_laplacian(m);
    FAIL("expected IsolatedVertexError");
  } catch (const IsolatedVertexError& e) {
    CHECK(e.vertex() == 2);
    CHECK(std::string(e.what()).find("3") != std::string::npos);  // 1-based
  }
}

TEST_CASE("both Laplacians are positive semidefinite on samples") {
  for (std::uint64_t s : {1ULL, 2ULL, 3ULL}) {
    const SampledGraph g = sample(SbmParams::critical(60, 10.0, 3.0), s);
    const std::vector<double> lv =
        jacobi_values(unnormalized_laplacian(g.adjacency));
    const std::vector<double> sv =
        jacobi_values(normalized_laplacian(g.adjacency));
    CHECK(lv.front() >= -1e-10);
    CHECK(sv.front() >= -1e-10);
  }
}

TEST_CASE("pencil equivalence: (L,D), Lsym, and I - D^{-1}A agree") {
  const SampledGraph g = sample(SbmParams::critical(64, 12.0, 4.0), 4);
  const SymMatrix L = unnormalized_laplacian(g.adjacency);
  const std::vector<double> d = g.adjacency.row_sums();

  const Spectrum gen = generalized_smallest_k(L, d, 3);
  const Spectrum sym = smallest_k(normalized_laplacian(g.adjacency), 3);
  for (int i = 0; i < 3; ++i)
    CHECK(gen.eigenvalues[i] ==
          doctest::Approx(sym.eigenvalues[i]).epsilon(1e-8));

  // (lambda, u) of (L, D)  <=>  (1 - lambda, u) of D^{-1} A: check the
  // residual of the random-walk form on the generalized eigenvector.
  const std::vector<double>& u = gen.eigenvectors[1];
  const std::vector<double> au = g.adjacency.symv(u);
  const double lam = gen.eigenvalues[1];
  for (int i = 0; i < 64; ++i) {
    CHECK(au[i] / d[i] == doctest::Approx((1.0 - lam) * u[i]).epsilon(1e-6));
  }
}

TEST_CASE("u2star quadratic form counts cross edges exactly") {
  const SampledGraph g = sample(SbmParams::critical(120, 9.0, 2.5), 13);
  const SymMatrix L = unnormalized_laplacian(g.adjacency);
  const std::vector<double> us = u2star(120);
  const DegreeProfile p = degree_profile(g);
  double dout_total = 0.0;
  for (double v : p.d_out) dout_total += v;
  CHECK(L.quad(us) == doctest::Approx((2.0 / 120.0) * dout_total).epsilon(1e-12));
}

TEST_CASE("spectral_norm on closed forms") {
  SymMatrix d3 = SymMatrix::dense(3);
  d3.set(0, 0, 1.0);
  d3.set(1, 1, -3.0);
  d3.set(2, 2, 2.0);
  CHECK(spectral_norm(d3, 1e-8) == doctest::Approx(3.0).epsilon(1e-8));

  SymMatrix j4 = SymMatrix::dense(4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j <= i; ++j) j4.set(i, j, 1.0);
  CHECK(spectral_norm(j4, 1e-8) == doctest::Approx(4.0).epsilon(1e-8));
}

#ifdef SPECBM_HAVE_EIGEN
TEST_CASE("spectral_norm matches a dense oracle, both paths") {
  CounterRng rng(404);
  std::uint64_t k = 0;
  for (int n : {10, 40, 100}) {  // 100 exercises the power-iteration path
    SymMatrix m = SymMatrix::dense(n);
    Eigen::MatrixXd em(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j <= i; ++j) {
        const double v = 2.0 * rng.uniform(k++) - 1.0;
        m.set(i, j, v);
        em(i, j) = em(j, i) = v;
      }
    }
    const Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(em).eigenvalues();
    const double expect =
        std::max(std::fabs(ev(0)), std::fabs(ev(n - 1)));
    const double got = spectral_norm(m, 1e-8);
    CHECK(got == doctest::Approx(expect).epsilon(1e-6));
  }
}
#endif

TEST_CASE("normalized_diff_op matches the dense difference") {
  const SampledGraph g = sample(SbmParams::critical(40, 10.0, 3.0), 99);
  const int n = 40;
  const LinOp op = normalized_diff_op(g);

  // Dense reference: Lsym - (I - 2/(n(p+q)) Astar).
  const SymMatrix Ls = normalized_laplacian(g.adjacency);
  const Expectation e = expectation_matrices(g.params);
  const double scale = 2.0 / (n * (g.params.p + g.params.q));
  CounterRng rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<double> x(n), got(n);
    for (int i = 0; i < n; ++i) x[i] = 2.0 * rng.uniform(rep * n + i) - 1.0;
    op.apply(x.data(), got.data());
    const std::vector<double> lx = Ls.symv(x);
    const std::vector<double> ax = e.Astar.symv(x);
    for (int i = 0; i < n; ++i) {
      const double expect = lx[i] - (x[i] - scale * ax[i]);
      CHECK(got[i] == doctest::Approx(expect).epsilon(1e-10));
    }
  }
}

TEST_CASE("adjacency_diff_op matches the dense difference") {
  const SampledGraph g = sample(SbmParams::direct(30, 0.7, 0.2), 5);
  const LinOp op = adjacency_diff_op(g);
  const Expectation e = expectation_matrices(g.params);
  std::vector<double> x(30, 1.0), got(30);
  x[3] = -2.0;
  op.apply(x.data(), got.data());
  const std::vector<double> ax = g.adjacency.symv(x);
  const std::vector<double> sx = e.Astar.symv(x);
  for (int i = 0; i < 30; ++i)
    CHECK(got[i] == doctest::Approx(ax[i] - sx[i]).epsilon(1e-12));
}
