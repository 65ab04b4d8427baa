#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "specbm/labeling.hpp"
#include "specbm/sym_matrix.hpp"

namespace specbm {

// Two-block symmetric stochastic block model parameters. The critical regime
// sets p = alpha*ln(n)/n and q = beta*ln(n)/n (natural logarithm throughout).
struct SbmParams {
  int n = 0;
  double p = 0.0;
  double q = 0.0;
  bool self_loops = true;
  // Present when constructed through the critical regime.
  std::optional<double> alpha, beta;

  static SbmParams direct(int n, double p, double q, bool self_loops = true);
  static SbmParams critical(int n, double alpha, double beta,
                            bool self_loops = true);
};

struct SampledGraph {
  SbmParams params;
  SymMatrix adjacency;  // 0/1 entries, exactly symmetric
  std::uint64_t seed = 0;
  Labeling ground_truth;
};

// Draw a graph. Each unordered pair {i,j}, i <= j (the diagonal only when
// self_loops), is a Bernoulli draw: probability p within a block, q across.
// Pair {i,j} uses counter i*n+j of a counter-based PRNG, so the draw order
// is logically row-major over i <= j and the result is identical on every
// platform and at every thread count.
SampledGraph sample(const SbmParams& params, std::uint64_t seed);

// Expectation objects: Astar has p on within-block entries (diagonal
// included), q across; Dstar = n(p+q)/2 * I; u2star = (1/sqrt(n)) * (+1...,-1...).
struct Expectation {
  SymMatrix Astar;
  double DstarScale = 0.0;
  std::vector<double> u2star;
};
Expectation expectation_matrices(const SbmParams& params);

// u2star alone (unit norm, +1/sqrt(n) on the first half).
std::vector<double> u2star(int n);

// Matrix-free A* application: y = Astar x in O(n) using the block structure.
void astar_apply(const SbmParams& params, const double* x, double* y);

// Edge-list text format: header "n <n>", then one "i j" line per stored
// edge (1-based, i <= j, loops as "i i"), LF endings.
void write_edge_list(const SymMatrix& adjacency, std::ostream& os);
SymMatrix read_edge_list(std::istream& is);

}  // namespace specbm
