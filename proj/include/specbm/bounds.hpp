#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specbm/config.hpp"
#include "specbm/graph_matrices.hpp"
#include "specbm/sbm.hpp"
#include "specbm/sym_matrix.hpp"

namespace specbm {

// Critical-regime constants (p = alpha ln(n)/n, q = beta ln(n)/n).
struct RegimeConstants {
  double alpha = 0.0;
  double beta = 0.0;
};

// One checked inequality: holds <=> lhs <= rhs (orientation per bound is
// documented at the emission site); context carries measured intermediates.
struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  std::map<std::string, double> context;
};

// f(xi; alpha, beta) = (a+b-2xi)/2 * ln((a+b-2xi)/(a+b)) + xi - 1, natural
// log; the large-deviation exponent behind minimum-degree bounds. Requires
// 0 < xi < (alpha+beta)/2.
double f_exponent(double xi, const RegimeConstants& rc);

// Condition A1: exists 0 < xi < (alpha-beta)/2 with f(xi) > 0. Since f is
// increasing in xi this reduces to f at the right endpoint; xi_star is the
// smallest xi with f(xi) > 0, bisected to 1e-6.
struct A1Result {
  bool holds = false;
  std::optional<double> xi_star;
};
A1Result condition_A1(const RegimeConstants& rc);

// Condition A2: sqrt(alpha) - sqrt(beta) > sqrt(2), strictly.
bool condition_A2(const RegimeConstants& rc);

// Exponent e with P(Binom(n/2,p) - Binom(n/2,q) <= eps ln n) <= n^e:
// e = -(sqrt(alpha)-sqrt(beta))^2/2 + eps*ln(alpha/beta)/2. beta > 0.
double binomial_diff_tail_exponent(const RegimeConstants& rc, double eps);

// Residual-based eigenvector perturbation check for the pencil (M, N) with
// positive diagonal N: |P u_hat| <= sqrt(cond(N)) |(N^{-1}M - l I)u_hat| / delta,
// P the orthogonal projector onto span(X1)^perp, delta the spectral gap to
// the eigenvalues not represented by X1. Throws DegenerateGapError if
// delta <= 0. holds must come out true on valid inputs.
BoundReport dk_bound_check(const SymMatrix& M, const std::vector<double>& N,
                           const std::vector<std::vector<double>>& X1,
                           double lambda_hat,
                           const std::vector<double>& u_hat);

// Instance checks of the eigenvalue bounds around lambda2(L), lambda3(L)
// and lambda2(Lsym). Report (a) is deterministic (min-max); (b), (c), (d;
// two-sided) are probabilistic and only ever reported, never asserted.
struct SandwichSpectra {
  double lambda2_L = 0.0;
  double lambda3_L = 0.0;
  double lambda2_Lsym = 0.0;
};
std::vector<BoundReport> eigenvalue_sandwich_check(
    const SampledGraph& graph, const SandwichSpectra& spectra,
    const DegreeProfile& profile,
    const Tolerances& cfg = default_tolerances());

// Empirical constant of the normalized-Laplacian concentration inequality:
// C = |Lsym - Lsym*| min{d_min, d*_min}^3 / (n p)^{5/2}, plus the raw norm
// and the sqrt(np)-scaled norm.
struct ConcentrationResult {
  double C = 0.0;
  double norm = 0.0;         // |Lsym - Lsym*|
  double norm_scaled = 0.0;  // |Lsym - Lsym*| * sqrt(n p)
};
ConcentrationResult laplacian_concentration_ratio(
    const SampledGraph& graph, const Tolerances& cfg = default_tolerances());

}  // namespace specbm
