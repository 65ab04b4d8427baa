#pragma once

namespace specbm {

// All tolerance and cutoff constants in one record so every module reads the
// same numbers. Fields are plain data; copy and tweak as needed.
struct Tolerances {
  // Eigensolver.
  double solver_tol = 1e-10;   // residual target, relative to a norm estimate
  int dense_cutoff = 2048;     // dense tridiagonalization path for n <= cutoff
  int lanczos_max_dim = 500;   // Krylov dimension cap (full reorthogonalization)
  double gap_rel = 1e-8;       // gap_flag when |l2 - l3| < gap_rel * max(1,|M|)

  // Clustering.
  double zero_tol = 1e-12;     // |u_i| below this counts as a zero Fiedler entry

  // Approximations.
  double resolvent_tol = 1e-9;  // min |d_i - lambda| before resolvent is rejected

  // Spectral norm power iteration.
  double power_tol = 1e-6;
  int power_max_iter = 20000;
  int power_exact_cutoff = 64;  // exact dense spectrum at or below this size

  // Probabilistic eigenvalue bounds (empirically calibrated constants; see
  // bounds.hpp for the inequalities they parameterize). The c values were
  // frozen from a 50-trial calibration at n=2000, alpha=10, beta=2: the
  // lower-side deviation (2q/(p+q) - l2) * sqrt(ln n) never exceeded 0.07
  // and the upper-side deviation (l2 - 2q/(p+q)) * sqrt(n) stayed negative,
  // so 0.5 / 1.0 leave roughly 7x headroom without being vacuous.
  double lambda3_eps = 0.1;     // slack in the lambda3(L) lower bound
  double lsym_lower_c = 0.5;    // lambda2(Lsym) >= 2q/(p+q) - c/sqrt(ln n)
  double lsym_upper_c = 1.0;    // lambda2(Lsym) <= 2q/(p+q) + c'/sqrt(n)
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace specbm
