#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "specbm/approximations.hpp"
#include "specbm/bounds.hpp"
#include "specbm/clustering.hpp"
#include "specbm/config.hpp"
#include "specbm/eigensolver.hpp"

namespace specbm {

// Monte Carlo sweep description. Cells with alpha <= beta (or parameters that
// fail validation at the given n) are emitted as null results, never executed.
struct GridSpec {
  int n = 600;
  std::vector<double> alphas;  // ascending
  std::vector<double> betas;   // ascending
  int trials = 20;
  std::uint64_t master_seed = 0;
  std::vector<Method> methods = {Method::Unnormalized, Method::Normalized};

  void validate() const;  // throws ParameterError
};

// The grid used by the stock phase/agreement sweeps: alpha 1..30 step 1,
// beta 0.5..10 step 0.5, n=600, trials=20.
GridSpec default_grid();

// Per-method aggregate within one grid cell.
struct MethodCell {
  Method method = Method::Unnormalized;
  int successes = 0;
  double success_rate = 0.0;
  double mean_agreement = 0.0;
  std::map<std::string, int> bound_pass_counts;  // "error" -> failed trials

  int errors() const {
    auto it = bound_pass_counts.find("error");
    return it == bound_pass_counts.end() ? 0 : it->second;
  }
};

struct CellResult {
  double alpha = 0.0;
  double beta = 0.0;
  int alpha_index = 0;
  int beta_index = 0;
  bool valid = false;  // false => null cell, no trials executed
  int trials = 0;
  std::vector<std::uint64_t> trial_seeds;
  std::vector<MethodCell> per_method;  // aligned with GridSpec::methods
};

// Eigensolver profile tuned for the sweeps (iterative path engages earlier
// than the library default; results are identical, only runtime differs).
EigOptions experiment_eig_options();

// Success-rate sweep. jobs <= 0 means use the available parallelism.
// Output is independent of jobs (fixed per-trial seeds, serial aggregation).
std::vector<CellResult> phase_diagram(const GridSpec& spec,
                                      const EigOptions& opts,
                                      int jobs = 1);
std::vector<CellResult> phase_diagram(const GridSpec& spec);

// Mean-agreement sweep; same execution plan as phase_diagram (both aggregates
// are computed in one pass), kept as a distinct entry point for callers.
std::vector<CellResult> agreement_map(const GridSpec& spec,
                                      const EigOptions& opts,
                                      int jobs = 1);
std::vector<CellResult> agreement_map(const GridSpec& spec);

// CSV with header alpha,beta,method,trials,successes,success_rate,
// mean_agreement,errors; one row per (cell, method); LF line endings.
// Null cells carry trials=0 and empty metric fields.
std::string grid_csv(const GridSpec& spec, const std::vector<CellResult>& cells);

struct FiveNumber {
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

// Type-7 (linear interpolation) sample quantile of sorted data.
double quantile_type7(const std::vector<double>& sorted, double p);
FiveNumber five_number_summary(std::vector<double> values);

struct BoxplotRow {
  ApproxKind kind = ApproxKind::U2Star;
  int trials = 0;           // attempted
  int excluded_trials = 0;  // errored, excluded from summaries
  int recovered = 0;        // margin > 0 among included trials
  FiveNumber sup_error;
  FiveNumber margin;
};

std::vector<BoxplotRow> approx_boxplot_study(int n, double alpha, double beta,
                                             int trials,
                                             const std::vector<ApproxKind>& kinds,
                                             std::uint64_t master_seed,
                                             const EigOptions& opts,
                                             int jobs = 1);
std::vector<BoxplotRow> approx_boxplot_study(int n, double alpha, double beta,
                                             int trials,
                                             const std::vector<ApproxKind>& kinds,
                                             std::uint64_t master_seed);

// CSV with header kind,metric,min,q1,median,q3,max,excluded_trials; two rows
// (sup_error, margin) per kind.
std::string boxplot_csv(const std::vector<BoxplotRow>& rows);

// Pass-rate / empirical-constant study for the eigenvalue bounds and the
// normalized-Laplacian concentration ratio, per graph size.
struct BoundStudyRow {
  int n = 0;
  int trials = 0;
  int errors = 0;                        // trials that threw
  std::map<std::string, int> passes;     // per bound-report name
  double c_mean = 0.0;                   // concentration constant C
  double c_max = 0.0;
  double norm_mean = 0.0;                // |Lsym - Lsym*|
  double norm_max = 0.0;
};

std::vector<BoundStudyRow> bound_pass_rate_study(const std::vector<int>& n_list,
                                                 const RegimeConstants& rc,
                                                 int trials,
                                                 std::uint64_t master_seed,
                                                 const Tolerances& cfg,
                                                 const EigOptions& opts,
                                                 int jobs = 1);
std::vector<BoundStudyRow> bound_pass_rate_study(const std::vector<int>& n_list,
                                                 const RegimeConstants& rc,
                                                 int trials,
                                                 std::uint64_t master_seed);

// CSV with header n,name,trials,passes,pass_rate,errors,stat_mean,stat_max.
// Bound rows leave the stat columns empty; rows named concentration_C and
// lsym_diff_norm carry the empirical constants and leave passes empty.
std::string bound_study_csv(const std::vector<BoundStudyRow>& rows);

// Shared fixed-format floating-point rendering for all CSV/SVG emitters.
std::string format_double(double v);

}  // namespace specbm
