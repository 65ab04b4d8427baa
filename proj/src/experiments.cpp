#include "specbm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "specbm/errors.hpp"
#include "specbm/graph_matrices.hpp"
#include "specbm/rng.hpp"

namespace specbm {

namespace {

int resolve_jobs(int jobs) {
#ifdef _OPENMP
  return jobs <= 0 ? omp_get_max_threads() : jobs;
#else
  (void)jobs;
  return 1;
#endif
}

bool is_valid_cell(int n, double alpha, double beta) {
  if (!(alpha > beta)) return false;
  try {
    (void)SbmParams::critical(n, alpha, beta);
  } catch (const ParameterError&) {
    return false;
  }
  return true;
}

// One method's outcome on one trial.
struct MethodTrial {
  bool error = false;
  bool success = false;
  double agreement = 0.5;  // errored trials count as chance-level agreement
};

struct GridTrial {
  std::array<MethodTrial, 2> out;
};

GridTrial run_grid_trial(const GridSpec& spec, double alpha, double beta,
                         std::uint64_t seed, const EigOptions& opts) {
  GridTrial trial;
  const SampledGraph g = sample(SbmParams::critical(spec.n, alpha, beta), seed);
  for (std::size_t im = 0; im < spec.methods.size(); ++im) {
    MethodTrial& mt = trial.out[im];
    try {
      const ClusterResult r = cluster(g, spec.methods[im], opts);
      mt.agreement = agreement(r.labeling, g.ground_truth);
      mt.success = exactly_recovered(r, g.ground_truth);
    } catch (const NumericError&) {
      mt.error = true;
    } catch (const std::exception&) {
      mt.error = true;  // defensive: never abandon the sweep on one trial
    }
  }
  return trial;
}

std::vector<CellResult> run_grid(const GridSpec& spec, const EigOptions& opts,
                                 int jobs) {
  spec.validate();
  const std::size_t na = spec.alphas.size();
  const std::size_t nb = spec.betas.size();

  std::vector<CellResult> cells(na * nb);
  struct WorkItem {
    std::size_t cell;
    int trial;
    std::uint64_t seed;
    double alpha, beta;
  };
  std::vector<WorkItem> work;
  for (std::size_t ai = 0; ai < na; ++ai) {
    for (std::size_t bi = 0; bi < nb; ++bi) {
      const std::size_t ci = ai * nb + bi;
      CellResult& cell = cells[ci];
      cell.alpha = spec.alphas[ai];
      cell.beta = spec.betas[bi];
      cell.alpha_index = static_cast<int>(ai);
      cell.beta_index = static_cast<int>(bi);
      cell.per_method.resize(spec.methods.size());
      for (std::size_t im = 0; im < spec.methods.size(); ++im) {
        cell.per_method[im].method = spec.methods[im];
      }
      cell.valid = is_valid_cell(spec.n, cell.alpha, cell.beta);
      if (!cell.valid) continue;
      cell.trials = spec.trials;
      for (int t = 0; t < spec.trials; ++t) {
        const std::uint64_t seed = derive_seed(
            spec.master_seed, static_cast<std::uint64_t>(ai),
            static_cast<std::uint64_t>(bi), static_cast<std::uint64_t>(t));
        cell.trial_seeds.push_back(seed);
        work.push_back({ci, t, seed, cell.alpha, cell.beta});
      }
    }
  }

  std::vector<GridTrial> slots(work.size());
  const int nj = resolve_jobs(jobs);
  const long total = static_cast<long>(work.size());
#ifdef _OPENMP
#pragma omp parallel for num_threads(nj) schedule(dynamic)
#endif
  for (long w = 0; w < total; ++w) {
    const WorkItem& item = work[static_cast<std::size_t>(w)];
    slots[static_cast<std::size_t>(w)] =
        run_grid_trial(spec, item.alpha, item.beta, item.seed, opts);
  }
  (void)nj;

  // Serial aggregation in work order: independent of the execution schedule.
  for (std::size_t w = 0; w < work.size(); ++w) {
    CellResult& cell = cells[work[w].cell];
    for (std::size_t im = 0; im < spec.methods.size(); ++im) {
      const MethodTrial& mt = slots[w].out[im];
      MethodCell& mc = cell.per_method[im];
      if (mt.error) mc.bound_pass_counts["error"] += 1;
      if (mt.success) mc.successes += 1;
      mc.mean_agreement += mt.agreement;
    }
  }
  for (CellResult& cell : cells) {
    if (!cell.valid) continue;
    for (MethodCell& mc : cell.per_method) {
      mc.success_rate = static_cast<double>(mc.successes) / cell.trials;
      mc.mean_agreement /= cell.trials;
    }
  }
  return cells;
}

const char* kSandwichNames[] = {
    "lambda2_L_upper",    "lambda2_L_lower",      "lambda3_L_lower",
    "lambda2_Lsym_lower", "lambda2_Lsym_upper",
};

}  // namespace

void GridSpec::validate() const {
  if (n < 4 || n % 2 != 0) {
    throw ParameterError("GridSpec: n must be an even integer >= 4");
  }
  if (trials < 1) throw ParameterError("GridSpec: trials must be >= 1");
  if (alphas.empty() || betas.empty()) {
    throw ParameterError("GridSpec: alphas and betas must be non-empty");
  }
  if (!std::is_sorted(alphas.begin(), alphas.end()) ||
      !std::is_sorted(betas.begin(), betas.end())) {
    throw ParameterError("GridSpec: alphas and betas must be ascending");
  }
  if (methods.empty() || methods.size() > 2 ||
      (methods.size() == 2 && methods[0] == methods[1])) {
    throw ParameterError("GridSpec: methods must be a non-empty distinct set");
  }
}

GridSpec default_grid() {
  GridSpec spec;
  for (int i = 1; i <= 30; ++i) spec.alphas.push_back(static_cast<double>(i));
  for (int j = 1; j <= 20; ++j) spec.betas.push_back(0.5 * j);
  return spec;
}

EigOptions experiment_eig_options() {
  EigOptions opts;
  opts.dense_cutoff = 384;
  return opts;
}

std::vector<CellResult> phase_diagram(const GridSpec& spec,
                                      const EigOptions& opts, int jobs) {
  return run_grid(spec, opts, jobs);
}
std::vector<CellResult> phase_diagram(const GridSpec& spec) {
  return run_grid(spec, experiment_eig_options(), 1);
}
std::vector<CellResult> agreement_map(const GridSpec& spec,
                                      const EigOptions& opts, int jobs) {
  return run_grid(spec, opts, jobs);
}
std::vector<CellResult> agreement_map(const GridSpec& spec) {
  return run_grid(spec, experiment_eig_options(), 1);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string grid_csv(const GridSpec& spec,
                     const std::vector<CellResult>& cells) {
  std::ostringstream os;
  os << "alpha,beta,method,trials,successes,success_rate,mean_agreement,"
        "errors\n";
  for (const CellResult& cell : cells) {
    for (std::size_t im = 0; im < spec.methods.size(); ++im) {
      os << format_double(cell.alpha) << ',' << format_double(cell.beta) << ','
         << method_name(spec.methods[im]) << ',';
      if (!cell.valid) {
        os << "0,,,,\n";
        continue;
      }
      const MethodCell& mc = cell.per_method[im];
      os << cell.trials << ',' << mc.successes << ','
         << format_double(mc.success_rate) << ','
         << format_double(mc.mean_agreement) << ',' << mc.errors() << '\n';
    }
  }
  return os.str();
}

double quantile_type7(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw ParameterError("quantile of empty sample");
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * frac;
}

FiveNumber five_number_summary(std::vector<double> values) {
  FiveNumber f;
  if (values.empty()) return f;
  std::sort(values.begin(), values.end());
  f.min = values.front();
  f.q1 = quantile_type7(values, 0.25);
  f.median = quantile_type7(values, 0.5);
  f.q3 = quantile_type7(values, 0.75);
  f.max = values.back();
  return f;
}

namespace {

struct BoxTrialKind {
  bool error = false;
  double sup_error = 0.0;
  double margin = 0.0;
  bool recovered = false;
};

struct BoxTrial {
  bool solver_error = false;
  std::vector<BoxTrialKind> kinds;
};

BoxTrial run_box_trial(int n, double alpha, double beta, std::uint64_t seed,
                       const std::vector<ApproxKind>& kinds,
                       const EigOptions& opts) {
  BoxTrial trial;
  trial.kinds.resize(kinds.size());
  try {
    const SampledGraph g = sample(SbmParams::critical(n, alpha, beta), seed);
    const std::vector<double> us = u2star(n);
    const SymMatrix L = unnormalized_laplacian(g.adjacency);
    EigOptions eo = opts;
    eo.kernel_hint = std::vector<double>(n, 1.0);
    const Spectrum specL = smallest_k(L, 3, eo);
    const Spectrum specN =
        generalized_smallest_k(L, g.adjacency.row_sums(), 3, eo);
    const std::vector<double> u2L = orient(specL.eigenvectors[1], us);
    const std::vector<double> u2N = orient(specN.eigenvectors[1], us);
    ApproxSpectra sp;
    sp.lambda2_L = specL.eigenvalues[1];
    sp.lambda2_Lsym = specN.eigenvalues[1];
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      BoxTrialKind& out = trial.kinds[k];
      const bool normalized_kind =
          kinds[k] == ApproxKind::NormalizedLambda2 ||
          kinds[k] == ApproxKind::NormalizedLambda2Star;
      try {
        const ApproxReport rep = approx_report(
            kinds[k], g, normalized_kind ? u2N : u2L, sp);
        out.sup_error = rep.sup_error;
        out.margin = rep.margin;
        out.recovered = rep.recovered_by_sign;
      } catch (const NumericError&) {
        out.error = true;
      }
    }
  } catch (const std::exception&) {
    trial.solver_error = true;
    for (BoxTrialKind& k : trial.kinds) k.error = true;
  }
  return trial;
}

}  // namespace

std::vector<BoxplotRow> approx_boxplot_study(
    int n, double alpha, double beta, int trials,
    const std::vector<ApproxKind>& kinds, std::uint64_t master_seed,
    const EigOptions& opts, int jobs) {
  if (trials < 1) throw ParameterError("approx_boxplot_study: trials >= 1");
  if (kinds.empty()) throw ParameterError("approx_boxplot_study: no kinds");
  (void)SbmParams::critical(n, alpha, beta);  // validate up front

  std::vector<BoxTrial> slots(static_cast<std::size_t>(trials));
  const int nj = resolve_jobs(jobs);
#ifdef _OPENMP
#pragma omp parallel for num_threads(nj) schedule(dynamic)
#endif
  for (long t = 0; t < trials; ++t) {
    const std::uint64_t seed =
        derive_seed(master_seed, 0, 0, static_cast<std::uint64_t>(t));
    slots[static_cast<std::size_t>(t)] =
        run_box_trial(n, alpha, beta, seed, kinds, opts);
  }
  (void)nj;

  std::vector<BoxplotRow> rows(kinds.size());
  for (std::size_t k = 0; k < kinds.size(); ++k) {
    BoxplotRow& row = rows[k];
    row.kind = kinds[k];
    row.trials = trials;
    std::vector<double> sups, margins;
    for (const BoxTrial& trial : slots) {
      const BoxTrialKind& out = trial.kinds[k];
      if (out.error) {
        row.excluded_trials += 1;
        continue;
      }
      sups.push_back(out.sup_error);
      margins.push_back(out.margin);
      if (out.recovered) row.recovered += 1;
    }
    row.sup_error = five_number_summary(std::move(sups));
    row.margin = five_number_summary(std::move(margins));
  }
  return rows;
}

std::vector<BoxplotRow> approx_boxplot_study(
    int n, double alpha, double beta, int trials,
    const std::vector<ApproxKind>& kinds, std::uint64_t master_seed) {
  return approx_boxplot_study(n, alpha, beta, trials, kinds, master_seed,
                              experiment_eig_options(), 1);
}

std::string boxplot_csv(const std::vector<BoxplotRow>& rows) {
  std::ostringstream os;
  os << "kind,metric,min,q1,median,q3,max,excluded_trials\n";
  for (const BoxplotRow& row : rows) {
    const auto emit = [&](const char* metric, const FiveNumber& f) {
      os << approx_kind_name(row.kind) << ',' << metric << ','
         << format_double(f.min) << ',' << format_double(f.q1) << ','
         << format_double(f.median) << ',' << format_double(f.q3) << ','
         << format_double(f.max) << ',' << row.excluded_trials << '\n';
    };
    emit("sup_error", row.sup_error);
    emit("margin", row.margin);
  }
  return os.str();
}

namespace {

struct BoundTrial {
  bool error = false;
  std::array<bool, 5> holds = {false, false, false, false, false};
  double c = 0.0;
  double norm = 0.0;
};

BoundTrial run_bound_trial(int n, const RegimeConstants& rc,
                           std::uint64_t seed, const Tolerances& cfg,
                           const EigOptions& opts) {
  BoundTrial trial;
  try {
    const SampledGraph g =
        sample(SbmParams::critical(n, rc.alpha, rc.beta), seed);
    const SymMatrix L = unnormalized_laplacian(g.adjacency);
    EigOptions eo = opts;
    eo.kernel_hint = std::vector<double>(n, 1.0);
    const Spectrum specL = smallest_k(L, 3, eo);
    const Spectrum specN =
        generalized_smallest_k(L, g.adjacency.row_sums(), 2, eo);
    SandwichSpectra sp;
    sp.lambda2_L = specL.eigenvalues[1];
    sp.lambda3_L = specL.eigenvalues[2];
    sp.lambda2_Lsym = specN.eigenvalues[1];
    const DegreeProfile prof = degree_profile(g);
    const std::vector<BoundReport> reports =
        eigenvalue_sandwich_check(g, sp, prof, cfg);
    for (std::size_t r = 0; r < reports.size() && r < trial.holds.size(); ++r) {
      trial.holds[r] = reports[r].holds;
    }
    const ConcentrationResult conc = laplacian_concentration_ratio(g, cfg);
    trial.c = conc.C;
    trial.norm = conc.norm;
  } catch (const std::exception&) {
    trial.error = true;
  }
  return trial;
}

}  // namespace

std::vector<BoundStudyRow> bound_pass_rate_study(
    const std::vector<int>& n_list, const RegimeConstants& rc, int trials,
    std::uint64_t master_seed, const Tolerances& cfg, const EigOptions& opts,
    int jobs) {
  if (n_list.empty()) throw ParameterError("bound_pass_rate_study: no sizes");
  if (trials < 1) throw ParameterError("bound_pass_rate_study: trials >= 1");
  for (int n : n_list) (void)SbmParams::critical(n, rc.alpha, rc.beta);

  const std::size_t total = n_list.size() * static_cast<std::size_t>(trials);
  std::vector<BoundTrial> slots(total);
  const int nj = resolve_jobs(jobs);
#ifdef _OPENMP
#pragma omp parallel for num_threads(nj) schedule(dynamic)
#endif
  for (long w = 0; w < static_cast<long>(total); ++w) {
    const std::size_t ni = static_cast<std::size_t>(w) /
                           static_cast<std::size_t>(trials);
    const std::size_t t = static_cast<std::size_t>(w) %
                          static_cast<std::size_t>(trials);
    const std::uint64_t seed =
        derive_seed(master_seed, static_cast<std::uint64_t>(ni), 0,
                    static_cast<std::uint64_t>(t));
    slots[static_cast<std::size_t>(w)] =
        run_bound_trial(n_list[ni], rc, seed, cfg, opts);
  }
  (void)nj;

  std::vector<BoundStudyRow> rows(n_list.size());
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    BoundStudyRow& row = rows[ni];
    row.n = n_list[ni];
    row.trials = trials;
    int completed = 0;
    for (int t = 0; t < trials; ++t) {
      const BoundTrial& trial =
          slots[ni * static_cast<std::size_t>(trials) +
                static_cast<std::size_t>(t)];
      if (trial.error) {
        row.errors += 1;
        continue;
      }
      completed += 1;
      for (std::size_t r = 0; r < trial.holds.size(); ++r) {
        int& tally = row.passes[kSandwichNames[r]];
        if (trial.holds[r]) tally += 1;
      }
      row.c_mean += trial.c;
      row.c_max = std::max(row.c_max, trial.c);
      row.norm_mean += trial.norm;
      row.norm_max = std::max(row.norm_max, trial.norm);
    }
    if (completed > 0) {
      row.c_mean /= completed;
      row.norm_mean /= completed;
    }
  }
  return rows;
}

std::vector<BoundStudyRow> bound_pass_rate_study(
    const std::vector<int>& n_list, const RegimeConstants& rc, int trials,
    std::uint64_t master_seed) {
  return bound_pass_rate_study(n_list, rc, trials, master_seed,
                               default_tolerances(), experiment_eig_options(),
                               1);
}

std::string bound_study_csv(const std::vector<BoundStudyRow>& rows) {
  std::ostringstream os;
  os << "n,name,trials,passes,pass_rate,errors,stat_mean,stat_max\n";
  for (const BoundStudyRow& row : rows) {
    const int completed = row.trials - row.errors;
    for (const char* name : kSandwichNames) {
      int passes = 0;
      auto it = row.passes.find(name);
      if (it != row.passes.end()) passes = it->second;
      const double rate =
          completed > 0 ? static_cast<double>(passes) / completed : 0.0;
      os << row.n << ',' << name << ',' << row.trials << ',' << passes << ','
         << format_double(rate) << ',' << row.errors << ",,\n";
    }
    os << row.n << ",concentration_C," << row.trials << ",,," << row.errors
       << ',' << format_double(row.c_mean) << ',' << format_double(row.c_max)
       << '\n';
    os << row.n << ",lsym_diff_norm," << row.trials << ",,," << row.errors
       << ',' << format_double(row.norm_mean) << ','
       << format_double(row.norm_max) << '\n';
  }
  return os.str();
}

}  // namespace specbm
