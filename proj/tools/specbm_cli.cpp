// Command-line front end: sampling, clustering, closed-form bound reports,
// and the Monte Carlo studies (phase, agreement, boxplot, concentration).
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specbm/approximations.hpp"
#include "specbm/bounds.hpp"
#include "specbm/clustering.hpp"
#include "specbm/config.hpp"
#include "specbm/errors.hpp"
#include "specbm/experiments.hpp"
#include "specbm/graph_matrices.hpp"
#include "specbm/heatmap.hpp"
#include "specbm/io.hpp"
#include "specbm/sbm.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Emits to the chosen sink: atomically to a file, or to standard output.
void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    if (!std::cout) throw specbm::IoError("write to standard output failed");
  } else {
    specbm::atomic_write_file(out_path, content);
  }
}

void summary_line(const std::string& text) { std::cerr << text << "\n"; }

std::string sink_name(const std::string& out_path) {
  return out_path.empty() ? std::string("stdout") : out_path;
}

int default_jobs_from_env() {
  const char* env = std::getenv("SPECBM_JOBS");
  if (env == nullptr || *env == '\0') return 0;
  try {
    return std::stoi(env);
  } catch (const std::exception&) {
    throw specbm::ParameterError("SPECBM_JOBS must be an integer");
  }
}

std::vector<double> build_axis(double lo, double hi, double step) {
  if (step <= 0.0 || hi < lo) {
    throw specbm::ParameterError("axis requires step > 0 and max >= min");
  }
  std::vector<double> axis;
  for (int k = 0;; ++k) {
    const double v = lo + step * k;
    if (v > hi + 1e-9) break;
    axis.push_back(v);
  }
  if (axis.empty()) throw specbm::ParameterError("axis is empty");
  return axis;
}

std::vector<specbm::Method> parse_methods(const std::string& text) {
  if (text == "both") {
    return {specbm::Method::Unnormalized, specbm::Method::Normalized};
  }
  if (text == "unnormalized") return {specbm::Method::Unnormalized};
  if (text == "normalized") return {specbm::Method::Normalized};
  throw specbm::ParameterError(
      "methods must be one of both|unnormalized|normalized");
}

specbm::Method parse_method(const std::string& text) {
  if (text == "unnormalized") return specbm::Method::Unnormalized;
  if (text == "normalized") return specbm::Method::Normalized;
  throw specbm::ParameterError("method must be unnormalized|normalized");
}

std::vector<specbm::ApproxKind> parse_kinds(std::vector<std::string> names) {
  if (names.empty() || (names.size() == 1 && names[0] == "all")) {
    return specbm::all_approx_kinds();
  }
  std::vector<specbm::ApproxKind> kinds;
  for (const std::string& name : names) {
    bool found = false;
    for (specbm::ApproxKind k : specbm::all_approx_kinds()) {
      if (name == specbm::approx_kind_name(k)) {
        kinds.push_back(k);
        found = true;
        break;
      }
    }
    if (!found) throw specbm::ParameterError("unknown approx kind: " + name);
  }
  return kinds;
}

std::string trim_copy(const std::string& s) {
  const char* ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

// Shared flat-config + tolerance plumbing per subcommand.
struct CommonOpts {
  int jobs = 0;
  double tol = 1e-10;
  int dense_cutoff = 0;  // 0: keep profile default
  std::string out_path;
  std::string config_path;
  CLI::App* command = nullptr;

  void attach(CLI::App* cmd, bool with_jobs) {
    command = cmd;
    cmd->add_option("--config", config_path,
                    "flat key=value config file; flags win");
    cmd->add_option("--tol", tol, "eigensolver residual tolerance");
    cmd->add_option("--dense-cutoff", dense_cutoff,
                    "dense eigensolver cutoff override (0 = default)");
    cmd->add_option("--out", out_path, "output path (default: stdout)");
    if (with_jobs) {
      cmd->add_option("--jobs", jobs,
                      "worker threads (0 = available parallelism)");
    }
  }

  // CLI11 only processes a config file registered on the app that starts the
  // parse, so subcommand configs are applied by hand: one key=value per line,
  // '#' comments, values fill options the command line left unset.
  void load_config() {
    if (config_path.empty()) return;
    std::istringstream in(specbm::read_file(config_path));
    std::string line;
    while (std::getline(in, line)) {
      const std::string stripped = trim_copy(line);
      if (stripped.empty() || stripped[0] == '#') continue;
      const auto eq = stripped.find('=');
      if (eq == std::string::npos) {
        throw specbm::ParameterError("config line is not key=value: " +
                                     stripped);
      }
      const std::string key = trim_copy(stripped.substr(0, eq));
      const std::string value = trim_copy(stripped.substr(eq + 1));
      CLI::Option* opt = command->get_option_no_throw("--" + key);
      if (opt == nullptr) {
        throw specbm::ParameterError("unknown config key: " + key);
      }
      if (opt->count() > 0) continue;  // explicit flags win
      try {
        opt->add_result(value);
        opt->run_callback();
      } catch (const CLI::Error& e) {
        throw specbm::ParameterError("config key " + key + ": " + e.what());
      }
    }
  }

  specbm::Tolerances tolerances() const {
    specbm::Tolerances t = specbm::default_tolerances();
    t.solver_tol = tol;
    if (dense_cutoff > 0) t.dense_cutoff = dense_cutoff;
    return t;
  }

  specbm::EigOptions solver_options() const {
    return specbm::EigOptions::from(tolerances());
  }

  specbm::EigOptions study_options() const {
    specbm::EigOptions o = specbm::experiment_eig_options();
    o.tol = tol;
    if (dense_cutoff > 0) o.dense_cutoff = dense_cutoff;
    return o;
  }
};

struct GridArgs {
  int n = 600;
  int trials = 20;
  std::uint64_t seed = 0;
  double alpha_min = 1.0, alpha_max = 30.0, alpha_step = 1.0;
  double beta_min = 0.5, beta_max = 10.0, beta_step = 0.5;
  std::string methods = "both";
  std::string format = "csv";

  void attach(CLI::App* cmd) {
    cmd->add_option("--n", n, "graph size (even, >= 4)");
    cmd->add_option("--trials", trials, "trials per cell");
    cmd->add_option("--seed", seed, "master seed");
    cmd->add_option("--alpha-min", alpha_min);
    cmd->add_option("--alpha-max", alpha_max);
    cmd->add_option("--alpha-step", alpha_step);
    cmd->add_option("--beta-min", beta_min);
    cmd->add_option("--beta-max", beta_max);
    cmd->add_option("--beta-step", beta_step);
    cmd->add_option("--methods", methods, "both|unnormalized|normalized");
    cmd->add_option("--format", format, "csv|svg");
  }

  specbm::GridSpec spec() const {
    specbm::GridSpec g;
    g.n = n;
    g.trials = trials;
    g.master_seed = seed;
    g.alphas = build_axis(alpha_min, alpha_max, alpha_step);
    g.betas = build_axis(beta_min, beta_max, beta_step);
    g.methods = parse_methods(methods);
    return g;
  }
};

int run_grid_command(const char* name, const GridArgs& grid,
                     const CommonOpts& common,
                     specbm::HeatmapMetric metric) {
  const auto start = Clock::now();
  if (grid.format != "csv" && grid.format != "svg") {
    throw specbm::ParameterError("format must be csv or svg");
  }
  const specbm::GridSpec spec = grid.spec();
  const std::vector<specbm::CellResult> cells =
      specbm::phase_diagram(spec, common.study_options(), common.jobs);
  std::string content;
  if (grid.format == "csv") {
    content = specbm::grid_csv(spec, cells);
  } else {
    content = specbm::render_heatmap(spec, cells, metric);
  }
  emit(common.out_path, content);

  int valid = 0;
  for (const specbm::CellResult& c : cells) valid += c.valid ? 1 : 0;
  std::ostringstream msg;
  msg << name << ": " << cells.size() << " cells (" << valid << " valid), "
      << valid * spec.trials << " trials, "
      << specbm::format_double(seconds_since(start)) << " s -> "
      << sink_name(common.out_path);
  summary_line(msg.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "spectral clustering on the two-community stochastic block model"};
  app.require_subcommand(1);

  // ---- sample ----
  auto* sample_cmd =
      app.add_subcommand("sample", "draw a graph and export its edge list");
  CommonOpts sample_common;
  int s_n = 600;
  double s_alpha = 10.0, s_beta = 2.0;
  double s_p = -1.0, s_q = -1.0;
  std::uint64_t s_seed = 0;
  bool s_no_self_loops = false;
  std::string s_export;
  sample_cmd->add_option("--n", s_n, "graph size (even, >= 4)");
  sample_cmd->add_option("--alpha", s_alpha, "within-block rate alpha");
  sample_cmd->add_option("--beta", s_beta, "cross-block rate beta");
  sample_cmd->add_option("--p", s_p, "direct within-block probability");
  sample_cmd->add_option("--q", s_q, "direct cross-block probability");
  sample_cmd->add_option("--seed", s_seed, "sample seed");
  sample_cmd->add_flag("--no-self-loops", s_no_self_loops,
                       "exclude the diagonal from sampling");
  sample_cmd->add_option("--export", s_export,
                         "edge-list output path (default: --out / stdout)");
  sample_common.attach(sample_cmd, false);

  // ---- cluster ----
  auto* cluster_cmd =
      app.add_subcommand("cluster", "two-step spectral clustering, JSON out");
  CommonOpts cluster_common;
  int c_n = 600;
  double c_alpha = 10.0, c_beta = 2.0;
  double c_p = -1.0, c_q = -1.0;
  std::uint64_t c_seed = 0;
  bool c_no_self_loops = false;
  std::string c_method = "unnormalized";
  std::string c_import;
  cluster_cmd->add_option("--n", c_n, "graph size (even, >= 4)");
  cluster_cmd->add_option("--alpha", c_alpha, "within-block rate alpha");
  cluster_cmd->add_option("--beta", c_beta, "cross-block rate beta");
  cluster_cmd->add_option("--p", c_p, "direct within-block probability");
  cluster_cmd->add_option("--q", c_q, "direct cross-block probability");
  cluster_cmd->add_option("--seed", c_seed, "sample seed");
  cluster_cmd->add_flag("--no-self-loops", c_no_self_loops,
                        "exclude the diagonal from sampling");
  cluster_cmd->add_option("--method", c_method, "unnormalized|normalized");
  cluster_cmd->add_option("--import", c_import,
                          "read the graph from an edge-list file");
  cluster_common.attach(cluster_cmd, false);

  // ---- bounds ----
  auto* bounds_cmd = app.add_subcommand(
      "bounds", "closed-form regime report (A1, A2, exponents), JSON out");
  CommonOpts bounds_common;
  double b_alpha = 10.0, b_beta = 2.0;
  bounds_cmd->add_option("--alpha", b_alpha, "within-block rate alpha");
  bounds_cmd->add_option("--beta", b_beta, "cross-block rate beta");
  bounds_common.attach(bounds_cmd, false);

  // ---- phase / agreement ----
  auto* phase_cmd =
      app.add_subcommand("phase", "exact-recovery success-rate sweep");
  CommonOpts phase_common;
  GridArgs phase_grid;
  phase_grid.attach(phase_cmd);
  phase_common.attach(phase_cmd, true);

  auto* agree_cmd =
      app.add_subcommand("agreement", "mean-agreement sweep");
  CommonOpts agree_common;
  GridArgs agree_grid;
  agree_grid.attach(agree_cmd);
  agree_common.attach(agree_cmd, true);

  // ---- boxplot ----
  auto* box_cmd = app.add_subcommand(
      "boxplot", "approximation-quality five-number summaries, CSV out");
  CommonOpts box_common;
  int x_n = 2000, x_trials = 100;
  double x_alpha = 10.0, x_beta = 2.0;
  std::uint64_t x_seed = 0;
  std::vector<std::string> x_kinds;
  box_cmd->add_option("--n", x_n, "graph size (even, >= 4)");
  box_cmd->add_option("--alpha", x_alpha, "within-block rate alpha");
  box_cmd->add_option("--beta", x_beta, "cross-block rate beta");
  box_cmd->add_option("--trials", x_trials, "number of trials");
  box_cmd->add_option("--seed", x_seed, "master seed");
  box_cmd->add_option("--kinds", x_kinds,
                      "approximation kinds (names or 'all')");
  box_common.attach(box_cmd, true);

  // ---- concentration ----
  auto* conc_cmd = app.add_subcommand(
      "concentration", "bound pass rates and empirical constants per n");
  CommonOpts conc_common;
  std::vector<int> k_ns;
  double k_alpha = 10.0, k_beta = 2.0;
  int k_trials = 20;
  std::uint64_t k_seed = 0;
  conc_cmd->add_option("--n", k_ns, "graph sizes (repeatable)");
  conc_cmd->add_option("--alpha", k_alpha, "within-block rate alpha");
  conc_cmd->add_option("--beta", k_beta, "cross-block rate beta");
  conc_cmd->add_option("--trials", k_trials, "trials per size");
  conc_cmd->add_option("--seed", k_seed, "master seed");
  conc_common.attach(conc_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return static_cast<int>(specbm::ExitCode::Parameter);
  }

  try {
    for (CommonOpts* c : {&sample_common, &cluster_common, &bounds_common,
                          &phase_common, &agree_common, &box_common,
                          &conc_common}) {
      c->load_config();
      if (c->jobs == 0) c->jobs = default_jobs_from_env();
    }

    if (sample_cmd->parsed()) {
      const auto start = Clock::now();
      const specbm::SbmParams params =
          s_p >= 0.0 ? specbm::SbmParams::direct(s_n, s_p, s_q,
                                                 !s_no_self_loops)
                     : specbm::SbmParams::critical(s_n, s_alpha, s_beta,
                                                   !s_no_self_loops);
      const specbm::SampledGraph g = specbm::sample(params, s_seed);
      std::ostringstream os;
      specbm::write_edge_list(g.adjacency, os);
      const std::string content = os.str();
      const long edges =
          std::count(content.begin(), content.end(), '\n') - 1;  // header line
      const std::string& path =
          !s_export.empty() ? s_export : sample_common.out_path;
      emit(path, content);
      std::ostringstream msg;
      msg << "sample: n=" << params.n << " edges=" << edges
          << " seed=" << s_seed << ", "
          << specbm::format_double(seconds_since(start)) << " s -> "
          << sink_name(path);
      summary_line(msg.str());
      return 0;
    }

    if (cluster_cmd->parsed()) {
      const auto start = Clock::now();
      const specbm::Method method = parse_method(c_method);
      const specbm::EigOptions opts = cluster_common.solver_options();
      std::string content;
      int n_out = 0;
      if (!c_import.empty()) {
        std::istringstream is(specbm::read_file(c_import));
        const specbm::SymMatrix A = specbm::read_edge_list(is);
        n_out = A.n();
        const bool with_params =
            cluster_cmd->count("--alpha") > 0 || cluster_cmd->count("--p") > 0;
        const std::vector<double> ref = specbm::u2star(A.n());
        const specbm::ClusterResult r = specbm::cluster(A, method, opts, &ref);
        if (with_params) {
          const specbm::SbmParams params =
              c_p >= 0.0
                  ? specbm::SbmParams::direct(A.n(), c_p, c_q,
                                              !c_no_self_loops)
                  : specbm::SbmParams::critical(A.n(), c_alpha, c_beta,
                                                !c_no_self_loops);
          const double agree =
              specbm::agreement(r.labeling, specbm::Labeling::ground_truth(A.n()));
          content = specbm::cluster_result_to_json(
              r, &params, c_seed, agree,
              specbm::exactly_recovered(r,
                                        specbm::Labeling::ground_truth(A.n())));
        } else {
          content = specbm::cluster_result_to_json(r);
        }
      } else {
        const specbm::SbmParams params =
            c_p >= 0.0 ? specbm::SbmParams::direct(c_n, c_p, c_q,
                                                   !c_no_self_loops)
                       : specbm::SbmParams::critical(c_n, c_alpha, c_beta,
                                                     !c_no_self_loops);
        const specbm::SampledGraph g = specbm::sample(params, c_seed);
        n_out = params.n;
        const specbm::ClusterResult r = specbm::cluster(g, method, opts);
        const double agree =
            specbm::agreement(r.labeling, g.ground_truth);
        content = specbm::cluster_result_to_json(
            r, &params, c_seed, agree,
            specbm::exactly_recovered(r, g.ground_truth));
      }
      emit(cluster_common.out_path, content);
      std::ostringstream msg;
      msg << "cluster: n=" << n_out << " method=" << c_method << ", "
          << specbm::format_double(seconds_since(start)) << " s -> "
          << sink_name(cluster_common.out_path);
      summary_line(msg.str());
      return 0;
    }

    if (bounds_cmd->parsed()) {
      const auto start = Clock::now();
      specbm::RegimeConstants rc;
      rc.alpha = b_alpha;
      rc.beta = b_beta;
      if (!(rc.alpha > 0.0) || !(rc.beta >= 0.0)) {
        throw specbm::ParameterError("bounds: need alpha > 0 and beta >= 0");
      }
      emit(bounds_common.out_path, specbm::regime_report_to_json(rc));
      std::ostringstream msg;
      msg << "bounds: alpha=" << specbm::format_double(rc.alpha)
          << " beta=" << specbm::format_double(rc.beta) << ", "
          << specbm::format_double(seconds_since(start)) << " s -> "
          << sink_name(bounds_common.out_path);
      summary_line(msg.str());
      return 0;
    }

    if (phase_cmd->parsed()) {
      return run_grid_command("phase", phase_grid, phase_common,
                              specbm::HeatmapMetric::SuccessRate);
    }
    if (agree_cmd->parsed()) {
      return run_grid_command("agreement", agree_grid, agree_common,
                              specbm::HeatmapMetric::MeanAgreement);
    }

    if (box_cmd->parsed()) {
      const auto start = Clock::now();
      const std::vector<specbm::ApproxKind> kinds = parse_kinds(x_kinds);
      const std::vector<specbm::BoxplotRow> rows = specbm::approx_boxplot_study(
          x_n, x_alpha, x_beta, x_trials, kinds, x_seed,
          box_common.study_options(), box_common.jobs);
      emit(box_common.out_path, specbm::boxplot_csv(rows));
      std::ostringstream msg;
      msg << "boxplot: " << kinds.size() << " kinds, " << x_trials
          << " trials, " << specbm::format_double(seconds_since(start))
          << " s -> " << sink_name(box_common.out_path);
      summary_line(msg.str());
      return 0;
    }

    if (conc_cmd->parsed()) {
      const auto start = Clock::now();
      if (k_ns.empty()) k_ns = {500, 1000, 2000};
      specbm::RegimeConstants rc;
      rc.alpha = k_alpha;
      rc.beta = k_beta;
      const std::vector<specbm::BoundStudyRow> rows =
          specbm::bound_pass_rate_study(k_ns, rc, k_trials, k_seed,
                                        conc_common.tolerances(),
                                        conc_common.study_options(),
                                        conc_common.jobs);
      emit(conc_common.out_path, specbm::bound_study_csv(rows));
      std::ostringstream msg;
      msg << "concentration: " << k_ns.size() << " sizes, " << k_trials
          << " trials each, " << specbm::format_double(seconds_since(start))
          << " s -> " << sink_name(conc_common.out_path);
      summary_line(msg.str());
      return 0;
    }

    throw specbm::ParameterError("no subcommand selected");
  } catch (const specbm::ParameterError& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return static_cast<int>(specbm::ExitCode::Parameter);
  } catch (const specbm::IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return static_cast<int>(specbm::ExitCode::Io);
  } catch (const specbm::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return static_cast<int>(specbm::ExitCode::Numeric);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(specbm::ExitCode::Numeric);
  }
}
