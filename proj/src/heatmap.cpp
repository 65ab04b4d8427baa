#include "specbm/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "specbm/errors.hpp"

namespace specbm {

namespace {

constexpr const char* kNullFill = "#3b6ea5";

std::string fmt2(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string gray_fill(double v) {
  v = std::clamp(v, 0.0, 1.0);
  const int g = static_cast<int>(std::lround(v * 255.0));
  char buf[16];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", g, g, g);
  return buf;
}

// Continuous grid-index coordinate of a value with respect to an ascending
// axis list; linear between (and beyond) the listed values.
double axis_index(double v, const std::vector<double>& axis) {
  const std::size_t n = axis.size();
  if (n == 1) return 0.0;
  if (v <= axis.front()) {
    return (v - axis.front()) / (axis[1] - axis[0]);
  }
  if (v >= axis.back()) {
    return static_cast<double>(n - 1) +
           (v - axis.back()) / (axis[n - 1] - axis[n - 2]);
  }
  const auto it = std::upper_bound(axis.begin(), axis.end(), v);
  const std::size_t hi = static_cast<std::size_t>(it - axis.begin());
  const std::size_t lo = hi - 1;
  return static_cast<double>(lo) + (v - axis[lo]) / (axis[hi] - axis[lo]);
}

struct Panel {
  double x0 = 0.0, y0 = 0.0;  // top-left of the plot rectangle
  double width = 0.0, height = 0.0;
};

// Emits the polyline pieces of a parametric curve clipped to the panel.
void emit_curve(std::ostringstream& os, const Panel& panel,
                const GridSpec& spec, const HeatmapOptions& opt,
                double (*alpha_of_beta)(double), const char* color) {
  const std::size_t na = spec.alphas.size();
  const double beta_lo = 0.0;
  const double beta_hi = spec.betas.back() +
                         (spec.betas.size() > 1
                              ? 0.5 * (spec.betas.back() - spec.betas.front()) /
                                    static_cast<double>(spec.betas.size() - 1)
                              : 0.5);
  const int samples = 256;
  std::vector<std::pair<double, double>> run;
  const auto flush = [&]() {
    if (run.size() >= 2) {
      os << "<polyline fill=\"none\" stroke=\"" << color
         << "\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < run.size(); ++i) {
        if (i) os << ' ';
        os << fmt2(run[i].first) << ',' << fmt2(run[i].second);
      }
      os << "\"/>\n";
    }
    run.clear();
  };
  for (int s = 0; s <= samples; ++s) {
    const double beta =
        beta_lo + (beta_hi - beta_lo) * s / static_cast<double>(samples);
    const double alpha = alpha_of_beta(beta);
    const double xi = axis_index(beta, spec.betas);
    const double yi = axis_index(alpha, spec.alphas);
    const double x = panel.x0 + (xi + 0.5) * opt.cell_size;
    const double y = panel.y0 + (static_cast<double>(na) - 0.5 - yi) *
                                    opt.cell_size;
    const bool inside = x >= panel.x0 && x <= panel.x0 + panel.width &&
                        y >= panel.y0 && y <= panel.y0 + panel.height;
    if (inside) {
      run.emplace_back(x, y);
    } else {
      flush();
    }
  }
  flush();
}

double threshold_alpha(double beta) {
  const double s = std::sqrt(2.0) + std::sqrt(std::max(beta, 0.0));
  return s * s;
}

double diagonal_alpha(double beta) { return beta; }

}  // namespace

std::string render_heatmap(const GridSpec& spec,
                           const std::vector<CellResult>& cells,
                           HeatmapMetric metric,
                           const HeatmapOptions& opt) {
  const std::size_t na = spec.alphas.size();
  const std::size_t nb = spec.betas.size();
  if (na == 0 || nb == 0 || cells.empty()) {
    throw ParameterError("render_heatmap: empty grid");
  }
  if (cells.size() != na * nb) {
    throw ParameterError("render_heatmap: cell list does not match the grid");
  }
  const std::size_t nm = spec.methods.size();
  const double plot_w = static_cast<double>(nb) * opt.cell_size;
  const double plot_h = static_cast<double>(na) * opt.cell_size;
  const double total_w =
      2.0 * opt.margin + nm * plot_w + (nm - 1) * opt.panel_gap;
  const double total_h = 2.0 * opt.margin + plot_h;

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\""
     << fmt2(total_w) << "\" height=\"" << fmt2(total_h) << "\" viewBox=\"0 0 "
     << fmt2(total_w) << ' ' << fmt2(total_h) << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << fmt2(total_w) << "\" height=\""
     << fmt2(total_h) << "\" fill=\"#ffffff\"/>\n";

  const char* metric_label =
      metric == HeatmapMetric::SuccessRate ? "success_rate" : "mean_agreement";

  for (std::size_t im = 0; im < nm; ++im) {
    Panel panel;
    panel.x0 = opt.margin + im * (plot_w + opt.panel_gap);
    panel.y0 = opt.margin;
    panel.width = plot_w;
    panel.height = plot_h;

    os << "<text x=\"" << fmt2(panel.x0 + plot_w / 2.0) << "\" y=\""
       << fmt2(panel.y0 - 10.0)
       << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">"
       << method_name(spec.methods[im]) << " " << metric_label << "</text>\n";

    for (std::size_t ai = 0; ai < na; ++ai) {
      for (std::size_t bi = 0; bi < nb; ++bi) {
        const CellResult& cell = cells[ai * nb + bi];
        std::string fill;
        if (!cell.valid) {
          fill = kNullFill;
        } else {
          const MethodCell& mc = cell.per_method[im];
          const double v = metric == HeatmapMetric::SuccessRate
                               ? mc.success_rate
                               : mc.mean_agreement;
          fill = gray_fill(v);
        }
        const double x = panel.x0 + static_cast<double>(bi) * opt.cell_size;
        const double y =
            panel.y0 + static_cast<double>(na - 1 - ai) * opt.cell_size;
        os << "<rect x=\"" << fmt2(x) << "\" y=\"" << fmt2(y) << "\" width=\""
           << opt.cell_size << "\" height=\"" << opt.cell_size << "\" fill=\""
           << fill << "\"/>\n";
      }
    }

    os << "<rect x=\"" << fmt2(panel.x0) << "\" y=\"" << fmt2(panel.y0)
       << "\" width=\"" << fmt2(plot_w) << "\" height=\"" << fmt2(plot_h)
       << "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";

    // Axis extent labels (beta along x, alpha along y).
    os << "<text x=\"" << fmt2(panel.x0) << "\" y=\""
       << fmt2(panel.y0 + plot_h + 16.0)
       << "\" font-family=\"monospace\" font-size=\"10\">beta "
       << format_double(spec.betas.front()) << ".."
       << format_double(spec.betas.back()) << "</text>\n";
    os << "<text x=\"" << fmt2(panel.x0 - 6.0) << "\" y=\""
       << fmt2(panel.y0 + plot_h)
       << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">"
          "alpha "
       << format_double(spec.alphas.front()) << ".."
       << format_double(spec.alphas.back()) << "</text>\n";

    emit_curve(os, panel, spec, opt, threshold_alpha, "#cc0000");
    if (metric == HeatmapMetric::MeanAgreement) {
      emit_curve(os, panel, spec, opt, diagonal_alpha, "#00aa00");
    }
  }

  os << "</svg>\n";
  return os.str();
}

}  // namespace specbm
