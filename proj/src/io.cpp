#include "popdyn/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace popdyn::io {

namespace {

std::ofstream open_out(const std::string& path) {
  // Binary mode keeps line endings LF everywhere.
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

void write_grid_table(const std::string& path, const pde::Grid& grid,
                      const std::vector<double>& values) {
  std::ofstream out = open_out(path);
  if (grid.dim() == 1) {
    out << "x0,value\n";
    for (size_t i = 0; i < values.size(); ++i) {
      out << g17(grid.dims[0].centers[i]) << ',' << g17(values[i]) << '\n';
    }
    return;
  }
  out << "x0,x1,value\n";
  const size_t n0 = static_cast<size_t>(grid.dims[0].cells);
  const size_t n1 = static_cast<size_t>(grid.dims[1].cells);
  for (size_t i1 = 0; i1 < n1; ++i1) {
    for (size_t i0 = 0; i0 < n0; ++i0) {
      out << g17(grid.dims[0].centers[i0]) << ',' << g17(grid.dims[1].centers[i1]) << ','
          << g17(values[i0 + n0 * i1]) << '\n';
    }
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_abm_trace(const std::string& path, const abm::Trace& trace) {
  std::ofstream out = open_out(path);
  out << "t,mean_prob_a1,realized_frac_a1\n";
  for (const auto& rec : trace.records) {
    out << g17(rec.t) << ',' << g17(rec.mean_prob_a1) << ',' << g17(rec.realized.fractions[0])
        << '\n';
  }
}

void write_abm_histograms(const std::string& dir, const abm::Trace& trace, const pde::Grid& grid) {
  for (const auto& rec : trace.records) {
    if (!rec.histogram) continue;
    const int t = static_cast<int>(rec.t);
    write_grid_table(dir + "/abm_hist_t" + std::to_string(t) + ".csv", grid, *rec.histogram);
  }
}

void write_pde_trace(const std::string& path, const pde::Trace& trace) {
  std::ofstream out = open_out(path);
  out << "t,expected_prob_a1\n";
  for (const auto& rec : trace.records) {
    out << g17(rec.t) << ',' << g17(rec.expected.fractions[0]) << '\n';
  }
}

void write_pde_densities(const std::string& dir, const pde::Trace& trace) {
  for (const auto& rec : trace.records) {
    if (!rec.snapshot) continue;
    const int t = static_cast<int>(rec.t);
    write_grid_table(dir + "/pde_density_t" + std::to_string(t) + ".csv", trace.grid,
                     rec.snapshot->values);
  }
}

void write_report(const std::string& path, const analysis::ComparisonReport& report) {
  std::ofstream out = open_out(path);
  out << "t,pde_prob_a1,abm_prob_a1,abs_gap\n";
  for (size_t i = 0; i < report.t.size(); ++i) {
    out << g17(report.t[i]) << ',' << g17(report.pde_prob[i]) << ',' << g17(report.abm_prob[i])
        << ',' << g17(report.gap[i]) << '\n';
  }
}

void write_compare_svg(const std::string& path, const analysis::ComparisonReport& report) {
  constexpr double width = 800.0, height = 500.0;
  constexpr double left = 70.0, right = 770.0, top = 40.0, bottom = 450.0;
  const double t_max = report.t.empty() ? 1.0 : std::max(report.t.back(), 1.0);
  const auto px = [&](double t) { return left + (right - left) * t / t_max; };
  const auto py = [&](double p) { return bottom - (bottom - top) * p; };

  std::ofstream out = open_out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
  // axes
  out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
      << bottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << bottom
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double t = t_max * i / 5.0;
    out << "<line x1=\"" << fmt(px(t)) << "\" y1=\"" << bottom << "\" x2=\"" << fmt(px(t))
        << "\" y2=\"" << bottom + 6 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(px(t)) << "\" y=\"" << bottom + 22
        << "\" font-size=\"13\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double p = i / 4.0;
    out << "<line x1=\"" << left - 6 << "\" y1=\"" << fmt(py(p)) << "\" x2=\"" << left
        << "\" y2=\"" << fmt(py(p)) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << left - 10 << "\" y=\"" << fmt(py(p) + 4)
        << "\" font-size=\"13\" text-anchor=\"end\">" << fmt(p) << "</text>\n";
  }
  out << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 10
      << "\" font-size=\"14\" text-anchor=\"middle\">t</text>\n";
  out << "<text x=\"18\" y=\"" << (top + bottom) / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (top + bottom) / 2 << ")\">P(a1)</text>\n";

  const auto polyline = [&](const std::vector<double>& series, const char* color,
                            const char* dash) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.8\"";
    if (dash[0] != '\0') out << " stroke-dasharray=\"" << dash << "\"";
    out << " points=\"";
    for (size_t i = 0; i < report.t.size(); ++i) {
      out << fmt(px(report.t[i])) << ',' << fmt(py(series[i])) << ' ';
    }
    out << "\"/>\n";
  };
  polyline(report.pde_prob, "#1f77b4", "");
  polyline(report.abm_prob, "#d62728", "6,4");

  out << "<line x1=\"600\" y1=\"24\" x2=\"640\" y2=\"24\" stroke=\"#1f77b4\" stroke-width=\"1.8\"/>"
      << "<text x=\"648\" y=\"28\" font-size=\"13\">density solve</text>\n";
  out << "<line x1=\"440\" y1=\"24\" x2=\"480\" y2=\"24\" stroke=\"#d62728\" stroke-width=\"1.8\""
      << " stroke-dasharray=\"6,4\"/><text x=\"488\" y=\"28\" font-size=\"13\">simulation</text>\n";
  out << "</svg>\n";
}

}  // namespace popdyn::io
