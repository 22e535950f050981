#include "rrk/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "rrk/errors.hpp"

namespace rrk {

namespace {

constexpr int kWidth = 800;
constexpr int kHeight = 600;
constexpr double kLeft = 80, kRight = 200, kTop = 40, kBottom = 70;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", std::fabs(x) < 5e-3 ? 0.0 : x);
  return buf;
}

std::string label_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", std::fabs(x) < 1e-12 ? 0.0 : x);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Tick step of the form {1, 2, 5} x 10^k giving about five ticks.
double tick_step(double span) {
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) return m * mag;
  return 10.0 * mag;
}

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series) {
  if (series.empty()) throw UsageError("nothing to plot");
  double max1 = 0.0, max2 = 0.0;
  for (const auto& s : series)
    for (const auto& p : s.vertices) {
      max1 = std::max(max1, p.r1);
      max2 = std::max(max2, p.r2);
    }
  const double extent = std::max({max1, max2, 1e-3}) * 1.1;
  const double step = tick_step(extent);
  const double top = std::ceil(extent / step) * step;
  const double plot_w = kWidth - kLeft - kRight, plot_h = kHeight - kTop - kBottom;
  auto px = [&](double r1) { return kLeft + r1 / top * plot_w; };
  auto py = [&](double r2) { return kHeight - kBottom - r2 / top * plot_h; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
     << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

  os << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (int i = 1; i * step <= top + 1e-12; ++i) {
    const double v = i * step;
    os << "<line x1=\"" << num(px(v)) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(px(v)) << "\" y2=\""
       << num(py(top)) << "\"/>\n";
    os << "<line x1=\"" << num(px(0)) << "\" y1=\"" << num(py(v)) << "\" x2=\"" << num(px(top)) << "\" y2=\""
       << num(py(v)) << "\"/>\n";
  }
  os << "</g>\n";
  os << "<g stroke=\"black\" stroke-width=\"1.5\">\n"
     << "<line x1=\"" << num(px(0)) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(px(top)) << "\" y2=\""
     << num(py(0)) << "\"/>\n"
     << "<line x1=\"" << num(px(0)) << "\" y1=\"" << num(py(0)) << "\" x2=\"" << num(px(0)) << "\" y2=\""
     << num(py(top)) << "\"/>\n"
     << "</g>\n";
  os << "<g fill=\"black\">\n";
  for (int i = 0; i * step <= top + 1e-12; ++i) {
    const double v = i * step;
    os << "<text x=\"" << num(px(v)) << "\" y=\"" << num(py(0) + 18) << "\" text-anchor=\"middle\">"
       << label_num(v) << "</text>\n";
    os << "<text x=\"" << num(px(0) - 8) << "\" y=\"" << num(py(v) + 4) << "\" text-anchor=\"end\">"
       << label_num(v) << "</text>\n";
  }
  os << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(kHeight - 25.0)
     << "\" text-anchor=\"middle\">R1 (bits)</text>\n"
     << "<text x=\"25\" y=\"" << num(kTop + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 25 "
     << num(kTop + plot_h / 2) << ")\">R2 (bits)</text>\n"
     << "</g>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* colour = kPalette[i % std::size(kPalette)];
    os << "<g id=\"series-" << i << "\" stroke=\"" << colour << "\" stroke-width=\"2\">\n";
    if (s.vertices.size() == 1) {
      os << "<circle cx=\"" << num(px(s.vertices[0].r1)) << "\" cy=\"" << num(py(s.vertices[0].r2))
         << "\" r=\"4\" fill=\"" << colour << "\"/>\n";
    } else if (s.vertices.size() >= 2) {
      os << (s.vertices.size() == 2 ? "<polyline fill=\"none\"" : "<polygon fill=\"" + std::string(colour) +
                                                                       "\" fill-opacity=\"0.18\"")
         << " points=\"";
      for (std::size_t k = 0; k < s.vertices.size(); ++k)
        os << (k ? " " : "") << num(px(s.vertices[k].r1)) << ',' << num(py(s.vertices[k].r2));
      os << "\"/>\n";
    }
    os << "</g>\n";
    const double ly = kTop + 10 + 22.0 * static_cast<double>(i);
    const double lx = kWidth - kRight + 20;
    os << "<rect x=\"" << num(lx) << "\" y=\"" << num(ly) << "\" width=\"14\" height=\"14\" fill=\"" << colour
       << "\"/>\n<text x=\"" << num(lx + 20) << "\" y=\"" << num(ly + 12) << "\">" << escape(s.name)
       << (s.vertices.empty() ? " (empty)" : "") << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace rrk
