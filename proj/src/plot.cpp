#include "boltzmix/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace bmx {

namespace {
const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
}

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<double>& t,
                    const std::vector<std::pair<std::string, std::vector<double>>>& series,
                    bool log_y) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open plot file '" + path + "'");
  const int W = 720, H = 440;
  const int ml = 70, mr = 20, mt = 40, mb = 45;

  double t0 = t.empty() ? 0.0 : t.front(), t1 = t.empty() ? 1.0 : t.back();
  if (t1 <= t0) t1 = t0 + 1.0;
  double y0 = 1e300, y1 = -1e300;
  for (const auto& [name, ys] : series)
    for (double y : ys) {
      const double yy = log_y ? (y > 0 ? std::log10(y) : 1e300) : y;
      if (yy >= 1e300) continue;
      y0 = std::min(y0, yy);
      y1 = std::max(y1, yy);
    }
  if (y0 > y1) {
    y0 = 0.0;
    y1 = 1.0;
  }
  if (y1 - y0 < 1e-12) {
    y0 -= 0.5;
    y1 += 0.5;
  }

  auto X = [&](double x) { return ml + (x - t0) / (t1 - t0) * (W - ml - mr); };
  auto Y = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };

  os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  os << "<rect width='100%' height='100%' fill='white'/>\n";
  os << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='16'>" << title
     << (log_y ? " (log10)" : "") << "</text>\n";
  os << "<line x1='" << ml << "' y1='" << H - mb << "' x2='" << W - mr << "' y2='" << H - mb
     << "' stroke='black'/>\n";
  os << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='" << H - mb
     << "' stroke='black'/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = t0 + k * (t1 - t0) / 4, yv = y0 + k * (y1 - y0) / 4;
    os << "<text x='" << X(xv) << "' y='" << H - mb + 18
       << "' text-anchor='middle' font-size='11'>" << xv << "</text>\n";
    os << "<text x='" << ml - 6 << "' y='" << Y(yv) + 4
       << "' text-anchor='end' font-size='11'>" << yv << "</text>\n";
  }
  int ci = 0;
  for (const auto& [name, ys] : series) {
    const char* color = kColors[ci % 6];
    os << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
    for (std::size_t k = 0; k < ys.size() && k < t.size(); ++k) {
      const double y = log_y ? (ys[k] > 0 ? std::log10(ys[k]) : y0) : ys[k];
      os << X(t[k]) << ',' << Y(y) << ' ';
    }
    os << "'/>\n";
    os << "<text x='" << W - mr - 8 << "' y='" << mt + 16 + 16 * ci
       << "' text-anchor='end' font-size='12' fill='" << color << "'>" << name << "</text>\n";
    ++ci;
  }
  os << "</svg>\n";
}

}  // namespace bmx
