#ifndef BOLTZMIX_PLOT_HPP
#define BOLTZMIX_PLOT_HPP

#include <string>
#include <vector>

namespace bmx {

// Minimal standalone SVG line plot (time series), one curve per series.
void write_svg_plot(const std::string& path, const std::string& title,
                    const std::vector<double>& t,
                    const std::vector<std::pair<std::string, std::vector<double>>>& series,
                    bool log_y = false);

}  // namespace bmx

#endif
