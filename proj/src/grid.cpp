#include "boltzmix/grid.hpp"

#include <algorithm>
#include <cmath>

namespace bmx {

double grid_integral(const VelocityGrid& grid, std::span<const double> values) {
  if (values.size() != grid.node_count())
    throw std::invalid_argument("grid_integral: values length must equal node count");
  return grid.node_weight() * deterministic_sum(values);
}

double grid_integral(const VelocityGrid& grid, std::span<const double> values,
                     const ThreadPool& pool) {
  if (values.size() != grid.node_count())
    throw std::invalid_argument("grid_integral: values length must equal node count");
  return grid.node_weight() *
         deterministic_sum(pool, values.size(), [&](std::size_t i) { return values[i]; });
}

}  // namespace bmx
