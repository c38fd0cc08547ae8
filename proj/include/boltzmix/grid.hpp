#ifndef BOLTZMIX_GRID_HPP
#define BOLTZMIX_GRID_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "boltzmix/parallel.hpp"
#include "boltzmix/vec3.hpp"

namespace bmx {

// Uniform cell-centered lattice on [-L, L)^3. Cell centers are symmetric
// under v -> -v, so parity checks map node k to an exact partner node.
class VelocityGrid {
 public:
  VelocityGrid() = default;
  VelocityGrid(double half_width, int points_per_axis) : half_width_(half_width), n_(points_per_axis) {
    if (!(half_width > 0.0)) throw std::invalid_argument("grid half_width must be positive");
    if (n_ < 8 || n_ % 2 != 0)
      throw std::invalid_argument("grid points_per_axis must be an even integer >= 8");
    spacing_ = 2.0 * half_width_ / n_;
    axis_.resize(n_);
    for (int i = 0; i < n_; ++i) axis_[i] = -half_width_ + (i + 0.5) * spacing_;
    nodes_.reserve(node_count());
    for (int ix = 0; ix < n_; ++ix)
      for (int iy = 0; iy < n_; ++iy)
        for (int iz = 0; iz < n_; ++iz) nodes_.push_back({axis_[ix], axis_[iy], axis_[iz]});
  }

  double half_width() const { return half_width_; }
  int points_per_axis() const { return n_; }
  double spacing() const { return spacing_; }
  double node_weight() const { return spacing_ * spacing_ * spacing_; }
  std::size_t node_count() const {
    return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  }
  double axis(int i) const { return axis_[i]; }

  std::size_t index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(ix) * n_ + iy) * n_ + iz;
  }

  const Vec3& node(std::size_t k) const { return nodes_[k]; }
  const std::vector<Vec3>& nodes() const { return nodes_; }

  // Node index of -v_k (lattice is symmetric about the origin).
  std::size_t mirror(std::size_t k) const {
    const int iz = static_cast<int>(k % n_);
    const int iy = static_cast<int>((k / n_) % n_);
    const int ix = static_cast<int>(k / (static_cast<std::size_t>(n_) * n_));
    return index(n_ - 1 - ix, n_ - 1 - iy, n_ - 1 - iz);
  }

  bool operator==(const VelocityGrid& o) const {
    return half_width_ == o.half_width_ && n_ == o.n_;
  }

 private:
  double half_width_ = 0.0;
  int n_ = 0;
  double spacing_ = 0.0;
  std::vector<double> axis_;
  std::vector<Vec3> nodes_;
};

// Midpoint-rule integral of per-node samples; linear in the values and
// bitwise reproducible (fixed reduction tree).
double grid_integral(const VelocityGrid& grid, std::span<const double> values);
double grid_integral(const VelocityGrid& grid, std::span<const double> values,
                     const ThreadPool& pool);

// Trilinear interpolation of per-node samples. Query points inside the
// lattice hull interpolate the surrounding 8 nodes; the half-cell margin
// between the hull and the box face clamps to the edge nodes; anything
// outside [-L, L]^3 evaluates to zero. Nonnegative samples give a
// nonnegative interpolant.
inline double trilinear(const VelocityGrid& grid, const double* v, const Vec3& p) {
  const double L = grid.half_width();
  if (std::fabs(p.x) > L || std::fabs(p.y) > L || std::fabs(p.z) > L) return 0.0;
  const int n = grid.points_per_axis();
  const double inv = 1.0 / grid.spacing();
  double f[3];
  int i0[3];
  for (int d = 0; d < 3; ++d) {
    double u = (p[d] + L) * inv - 0.5;
    u = u < 0.0 ? 0.0 : (u > n - 1.0 ? n - 1.0 : u);
    int b = static_cast<int>(u);
    if (b > n - 2) b = n - 2;
    i0[d] = b;
    f[d] = u - b;
  }
  const std::size_t sy = static_cast<std::size_t>(n);
  const std::size_t sx = sy * sy;
  const std::size_t base = static_cast<std::size_t>(i0[0]) * sx +
                           static_cast<std::size_t>(i0[1]) * sy + static_cast<std::size_t>(i0[2]);
  const double fx = f[0], fy = f[1], fz = f[2];
  const double c00 = v[base] * (1 - fz) + v[base + 1] * fz;
  const double c01 = v[base + sy] * (1 - fz) + v[base + sy + 1] * fz;
  const double c10 = v[base + sx] * (1 - fz) + v[base + sx + 1] * fz;
  const double c11 = v[base + sx + sy] * (1 - fz) + v[base + sx + sy + 1] * fz;
  const double c0 = c00 * (1 - fy) + c01 * fy;
  const double c1 = c10 * (1 - fy) + c11 * fy;
  return c0 * (1 - fx) + c1 * fx;
}

inline double trilinear(const VelocityGrid& grid, std::span<const double> values, const Vec3& p) {
  return trilinear(grid, values.data(), p);
}

}  // namespace bmx

#endif
