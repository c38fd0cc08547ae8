#ifndef BOLTZMIX_SPECIES_HPP
#define BOLTZMIX_SPECIES_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "boltzmix/vec3.hpp"

namespace bmx {

// Equilibrium is normalized to zero bulk velocity and unit temperature
// (k_B = 1), so a species is fully described by its mass and number density.
struct SpeciesParams {
  double mass = 1.0;
  double eq_density = 1.0;
};

// Relative tolerance below which two masses are treated as equal; the
// Carleman sphere radius and center blow up as the masses coincide.
inline constexpr double kMassEqualityTol = 1e-9;

inline bool masses_equal(double mi, double mj) {
  return std::fabs(mi - mj) <= kMassEqualityTol * std::max(std::fabs(mi), std::fabs(mj));
}

inline double maxwellian(const SpeciesParams& sp, const Vec3& v) {
  const double c = sp.eq_density * std::pow(sp.mass / (2.0 * M_PI), 1.5);
  return c * std::exp(-0.5 * sp.mass * norm2(v));
}

inline double sqrt_maxwellian(const SpeciesParams& sp, const Vec3& v) {
  const double c = sp.eq_density * std::pow(sp.mass / (2.0 * M_PI), 1.5);
  return std::sqrt(c) * std::exp(-0.25 * sp.mass * norm2(v));
}

class Mixture {
 public:
  Mixture() = default;
  explicit Mixture(std::vector<SpeciesParams> species) : species_(std::move(species)) {
    for (const auto& sp : species_) {
      if (!(sp.mass > 0.0)) throw std::invalid_argument("species mass must be positive");
      if (!(sp.eq_density > 0.0)) throw std::invalid_argument("species density must be positive");
    }
  }

  int count() const { return static_cast<int>(species_.size()); }
  const SpeciesParams& operator[](int i) const { return species_[static_cast<std::size_t>(i)]; }
  const std::vector<SpeciesParams>& all() const { return species_; }

  double maxwellian(int i, const Vec3& v) const { return bmx::maxwellian(species_[i], v); }
  double sqrt_maxwellian(int i, const Vec3& v) const { return bmx::sqrt_maxwellian(species_[i], v); }

  double total_density() const {
    double s = 0.0;
    for (const auto& sp : species_) s += sp.eq_density;
    return s;
  }
  double total_mass_density() const {
    double s = 0.0;
    for (const auto& sp : species_) s += sp.mass * sp.eq_density;
    return s;
  }

 private:
  std::vector<SpeciesParams> species_;
};

// Velocity weight w(v) = (1 + |v|^2)^(q/2); the analysis needs q > 4.
struct WeightSpec {
  double q = 5.0;
};

inline double velocity_weight(const WeightSpec& w, const Vec3& v) {
  return std::pow(1.0 + norm2(v), 0.5 * w.q);
}

}  // namespace bmx

#endif
