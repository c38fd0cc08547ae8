#ifndef BOLTZMIX_STATE_HPP
#define BOLTZMIX_STATE_HPP

#include <span>
#include <stdexcept>
#include <vector>

#include "boltzmix/grid.hpp"
#include "boltzmix/species.hpp"

namespace bmx {

// Physical states hold nonnegative distribution values F_i(v_k); perturbation
// states hold the signed f_i with F = mu + sqrt(mu) f.
enum class StateMode { Physical, Perturbation };

class MixtureState {
 public:
  MixtureState() = default;
  MixtureState(Mixture mixture, VelocityGrid grid, StateMode mode, int cells = 1)
      : mixture_(std::move(mixture)), grid_(std::move(grid)), mode_(mode), cells_(cells) {
    if (cells_ < 1) throw std::invalid_argument("state needs at least one spatial cell");
    data_.assign(static_cast<std::size_t>(cells_) * mixture_.count() * grid_.node_count(), 0.0);
  }

  static MixtureState equilibrium(const Mixture& mixture, const VelocityGrid& grid, int cells = 1);

  const Mixture& mixture() const { return mixture_; }
  const VelocityGrid& grid() const { return grid_; }
  StateMode mode() const { return mode_; }
  int cells() const { return cells_; }
  int species_count() const { return mixture_.count(); }

  std::span<double> values(int cell, int species) {
    return {data_.data() + offset(cell, species), grid_.node_count()};
  }
  std::span<const double> values(int cell, int species) const {
    return {data_.data() + offset(cell, species), grid_.node_count()};
  }
  std::span<double> values(int species) { return values(0, species); }
  std::span<const double> values(int species) const { return values(0, species); }

  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

  double min_value() const;
  bool nonnegative() const { return min_value() >= 0.0; }

 private:
  std::size_t offset(int cell, int species) const {
    return (static_cast<std::size_t>(cell) * mixture_.count() + species) * grid_.node_count();
  }

  Mixture mixture_;
  VelocityGrid grid_;
  StateMode mode_ = StateMode::Physical;
  int cells_ = 1;
  std::vector<double> data_;
};

// f = (F - mu) / sqrt(mu) and back.
MixtureState to_perturbation(const MixtureState& physical);
MixtureState to_physical(const MixtureState& perturbation);

}  // namespace bmx

#endif
