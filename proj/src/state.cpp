#include "boltzmix/state.hpp"

#include <algorithm>

namespace bmx {

MixtureState MixtureState::equilibrium(const Mixture& mixture, const VelocityGrid& grid,
                                       int cells) {
  MixtureState st(mixture, grid, StateMode::Physical, cells);
  const std::size_t nn = grid.node_count();
  std::vector<double> mu(nn);
  for (int i = 0; i < mixture.count(); ++i) {
    for (std::size_t k = 0; k < nn; ++k) mu[k] = mixture.maxwellian(i, grid.node(k));
    for (int c = 0; c < cells; ++c) std::copy(mu.begin(), mu.end(), st.values(c, i).begin());
  }
  return st;
}

double MixtureState::min_value() const {
  double m = data_.empty() ? 0.0 : data_[0];
  for (double x : data_) m = std::min(m, x);
  return m;
}

MixtureState to_perturbation(const MixtureState& physical) {
  if (physical.mode() != StateMode::Physical)
    throw std::invalid_argument("to_perturbation expects a physical state");
  MixtureState out(physical.mixture(), physical.grid(), StateMode::Perturbation, physical.cells());
  const auto& grid = physical.grid();
  const std::size_t nn = grid.node_count();
  for (int i = 0; i < physical.species_count(); ++i) {
    std::vector<double> mu(nn), smu(nn);
    for (std::size_t k = 0; k < nn; ++k) {
      mu[k] = physical.mixture().maxwellian(i, grid.node(k));
      smu[k] = physical.mixture().sqrt_maxwellian(i, grid.node(k));
    }
    for (int c = 0; c < physical.cells(); ++c) {
      auto F = physical.values(c, i);
      auto f = out.values(c, i);
      for (std::size_t k = 0; k < nn; ++k) f[k] = (F[k] - mu[k]) / smu[k];
    }
  }
  return out;
}

MixtureState to_physical(const MixtureState& perturbation) {
  if (perturbation.mode() != StateMode::Perturbation)
    throw std::invalid_argument("to_physical expects a perturbation state");
  MixtureState out(perturbation.mixture(), perturbation.grid(), StateMode::Physical,
                   perturbation.cells());
  const auto& grid = perturbation.grid();
  const std::size_t nn = grid.node_count();
  for (int i = 0; i < perturbation.species_count(); ++i) {
    std::vector<double> mu(nn), smu(nn);
    for (std::size_t k = 0; k < nn; ++k) {
      mu[k] = perturbation.mixture().maxwellian(i, grid.node(k));
      smu[k] = perturbation.mixture().sqrt_maxwellian(i, grid.node(k));
    }
    for (int c = 0; c < perturbation.cells(); ++c) {
      auto f = perturbation.values(c, i);
      auto F = out.values(c, i);
      for (std::size_t k = 0; k < nn; ++k) F[k] = mu[k] + smu[k] * f[k];
    }
  }
  return out;
}

}  // namespace bmx
