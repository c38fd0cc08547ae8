#include "boltzmix/linearized.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bmx {

double CollisionFrequencyTable::max() const {
  double m = 0.0;
  for (double x : nu) m = std::max(m, x);
  return m;
}

double CollisionFrequencyTable::min() const {
  double m = nu.empty() ? 0.0 : nu[0];
  for (double x : nu) m = std::min(m, x);
  return m;
}

CollisionFrequencyTable build_nu(const Mixture& mixture, const KernelSpec& kernel,
                                 const VelocityGrid& grid, const SphereRule& rule,
                                 const ThreadPool& pool) {
  const int ns = mixture.count();
  const std::size_t nn = grid.node_count();
  CollisionFrequencyTable table;
  table.n_species = ns;
  table.nodes = nn;
  table.nu.assign(static_cast<std::size_t>(ns) * nn, 0.0);
  table.nu_pair.assign(static_cast<std::size_t>(ns) * ns * nn, 0.0);

  std::vector<double> mu(nn), buf(nn);
  for (int j = 0; j < ns; ++j) {
    for (std::size_t k = 0; k < nn; ++k) mu[k] = mixture.maxwellian(j, grid.node(k));
    for (int i = 0; i < ns; ++i) {
      PairQuadrature pq(grid, rule, kernel, mixture, i, j);
      pq.loss_rate(mu, buf, pool);
      double* pair = table.nu_pair.data() + (static_cast<std::size_t>(i) * ns + j) * nn;
      double* sum = table.nu.data() + static_cast<std::size_t>(i) * nn;
      for (std::size_t k = 0; k < nn; ++k) {
        pair[k] = buf[k];
        sum[k] += buf[k];
      }
    }
  }
  return table;
}

KernelBasis::KernelBasis(const Mixture& mixture, const VelocityGrid& grid, const ThreadPool& pool)
    : n_species_(mixture.count()), nodes_(grid.node_count()) {
  const int nb = count();
  data_.assign(static_cast<std::size_t>(nb) * n_species_ * nodes_, 0.0);

  const double rho = mixture.total_mass_density();
  const double ntot = mixture.total_density();

  for (int i = 0; i < n_species_; ++i) {
    const double m = mixture[i].mass;
    const double inv_sqrt_n = 1.0 / std::sqrt(mixture[i].eq_density);
    double* species_dir = data_.data() + (static_cast<std::size_t>(i) * n_species_ + i) * nodes_;
    for (std::size_t k = 0; k < nodes_; ++k) {
      const Vec3 v = grid.node(k);
      const double smu = mixture.sqrt_maxwellian(i, v);
      species_dir[k] = inv_sqrt_n * smu;
      for (int d = 0; d < 3; ++d) {
        double* momentum_dir =
            data_.data() + (static_cast<std::size_t>(n_species_ + d) * n_species_ + i) * nodes_;
        momentum_dir[k] = v[d] / std::sqrt(rho) * m * smu;
      }
      double* energy_dir =
          data_.data() + (static_cast<std::size_t>(n_species_ + 3) * n_species_ + i) * nodes_;
      energy_dir[k] = (norm2(v) - 3.0 / m) / std::sqrt(6.0 * ntot) * m * smu;
    }
  }

  gram_.assign(static_cast<std::size_t>(nb) * nb, 0.0);
  for (int a = 0; a < nb; ++a)
    for (int b = a; b < nb; ++b) {
      double s = 0.0;
      for (int i = 0; i < n_species_; ++i) {
        auto pa = phi(a, i);
        auto pb = phi(b, i);
        s += grid.node_weight() * deterministic_sum(pool, nodes_, [&](std::size_t k) {
               return pa[k] * pb[k];
             });
      }
      gram_[static_cast<std::size_t>(a) * nb + b] = s;
      gram_[static_cast<std::size_t>(b) * nb + a] = s;
    }
}

double KernelBasis::max_gram_defect() const {
  const int nb = count();
  double worst = 0.0;
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b) {
      const double target = a == b ? 1.0 : 0.0;
      worst = std::max(worst, std::fabs(gram(a, b) - target));
    }
  return worst;
}

std::vector<double> apply_K(const MixtureState& pert, const KernelSpec& kernel,
                            const SphereRule& rule, int i, const ThreadPool& pool) {
  if (pert.mode() != StateMode::Perturbation)
    throw std::invalid_argument("apply_K expects a perturbation state");
  const auto& grid = pert.grid();
  const auto& mix = pert.mixture();
  const int ns = pert.species_count();
  const std::size_t nn = grid.node_count();

  std::vector<double> smu_i(nn), inv_smu_i(nn);
  for (std::size_t k = 0; k < nn; ++k) {
    smu_i[k] = mix.sqrt_maxwellian(i, grid.node(k));
    inv_smu_i[k] = smu_i[k] > 1e-290 ? 1.0 / smu_i[k] : 0.0;
  }

  std::vector<double> out(nn, 0.0), buf(nn);
  const std::vector<double> ones(nn, 1.0);
  std::vector<double> norm_slot_i(nn), slot_j(nn), norm_slot_j(nn);
  {
    auto f = pert.values(i);
    for (std::size_t k = 0; k < nn; ++k) norm_slot_i[k] = f[k] * inv_smu_i[k];
  }
  for (int j = 0; j < ns; ++j) {
    auto f = pert.values(j);
    for (std::size_t k = 0; k < nn; ++k) {
      const double smu = mix.sqrt_maxwellian(j, grid.node(k));
      slot_j[k] = smu * f[k];
      norm_slot_j[k] = smu > 1e-290 ? f[k] / smu : 0.0;
    }
    PairQuadrature pq(grid, rule, kernel, mix, i, j);
    // coupling gain terms
    pq.gain(ones, norm_slot_j, buf, pool);
    for (std::size_t k = 0; k < nn; ++k) out[k] += inv_smu_i[k] * buf[k];
    pq.gain(norm_slot_i, ones, buf, pool);
    for (std::size_t k = 0; k < nn; ++k) out[k] += inv_smu_i[k] * buf[k];
    // local sqrt(mu_i) f_j term
    pq.loss_rate(slot_j, buf, pool);
    for (std::size_t k = 0; k < nn; ++k) out[k] -= smu_i[k] * buf[k];
  }
  return out;
}

std::vector<double> apply_L(const MixtureState& pert, const KernelSpec& kernel,
                            const SphereRule& rule, const CollisionFrequencyTable& nu, int i,
                            const ThreadPool& pool) {
  std::vector<double> out = apply_K(pert, kernel, rule, i, pool);
  auto f = pert.values(i);
  auto nu_i = nu.of(i);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] -= nu_i[k] * f[k];
  return out;
}

Projection project_PL(const MixtureState& pert, const KernelBasis& basis, const ThreadPool& pool) {
  if (pert.mode() != StateMode::Perturbation)
    throw std::invalid_argument("project_PL expects a perturbation state");
  const auto& grid = pert.grid();
  const std::size_t nn = grid.node_count();
  const int ns = pert.species_count();

  Projection proj{std::vector<double>(basis.count(), 0.0),
                  MixtureState(pert.mixture(), grid, StateMode::Perturbation),
                  MixtureState(pert.mixture(), grid, StateMode::Perturbation)};
  for (int a = 0; a < basis.count(); ++a) {
    double c = 0.0;
    for (int i = 0; i < ns; ++i) {
      auto f = pert.values(i);
      auto p = basis.phi(a, i);
      c += grid.node_weight() *
           deterministic_sum(pool, nn, [&](std::size_t k) { return f[k] * p[k]; });
    }
    proj.coefficients[a] = c;
  }
  for (int i = 0; i < ns; ++i) {
    auto f = pert.values(i);
    auto macro = proj.macro.values(i);
    auto micro = proj.micro.values(i);
    for (std::size_t k = 0; k < nn; ++k) {
      double m = 0.0;
      for (int a = 0; a < basis.count(); ++a) m += proj.coefficients[a] * basis.phi(a, i)[k];
      macro[k] = m;
      micro[k] = f[k] - m;
    }
  }
  return proj;
}

double inner_product(const MixtureState& a, const MixtureState& b, const ThreadPool& pool) {
  const auto& grid = a.grid();
  double s = 0.0;
  for (int i = 0; i < a.species_count(); ++i) {
    auto fa = a.values(i);
    auto fb = b.values(i);
    s += grid.node_weight() * deterministic_sum(pool, grid.node_count(), [&](std::size_t k) {
           return fa[k] * fb[k];
         });
  }
  return s;
}

CoercivityProbe coercivity_probe(const MixtureState& pert, const KernelSpec& kernel,
                                 const SphereRule& rule, const CollisionFrequencyTable& nu,
                                 const KernelBasis& basis, const ThreadPool& pool) {
  const auto& grid = pert.grid();
  const std::size_t nn = grid.node_count();
  CoercivityProbe probe;
  for (int i = 0; i < pert.species_count(); ++i) {
    const std::vector<double> Lf = apply_L(pert, kernel, rule, nu, i, pool);
    auto f = pert.values(i);
    probe.dirichlet += grid.node_weight() *
                       deterministic_sum(pool, nn, [&](std::size_t k) { return f[k] * Lf[k]; });
  }
  const Projection proj = project_PL(pert, basis, pool);
  const double gamma = kernel.gamma();
  for (int i = 0; i < pert.species_count(); ++i) {
    auto micro = proj.micro.values(i);
    probe.micro_norm += grid.node_weight() * deterministic_sum(pool, nn, [&](std::size_t k) {
                          const double w = std::pow(1.0 + norm2(grid.node(k)), 0.5 * gamma);
                          return w * micro[k] * micro[k];
                        });
  }
  return probe;
}

}  // namespace bmx
