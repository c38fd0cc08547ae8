#include "boltzmix/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "boltzmix/collision_geometry.hpp"

namespace bmx {

namespace {

constexpr double kLogFloor = 1e-300;

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

ConservedMoments conserved_moments(const MixtureState& state, const ThreadPool& pool) {
  if (state.mode() != StateMode::Physical)
    throw std::invalid_argument("conserved_moments expects a physical state");
  const auto& grid = state.grid();
  const std::size_t nn = grid.node_count();
  const double cell_avg = 1.0 / state.cells();

  ConservedMoments m;
  m.mass.assign(state.species_count(), 0.0);
  for (int c = 0; c < state.cells(); ++c) {
    for (int i = 0; i < state.species_count(); ++i) {
      auto F = state.values(c, i);
      const double mi = state.mixture()[i].mass;
      m.mass[i] += cell_avg * grid_integral(grid, F, pool);
      for (int d = 0; d < 3; ++d) {
        m.momentum[d] += cell_avg * mi * grid.node_weight() *
                         deterministic_sum(pool, nn, [&](std::size_t k) {
                           return grid.node(k)[d] * F[k];
                         });
      }
      m.energy += cell_avg * 0.5 * mi * grid.node_weight() *
                  deterministic_sum(pool, nn, [&](std::size_t k) {
                    return norm2(grid.node(k)) * F[k];
                  });
    }
  }
  return m;
}

double entropy(const MixtureState& state, const ThreadPool& pool) {
  if (state.mode() != StateMode::Physical)
    throw std::invalid_argument("entropy expects a physical state");
  const auto& grid = state.grid();
  const double cell_avg = 1.0 / state.cells();
  double e = 0.0;
  for (int c = 0; c < state.cells(); ++c)
    for (int i = 0; i < state.species_count(); ++i) {
      auto F = state.values(c, i);
      e += cell_avg * grid.node_weight() *
           deterministic_sum(pool, grid.node_count(),
                             [&](std::size_t k) { return xlogx(F[k]); });
    }
  return e;
}

double relative_entropy(const MixtureState& state, const ThreadPool& pool) {
  if (state.mode() != StateMode::Physical)
    throw std::invalid_argument("relative_entropy expects a physical state");
  const auto& grid = state.grid();
  const double cell_avg = 1.0 / state.cells();
  double e = 0.0;
  for (int c = 0; c < state.cells(); ++c)
    for (int i = 0; i < state.species_count(); ++i) {
      auto F = state.values(c, i);
      e += cell_avg * grid.node_weight() *
           deterministic_sum(pool, grid.node_count(), [&](std::size_t k) {
             const double mu = state.mixture().maxwellian(i, grid.node(k));
             return xlogx(F[k]) - xlogx(mu);
           });
    }
  return e;
}

double entropy_production(const MixtureState& state, const KernelSpec& kernel,
                          const SphereRule& rule, const ThreadPool& pool) {
  if (state.mode() != StateMode::Physical)
    throw std::invalid_argument("entropy_production expects a physical state");
  const auto& grid = state.grid();
  const auto& mix = state.mixture();
  const int ns = state.species_count();
  const double cell_avg = 1.0 / state.cells();

  double total = 0.0;
  for (int c = 0; c < state.cells(); ++c) {
    std::vector<std::vector<double>> g(ns);
    for (int i = 0; i < ns; ++i) g[i] = maxwellian_normalized(grid, mix, i, state.values(c, i));
    for (int i = 0; i < ns; ++i)
      for (int j = 0; j < ns; ++j) {
        PairQuadrature pq(grid, rule, kernel, mix, i, j);
        total += cell_avg *
                 pq.entropy_quadruple(state.values(c, i), state.values(c, j), g[i], g[j], pool);
      }
  }
  return total;
}

EntropySplit entropy_splitting_check(const MixtureState& state, const ThreadPool& pool) {
  if (state.mode() != StateMode::Physical)
    throw std::invalid_argument("entropy_splitting_check expects a physical state");
  const auto& grid = state.grid();
  const double cell_avg = 1.0 / state.cells();
  EntropySplit split;
  for (int c = 0; c < state.cells(); ++c)
    for (int i = 0; i < state.species_count(); ++i) {
      auto F = state.values(c, i);
      split.lhs += cell_avg * grid.node_weight() *
                   deterministic_sum(pool, grid.node_count(), [&](std::size_t k) {
                     const double mu = state.mixture().maxwellian(i, grid.node(k));
                     const double d = std::fabs(F[k] - mu);
                     // complementary split (the boundary case joins the
                     // quadratic branch, as in the derivation)
                     return d <= mu ? 0.25 * d * d / std::max(mu, kLogFloor) : 0.25 * d;
                   });
    }
  split.rhs = relative_entropy(state, pool);
  return split;
}

std::vector<double> weighted_sup_norm(const MixtureState& pert, const WeightSpec& weight) {
  if (pert.mode() != StateMode::Perturbation)
    throw std::invalid_argument("weighted_sup_norm expects a perturbation state");
  const auto& grid = pert.grid();
  std::vector<double> out(pert.species_count(), 0.0);
  for (int c = 0; c < pert.cells(); ++c)
    for (int i = 0; i < pert.species_count(); ++i) {
      auto f = pert.values(c, i);
      double m = 0.0;
      for (std::size_t k = 0; k < grid.node_count(); ++k)
        m = std::max(m, velocity_weight(weight, grid.node(k)) * std::fabs(f[k]));
      out[i] = std::max(out[i], m);
    }
  return out;
}

std::vector<double> gauss_monitor(const MixtureState& pert, const WeightSpec& weight,
                                  const ThreadPool& pool) {
  if (pert.mode() != StateMode::Perturbation)
    throw std::invalid_argument("gauss_monitor expects a perturbation state");
  const auto& grid = pert.grid();
  std::vector<double> out(pert.species_count(), 0.0);
  for (int c = 0; c < pert.cells(); ++c)
    for (int i = 0; i < pert.species_count(); ++i) {
      auto f = pert.values(c, i);
      const double cell_value =
          grid.node_weight() * deterministic_sum(pool, grid.node_count(), [&](std::size_t k) {
            const Vec3 v = grid.node(k);
            const double h = velocity_weight(weight, v) * f[k];
            return std::exp(-0.25 * norm2(v)) * std::fabs(h);
          });
      out[i] = std::max(out[i], cell_value);
    }
  return out;
}

std::vector<double> rfreq_ratio(const MixtureState& state, const KernelSpec& kernel,
                                const SphereRule& rule, const CollisionFrequencyTable& nu,
                                const ThreadPool& pool) {
  std::vector<double> out(state.species_count(), 0.0);
  for (int i = 0; i < state.species_count(); ++i) {
    double worst = std::numeric_limits<double>::infinity();
    for (int c = 0; c < state.cells(); ++c) {
      const std::vector<double> R = nonlinear_frequency(state, kernel, rule, i, pool, c);
      auto nu_i = nu.of(i);
      for (std::size_t k = 0; k < R.size(); ++k) worst = std::min(worst, R[k] / nu_i[k]);
    }
    out[i] = worst;
  }
  return out;
}

double record_field(const DiagnosticsRecord& rec, const std::string& field_name, int species) {
  if (field_name == "winf") return rec.winf.at(species);
  if (field_name == "gauss") return rec.gauss.at(species);
  if (field_name == "rel_entropy") return rec.rel_entropy;
  if (field_name == "entropy") return rec.entropy;
  if (field_name == "rfreq") return rec.rfreq_ratio.at(species);
  throw std::invalid_argument("unknown record field: " + field_name);
}

DecayFit fit_decay_rate(const std::vector<DiagnosticsRecord>& records,
                        const std::string& field_name, int species, double t_begin, double t_end) {
  std::vector<double> ts, ys;
  for (const auto& rec : records) {
    if (rec.time < t_begin || rec.time > t_end) continue;
    const double y = record_field(rec, field_name, species);
    if (y > 0.0) {
      ts.push_back(rec.time);
      ys.push_back(std::log(y));
    }
  }
  if (ts.size() < 10)
    throw std::invalid_argument("fit_decay_rate needs at least 10 positive samples in the window");
  const double n = static_cast<double>(ts.size());
  double st = 0.0, sy = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    st += ts[k];
    sy += ys[k];
  }
  const double mt = st / n, my = sy / n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double dt = ts[k] - mt, dy = ys[k] - my;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  DecayFit fit;
  fit.samples = static_cast<int>(ts.size());
  const double slope = sty / stt;
  fit.rate = -slope;
  fit.r_squared = syy > 0.0 ? (sty * sty) / (stt * syy) : 1.0;
  return fit;
}

std::string csv_header(int n_species) {
  std::ostringstream os;
  os << "time";
  for (int i = 1; i <= n_species; ++i) os << ",mass_" << i;
  os << ",px,py,pz,energy,entropy,rel_entropy,entropy_production";
  for (int i = 1; i <= n_species; ++i) os << ",winf_" << i;
  for (int i = 1; i <= n_species; ++i) os << ",gauss_" << i;
  for (int i = 1; i <= n_species; ++i) os << ",rfreq_" << i;
  return os.str();
}

namespace {
void put(std::ostringstream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << ',' << buf;
}
}  // namespace

std::string csv_row(const DiagnosticsRecord& rec) {
  std::ostringstream os;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", rec.time);
  os << buf;
  for (double m : rec.mass) put(os, m);
  put(os, rec.momentum.x);
  put(os, rec.momentum.y);
  put(os, rec.momentum.z);
  put(os, rec.energy);
  put(os, rec.entropy);
  put(os, rec.rel_entropy);
  put(os, rec.entropy_production);
  for (double v : rec.winf) put(os, v);
  for (double v : rec.gauss) put(os, v);
  for (double v : rec.rfreq_ratio) put(os, v);
  return os.str();
}

void write_csv(std::ostream& os, int n_species, const std::vector<DiagnosticsRecord>& records) {
  os << csv_header(n_species) << '\n';
  for (const auto& rec : records) os << csv_row(rec) << '\n';
}

double maxwellian_mass_defect(const Mixture& mixture, const VelocityGrid& grid) {
  // 1 - P(|v_d| <= L for all d) per species, worst over species
  double worst = 0.0;
  for (int i = 0; i < mixture.count(); ++i) {
    const double m = mixture[i].mass;
    const double axis = std::erf(grid.half_width() * std::sqrt(0.5 * m));
    worst = std::max(worst, 1.0 - axis * axis * axis);
  }
  return worst;
}

}  // namespace bmx
