#include "boltzmix/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bmx {

std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::fabs(a[r * n + col]) > std::fabs(a[piv * n + col])) piv = r;
    if (a[piv * n + col] == 0.0) throw std::runtime_error("singular moment system");
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(a[piv * n + c], a[col * n + c]);
      std::swap(b[piv], b[col]);
    }
    const double inv = 1.0 / a[col * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] * inv;
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[r * n + c] * b[c];
    b[r] = s / a[r * n + r];
  }
  return b;
}

namespace {

double invariant_psi(int l, int i, const Vec3& v, double mass, int n_species) {
  if (l < n_species) return l == i ? 1.0 : 0.0;
  if (l < n_species + 3) return mass * v[l - n_species];
  return mass * norm2(v);
}

}  // namespace

ConservedMoments cell_moments(const MixtureState& state, int cell, const ThreadPool& pool) {
  const auto& grid = state.grid();
  const std::size_t nn = grid.node_count();
  ConservedMoments m;
  m.mass.assign(state.species_count(), 0.0);
  for (int i = 0; i < state.species_count(); ++i) {
    auto F = state.values(cell, i);
    const double mi = state.mixture()[i].mass;
    m.mass[i] = grid_integral(grid, F, pool);
    for (int d = 0; d < 3; ++d)
      m.momentum[d] += mi * grid.node_weight() * deterministic_sum(pool, nn, [&](std::size_t k) {
                         return grid.node(k)[d] * F[k];
                       });
    m.energy += 0.5 * mi * grid.node_weight() * deterministic_sum(pool, nn, [&](std::size_t k) {
                  return norm2(grid.node(k)) * F[k];
                });
  }
  return m;
}

double conservation_fix_cell(MixtureState& state, int cell, const ConservedMoments& target,
                             const ThreadPool& pool) {
  const auto& grid = state.grid();
  const std::size_t nn = grid.node_count();
  const int ns = state.species_count();
  const int nm = ns + 4;

  // moment residual r_l = target_l - current_l (energy invariant uses m|v|^2,
  // twice the energy moment)
  const ConservedMoments cur = cell_moments(state, cell, pool);
  std::vector<double> rhs(nm, 0.0);
  for (int i = 0; i < ns; ++i) rhs[i] = target.mass[i] - cur.mass[i];
  for (int d = 0; d < 3; ++d) rhs[ns + d] = target.momentum[d] - cur.momentum[d];
  rhs[ns + 3] = 2.0 * (target.energy - cur.energy);

  // Gram_lm = sum_i int psi_l psi_m F_i dv
  std::vector<double> gram(static_cast<std::size_t>(nm) * nm, 0.0);
  for (int l = 0; l < nm; ++l)
    for (int mcol = l; mcol < nm; ++mcol) {
      double s = 0.0;
      for (int i = 0; i < ns; ++i) {
        auto F = state.values(cell, i);
        const double mi = state.mixture()[i].mass;
        s += grid.node_weight() * deterministic_sum(pool, nn, [&](std::size_t k) {
               const Vec3 v = grid.node(k);
               return invariant_psi(l, i, v, mi, ns) * invariant_psi(mcol, i, v, mi, ns) * F[k];
             });
      }
      gram[static_cast<std::size_t>(l) * nm + mcol] = s;
      gram[static_cast<std::size_t>(mcol) * nm + l] = s;
    }

  const std::vector<double> lambda = solve_dense(std::move(gram), std::move(rhs));

  // largest theta in [0,1] with 1 + theta * sum lambda psi >= 0 on all nodes
  double theta = 1.0;
  for (int i = 0; i < ns; ++i) {
    const double mi = state.mixture()[i].mass;
    for (std::size_t k = 0; k < nn; ++k) {
      const Vec3 v = grid.node(k);
      double corr = 0.0;
      for (int l = 0; l < nm; ++l) corr += lambda[l] * invariant_psi(l, i, v, mi, ns);
      if (corr < -1.0) theta = std::min(theta, -1.0 / corr);
    }
  }
  for (int i = 0; i < ns; ++i) {
    auto F = state.values(cell, i);
    const double mi = state.mixture()[i].mass;
    pool.parallel_for(nn, [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) {
        const Vec3 v = grid.node(k);
        double corr = 0.0;
        for (int l = 0; l < nm; ++l) corr += lambda[l] * invariant_psi(l, i, v, mi, ns);
        F[k] *= std::max(0.0, 1.0 + theta * corr);
      }
    });
  }
  return theta;
}

namespace {

void collision_update_cell(MixtureState& out, const MixtureState& state, const KernelSpec& kernel,
                           const SphereRule& rule, double dt, Scheme scheme, bool fix, int cell,
                           const ThreadPool& pool) {
  const auto& grid = state.grid();
  const auto& mix = state.mixture();
  const int ns = state.species_count();
  const std::size_t nn = grid.node_count();

  ConservedMoments target;
  if (fix) target = cell_moments(state, cell, pool);

  std::vector<std::vector<double>> g(ns);
  for (int i = 0; i < ns; ++i) g[i] = maxwellian_normalized(grid, mix, i, state.values(cell, i));

  std::vector<double> gain(nn), rate(nn), buf(nn);
  for (int i = 0; i < ns; ++i) {
    std::fill(gain.begin(), gain.end(), 0.0);
    std::fill(rate.begin(), rate.end(), 0.0);
    for (int j = 0; j < ns; ++j) {
      PairQuadrature pq(grid, rule, kernel, mix, i, j);
      pq.gain(g[i], g[j], buf, pool);
      for (std::size_t k = 0; k < nn; ++k) gain[k] += buf[k];
      pq.loss_rate(state.values(cell, j), buf, pool);
      for (std::size_t k = 0; k < nn; ++k) rate[k] += buf[k];
    }
    auto F = state.values(cell, i);
    auto Fn = out.values(cell, i);
    if (scheme == Scheme::SemiImplicitLoss) {
      for (std::size_t k = 0; k < nn; ++k) Fn[k] = (F[k] + dt * gain[k]) / (1.0 + dt * rate[k]);
    } else {
      for (std::size_t k = 0; k < nn; ++k) Fn[k] = F[k] + dt * (gain[k] - F[k] * rate[k]);
    }
  }
  if (fix) conservation_fix_cell(out, cell, target, pool);
}

// u(x) <- u(x - v dt) on the unit torus with periodic linear interpolation.
void transport_half_step(MixtureState& state, double half_dt, const ThreadPool& pool) {
  const int cells = state.cells();
  if (cells == 1) return;
  const auto& grid = state.grid();
  const std::size_t nn = grid.node_count();
  const double dx = 1.0 / cells;
  std::vector<double> line(cells), shifted(cells);
  for (int i = 0; i < state.species_count(); ++i) {
    for (std::size_t k = 0; k < nn; ++k) {
      const double vx = grid.node(k).x;
      const double s = vx * half_dt / dx;
      const double fl = std::floor(s);
      const int i0 = static_cast<int>(fl);
      const double alpha = s - fl;
      for (int c = 0; c < cells; ++c) line[c] = state.values(c, i)[k];
      for (int c = 0; c < cells; ++c) {
        const int src = ((c - i0) % cells + cells) % cells;
        const int src2 = (src - 1 + cells) % cells;
        shifted[c] = (1.0 - alpha) * line[src] + alpha * line[src2];
      }
      for (int c = 0; c < cells; ++c) state.values(c, i)[k] = shifted[c];
    }
  }
  (void)pool;
}

}  // namespace

MixtureState step_homogeneous(const MixtureState& state, const KernelSpec& kernel,
                              const SphereRule& rule, const StepConfig& cfg,
                              const ThreadPool& pool) {
  if (state.mode() != StateMode::Physical)
    throw std::invalid_argument("step_homogeneous expects a physical state");
  if (state.min_value() < 0.0)
    throw std::invalid_argument("step_homogeneous: physical state must be nonnegative");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("step: dt must be resolved and positive");
  MixtureState out = state;
  for (int c = 0; c < state.cells(); ++c)
    collision_update_cell(out, state, kernel, rule, cfg.dt, cfg.scheme, cfg.conservation_fix, c,
                          pool);
  return out;
}

MixtureState step_torus(const MixtureState& state, const KernelSpec& kernel,
                        const SphereRule& rule, const StepConfig& cfg, const ThreadPool& pool) {
  if (state.mode() != StateMode::Physical)
    throw std::invalid_argument("step_torus expects a physical state");
  if (state.min_value() < 0.0)
    throw std::invalid_argument("step_torus: physical state must be nonnegative");
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("step: dt must be resolved and positive");
  MixtureState mid = state;
  transport_half_step(mid, 0.5 * cfg.dt, pool);
  MixtureState out = mid;
  for (int c = 0; c < state.cells(); ++c)
    collision_update_cell(out, mid, kernel, rule, cfg.dt, cfg.scheme, cfg.conservation_fix, c,
                          pool);
  transport_half_step(out, 0.5 * cfg.dt, pool);
  return out;
}

double resolve_dt(const StepConfig& cfg, const Mixture& mixture, const KernelSpec& kernel,
                  const VelocityGrid& grid, const SphereRule& rule, const ThreadPool& pool) {
  if (cfg.dt > 0.0) return cfg.dt;
  const CollisionFrequencyTable nu = build_nu(mixture, kernel, grid, rule, pool);
  return 0.2 / nu.max();
}

DiagnosticsRecord collect_diagnostics(const MixtureState& state, const KernelSpec& kernel,
                                      const SphereRule& rule, const CollisionFrequencyTable& nu,
                                      const WeightSpec& weight, double time,
                                      const ThreadPool& pool) {
  DiagnosticsRecord rec;
  rec.time = time;
  const ConservedMoments m = conserved_moments(state, pool);
  rec.mass = m.mass;
  rec.momentum = m.momentum;
  rec.energy = m.energy;
  rec.entropy = entropy(state, pool);
  rec.rel_entropy = relative_entropy(state, pool);
  rec.entropy_production = entropy_production(state, kernel, rule, pool);
  const MixtureState pert = to_perturbation(state);
  rec.winf = weighted_sup_norm(pert, weight);
  rec.gauss = gauss_monitor(pert, weight, pool);
  rec.rfreq_ratio = rfreq_ratio(state, kernel, rule, nu, pool);
  return rec;
}

RunResult run_simulation(const MixtureState& initial, const KernelSpec& kernel,
                         const SphereRule& rule, const StepConfig& cfg, const WeightSpec& weight,
                         double t_end, int sample_every, const ThreadPool& pool) {
  if (t_end < 0.0) throw std::invalid_argument("run: t_end must be nonnegative");
  if (sample_every < 1) throw std::invalid_argument("run: sample_every must be >= 1");

  StepConfig step_cfg = cfg;
  step_cfg.dt = resolve_dt(cfg, initial.mixture(), kernel, initial.grid(), rule, pool);
  const CollisionFrequencyTable nu = build_nu(initial.mixture(), kernel, initial.grid(), rule, pool);

  RunResult result;
  result.dt = step_cfg.dt;
  result.final_state = initial;
  result.records.push_back(
      collect_diagnostics(initial, kernel, rule, nu, weight, 0.0, pool));

  const bool torus = initial.cells() > 1;
  double t = 0.0;
  int since_sample = 0;
  while (t + 1e-12 * step_cfg.dt < t_end) {
    const double dt = std::min(step_cfg.dt, t_end - t);
    StepConfig sc = step_cfg;
    sc.dt = dt;
    result.final_state = torus ? step_torus(result.final_state, kernel, rule, sc, pool)
                               : step_homogeneous(result.final_state, kernel, rule, sc, pool);
    t += dt;
    ++result.steps;
    if (++since_sample >= sample_every || t + 1e-12 * step_cfg.dt >= t_end) {
      since_sample = 0;
      result.records.push_back(collect_diagnostics(result.final_state, kernel, rule, nu, weight,
                                                   t, pool));
    }
  }
  return result;
}

}  // namespace bmx
