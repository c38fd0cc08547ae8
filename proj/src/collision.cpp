#include "boltzmix/collision.hpp"

#include <cmath>
#include <stdexcept>

#include "boltzmix/collision_geometry.hpp"

namespace bmx {

namespace {

constexpr double kMuFloor = 1e-290;
// Inputs with mu_j(v_*) * |g_i|_max * |g_j|_max below this fraction of the
// largest possible term contribute less than ~1e-16 of the result; outputs
// with mu_i(v) below this fraction of its peak are zeroed (the update they
// feed is smaller than rounding on every functional the toolkit reports).
constexpr double kPairCutoff = 1e-20;

}  // namespace

std::vector<double> maxwellian_normalized(const VelocityGrid& grid, const Mixture& mixture, int i,
                                          std::span<const double> a) {
  std::vector<double> g(grid.node_count());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double mu = mixture.maxwellian(i, grid.node(k));
    g[k] = mu > kMuFloor ? a[k] / mu : 0.0;
  }
  return g;
}

PairQuadrature::PairQuadrature(const VelocityGrid& grid, const SphereRule& rule,
                               const KernelSpec& kernel, const Mixture& mixture, int i, int j)
    : grid_(grid), kernel_(kernel), i_(i), j_(j), mi_(mixture[i].mass), mj_(mixture[j].mass) {
  const std::size_t nn = grid.node_count();
  mu_i_.resize(nn);
  mu_j_.resize(nn);
  mu_i_max_ = mu_j_max_ = 0.0;
  for (std::size_t k = 0; k < nn; ++k) {
    mu_i_[k] = mixture.maxwellian(i, grid.node(k));
    mu_j_[k] = mixture.maxwellian(j, grid.node(k));
    mu_i_max_ = std::max(mu_i_max_, mu_i_[k]);
    mu_j_max_ = std::max(mu_j_max_, mu_j_[k]);
  }
  const auto& b = kernel.angular(i, j);
  rt_ = rule.t;
  ra_ = rule.a;
  rb_ = rule.b;
  rbw_.resize(rule.size());
  for (std::size_t s = 0; s < rule.size(); ++s) {
    rbw_[s] = rule.w[s] * b(rule.t[s]);
    angular_mass_ += rbw_[s];
  }

  // kernel and geometry tables keyed by the integer squared node distance
  const int n = grid.points_per_axis();
  const int d2max = 3 * (n - 1) * (n - 1);
  const double cphi = kernel.c_phi(i, j);
  const double dx = grid.spacing();
  phi_.resize(d2max + 1);
  dist_.resize(d2max + 1);
  inv_dist_.resize(d2max + 1);
  for (int d2 = 0; d2 <= d2max; ++d2) {
    const double r = dx * std::sqrt(static_cast<double>(d2));
    phi_[d2] = cphi * kernel.relative_speed_factor(r);
    dist_[d2] = r;
    inv_dist_[d2] = d2 > 0 ? 1.0 / r : 0.0;
  }
}

double PairQuadrature::gain_at(std::span<const double> gi, std::span<const double> gj,
                               std::size_t node) const {
  double gmax_i = 0.0, gmax_j = 0.0;
  for (double g : gi) gmax_i = std::max(gmax_i, std::fabs(g));
  for (double g : gj) gmax_j = std::max(gmax_j, std::fabs(g));
  return gain_node(gi.data(), gj.data(), node,
                   kPairCutoff * mu_j_max_ / std::max(1.0, gmax_i * gmax_j));
}

double PairQuadrature::gain_node(const double* gi, const double* gj, std::size_t node,
                                 double mu_j_cut) const {
  const int n = grid_.points_per_axis();
  const Vec3* nodes = grid_.nodes().data();
  const Vec3 v = nodes[node];
  const int vx = static_cast<int>(node / (static_cast<std::size_t>(n) * n));
  const int vy = static_cast<int>((node / n) % n);
  const int vz = static_cast<int>(node % n);

  const double msum = mi_ + mj_;
  const double cj = mj_ / msum, ci = mi_ / msum;
  const std::size_t ns = rt_.size();
  const double* rt = rt_.data();
  const double* ra = ra_.data();
  const double* rb = rb_.data();
  const double* rbw = rbw_.data();

  double total = 0.0;
  std::size_t ks = 0;
  for (int sx = 0; sx < n; ++sx) {
    const int dxs = vx - sx;
    for (int sy = 0; sy < n; ++sy) {
      const int dys = vy - sy;
      const int d2xy = dxs * dxs + dys * dys;
      for (int sz = 0; sz < n; ++sz, ++ks) {
        const double muj = mu_j_[ks];
        if (muj < mu_j_cut) continue;
        const int d2 = d2xy + (vz - sz) * (vz - sz);
        const double wpair = phi_[d2] * muj;
        if (wpair == 0.0) continue;
        const Vec3 vs = nodes[ks];
        const double r = dist_[d2];
        Vec3 uh{0.0, 0.0, 1.0};
        if (d2 > 0) {
          const double inv = inv_dist_[d2];
          uh = {(v.x - vs.x) * inv, (v.y - vs.y) * inv, (v.z - vs.z) * inv};
        }
        Vec3 e1, e2;
        orthonormal_frame(uh, e1, e2);
        const double px = ci * v.x + cj * vs.x;
        const double py = ci * v.y + cj * vs.y;
        const double pz = ci * v.z + cj * vs.z;
        const double rj = cj * r, ri = ci * r;
        double acc = 0.0;
        for (std::size_t s = 0; s < ns; ++s) {
          const double t = rt[s], a = ra[s], b = rb[s];
          const double ox = t * uh.x + a * e1.x + b * e2.x;
          const double oy = t * uh.y + a * e1.y + b * e2.y;
          const double oz = t * uh.z + a * e1.z + b * e2.z;
          const Vec3 vp{px + rj * ox, py + rj * oy, pz + rj * oz};
          const Vec3 vsp{px - ri * ox, py - ri * oy, pz - ri * oz};
          acc += rbw[s] * trilinear(grid_, gi, vp) * trilinear(grid_, gj, vsp);
        }
        total += wpair * acc;
      }
    }
  }
  return mu_i_[node] * grid_.node_weight() * total;
}

void PairQuadrature::gain(std::span<const double> gi, std::span<const double> gj,
                          std::span<double> out, const ThreadPool& pool) const {
  double gmax_i = 0.0, gmax_j = 0.0;
  for (double g : gi) gmax_i = std::max(gmax_i, std::fabs(g));
  for (double g : gj) gmax_j = std::max(gmax_j, std::fabs(g));
  const double mu_j_cut = kPairCutoff * mu_j_max_ / std::max(1.0, gmax_i * gmax_j);
  const double mu_i_cut = kPairCutoff * mu_i_max_;
  pool.parallel_for(grid_.node_count(), [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      out[k] = mu_i_[k] < mu_i_cut ? 0.0 : gain_node(gi.data(), gj.data(), k, mu_j_cut);
    }
  });
}

double PairQuadrature::loss_rate_at(std::span<const double> b_values, std::size_t node) const {
  const int n = grid_.points_per_axis();
  const int vx = static_cast<int>(node / (static_cast<std::size_t>(n) * n));
  const int vy = static_cast<int>((node / n) % n);
  const int vz = static_cast<int>(node % n);
  double total = 0.0;
  std::size_t ks = 0;
  for (int sx = 0; sx < n; ++sx) {
    const int dxs = vx - sx;
    for (int sy = 0; sy < n; ++sy) {
      const int dys = vy - sy;
      const int d2xy = dxs * dxs + dys * dys;
      for (int sz = 0; sz < n; ++sz, ++ks) {
        total += phi_[d2xy + (vz - sz) * (vz - sz)] * b_values[ks];
      }
    }
  }
  return angular_mass_ * grid_.node_weight() * total;
}

void PairQuadrature::loss_rate(std::span<const double> b_values, std::span<double> out,
                               const ThreadPool& pool) const {
  pool.parallel_for(grid_.node_count(), [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) out[k] = loss_rate_at(b_values, k);
  });
}

double PairQuadrature::entropy_quadruple(std::span<const double> Fi, std::span<const double> Fj,
                                         std::span<const double> gi, std::span<const double> gj,
                                         const ThreadPool& pool) const {
  const int n = grid_.points_per_axis();
  const Vec3* nodes = grid_.nodes().data();
  const double msum = mi_ + mj_;
  const double cjm = mj_ / msum, cim = mi_ / msum;
  const std::size_t ns = rt_.size();

  const double sum = deterministic_sum(pool, grid_.node_count(), [&](std::size_t kv) {
    const Vec3 v = nodes[kv];
    const int vx = static_cast<int>(kv / (static_cast<std::size_t>(n) * n));
    const int vy = static_cast<int>((kv / n) % n);
    const int vz = static_cast<int>(kv % n);
    const double mu_i_v = mu_i_[kv];
    double outer = 0.0;
    std::size_t ks = 0;
    for (int sx = 0; sx < n; ++sx) {
      const int dxs = vx - sx;
      for (int sy = 0; sy < n; ++sy) {
        const int dys = vy - sy;
        const int d2xy = dxs * dxs + dys * dys;
        for (int sz = 0; sz < n; ++sz, ++ks) {
          const int d2 = d2xy + (vz - sz) * (vz - sz);
          const double phi_fac = phi_[d2];
          if (phi_fac == 0.0) continue;
          const double a = Fi[kv] * Fj[ks];
          const double mumu = mu_i_v * mu_j_[ks];
          if (a == 0.0 && mumu == 0.0) continue;
          const Vec3 vs = nodes[ks];
          Vec3 uh{0.0, 0.0, 1.0};
          if (d2 > 0) {
            const double inv = inv_dist_[d2];
            uh = {(v.x - vs.x) * inv, (v.y - vs.y) * inv, (v.z - vs.z) * inv};
          }
          Vec3 e1, e2;
          orthonormal_frame(uh, e1, e2);
          const double px = cim * v.x + cjm * vs.x;
          const double py = cim * v.y + cjm * vs.y;
          const double pz = cim * v.z + cjm * vs.z;
          const double rj = cjm * dist_[d2], ri = cim * dist_[d2];
          const double la = std::log(std::max(a, 1e-300));
          double acc = 0.0;
          for (std::size_t s = 0; s < ns; ++s) {
            const double t = rt_[s], aa = ra_[s], bb = rb_[s];
            const double ox = t * uh.x + aa * e1.x + bb * e2.x;
            const double oy = t * uh.y + aa * e1.y + bb * e2.y;
            const double oz = t * uh.z + aa * e1.z + bb * e2.z;
            const double fp = trilinear(grid_, gi.data(), {px + rj * ox, py + rj * oy, pz + rj * oz});
            const double fsp =
                trilinear(grid_, gj.data(), {px - ri * ox, py - ri * oy, pz - ri * oz});
            const double b2 = mumu * fp * fsp;
            // (b - a) log(a / b) <= 0 term by term
            acc += rbw_[s] * (b2 - a) * (la - std::log(std::max(b2, 1e-300)));
          }
          outer += phi_fac * acc;
        }
      }
    }
    return outer;
  });
  return 0.25 * grid_.node_weight() * grid_.node_weight() * sum;
}

CollisionTally evaluate_collision(const MixtureState& state, const KernelSpec& kernel,
                                  const SphereRule& rule, const ThreadPool& pool, int cell) {
  if (state.mode() != StateMode::Physical)
    throw std::invalid_argument("evaluate_collision expects a physical state");
  const auto& grid = state.grid();
  const auto& mix = state.mixture();
  const int ns = state.species_count();
  const std::size_t nn = grid.node_count();

  std::vector<std::vector<double>> g(ns);
  for (int i = 0; i < ns; ++i) g[i] = maxwellian_normalized(grid, mix, i, state.values(cell, i));

  CollisionTally tally;
  tally.gain.assign(static_cast<std::size_t>(ns) * nn, 0.0);
  tally.loss.assign(static_cast<std::size_t>(ns) * nn, 0.0);
  std::vector<double> buf(nn);
  for (int i = 0; i < ns; ++i) {
    auto gain_i = tally.gain_of(i, nn);
    auto loss_i = tally.loss_of(i, nn);
    auto F_i = state.values(cell, i);
    for (int j = 0; j < ns; ++j) {
      PairQuadrature pq(grid, rule, kernel, mix, i, j);
      pq.gain(g[i], g[j], buf, pool);
      for (std::size_t k = 0; k < nn; ++k) gain_i[k] += buf[k];
      pq.loss_rate(state.values(cell, j), buf, pool);
      for (std::size_t k = 0; k < nn; ++k) loss_i[k] += F_i[k] * buf[k];
    }
  }
  return tally;
}

double q_loss_at(const MixtureState& state, const KernelSpec& kernel, const SphereRule& rule,
                 int i, int j, std::size_t node) {
  if (state.mode() != StateMode::Physical)
    throw std::invalid_argument("q_loss expects a physical state");
  PairQuadrature pq(state.grid(), rule, kernel, state.mixture(), i, j);
  return state.values(i)[node] * pq.loss_rate_at(state.values(j), node);
}

double q_gain_at(const MixtureState& state, const KernelSpec& kernel, const SphereRule& rule,
                 int i, int j, std::size_t node) {
  if (state.mode() != StateMode::Physical)
    throw std::invalid_argument("q_gain expects a physical state");
  const auto gi = maxwellian_normalized(state.grid(), state.mixture(), i, state.values(i));
  const auto gj = maxwellian_normalized(state.grid(), state.mixture(), j, state.values(j));
  PairQuadrature pq(state.grid(), rule, kernel, state.mixture(), i, j);
  return pq.gain_at(gi, gj, node);
}

namespace {

double invariant_weight(CollisionInvariant inv, int species, int mass_species, double mass,
                        const Vec3& v) {
  switch (inv) {
    case CollisionInvariant::SpeciesMass:
      return species == mass_species ? 1.0 : 0.0;
    case CollisionInvariant::MomentumX:
      return mass * v.x;
    case CollisionInvariant::MomentumY:
      return mass * v.y;
    case CollisionInvariant::MomentumZ:
      return mass * v.z;
    case CollisionInvariant::Energy:
      return mass * norm2(v);
  }
  return 0.0;
}

}  // namespace

WeakFormResult weak_form_all(const MixtureState& state, const KernelSpec& kernel,
                             const SphereRule& rule, const ThreadPool& pool) {
  const CollisionTally tally = evaluate_collision(state, kernel, rule, pool);
  const auto& grid = state.grid();
  const std::size_t nn = grid.node_count();
  const int ns = state.species_count();
  WeakFormResult out;
  out.residual.assign(ns + 4, 0.0);
  out.scale.assign(ns + 4, 0.0);
  for (int i = 0; i < ns; ++i) {
    const double m = state.mixture()[i].mass;
    auto g = tally.gain_of(i, nn);
    auto l = tally.loss_of(i, nn);
    for (int inv = 0; inv < ns + 4; ++inv) {
      const CollisionInvariant kind =
          inv < ns ? CollisionInvariant::SpeciesMass
                   : static_cast<CollisionInvariant>(static_cast<int>(CollisionInvariant::MomentumX) +
                                                     (inv - ns));
      const int msp = inv < ns ? inv : 0;
      out.residual[inv] +=
          grid.node_weight() * deterministic_sum(pool, nn, [&](std::size_t k) {
            return invariant_weight(kind, i, msp, m, grid.node(k)) * (g[k] - l[k]);
          });
      out.scale[inv] += grid.node_weight() * deterministic_sum(pool, nn, [&](std::size_t k) {
                          return std::fabs(invariant_weight(kind, i, msp, m, grid.node(k))) *
                                 std::fabs(g[k] - l[k]);
                        });
    }
  }
  return out;
}

double weak_form_residual(const MixtureState& state, const KernelSpec& kernel,
                          const SphereRule& rule, CollisionInvariant invariant,
                          const ThreadPool& pool, int mass_species) {
  const WeakFormResult all = weak_form_all(state, kernel, rule, pool);
  const int ns = state.species_count();
  switch (invariant) {
    case CollisionInvariant::SpeciesMass:
      return all.residual[mass_species];
    case CollisionInvariant::MomentumX:
      return all.residual[ns + 0];
    case CollisionInvariant::MomentumY:
      return all.residual[ns + 1];
    case CollisionInvariant::MomentumZ:
      return all.residual[ns + 2];
    case CollisionInvariant::Energy:
      return all.residual[ns + 3];
  }
  return 0.0;
}

CollisionTally gamma_ops(const MixtureState& pert, const KernelSpec& kernel,
                         const SphereRule& rule, const ThreadPool& pool, int cell) {
  if (pert.mode() != StateMode::Perturbation)
    throw std::invalid_argument("gamma_ops expects a perturbation state");
  const auto& grid = pert.grid();
  const auto& mix = pert.mixture();
  const int ns = pert.species_count();
  const std::size_t nn = grid.node_count();

  // slots A_i = sqrt(mu_i) f_i; their Maxwellian normalization is f / sqrt(mu)
  std::vector<std::vector<double>> slot(ns), norm_slot(ns), inv_smu(ns);
  for (int i = 0; i < ns; ++i) {
    slot[i].resize(nn);
    norm_slot[i].resize(nn);
    inv_smu[i].resize(nn);
    auto f = pert.values(cell, i);
    for (std::size_t k = 0; k < nn; ++k) {
      const Vec3 v = grid.node(k);
      const double smu = mix.sqrt_maxwellian(i, v);
      slot[i][k] = smu * f[k];
      norm_slot[i][k] = smu > kMuFloor ? f[k] / smu : 0.0;
      inv_smu[i][k] = smu > kMuFloor ? 1.0 / smu : 0.0;
    }
  }

  CollisionTally tally;
  tally.gain.assign(static_cast<std::size_t>(ns) * nn, 0.0);
  tally.loss.assign(static_cast<std::size_t>(ns) * nn, 0.0);
  std::vector<double> buf(nn);
  for (int i = 0; i < ns; ++i) {
    auto gain_i = tally.gain_of(i, nn);
    auto loss_i = tally.loss_of(i, nn);
    for (int j = 0; j < ns; ++j) {
      PairQuadrature pq(grid, rule, kernel, mix, i, j);
      pq.gain(norm_slot[i], norm_slot[j], buf, pool);
      for (std::size_t k = 0; k < nn; ++k) gain_i[k] += inv_smu[i][k] * buf[k];
      pq.loss_rate(slot[j], buf, pool);
      for (std::size_t k = 0; k < nn; ++k) loss_i[k] += inv_smu[i][k] * slot[i][k] * buf[k];
    }
  }
  return tally;
}

std::vector<double> nonlinear_frequency(const MixtureState& state, const KernelSpec& kernel,
                                        const SphereRule& rule, int i, const ThreadPool& pool,
                                        int cell) {
  const auto& grid = state.grid();
  const auto& mix = state.mixture();
  const std::size_t nn = grid.node_count();
  std::vector<double> out(nn, 0.0), buf(nn), Fj(nn);
  for (int j = 0; j < state.species_count(); ++j) {
    auto vals = state.values(cell, j);
    if (state.mode() == StateMode::Physical) {
      std::copy(vals.begin(), vals.end(), Fj.begin());
    } else {
      for (std::size_t k = 0; k < nn; ++k) {
        const Vec3 v = grid.node(k);
        Fj[k] = mix.maxwellian(j, v) + mix.sqrt_maxwellian(j, v) * vals[k];
      }
    }
    PairQuadrature pq(grid, rule, kernel, mix, i, j);
    pq.loss_rate(Fj, buf, pool);
    for (std::size_t k = 0; k < nn; ++k) out[k] += buf[k];
  }
  return out;
}

double gain_kernel_decay_integral(double mi, double mj, const Vec3& v) {
  // I = (2/mj^3) int_{S^2} int_0^inf (1 + |(mi v - s^2 sigma)/mj|)^{-1} ds dsigma
  const SphereRule sph = make_sphere_rule(16, 16);
  std::vector<double> gx, gw;
  gauss_legendre(256, gx, gw);
  const double smax = std::sqrt(100.0 * (1.0 + mi * norm(v)));
  const Vec3 ez{0.0, 0.0, 1.0};
  Vec3 e1, e2;
  orthonormal_frame(ez, e1, e2);
  double total = 0.0;
  for (std::size_t s = 0; s < sph.size(); ++s) {
    const Vec3 sigma = sph.node(s, ez, e1, e2);
    auto integrand = [&](double ss) {
      const Vec3 y = mi * v - (ss * ss) * sigma;
      return 1.0 / (1.0 + norm(y) / mj);
    };
    double near = 0.0;
    for (int q = 0; q < 256; ++q) near += 0.5 * smax * gw[q] * integrand(0.5 * smax * (gx[q] + 1.0));
    // far field in u = 1/s: integrand(1/u)/u^2 is regular at u = 0
    double far = 0.0;
    const double umax = 1.0 / smax;
    for (int q = 0; q < 256; ++q) {
      const double u = 0.5 * umax * (gx[q] + 1.0);
      if (u <= 0.0) continue;
      far += 0.5 * umax * gw[q] * integrand(1.0 / u) / (u * u);
    }
    total += sph.w[s] * (near + far);
  }
  return 2.0 / (mj * mj * mj) * total;
}

}  // namespace bmx
