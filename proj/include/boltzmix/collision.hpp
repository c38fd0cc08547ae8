#ifndef BOLTZMIX_COLLISION_HPP
#define BOLTZMIX_COLLISION_HPP

#include <functional>
#include <span>
#include <vector>

#include "boltzmix/collision_geometry.hpp"
#include "boltzmix/kernel.hpp"
#include "boltzmix/parallel.hpp"
#include "boltzmix/sphere_rule.hpp"
#include "boltzmix/state.hpp"

namespace bmx {

// Bilinear collision quadrature for one species pair (i, j).
//
// Gain integrals sample the integrand at post-collision velocities, so both
// slots are carried as Maxwellian-normalized node values g = A / mu: the
// identity mu_i(v') mu_j(v'_*) = mu_i(v) mu_j(v_*) moves the Gaussian factors
// onto the (v, v_*) lattice where they are exact, and only the normalized
// parts are trilinearly interpolated. Equilibrium slots then interpolate a
// constant and the discrete gain matches the loss to rounding.
//
// Kernel factors |v - v_*|^gamma are table lookups keyed by the integer
// squared lattice distance.
class PairQuadrature {
 public:
  PairQuadrature(const VelocityGrid& grid, const SphereRule& rule, const KernelSpec& kernel,
                 const Mixture& mixture, int i, int j);

  // out[k] = mu_i(v_k) dv^3 sum_* Phi_ij(|v_k - v_*|) mu_j(v_*)
  //          sum_s w_s b_ij(t_s) gi(v'(s)) gj(v'_*(s))
  void gain(std::span<const double> gi, std::span<const double> gj, std::span<double> out,
            const ThreadPool& pool) const;

  // Loss rate against raw node values: out[k] = angular_mass *
  // dv^3 sum_* Phi_ij(|v_k - v_*|) B(v_*). Multiply by the local value to get
  // the loss term itself.
  void loss_rate(std::span<const double> b_values, std::span<double> out,
                 const ThreadPool& pool) const;

  double gain_at(std::span<const double> gi, std::span<const double> gj, std::size_t node) const;
  double loss_rate_at(std::span<const double> b_values, std::size_t node) const;

  // This pair's contribution to the quadruple-form entropy production:
  // (1/4) iint B (F'F'_* - F F_*) log(F F_* / F'F'_*), with the primed values
  // reconstructed as mu * interpolated(g).
  double entropy_quadruple(std::span<const double> Fi, std::span<const double> Fj,
                           std::span<const double> gi, std::span<const double> gj,
                           const ThreadPool& pool) const;

  double angular_mass() const { return angular_mass_; }
  const std::vector<double>& mu_i() const { return mu_i_; }
  const std::vector<double>& mu_j() const { return mu_j_; }

 private:
  double gain_node(const double* gi, const double* gj, std::size_t node, double mu_j_cut) const;

  const VelocityGrid& grid_;
  const KernelSpec& kernel_;
  int i_, j_;
  double mi_, mj_;
  double mu_i_max_ = 0.0, mu_j_max_ = 0.0;
  std::vector<double> mu_i_, mu_j_;
  // rule nodes with the angular profile folded into the weight
  std::vector<double> rt_, ra_, rb_, rbw_;
  double angular_mass_ = 0.0;
  // tables over integer squared lattice distances
  std::vector<double> phi_, dist_, inv_dist_;
};

// Maxwellian-normalized copy of raw values: g[k] = a[k] / mu_i(v_k), zeroed
// where mu underflows below 1e-290.
std::vector<double> maxwellian_normalized(const VelocityGrid& grid, const Mixture& mixture, int i,
                                          std::span<const double> a);

struct CollisionTally {
  // [species][node], species-major
  std::vector<double> gain;
  std::vector<double> loss;
  std::span<double> gain_of(int i, std::size_t nodes) { return {gain.data() + i * nodes, nodes}; }
  std::span<double> loss_of(int i, std::size_t nodes) { return {loss.data() + i * nodes, nodes}; }
  std::span<const double> gain_of(int i, std::size_t nodes) const {
    return {gain.data() + i * nodes, nodes};
  }
  std::span<const double> loss_of(int i, std::size_t nodes) const {
    return {loss.data() + i * nodes, nodes};
  }
};

// Full operator sum_j Q_ij for every species of a physical single-cell slice.
// `cell` selects the slice for torus states.
CollisionTally evaluate_collision(const MixtureState& state, const KernelSpec& kernel,
                                  const SphereRule& rule, const ThreadPool& pool, int cell = 0);

double q_loss_at(const MixtureState& state, const KernelSpec& kernel, const SphereRule& rule,
                 int i, int j, std::size_t node);
double q_gain_at(const MixtureState& state, const KernelSpec& kernel, const SphereRule& rule,
                 int i, int j, std::size_t node);

enum class CollisionInvariant { SpeciesMass, MomentumX, MomentumY, MomentumZ, Energy };

// Residuals and |psi||Q| scales of the weak form sum_ij int Q_ij psi_i dv for
// all N+4 collision invariants, from a single operator evaluation. Exactly
// zero in the continuum; the discrete values measure the quadrature error.
struct WeakFormResult {
  std::vector<double> residual;  // N species-mass entries, then px, py, pz, E
  std::vector<double> scale;
};

WeakFormResult weak_form_all(const MixtureState& state, const KernelSpec& kernel,
                             const SphereRule& rule, const ThreadPool& pool);

double weak_form_residual(const MixtureState& state, const KernelSpec& kernel,
                          const SphereRule& rule, CollisionInvariant invariant,
                          const ThreadPool& pool, int mass_species = 0);

// Gamma_i^± for a perturbation state: Gamma_i = (1/sqrt(mu_i)) sum_j
// Q_ij(sqrt(mu_i) f_i, sqrt(mu_j) f_j), split into gain and loss.
CollisionTally gamma_ops(const MixtureState& pert, const KernelSpec& kernel,
                         const SphereRule& rule, const ThreadPool& pool, int cell = 0);

// Nonlinear collision frequency R_i(v_k) = sum_j iint B_ij F_j(v_*) dsigma dv_*,
// the loss rate against the full distribution. Accepts physical states or
// perturbation states (implicitly F = mu + sqrt(mu) f).
std::vector<double> nonlinear_frequency(const MixtureState& state, const KernelSpec& kernel,
                                        const SphereRule& rule, int i, const ThreadPool& pool,
                                        int cell = 0);

// Direct sigma-form of the bilinear gain with analytic test functions.
template <typename Fi, typename Fj>
double gain_direct(const VelocityGrid& grid, const SphereRule& rule, const KernelSpec& kernel,
                   int i, int j, double mi, double mj, const Fi& fi, const Fj& fj, const Vec3& v,
                   const ThreadPool& pool) {
  const double msum = mi + mj;
  const double cphi = kernel.c_phi(i, j);
  const auto& b = kernel.angular(i, j);
  std::vector<double> bw(rule.size());
  for (std::size_t s = 0; s < rule.size(); ++s) bw[s] = rule.w[s] * b(rule.t[s]);

  const double total = deterministic_sum(pool, grid.node_count(), [&](std::size_t ks) {
    const Vec3 vs = grid.node(ks);
    const Vec3 z = v - vs;
    const double r = norm(z);
    const double phi_fac = cphi * kernel.relative_speed_factor(r);
    if (phi_fac == 0.0) return 0.0;
    Vec3 uh{0.0, 0.0, 1.0};
    if (r > 0.0) uh = z / r;
    Vec3 e1, e2;
    orthonormal_frame(uh, e1, e2);
    const Vec3 p = (mi * v + mj * vs) / msum;
    const double rj = mj * r / msum, ri = mi * r / msum;
    double acc = 0.0;
    for (std::size_t s = 0; s < rule.size(); ++s) {
      const Vec3 sig = rule.node(s, uh, e1, e2);
      acc += bw[s] * fi(p + rj * sig) * fj(p - ri * sig);
    }
    return phi_fac * acc;
  });
  return grid.node_weight() * total;
}

// Gain of one pair through the Carleman representation: outer integral over
// v'_* on the grid, inner surface quadrature over the sphere E(O, R) with the
// polar axis aligned to the center direction. Test functions are supplied
// analytically. The mass constant of the representation is NOT included;
// calibrate the returned value once per mass pair against the direct form.
// Throws for (near-)equal masses.
template <typename Fi, typename Fj>
double gain_carleman(const VelocityGrid& outer, const SphereRule& inner, const KernelSpec& kernel,
                     int i, int j, double mi, double mj, const Fi& fi, const Fj& fj, const Vec3& v,
                     const ThreadPool& pool) {
  if (masses_equal(mi, mj)) {
    throw std::invalid_argument(
        "gain_carleman: equal masses degenerate to the hyperplane case, which is unsupported");
  }
  const double cphi = kernel.c_phi(i, j);
  const auto& b = kernel.angular(i, j);

  const double total = deterministic_sum(pool, outer.node_count(), [&](std::size_t ko) {
    const Vec3 vsp = outer.node(ko);
    const double fj_val = fj(vsp);
    if (fj_val == 0.0) return 0.0;
    const Vec3 dv = v - vsp;
    const double dvn = norm(dv);
    if (dvn == 0.0) return 0.0;
    const CarlemanSphere sph = carleman_sphere(v, vsp, mi, mj);
    const double R = sph.radius;
    const double On = norm(sph.center);
    Vec3 axis{0.0, 0.0, 1.0};
    if (On > 1e-14) axis = sph.center / On;
    Vec3 e1, e2;
    orthonormal_frame(axis, e1, e2);
    double acc = 0.0;
    for (std::size_t s = 0; s < inner.size(); ++s) {
      const Vec3 vp = sph.center + R * inner.node(s, axis, e1, e2);
      const Vec3 d = vsp - vp;
      const double dn = norm(d);
      if (dn < 1e-14) continue;
      const double fi_val = fi(vp);
      if (fi_val == 0.0) continue;
      const Vec3 V = vsp + (mi / mj) * (vp - v);
      const Vec3 zz = v - V;
      const double zzn = norm(zz);
      const double ct = zzn > 1e-14 ? dot(zz, d) / (zzn * dn) : 0.0;
      const double B = cphi * kernel.relative_speed_factor(zzn) * b(ct);
      acc += inner.w[s] * B / dn * fi_val;
    }
    return R * R * acc * fj_val / dvn;
  });
  return outer.node_weight() * total;
}

// Decay integral I(v) = int |m_i v - m_j u|^(-5/2) (1+|u|)^(-1) du, evaluated
// by a desingularized radial-spherical quadrature (substitution r = s^2 makes
// the radial part regular; the far field integrates in 1/s).
double gain_kernel_decay_integral(double mi, double mj, const Vec3& v);

}  // namespace bmx

#endif
