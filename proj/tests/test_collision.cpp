#include <doctest.h>

#include <random>

#include "boltzmix/collision.hpp"
#include "boltzmix/collision_geometry.hpp"
#include "boltzmix/verify.hpp"

using namespace bmx;

namespace {

Mixture two_species() { return Mixture({{1.0, 1.0}, {2.0, 0.5}}); }

// Independent brute-force pair quadrature: same grid x sphere discretization,
// written as plainly as possible.
double naive_pair_gain(const VelocityGrid& grid, const SphereRule& rule, const KernelSpec& kernel,
                       const Mixture& mix, int i, int j, std::span<const double> Fi,
                       std::span<const double> Fj, std::size_t node) {
  const double mi = mix[i].mass, mj = mix[j].mass;
  std::vector<double> gi(grid.node_count()), gj(grid.node_count());
  for (std::size_t k = 0; k < grid.node_count(); ++k) {
    gi[k] = Fi[k] / mix.maxwellian(i, grid.node(k));
    gj[k] = Fj[k] / mix.maxwellian(j, grid.node(k));
  }
  const Vec3 v = grid.node(node);
  double total = 0.0;
  for (std::size_t ks = 0; ks < grid.node_count(); ++ks) {
    const Vec3 vs = grid.node(ks);
    const double r = norm(v - vs);
    Vec3 uh = r > 0 ? (v - vs) / r : Vec3{0, 0, 1};
    Vec3 e1, e2;
    orthonormal_frame(uh, e1, e2);
    double inner = 0.0;
    for (std::size_t s = 0; s < rule.size(); ++s) {
      const Vec3 sigma = rule.node(s, uh, e1, e2);
      const PostCollision pc = post_collision_sigma(mi, mj, v, vs, sigma);
      inner += rule.w[s] * kernel.angular(i, j)(rule.t[s]) * trilinear(grid, gi, pc.v_prime) *
               trilinear(grid, gj, pc.v_star_prime);
    }
    total += kernel.c_phi(i, j) * kernel.relative_speed_factor(r) *
             mix.maxwellian(j, vs) * inner;
  }
  return mix.maxwellian(i, v) * grid.node_weight() * total;
}

}  // namespace

TEST_CASE("loss term basics") {
  const Mixture mix = two_species();
  const VelocityGrid grid(8.0, 16);
  const SphereRule rule = make_sphere_rule(8, 8);
  KernelSpec kernel(2, 0.0, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 1.0});
  MixtureState st = MixtureState::equilibrium(mix, grid);

  // empty partner species
  std::fill(st.values(1).begin(), st.values(1).end(), 0.0);
  CHECK(q_loss_at(st, kernel, rule, 0, 1, grid.node_count() / 2) == 0.0);

  // Maxwell kernel: the sigma and v_* integrals factorize to 2 pi n_j
  st = MixtureState::equilibrium(mix, grid);
  const std::size_t center = grid.index(8, 8, 8);
  const double want = st.values(0)[center] * 2.0 * M_PI * mix[1].eq_density;
  CHECK(q_loss_at(st, kernel, rule, 0, 1, center) == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("gain term basics and positivity") {
  const Mixture mix = two_species();
  const VelocityGrid grid(6.0, 10);
  const SphereRule rule = make_sphere_rule(8, 8);
  KernelSpec kernel(2, 1.0, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 1.0});

  MixtureState st = MixtureState::equilibrium(mix, grid);
  std::fill(st.values(1).begin(), st.values(1).end(), 0.0);
  CHECK(q_gain_at(st, kernel, rule, 0, 1, grid.node_count() / 2) == 0.0);

  ThreadPool pool(0);
  Rng rng(31);
  const MixtureState rnd = random_positive_state(mix, grid, rng, pool);
  const CollisionTally tally = evaluate_collision(rnd, kernel, rule, pool);
  double min_gain = 1e300;
  for (double g : tally.gain) min_gain = std::min(min_gain, g);
  CHECK(min_gain >= 0.0);
  double min_loss = 1e300;
  for (double l : tally.loss) min_loss = std::min(min_loss, l);
  CHECK(min_loss >= 0.0);
}

TEST_CASE("gain matches an independent brute-force evaluation") {
  const Mixture mix = two_species();
  const VelocityGrid grid(6.0, 8);
  const SphereRule rule = make_sphere_rule(8, 8);
  KernelSpec kernel(2, 1.0, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 1.0});
  ThreadPool pool(0);
  Rng rng(32);
  const MixtureState st = random_positive_state(mix, grid, rng, pool);
  for (std::size_t node : {0ul, 37ul, 255ul, grid.node_count() / 2}) {
    const double fast = q_gain_at(st, kernel, rule, 0, 1, node);
    const double slow =
        naive_pair_gain(grid, rule, kernel, mix, 0, 1, st.values(0), st.values(1), node);
    CHECK(fast == doctest::Approx(slow).epsilon(1e-12));
  }
}

TEST_CASE("equilibrium gain equals loss to rounding") {
  const Mixture mix = two_species();
  const VelocityGrid grid(8.0, 16);
  const SphereRule rule = make_sphere_rule(8, 8);
  ThreadPool pool(0);
  for (double gamma : {0.0, 1.0}) {
    KernelSpec kernel(2, gamma, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 1.0});
    const MixtureState eq = MixtureState::equilibrium(mix, grid);
    const CollisionTally tally = evaluate_collision(eq, kernel, rule, pool);
    const std::size_t nn = grid.node_count();
    const double loss0 = tally.loss_of(0, nn)[grid.index(8, 8, 8)];
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
      auto g = tally.gain_of(i, nn);
      auto l = tally.loss_of(i, nn);
      for (std::size_t k = 0; k < nn; ++k) worst = std::max(worst, std::fabs(g[k] - l[k]));
    }
    CHECK(worst / loss0 <= 1e-10);
  }
}

TEST_CASE("weak form residual at equilibrium") {
  const Mixture mix = two_species();
  const VelocityGrid grid(8.0, 12);
  const SphereRule rule = make_sphere_rule(8, 8);
  KernelSpec kernel(2, 0.0, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 1.0});
  ThreadPool pool(0);
  const MixtureState eq = MixtureState::equilibrium(mix, grid);
  for (auto inv : {CollisionInvariant::SpeciesMass, CollisionInvariant::MomentumX,
                   CollisionInvariant::Energy}) {
    CHECK(std::fabs(weak_form_residual(eq, kernel, rule, inv, pool)) <= 1e-8);
  }
}

TEST_CASE("gamma operators") {
  const Mixture mix = two_species();
  const VelocityGrid grid(6.0, 10);
  const SphereRule rule = make_sphere_rule(8, 8);
  KernelSpec kernel(2, 0.5, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 1.0});
  ThreadPool pool(0);

  // zero perturbation
  MixtureState zero(mix, grid, StateMode::Perturbation);
  const CollisionTally z = gamma_ops(zero, kernel, rule, pool);
  for (double g : z.gain) CHECK(g == 0.0);
  for (double l : z.loss) CHECK(l == 0.0);

  // f_i = sqrt(mu_i): F = 2 mu, so Gamma = (1/sqrt(mu)) Q(mu, mu) ~ 0
  MixtureState sq(mix, grid, StateMode::Perturbation);
  for (int i = 0; i < 2; ++i) {
    auto f = sq.values(i);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = mix.sqrt_maxwellian(i, grid.node(k));
  }
  const CollisionTally t = gamma_ops(sq, kernel, rule, pool);
  const std::size_t nn = grid.node_count();
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < 2; ++i) {
    auto g = t.gain_of(i, nn);
    auto l = t.loss_of(i, nn);
    for (std::size_t k = 0; k < nn; ++k) {
      worst = std::max(worst, std::fabs(g[k] - l[k]));
      scale = std::max(scale, std::fabs(l[k]));
    }
  }
  CHECK(worst <= 1e-10 * std::max(1.0, scale));

  // two-route equivalence through the full operator on F~ = sqrt(mu) f >= 0
  Rng rng(33);
  MixtureState pert = random_perturbation_state(mix, grid, rng, 0.3);
  for (double& x : pert.raw()) x = std::fabs(x);
  const CollisionTally direct = gamma_ops(pert, kernel, rule, pool);
  MixtureState ftilde(mix, grid, StateMode::Physical);
  for (int i = 0; i < 2; ++i) {
    auto f = pert.values(i);
    auto F = ftilde.values(i);
    for (std::size_t k = 0; k < nn; ++k) F[k] = mix.sqrt_maxwellian(i, grid.node(k)) * f[k];
  }
  const CollisionTally physical = evaluate_collision(ftilde, kernel, rule, pool);
  worst = 0.0;
  for (int i = 0; i < 2; ++i) {
    auto dg = direct.gain_of(i, nn);
    auto dl = direct.loss_of(i, nn);
    auto pg = physical.gain_of(i, nn);
    auto pl = physical.loss_of(i, nn);
    for (std::size_t k = 0; k < nn; ++k) {
      const double smu = mix.sqrt_maxwellian(i, grid.node(k));
      worst = std::max(worst, std::fabs(dg[k] - pg[k] / smu));
      worst = std::max(worst, std::fabs(dl[k] - pl[k] / smu));
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("nonlinear frequency") {
  const Mixture mix = two_species();
  const VelocityGrid grid(8.0, 12);
  const SphereRule rule = make_sphere_rule(8, 8);
  KernelSpec kernel(2, 1.0, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 1.0});
  ThreadPool pool(0);
  const CollisionFrequencyTable nu = build_nu(mix, kernel, grid, rule, pool);

  const MixtureState eq = MixtureState::equilibrium(mix, grid);
  const std::vector<double> R = nonlinear_frequency(eq, kernel, rule, 0, pool);
  auto nu0 = nu.of(0);
  double worst = 0.0;
  for (std::size_t k = 0; k < R.size(); ++k)
    worst = std::max(worst, std::fabs(R[k] - nu0[k]) / nu0[k]);
  CHECK(worst <= 1e-6);

  MixtureState twice = eq;
  for (double& x : twice.raw()) x *= 2.0;
  const std::vector<double> R2 = nonlinear_frequency(twice, kernel, rule, 0, pool);
  worst = 0.0;
  for (std::size_t k = 0; k < R.size(); ++k)
    worst = std::max(worst, std::fabs(R2[k] - 2.0 * R[k]) / (2.0 * R[k]));
  CHECK(worst <= 1e-13);
}

TEST_CASE("carleman gain smoke checks") {
  KernelSpec kernel(2, 0.0, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 1.0});
  ThreadPool pool(0);
  const VelocityGrid outer(8.0, 20);
  const SphereRule inner = make_sphere_rule(16, 8);

  // support far outside every reachable sphere
  auto far = [](const Vec3& u) {
    const double d2 = norm2(u - Vec3{40.0, 0.0, 0.0});
    return d2 < 1.0 ? 1.0 : 0.0;
  };
  auto fj = [](const Vec3& u) { return std::exp(-norm2(u)); };
  CHECK(gain_carleman(outer, inner, kernel, 0, 1, 1.0, 2.0, far, fj, {0.2, 0, 0}, pool) == 0.0);

  // degenerate masses refuse cleanly
  CHECK_THROWS_AS(gain_carleman(outer, inner, kernel, 0, 1, 1.0, 1.0, fj, fj, {0, 0, 0}, pool),
                  std::invalid_argument);
}

TEST_CASE("gain-kernel decay integral stays bounded") {
  double prev_weighted = 0.0;
  for (double r : {1.0, 4.0, 16.0}) {
    const double I = gain_kernel_decay_integral(1.0, 2.0, {r, 0, 0});
    CHECK(I > 0.0);
    const double weighted = I * std::sqrt(1.0 + r);
    if (prev_weighted > 0.0) CHECK(weighted <= 1.5 * prev_weighted);
    prev_weighted = std::max(prev_weighted, weighted);
  }
}
