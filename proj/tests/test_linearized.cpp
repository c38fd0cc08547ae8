#include <doctest.h>

#include <random>

#include "boltzmix/linearized.hpp"
#include "boltzmix/verify.hpp"

using namespace bmx;

namespace {
Mixture two_species() { return Mixture({{1.0, 1.0}, {2.0, 0.5}}); }
}  // namespace

TEST_CASE("collision frequency table") {
  const Mixture mix = two_species();
  const VelocityGrid grid(8.0, 16);
  const SphereRule rule = make_sphere_rule(8, 8);
  ThreadPool pool(0);

  // Maxwell kernel factorization: nu_ij = 2 pi n_j
  KernelSpec maxwell(2, 0.0, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 1.0});
  const CollisionFrequencyTable nu0 = build_nu(mix, maxwell, grid, rule, pool);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double want = 2.0 * M_PI * mix[j].eq_density;
      auto nu_ij = nu0.pair(i, j);
      for (std::size_t k = 0; k < nu_ij.size(); k += 57)
        CHECK(nu_ij[k] == doctest::Approx(want).epsilon(1e-6));
    }

  // hard-sphere-like: positive band around (1 + |v|)
  KernelSpec hard(2, 1.0, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 1.0});
  const CollisionFrequencyTable nu1 = build_nu(mix, hard, grid, rule, pool);
  double lo = 1e300, hi = 0.0;
  for (int i = 0; i < 2; ++i) {
    auto nu_i = nu1.of(i);
    for (std::size_t k = 0; k < nu_i.size(); ++k) {
      CHECK(nu_i[k] > 0.0);
      const double env = 1.0 + norm(grid.node(k));
      lo = std::min(lo, nu_i[k] / env);
      hi = std::max(hi, nu_i[k] / env);
    }
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1e300);

  // evenness
  double worst = 0.0;
  auto nu_0 = nu1.of(0);
  for (std::size_t k = 0; k < nu_0.size(); k += 13)
    worst = std::max(worst, std::fabs(nu_0[k] - nu_0[grid.mirror(k)]) / nu_0[k]);
  CHECK(worst <= 1e-12);

  // nu_i = sum_j nu_ij
  worst = 0.0;
  for (std::size_t k = 0; k < nu_0.size(); k += 13)
    worst = std::max(worst,
                     std::fabs(nu_0[k] - nu1.pair(0, 0)[k] - nu1.pair(0, 1)[k]) / nu_0[k]);
  CHECK(worst <= 1e-15);
}

TEST_CASE("kernel basis orthonormality") {
  const Mixture mix = two_species();
  ThreadPool pool(0);
  const KernelBasis basis(mix, VelocityGrid(8.0, 32), pool);
  CHECK(basis.count() == 6);
  CHECK(std::fabs(basis.gram(0, 0) - 1.0) <= 1e-6);
  // parity: species direction vs momentum direction is an odd integrand
  CHECK(std::fabs(basis.gram(0, 2)) <= 1e-10);
  for (int k = 0; k < 6; ++k)
    CHECK(std::fabs(basis.gram(5, k) - (k == 5 ? 1.0 : 0.0)) <= 1e-6);
  CHECK(basis.max_gram_defect() <= 1e-6);
}

TEST_CASE("apply_K and the two-route decomposition") {
  const Mixture mix = two_species();
  const VelocityGrid grid(6.0, 12);
  const SphereRule rule = make_sphere_rule(8, 8);
  KernelSpec kernel(2, 0.5, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 1.0});
  ThreadPool pool(0);

  MixtureState zero(mix, grid, StateMode::Perturbation);
  const std::vector<double> K0 = apply_K(zero, kernel, rule, 0, pool);
  for (double x : K0) CHECK(x == 0.0);

  // collision-invariant direction: L f ~ 0
  const CollisionFrequencyTable nu = build_nu(mix, kernel, grid, rule, pool);
  MixtureState inv(mix, grid, StateMode::Perturbation);
  for (int i = 0; i < 2; ++i) {
    auto f = inv.values(i);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = mix.sqrt_maxwellian(i, grid.node(k));
  }
  double worst = 0.0, scale = 0.0;
  for (int i = 0; i < 2; ++i) {
    const std::vector<double> Lf = apply_L(inv, kernel, rule, nu, i, pool);
    auto f = inv.values(i);
    auto nu_i = nu.of(i);
    for (std::size_t k = 0; k < Lf.size(); ++k) {
      worst = std::max(worst, std::fabs(Lf[k]));
      scale = std::max(scale, std::fabs(nu_i[k] * f[k]));
    }
  }
  CHECK(worst <= 1e-10 * scale);
}

TEST_CASE("projection onto the kernel of L") {
  const Mixture mix = two_species();
  const VelocityGrid grid(8.0, 16);
  ThreadPool pool(0);
  const KernelBasis basis(mix, grid, pool);

  // a basis element projects to itself
  MixtureState f(mix, grid, StateMode::Perturbation);
  for (int i = 0; i < 2; ++i) {
    auto phi = basis.phi(1, i);
    std::copy(phi.begin(), phi.end(), f.values(i).begin());
  }
  const Projection proj = project_PL(f, basis, pool);
  double worst_macro = 0.0, worst_micro = 0.0;
  for (int i = 0; i < 2; ++i) {
    auto macro = proj.macro.values(i);
    auto micro = proj.micro.values(i);
    auto phi = basis.phi(1, i);
    for (std::size_t k = 0; k < macro.size(); ++k) {
      worst_macro = std::max(worst_macro, std::fabs(macro[k] - phi[k]));
      worst_micro = std::max(worst_micro, std::fabs(micro[k]));
    }
  }
  CHECK(worst_macro <= 1e-6);
  CHECK(worst_micro <= 1e-6);

  // a Gram-Schmidt-orthogonalized direction projects to ~0
  Rng rng(41);
  MixtureState g = random_perturbation_state(mix, grid, rng);
  for (int pass = 0; pass < 2; ++pass) {
    const Projection pg = project_PL(g, basis, pool);
    g = pg.micro;
  }
  const Projection pg = project_PL(g, basis, pool);
  double cmax = 0.0;
  for (double c : pg.coefficients) cmax = std::max(cmax, std::fabs(c));
  CHECK(cmax <= 1e-10 * std::max(1.0, std::sqrt(inner_product(g, g, pool))));

  // idempotence on a random state
  MixtureState h = random_perturbation_state(mix, grid, rng);
  const Projection p1 = project_PL(h, basis, pool);
  const Projection p2 = project_PL(p1.macro, basis, pool);
  double idem = 0.0;
  for (int i = 0; i < 2; ++i) {
    auto a = p1.macro.values(i);
    auto b = p2.macro.values(i);
    for (std::size_t k = 0; k < a.size(); ++k) idem = std::max(idem, std::fabs(a[k] - b[k]));
  }
  CHECK(idem <= 1e-10);
}

TEST_CASE("coercivity probe") {
  const Mixture mix = two_species();
  const VelocityGrid grid(6.0, 12);
  const SphereRule rule = make_sphere_rule(8, 8);
  KernelSpec kernel(2, 0.5, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 1.0});
  ThreadPool pool(0);
  const CollisionFrequencyTable nu = build_nu(mix, kernel, grid, rule, pool);
  const KernelBasis basis(mix, grid, pool);

  Rng rng(42);
  MixtureState f = random_perturbation_state(mix, grid, rng);
  // micro-only component: strictly dissipative
  const Projection proj = project_PL(f, basis, pool);
  const CoercivityProbe micro = coercivity_probe(proj.micro, kernel, rule, nu, basis, pool);
  CHECK(micro.dirichlet < 0.0);
  CHECK(micro.micro_norm > 0.0);

  // quadratic scaling
  const CoercivityProbe base = coercivity_probe(f, kernel, rule, nu, basis, pool);
  MixtureState scaled = f;
  for (double& x : scaled.raw()) x *= 3.0;
  const CoercivityProbe big = coercivity_probe(scaled, kernel, rule, nu, basis, pool);
  CHECK(big.dirichlet == doctest::Approx(9.0 * base.dirichlet).epsilon(1e-10));
  CHECK(big.micro_norm == doctest::Approx(9.0 * base.micro_norm).epsilon(1e-10));
}
