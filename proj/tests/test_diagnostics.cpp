#include <doctest.h>

#include <random>
#include <sstream>

#include "boltzmix/diagnostics.hpp"
#include "boltzmix/verify.hpp"
#include "oracles.hpp"

using namespace bmx;

namespace {
Mixture two_species() { return Mixture({{1.0, 1.0}, {2.0, 0.5}}); }
}  // namespace

TEST_CASE("conserved moments") {
  const Mixture mix = two_species();
  const VelocityGrid grid(8.0, 24);
  ThreadPool pool(0);

  const MixtureState eq = MixtureState::equilibrium(mix, grid);
  const ConservedMoments m = conserved_moments(eq, pool);
  CHECK(m.mass[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(m.mass[1] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(norm(m.momentum) <= 1e-6);
  CHECK(m.energy == doctest::Approx(2.25).epsilon(1e-6));

  MixtureState zero(mix, grid, StateMode::Physical);
  const ConservedMoments z = conserved_moments(zero, pool);
  CHECK(z.mass[0] == 0.0);
  CHECK(z.mass[1] == 0.0);
  CHECK(z.energy == 0.0);

  // shifted Maxwellian: momentum = sum_i m_i n_i u
  const Vec3 u{0.4, 0.0, 0.0};
  MixtureState shifted(mix, grid, StateMode::Physical);
  for (int i = 0; i < 2; ++i) {
    auto F = shifted.values(i);
    for (std::size_t k = 0; k < F.size(); ++k)
      F[k] = maxwellian(mix[i], grid.node(k) - u);
  }
  const ConservedMoments ms = conserved_moments(shifted, pool);
  const double want_px = (1.0 * 1.0 + 2.0 * 0.5) * 0.4;
  CHECK(ms.momentum.x == doctest::Approx(want_px).epsilon(1e-6));
}

TEST_CASE("relative entropy values") {
  const Mixture mix = two_species();
  const VelocityGrid grid(8.0, 24);
  ThreadPool pool(0);

  const MixtureState eq = MixtureState::equilibrium(mix, grid);
  CHECK(std::fabs(relative_entropy(eq, pool)) <= 1e-8);

  // F = 2 mu against the radial quadrature oracle
  MixtureState twice = eq;
  for (double& x : twice.raw()) x *= 2.0;
  double want = 0.0;
  for (int i = 0; i < 2; ++i) {
    const double m = mix[i].mass, n = mix[i].eq_density;
    want += oracle::radial_integral([m, n](double r) {
      const double mu = oracle::maxwellian_radial(m, n, r);
      const double f = 2.0 * mu;
      return (f > 0 ? f * std::log(f) : 0.0) - (mu > 0 ? mu * std::log(mu) : 0.0);
    });
  }
  CHECK(relative_entropy(twice, pool) == doctest::Approx(want).epsilon(1e-6));
}

TEST_CASE("entropy splitting inequality") {
  // species chosen so both sides of the F = 1.5 mu example are positive
  const Mixture mix({{3.0 * M_PI, 1.0}});
  const VelocityGrid grid(4.0, 24);
  ThreadPool pool(0);
  const MixtureState eq = MixtureState::equilibrium(mix, grid);

  EntropySplit at_eq = entropy_splitting_check(eq, pool);
  CHECK(std::fabs(at_eq.lhs) <= 1e-10);
  CHECK(std::fabs(at_eq.rhs) <= 1e-8);

  MixtureState one_and_half = eq;
  for (double& x : one_and_half.raw()) x *= 1.5;
  const EntropySplit split = entropy_splitting_check(one_and_half, pool);
  // lhs = n/16 for |F - mu| = mu/2 <= mu everywhere
  CHECK(split.lhs == doctest::Approx(1.0 / 16.0).epsilon(1e-6));
  const double want_rhs = oracle::radial_integral([](double r) {
    const double mu = oracle::maxwellian_radial(3.0 * M_PI, 1.0, r);
    const double f = 1.5 * mu;
    return f * std::log(f) - mu * std::log(mu);
  });
  CHECK(split.rhs == doctest::Approx(want_rhs).epsilon(1e-6));
  CHECK(split.lhs > 0.0);
  CHECK(split.rhs > 0.0);
  CHECK(split.lhs <= split.rhs + 1e-10);
}

TEST_CASE("entropy production sign structure") {
  const Mixture mix = two_species();
  const VelocityGrid grid(6.0, 10);
  const SphereRule rule = make_sphere_rule(8, 8);
  KernelSpec kernel(2, 0.0, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 1.0});
  ThreadPool pool(0);

  const MixtureState eq = MixtureState::equilibrium(mix, grid);
  CHECK(std::fabs(entropy_production(eq, kernel, rule, pool)) <= 1e-6);

  Rng rng(51);
  for (int d = 0; d < 5; ++d) {
    const MixtureState st = random_positive_state(mix, grid, rng, pool);
    CHECK(entropy_production(st, kernel, rule, pool) <= 0.0);
  }
}

TEST_CASE("weighted sup norm and gauss monitor") {
  const Mixture mix = two_species();
  const VelocityGrid grid(8.0, 20);
  const WeightSpec w{5.0};
  ThreadPool pool(0);

  MixtureState zero(mix, grid, StateMode::Perturbation);
  for (double v : weighted_sup_norm(zero, w)) CHECK(v == 0.0);
  for (double v : gauss_monitor(zero, w, pool)) CHECK(v == 0.0);

  // f = 1/w has h = 1: sup norm exactly 1, monitor = (2 sqrt(pi))^3
  MixtureState f(mix, grid, StateMode::Perturbation);
  for (int i = 0; i < 2; ++i) {
    auto fi = f.values(i);
    for (std::size_t k = 0; k < fi.size(); ++k)
      fi[k] = 1.0 / velocity_weight(w, grid.node(k));
  }
  for (double v : weighted_sup_norm(f, w)) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  const double want = std::pow(2.0 * std::sqrt(M_PI), 3);
  for (double v : gauss_monitor(f, w, pool)) CHECK(v == doctest::Approx(want).epsilon(1e-6));

  // homogeneity of the sup norm
  MixtureState g = f;
  for (double& x : g.raw()) x *= -2.5;
  const auto base = weighted_sup_norm(f, w);
  const auto scaled = weighted_sup_norm(g, w);
  for (std::size_t i = 0; i < base.size(); ++i)
    CHECK(scaled[i] == doctest::Approx(2.5 * base[i]).epsilon(1e-15));
}

TEST_CASE("decay rate fit") {
  std::vector<DiagnosticsRecord> recs;
  for (int k = 0; k <= 40; ++k) {
    DiagnosticsRecord r;
    r.time = 0.1 * k;
    r.winf = {3.0 * std::exp(-0.7 * r.time), 1.0};
    recs.push_back(r);
  }
  const DecayFit exact = fit_decay_rate(recs, "winf", 0, 0.0, 4.0);
  CHECK(exact.rate == doctest::Approx(0.7).epsilon(1e-10));
  CHECK(exact.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  std::mt19937_64 rng(52);
  std::normal_distribution<double> noise(0.0, 0.01);
  for (auto& r : recs) r.winf[0] *= 1.0 + noise(rng);
  const DecayFit noisy = fit_decay_rate(recs, "winf", 0, 0.0, 4.0);
  CHECK(std::fabs(noisy.rate - 0.7) <= 0.05);

  CHECK_THROWS_AS(fit_decay_rate(recs, "winf", 0, 3.9, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(fit_decay_rate(recs, "nope", 0, 0.0, 4.0), std::invalid_argument);
}

TEST_CASE("csv schema") {
  DiagnosticsRecord r;
  r.time = 0.5;
  r.mass = {1.0, 0.5};
  r.momentum = {0, 0, 0};
  r.energy = 2.25;
  r.winf = {0.1, 0.2};
  r.gauss = {0.3, 0.4};
  r.rfreq_ratio = {1.0, 1.0};
  CHECK(csv_header(2) ==
        "time,mass_1,mass_2,px,py,pz,energy,entropy,rel_entropy,entropy_production,"
        "winf_1,winf_2,gauss_1,gauss_2,rfreq_1,rfreq_2");
  std::ostringstream os;
  write_csv(os, 2, {r});
  const std::string text = os.str();
  CHECK(text.find("0.5,1,0.5,0,0,0,2.25") != std::string::npos);

  // mass defect reporting
  const double defect = maxwellian_mass_defect(two_species(), VelocityGrid(8.0, 16));
  CHECK(defect > 0.0);
  CHECK(defect < 1e-12);
}
