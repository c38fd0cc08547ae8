#include "boltzmix/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "boltzmix/collision_geometry.hpp"

namespace bmx {

bool Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

void Report::add(std::string name, double measured, double threshold, bool pass,
                 std::string note) {
  checks.push_back({std::move(name), measured, threshold, pass, std::move(note)});
}

void Report::add_max(std::string name, double measured, double threshold, std::string note) {
  add(std::move(name), measured, threshold, measured <= threshold, std::move(note));
}

std::string Report::to_text() const {
  std::ostringstream os;
  os << "suite: " << suite << '\n';
  for (const auto& c : checks) {
    os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": measured " << c.measured
       << " (threshold " << c.threshold << ")";
    if (!c.note.empty()) os << "  -- " << c.note;
    os << '\n';
  }
  os << (all_pass() ? "suite PASSED" : "suite FAILED") << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------

CancellationSweep sweep_cancellation(int draws, double box, double m_lo, double m_hi, double m_gap,
                                     Rng& rng) {
  std::uniform_real_distribution<double> coord(-box, box);
  std::uniform_real_distribution<double> mass(m_lo, m_hi);
  CancellationSweep sweep;
  for (int d = 0; d < draws; ++d) {
    const Vec3 v{coord(rng), coord(rng), coord(rng)};
    const Vec3 vsp{coord(rng), coord(rng), coord(rng)};
    double mi = mass(rng), mj = mass(rng);
    while (std::fabs(mi - mj) < m_gap) mj = mass(rng);
    const ExponentCancellation ec = exponent_cancellation(v, vsp, mi, mj);
    const double rel = std::fabs(ec.lhs - ec.rhs) / std::max(1.0, std::fabs(ec.lhs));
    sweep.max_rel_diff = std::max(sweep.max_rel_diff, rel);
    sweep.max_rhs = std::max(sweep.max_rhs, ec.rhs);
  }
  return sweep;
}

double sweep_sphere_exp(const SphereRule& rule, int draws, double kx_max, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  double worst = 0.0;
  for (int d = 0; d < draws; ++d) {
    Vec3 x{sym(rng), sym(rng), sym(rng)};
    const double xn = norm(x);
    if (xn < 1e-6) continue;
    const double kx = kx_max * unit(rng);
    const double k = kx / xn;
    const double got = sphere_average_exp(rule, k, x);
    const double want = sphere_average_exp_exact(k, xn);
    worst = std::max(worst, std::fabs(got - want) / want);
  }
  return worst;
}

CarlemanComparison compare_carleman_direct(double gamma, double mi, double mj, int points,
                                           double v_box, int outer_points, int inner_polar,
                                           int inner_azimuth, Rng& rng, const ThreadPool& pool) {
  KernelSpec kernel(2, gamma, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 1.0});
  // The Gaussian test functions are negligible beyond |v| ~ 6, so the outer
  // box truncates there; what controls the agreement is the spacing.
  const VelocityGrid outer(6.0, outer_points);
  const SphereRule inner = make_sphere_rule(inner_polar, inner_azimuth);
  const SphereRule direct_rule = make_sphere_rule(24, 16);
  const auto fi = [](const Vec3& u) { return std::exp(-0.5 * norm2(u - Vec3{0.3, -0.2, 0.1})); };
  const auto fj = [](const Vec3& u) { return std::exp(-0.4 * norm2(u - Vec3{-0.1, 0.2, 0.3})); };

  CarlemanComparison cmp;
  const Vec3 v0{0.0, 0.0, 0.0};
  const double direct0 = gain_direct(outer, direct_rule, kernel, 0, 1, mi, mj, fi, fj, v0, pool);
  const double raw0 = gain_carleman(outer, inner, kernel, 0, 1, mi, mj, fi, fj, v0, pool);
  cmp.constant = direct0 / raw0;

  std::uniform_real_distribution<double> coord(-v_box, v_box);
  for (int p = 0; p < points; ++p) {
    const Vec3 v{coord(rng), coord(rng), coord(rng)};
    const double direct = gain_direct(outer, direct_rule, kernel, 0, 1, mi, mj, fi, fj, v, pool);
    const double carleman =
        cmp.constant * gain_carleman(outer, inner, kernel, 0, 1, mi, mj, fi, fj, v, pool);
    cmp.worst_rel = std::max(cmp.worst_rel, std::fabs(carleman - direct) / std::fabs(direct));
  }
  return cmp;
}

MixtureState random_positive_state(const Mixture& mix, const VelocityGrid& grid, Rng& rng,
                                   const ThreadPool& pool, double amplitude, bool match_moments) {
  MixtureState st = MixtureState::equilibrium(mix, grid);
  const ConservedMoments target = cell_moments(st, 0, pool);
  std::uniform_real_distribution<double> pos(-2.0, 2.0);
  std::uniform_real_distribution<double> width(0.6, 1.6);
  std::uniform_real_distribution<double> amp(-amplitude, amplitude);
  const std::size_t nn = grid.node_count();
  for (int i = 0; i < mix.count(); ++i) {
    auto F = st.values(i);
    for (int b = 0; b < 3; ++b) {
      const Vec3 c{pos(rng), pos(rng), pos(rng)};
      const double a = amp(rng);
      const double iw = 1.0 / (width(rng) * width(rng));
      for (std::size_t k = 0; k < nn; ++k) {
        F[k] *= 1.0 + a * std::exp(-iw * norm2(grid.node(k) - c));
      }
    }
    for (std::size_t k = 0; k < nn; ++k) F[k] = std::max(0.0, F[k]);
  }
  if (match_moments) conservation_fix_cell(st, 0, target, pool);
  for (double& x : st.raw()) x = std::max(0.0, x);
  return st;
}

MixtureState random_perturbation_state(const Mixture& mix, const VelocityGrid& grid, Rng& rng,
                                       double amplitude) {
  MixtureState st(mix, grid, StateMode::Perturbation);
  std::uniform_real_distribution<double> pos(-2.5, 2.5);
  std::uniform_real_distribution<double> width(0.5, 1.5);
  std::uniform_real_distribution<double> amp(-amplitude, amplitude);
  const std::size_t nn = grid.node_count();
  for (int i = 0; i < mix.count(); ++i) {
    auto f = st.values(i);
    for (int b = 0; b < 4; ++b) {
      const Vec3 c{pos(rng), pos(rng), pos(rng)};
      const double a = amp(rng);
      const double iw = 1.0 / (width(rng) * width(rng));
      for (std::size_t k = 0; k < nn; ++k) f[k] += a * std::exp(-iw * norm2(grid.node(k) - c));
    }
  }
  return st;
}

MixtureState seeded_smooth_state(const Mixture& mix, const VelocityGrid& grid, std::uint64_t seed,
                                 double amplitude, const ThreadPool& pool) {
  Rng rng(seed);
  return random_positive_state(mix, grid, rng, pool, amplitude, true);
}

double measure_eps_quad(const Mixture& mix, const KernelSpec& kernel, const VelocityGrid& grid,
                        const SphereRule& rule, const ThreadPool& pool) {
  const MixtureState eq = MixtureState::equilibrium(mix, grid);
  // The equilibrium residual of D collapses to rounding noise, so keep a
  // floating-point floor: comparisons of O(1) entropy functionals cannot be
  // meaningful below ~1e4 ulp.
  const double floor = 1e4 * std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::fabs(entropy(eq, pool)));
  return std::max(std::fabs(entropy_production(eq, kernel, rule, pool)), floor);
}

// ---------------------------------------------------------------------------

Report verify_identities(const RunConfig& cfg) {
  Report rep;
  rep.suite = "identities";
  ThreadPool pool(cfg.run_workers);
  Rng rng(cfg.run_seed);

  {
    const CancellationSweep sweep = sweep_cancellation(100000, 10.0, 0.2, 5.0, 0.1, rng);
    rep.add_max("cancellation identity max relative |lhs-rhs|", sweep.max_rel_diff, 1e-12,
                "100000 draws in [-10,10]^3, masses in [0.2,5]");
    rep.add("cancellation rhs nonpositive", sweep.max_rhs, 0.0, sweep.max_rhs <= 0.0,
            "max rhs over draws");
  }
  {
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    std::uniform_real_distribution<double> mass(0.2, 5.0);
    double worst_mom = 0.0, worst_en = 0.0, worst_consistency = 0.0, worst_omega_fix = 0.0;
    for (int d = 0; d < 10000; ++d) {
      const double mi = mass(rng), mj = mass(rng);
      const Vec3 v{coord(rng), coord(rng), coord(rng)};
      const Vec3 vs{coord(rng), coord(rng), coord(rng)};
      Vec3 dir{coord(rng), coord(rng), coord(rng)};
      if (norm(dir) < 1e-6) dir = {1, 0, 0};
      const Vec3 sigma = dir / norm(dir);
      const PostCollision pc = post_collision_sigma(mi, mj, v, vs, sigma);
      const Vec3 dp = mi * v + mj * vs - (mi * pc.v_prime + mj * pc.v_star_prime);
      const double e0 = mi * norm2(v) + mj * norm2(vs);
      const double e1 = mi * norm2(pc.v_prime) + mj * norm2(pc.v_star_prime);
      const double scale = std::max(1.0, std::sqrt(mi + mj) * (norm(v) + norm(vs)));
      worst_mom = std::max(worst_mom, norm(dp) / scale);
      worst_en = std::max(worst_en, std::fabs(e0 - e1) / std::max(1.0, e0));
      // sigma(omega) consistency
      Vec3 wdir{coord(rng), coord(rng), coord(rng)};
      if (norm(wdir) < 1e-6) wdir = {0, 1, 0};
      const Vec3 omega = wdir / norm(wdir);
      const PostCollision po = post_collision_omega(mi, mj, v, vs, omega);
      if (norm(v - vs) > 1e-9) {
        const Vec3 s2 = sigma_from_omega(v, vs, omega);
        const PostCollision pc2 = post_collision_sigma(mi, mj, v, vs, s2 / norm(s2));
        worst_consistency =
            std::max(worst_consistency, norm(pc2.v_prime - po.v_prime) +
                                            norm(pc2.v_star_prime - po.v_star_prime));
      }
      // omega perpendicular to v_* - v leaves the pair unchanged
      Vec3 rel = vs - v;
      if (norm(rel) > 1e-9) {
        Vec3 e1v, e2v;
        orthonormal_frame(rel / norm(rel), e1v, e2v);
        const PostCollision pid = post_collision_omega(mi, mj, v, vs, e1v);
        worst_omega_fix =
            std::max(worst_omega_fix, norm(pid.v_prime - v) + norm(pid.v_star_prime - vs));
      }
    }
    rep.add_max("post-collision momentum residual", worst_mom, 1e-12, "10000 random draws");
    rep.add_max("post-collision energy residual", worst_en, 1e-12, "10000 random draws");
    rep.add_max("sigma/omega map consistency", worst_consistency, 1e-12, "");
    rep.add_max("omega perpendicular fixed point", worst_omega_fix, 1e-12, "");
  }
  {
    const SphereRule rule = cfg.rule();
    double wsum = 0.0, worst_norm = 0.0;
    Vec3 ez{0, 0, 1}, e1, e2;
    orthonormal_frame(ez, e1, e2);
    for (std::size_t s = 0; s < rule.size(); ++s) {
      wsum += rule.w[s];
      worst_norm = std::max(worst_norm, std::fabs(norm(rule.node(s, ez, e1, e2)) - 1.0));
    }
    rep.add_max("sphere rule weight sum defect", std::fabs(wsum - 4.0 * M_PI), 1e-12, "");
    rep.add_max("sphere rule node norm defect", worst_norm, 1e-12, "");
    const SphereRule rule16 = make_sphere_rule(std::max(16, cfg.sphere_n_polar), 16);
    double acos_mass = 0.0;
    for (std::size_t s = 0; s < rule16.size(); ++s)
      acos_mass += rule16.w[s] * std::fabs(rule16.t[s]);
    rep.add_max("|cos| angular mass vs 2*pi", std::fabs(acos_mass - 2.0 * M_PI), 1e-10, "");
    double moment2 = 0.0;
    for (std::size_t s = 0; s < rule.size(); ++s) {
      const Vec3 n = rule.node(s, ez, e1, e2);
      moment2 += rule.w[s] * n.x * n.x;
    }
    rep.add_max("second moment vs 4*pi/3", std::fabs(moment2 - 4.0 * M_PI / 3.0), 1e-12, "");
    const SphereRule rule32 = make_sphere_rule(32, std::max(8, cfg.sphere_n_azimuth));
    const double worst_exp = sweep_sphere_exp(rule32, 100, 6.0, rng);
    rep.add_max("sphere exponential integral vs closed form", worst_exp, 1e-8,
                "100 draws, k|x| <= 6, n_polar = 32");
  }
  {
    // kernel symmetry on random inputs
    const KernelSpec kernel = cfg.kernel();
    std::uniform_real_distribution<double> r(0.0, 10.0);
    std::uniform_real_distribution<double> ct(-1.0, 1.0);
    double worst = 0.0;
    const int n = kernel.species_count();
    for (int d = 0; d < 1000; ++d) {
      const double rr = r(rng), tc = ct(rng);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          worst = std::max(worst,
                           std::fabs(kernel.evaluate(i, j, rr, tc) - kernel.evaluate(j, i, rr, tc)));
    }
    rep.add_max("kernel symmetry B_ij = B_ji", worst, 0.0, "1000 random (r, cos)");
  }
  {
    // Maxwellian moments with refinement on the configured box
    const Mixture mix = cfg.mixture();
    ThreadPool& p = pool;
    auto moment_errors = [&](int npts) {
      const VelocityGrid g(cfg.grid_half_width, npts);
      double worst = 0.0;
      for (int i = 0; i < mix.count(); ++i) {
        std::vector<double> mu(g.node_count());
        for (std::size_t k = 0; k < g.node_count(); ++k) mu[k] = mix.maxwellian(i, g.node(k));
        const double mass = grid_integral(g, mu, p);
        worst = std::max(worst, std::fabs(mass - mix[i].eq_density) / mix[i].eq_density);
        double mom = 0.0, en = 0.0;
        for (std::size_t k = 0; k < g.node_count(); ++k) {
          mom += g.node(k).x * mu[k];
          en += mix[i].mass * norm2(g.node(k)) * mu[k];
        }
        mom *= g.node_weight();
        en *= g.node_weight();
        worst = std::max(worst, std::fabs(mom) / mix[i].eq_density);
        worst = std::max(worst, std::fabs(en - 3.0 * mix[i].eq_density) / (3.0 * mix[i].eq_density));
      }
      return worst;
    };
    const int n0 = std::max(12, cfg.grid_points / 2);
    const double coarse = moment_errors(n0);
    const double fine = moment_errors(2 * n0);
    rep.add_max("Maxwellian moment identities (fine grid)", fine, 1e-6, "");
    const double shrink = coarse > 1e-14 ? coarse / std::max(fine, 1e-300) : 1e9;
    rep.add("Maxwellian moment refinement shrink", shrink, 4.0, shrink >= 4.0 || coarse < 1e-12,
            "halving the spacing must shrink the error at least 4x (or both already at noise)");
  }
  {
    // velocity weight basics
    const WeightSpec w = cfg.weight();
    rep.add_max("velocity weight at 0", std::fabs(velocity_weight(w, {0, 0, 0}) - 1.0), 0.0, "");
    std::uniform_real_distribution<double> coord(-4.0, 4.0);
    bool monotone = true;
    for (int d = 0; d < 1000; ++d) {
      Vec3 a{coord(rng), coord(rng), coord(rng)};
      Vec3 b{coord(rng), coord(rng), coord(rng)};
      if (norm(a) > norm(b)) std::swap(a, b);
      if (velocity_weight(w, a) > velocity_weight(w, b) * (1 + 1e-14)) monotone = false;
    }
    rep.add("velocity weight monotone in |v|", monotone ? 0.0 : 1.0, 0.0, monotone, "1000 pairs");
  }
  {
    // Carleman sphere geometry examples
    const CarlemanSphere s1 = carleman_sphere({0, 0, 0}, {1, 0, 0}, 2.0, 1.0);
    rep.add_max("carleman sphere radius (m=2,1 example)", std::fabs(s1.radius - 1.0), 1e-15, "");
    rep.add_max("carleman sphere center (m=2,1 example)", norm(s1.center - Vec3{-1, 0, 0}), 1e-15,
                "");
    const CarlemanSphere s2 = carleman_sphere({0.3, 0.2, -0.4}, {1, 2, 3}, 1.5, 1.5);
    rep.add("carleman sphere degenerate flag for equal masses", s2.degenerate ? 0.0 : 1.0, 0.0,
            s2.degenerate, "");
  }
  return rep;
}

Report verify_conservation(const RunConfig& cfg) {
  Report rep;
  rep.suite = "conservation";
  ThreadPool pool(cfg.run_workers);
  const Mixture mix = cfg.mixture();
  const KernelSpec kernel = cfg.kernel();
  const SphereRule rule = cfg.rule();

  // weak-form residual refinement: coarse = configured points, fine = 2x
  const int n_coarse = cfg.grid_points;
  const int n_fine = 2 * n_coarse;
  const int nm = mix.count() + 4;
  std::vector<double> rel_coarse(nm), rel_fine(nm);
  for (int g = 0; g < 2; ++g) {
    const VelocityGrid grid(cfg.grid_half_width, g == 0 ? n_coarse : n_fine);
    const MixtureState st = seeded_smooth_state(mix, grid, cfg.run_seed + 17, 0.35, pool);
    const WeakFormResult wf = weak_form_all(st, kernel, rule, pool);
    for (int l = 0; l < nm; ++l)
      (g == 0 ? rel_coarse : rel_fine)[l] = std::fabs(wf.residual[l]) / std::max(wf.scale[l], 1e-300);
  }
  for (int l = 0; l < nm; ++l) {
    static const char* tail_names[4] = {"momentum-x", "momentum-y", "momentum-z", "energy"};
    std::ostringstream name;
    if (l < mix.count())
      name << "weak-form residual shrink, species-" << l + 1 << " mass";
    else
      name << "weak-form residual shrink, " << tail_names[l - mix.count()];
    const double shrink = rel_coarse[l] / std::max(rel_fine[l], 1e-300);
    std::ostringstream note;
    note << "relative residual " << rel_coarse[l] << " @" << n_coarse << "^3 -> " << rel_fine[l]
         << " @" << n_fine << "^3";
    rep.add(name.str(), shrink, 4.0, shrink >= 4.0 || rel_coarse[l] < 1e-12, note.str());
  }

  // solver conservation drift with the fix on
  {
    const VelocityGrid grid = cfg.grid();
    MixtureState st = seeded_smooth_state(mix, grid, cfg.run_seed + 23, 0.35, pool);
    StepConfig sc = cfg.step();
    sc.conservation_fix = true;
    sc.dt = resolve_dt(sc, mix, kernel, grid, rule, pool);
    const ConservedMoments m0 = conserved_moments(st, pool);
    const int steps = 200;
    double worst = 0.0;
    ConservedMoments prev = m0;
    for (int s = 0; s < steps; ++s) {
      st = step_homogeneous(st, kernel, rule, sc, pool);
      const ConservedMoments m = conserved_moments(st, pool);
      for (int i = 0; i < mix.count(); ++i)
        worst = std::max(worst, std::fabs(m.mass[i] - prev.mass[i]) / std::fabs(prev.mass[i]));
      const double pscale = std::max({1e-300, std::fabs(prev.momentum.x), std::fabs(prev.momentum.y),
                                      std::fabs(prev.momentum.z), prev.energy});
      worst = std::max(worst, norm(m.momentum - prev.momentum) / pscale);
      worst = std::max(worst, std::fabs(m.energy - prev.energy) / prev.energy);
      prev = m;
    }
    rep.add_max("per-step moment drift over 200 steps (fix on)", worst, 1e-12, "");
    rep.add("positivity along the drift run", st.min_value(), 0.0, st.min_value() >= 0.0,
            "min node value of the final state");
  }

  // fix off: drift bounded by the measured quadrature residual and shrinking
  {
    StepConfig sc = cfg.step();
    sc.conservation_fix = false;
    double drift[2];
    const int npts[2] = {std::max(8, cfg.grid_points / 2), std::max(16, cfg.grid_points)};
    for (int g = 0; g < 2; ++g) {
      const VelocityGrid grid(cfg.grid_half_width, npts[g]);
      MixtureState st = seeded_smooth_state(mix, grid, cfg.run_seed + 29, 0.35, pool);
      StepConfig scc = sc;
      scc.dt = 0.05;
      const ConservedMoments m0 = conserved_moments(st, pool);
      for (int s = 0; s < 5; ++s) st = step_homogeneous(st, kernel, rule, scc, pool);
      const ConservedMoments m1 = conserved_moments(st, pool);
      double worst = 0.0;
      for (int i = 0; i < mix.count(); ++i)
        worst = std::max(worst, std::fabs(m1.mass[i] - m0.mass[i]) / m0.mass[i]);
      worst = std::max(worst, std::fabs(m1.energy - m0.energy) / m0.energy);
      drift[g] = worst;
    }
    const double shrink = drift[0] / std::max(drift[1], 1e-300);
    std::ostringstream note;
    note << "drift " << drift[0] << " @" << npts[0] << "^3 -> " << drift[1] << " @" << npts[1]
         << "^3 over 5 steps";
    rep.add("fix-off drift refinement shrink", shrink, 4.0, shrink >= 4.0 || drift[0] < 1e-12,
            note.str());
  }
  return rep;
}

Report verify_spectral(const RunConfig& cfg) {
  Report rep;
  rep.suite = "spectral";
  ThreadPool pool(cfg.run_workers);
  Rng rng(cfg.run_seed);
  const Mixture mix = cfg.mixture();
  const VelocityGrid grid = cfg.grid();
  const SphereRule rule = cfg.rule();

  // nu envelope for gamma in {0, 1/2, 1}
  for (double gamma : {0.0, 0.5, 1.0}) {
    KernelSpec kernel(mix.count(), gamma, cfg.kernel_c_phi, cfg.kernel_c_b,
                      AngularProfile{cfg.kernel_angular, cfg.kernel_angular_coeff});
    const CollisionFrequencyTable nu = build_nu(mix, kernel, grid, rule, pool);
    double lo = 1e300, hi = 0.0;
    for (int i = 0; i < mix.count(); ++i) {
      auto nu_i = nu.of(i);
      for (std::size_t k = 0; k < nu_i.size(); ++k) {
        const double env = std::pow(1.0 + norm(grid.node(k)), gamma);
        lo = std::min(lo, nu_i[k] / env);
        hi = std::max(hi, nu_i[k] / env);
      }
    }
    std::ostringstream name, note;
    name << "nu envelope positive band, gamma=" << gamma;
    note << "nu/(1+|v|)^gamma in [" << lo << ", " << hi << "]";
    rep.add(name.str(), lo, 0.0, lo > 0.0 && std::isfinite(hi), note.str());
    if (gamma == 0.0 && cfg.kernel_angular == AngularKind::AbsCos) {
      // analytic Maxwell-kernel value: nu_ij = 2 pi coeff c_phi n_j
      double worst = 0.0;
      for (int i = 0; i < mix.count(); ++i)
        for (int j = 0; j < mix.count(); ++j) {
          const double want = 2.0 * M_PI * cfg.kernel_angular_coeff * cfg.kernel_c_phi *
                              mix[j].eq_density;
          auto nu_ij = nu.pair(i, j);
          for (std::size_t k = 0; k < nu_ij.size(); k += 97)
            worst = std::max(worst, std::fabs(nu_ij[k] - want) / want);
        }
      rep.add_max("Maxwell-kernel nu analytic value", worst, 1e-6, "2*pi*n_j factorization");
    }
    // nu_i <= beta nu_ii
    double beta = 0.0;
    for (int i = 0; i < mix.count(); ++i) {
      auto nu_i = nu.of(i);
      auto nu_ii = nu.pair(i, i);
      for (std::size_t k = 0; k < nu_i.size(); ++k) beta = std::max(beta, nu_i[k] / nu_ii[k]);
    }
    std::ostringstream bname;
    bname << "nu_i <= beta nu_ii finite, gamma=" << gamma;
    rep.add(bname.str(), beta, 1e6, std::isfinite(beta) && beta < 1e6,
            "measured beta-hat = max nu_i / nu_ii");
  }

  const KernelSpec kernel = cfg.kernel();
  const CollisionFrequencyTable nu = build_nu(mix, kernel, grid, rule, pool);
  {
    // evenness of nu
    double worst = 0.0;
    for (int i = 0; i < mix.count(); ++i) {
      auto nu_i = nu.of(i);
      for (std::size_t k = 0; k < nu_i.size(); k += 31)
        worst = std::max(worst,
                         std::fabs(nu_i[k] - nu_i[grid.mirror(k)]) / std::fabs(nu_i[k]));
    }
    rep.add_max("nu evenness nu(v) = nu(-v)", worst, 1e-12, "");
  }

  const double eps_quad =
      std::max(measure_eps_quad(mix, kernel, grid, rule, pool), 1e-12);
  const KernelBasis basis(mix, grid, pool);
  rep.add_max("basis Gram defect", basis.max_gram_defect(), 1e-6, "vs identity");

  {
    // L annihilates every basis direction
    double worst = 0.0;
    for (int a = 0; a < basis.count(); ++a) {
      MixtureState f(mix, grid, StateMode::Perturbation);
      for (int i = 0; i < mix.count(); ++i) {
        auto phi = basis.phi(a, i);
        std::copy(phi.begin(), phi.end(), f.values(i).begin());
      }
      double norm_sq = 0.0;
      for (int i = 0; i < mix.count(); ++i) {
        const std::vector<double> Lf = apply_L(f, kernel, rule, nu, i, pool);
        norm_sq += grid.node_weight() * deterministic_sum(pool, Lf.size(), [&](std::size_t k) {
                     return Lf[k] * Lf[k];
                   });
      }
      worst = std::max(worst, std::sqrt(norm_sq));
    }
    std::ostringstream note;
    note << "max ||L phi_k|| over " << basis.count() << " basis elements; eps_quad = " << eps_quad;
    rep.add_max("kernel of L annihilated", worst, 10.0 * eps_quad, note.str());
  }
  {
    // dirichlet form sign on random perturbations; strict negativity on micro
    double worst_dirichlet = -1e300;
    double lambda_hat = 1e300;
    for (int d = 0; d < 20; ++d) {
      MixtureState f = random_perturbation_state(mix, grid, rng);
      const CoercivityProbe probe = coercivity_probe(f, kernel, rule, nu, basis, pool);
      worst_dirichlet = std::max(worst_dirichlet, probe.dirichlet);
      // micro-only direction
      const Projection proj = project_PL(f, basis, pool);
      const CoercivityProbe mp = coercivity_probe(proj.micro, kernel, rule, nu, basis, pool);
      if (mp.micro_norm > 1e-12) lambda_hat = std::min(lambda_hat, -mp.dirichlet / mp.micro_norm);
    }
    rep.add_max("dirichlet form <= eps_quad on random perturbations", worst_dirichlet, eps_quad,
                "20 draws");
    rep.add("measured coercivity lambda-hat positive", lambda_hat, 0.0, lambda_hat > 0.0,
            "min -<f,Lf>/||micro f||^2 over micro-only draws");
  }
  {
    // two-route equivalence for L
    MixtureState f = random_perturbation_state(mix, grid, rng);
    double worst = 0.0;
    const std::size_t nn = grid.node_count();
    const std::vector<double> ones(nn, 1.0);
    for (int i = 0; i < mix.count(); ++i) {
      const std::vector<double> route_a = apply_L(f, kernel, rule, nu, i, pool);
      // bilinearity route through the collision core
      std::vector<double> route_b(nn, 0.0), buf(nn);
      std::vector<double> norm_fi(nn), slot_fi(nn);
      auto fi = f.values(i);
      for (std::size_t k = 0; k < nn; ++k) {
        const double smu = mix.sqrt_maxwellian(i, grid.node(k));
        slot_fi[k] = smu * fi[k];
        norm_fi[k] = smu > 1e-290 ? fi[k] / smu : 0.0;
      }
      for (int j = 0; j < mix.count(); ++j) {
        PairQuadrature pq(grid, rule, kernel, mix, i, j);
        std::vector<double> slot_fj(nn), norm_fj(nn), mu_j(nn);
        auto fj = f.values(j);
        for (std::size_t k = 0; k < nn; ++k) {
          const double smu = mix.sqrt_maxwellian(j, grid.node(k));
          mu_j[k] = mix.maxwellian(j, grid.node(k));
          slot_fj[k] = smu * fj[k];
          norm_fj[k] = smu > 1e-290 ? fj[k] / smu : 0.0;
        }
        // Q_ij(mu_i, sqrt(mu_j) f_j) + Q_ij(sqrt(mu_i) f_i, mu_j), over sqrt(mu_i)
        pq.gain(ones, norm_fj, buf, pool);
        for (std::size_t k = 0; k < nn; ++k) route_b[k] += buf[k];
        pq.gain(norm_fi, ones, buf, pool);
        for (std::size_t k = 0; k < nn; ++k) route_b[k] += buf[k];
        pq.loss_rate(slot_fj, buf, pool);
        for (std::size_t k = 0; k < nn; ++k)
          route_b[k] -= mix.maxwellian(i, grid.node(k)) * buf[k];
        pq.loss_rate(mu_j, buf, pool);
        for (std::size_t k = 0; k < nn; ++k) route_b[k] -= slot_fi[k] * buf[k];
      }
      for (std::size_t k = 0; k < nn; ++k) {
        const double smu = mix.sqrt_maxwellian(i, grid.node(k));
        const double rb = smu > 1e-290 ? route_b[k] / smu : 0.0;
        worst = std::max(worst, std::fabs(route_a[k] - rb));
      }
    }
    rep.add_max("L two-route equivalence", worst, 1e-8, "integral-definition vs bilinearity route");
  }
  {
    // projection idempotence and symmetry
    MixtureState f = random_perturbation_state(mix, grid, rng);
    MixtureState g = random_perturbation_state(mix, grid, rng);
    const Projection pf = project_PL(f, basis, pool);
    const Projection pf2 = project_PL(pf.macro, basis, pool);
    double idemp = 0.0;
    for (int i = 0; i < mix.count(); ++i) {
      auto a = pf.macro.values(i);
      auto b = pf2.macro.values(i);
      for (std::size_t k = 0; k < a.size(); ++k) idemp = std::max(idemp, std::fabs(a[k] - b[k]));
    }
    rep.add_max("P_L idempotence", idemp, 1e-10, "");
    const Projection pg = project_PL(g, basis, pool);
    const double s1 = inner_product(pf.macro, g, pool);
    const double s2 = inner_product(f, pg.macro, pool);
    rep.add_max("P_L symmetry <Pf,g> = <f,Pg>", std::fabs(s1 - s2),
                1e-10 * std::max(1.0, std::fabs(s1)), "");
  }
  return rep;
}

Report verify_entropy(const RunConfig& cfg) {
  Report rep;
  rep.suite = "entropy";
  ThreadPool pool(cfg.run_workers);
  Rng rng(cfg.run_seed);
  const Mixture mix = cfg.mixture();
  const KernelSpec kernel = cfg.kernel();
  const VelocityGrid grid = cfg.grid();
  const SphereRule rule = cfg.rule();
  const WeightSpec weight = cfg.weight();

  const double eps_quad = measure_eps_quad(mix, kernel, grid, rule, pool);
  rep.add("eps_quad yardstick |D(mu)|", eps_quad, 0.0, eps_quad >= 0.0,
          "quadrature noise scale of this configuration");

  {
    double worst = -1e300;
    for (int d = 0; d < 25; ++d) {
      const MixtureState st = random_positive_state(mix, grid, rng, pool);
      worst = std::max(worst, entropy_production(st, kernel, rule, pool));
    }
    rep.add_max("entropy production <= eps_quad on random states", worst, eps_quad, "25 draws");
  }
  {
    RunConfig bc = cfg;
    bc.scenario = "bi_maxwellian";
    const MixtureState bi = build_initial_state(bc, pool);
    const double D = entropy_production(bi, kernel, rule, pool);
    rep.add("bi-Maxwellian strictly dissipative", D, -10.0 * eps_quad, D < -10.0 * eps_quad,
            "D < -10 eps_quad");
  }
  {
    const MixtureState eq = MixtureState::equilibrium(mix, grid);
    const double re = relative_entropy(eq, pool);
    rep.add_max("relative entropy at equilibrium", std::fabs(re), 1e-8, "");
    double worst = 1e300;
    double worst_split = -1e300;
    for (int d = 0; d < 100; ++d) {
      const MixtureState st = random_positive_state(mix, grid, rng, pool);
      const double r = relative_entropy(st, pool);
      worst = std::min(worst, r);
      const EntropySplit split = entropy_splitting_check(st, pool);
      worst_split = std::max(worst_split, split.lhs - split.rhs);
    }
    rep.add("relative entropy >= -eps_quad on matched states", worst, -std::max(eps_quad, 1e-10),
            worst >= -std::max(eps_quad, 1e-10), "min over 100 draws");
    rep.add_max("splitting inequality lhs - rhs", worst_split, std::max(eps_quad, 1e-10),
                "100 draws, moment-matched");
  }
  {
    // gauss monitor at h = 1: f = 1/w gives h = 1 and the integral (2 sqrt(pi))^3
    MixtureState f(mix, grid, StateMode::Perturbation);
    for (int i = 0; i < mix.count(); ++i) {
      auto fi = f.values(i);
      for (std::size_t k = 0; k < fi.size(); ++k)
        fi[k] = 1.0 / velocity_weight(weight, grid.node(k));
    }
    const std::vector<double> g = gauss_monitor(f, weight, pool);
    const double want = std::pow(2.0 * std::sqrt(M_PI), 3);
    double worst = 0.0;
    for (double v : g) worst = std::max(worst, std::fabs(v - want) / want);
    rep.add_max("gauss monitor at h = 1", worst, 1e-6, "(2 sqrt(pi))^3");
    const std::vector<double> sup = weighted_sup_norm(f, weight);
    double worst_sup = 0.0;
    for (double v : sup) worst_sup = std::max(worst_sup, std::fabs(v - 1.0));
    rep.add_max("weighted sup norm at f = 1/w", worst_sup, 1e-12, "");
  }
  {
    // conserved moments analytic values at equilibrium
    const MixtureState eq = MixtureState::equilibrium(mix, grid);
    const ConservedMoments m = conserved_moments(eq, pool);
    double worst = 0.0;
    double want_energy = 0.0;
    for (int i = 0; i < mix.count(); ++i) {
      worst = std::max(worst, std::fabs(m.mass[i] - mix[i].eq_density) / mix[i].eq_density);
      want_energy += 1.5 * mix[i].eq_density;
    }
    worst = std::max(worst, norm(m.momentum));
    worst = std::max(worst, std::fabs(m.energy - want_energy) / want_energy);
    rep.add_max("equilibrium conserved moments analytic", worst, 1e-6, "");
  }
  return rep;
}

Report verify_carleman(const RunConfig& cfg) {
  Report rep;
  rep.suite = "carleman";
  ThreadPool pool(cfg.run_workers);
  Rng rng(cfg.run_seed);
  const Mixture mix = cfg.mixture();

  if (mix.count() >= 2 && masses_equal(mix[0].mass, mix[1].mass)) {
    throw std::invalid_argument(
        "carleman suite: species masses are equal; the Carleman sphere degenerates to the "
        "hyperplane case, which this toolkit does not evaluate");
  }
  const double mi = mix[0].mass;
  const double mj = mix.count() >= 2 ? mix[1].mass : 2.0 * mi;

  for (double gamma : {0.0, 1.0}) {
    const CarlemanComparison cmp =
        compare_carleman_direct(gamma, mi, mj, 20, 2.0, 40, 64, 16, rng, pool);
    std::ostringstream name, note;
    name << "carleman vs direct gain, gamma=" << gamma;
    note << "fitted constant " << cmp.constant << ", 20 random points after one-point calibration";
    rep.add_max(name.str(), cmp.worst_rel, 1e-3, note.str());
  }
  {
    // fitted constant is v-independent: calibrate at 0, check on the axis
    KernelSpec kernel(2, 0.0, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 1.0});
    const VelocityGrid outer(8.0, 40);
    const SphereRule inner = make_sphere_rule(64, 16);
    const SphereRule drule = make_sphere_rule(32, 32);
    auto fi = [](const Vec3& u) { return std::exp(-0.5 * norm2(u - Vec3{0.3, -0.2, 0.1})); };
    auto fj = [](const Vec3& u) { return std::exp(-0.4 * norm2(u - Vec3{-0.1, 0.2, 0.3})); };
    const double c0 = gain_direct(outer, drule, kernel, 0, 1, mi, mj, fi, fj, {0, 0, 0}, pool) /
                      gain_carleman(outer, inner, kernel, 0, 1, mi, mj, fi, fj, {0, 0, 0}, pool);
    const Vec3 v2{2.0, 0.0, 0.0};
    const double d2 = gain_direct(outer, drule, kernel, 0, 1, mi, mj, fi, fj, v2, pool);
    const double g2 = c0 * gain_carleman(outer, inner, kernel, 0, 1, mi, mj, fi, fj, v2, pool);
    rep.add_max("carleman constant v-independence", std::fabs(g2 - d2) / std::fabs(d2), 1e-3,
                "calibrated at v=0, tested at |v|=2");
  }
  {
    // compactly supported f far outside the reachable spheres -> 0
    KernelSpec kernel(2, 0.0, 1.0, 1.0, AngularProfile{AngularKind::AbsCos, 1.0});
    const VelocityGrid outer(8.0, 24);
    const SphereRule inner = make_sphere_rule(16, 8);
    auto far = [](const Vec3& u) {
      const double d2 = norm2(u - Vec3{50.0, 0.0, 0.0});
      return d2 < 1.0 ? std::exp(-1.0 / (1.0 - d2)) : 0.0;
    };
    auto fj = [](const Vec3& u) { return std::exp(-norm2(u)); };
    const double g =
        gain_carleman(outer, inner, kernel, 0, 1, mi, mj, far, fj, {0.5, 0, 0}, pool);
    rep.add_max("empty support gives zero gain", std::fabs(g), 0.0, "");
  }
  {
    // decay probe I(v) (1+|v|)^{1/2} bounded by a fitted constant
    double fitted = 0.0;
    std::vector<double> vals;
    for (double r : {1.0, 2.0, 4.0, 8.0, 16.0}) {
      const double I = gain_kernel_decay_integral(mi, mj, {r, 0.0, 0.0});
      const double weighted = I * std::sqrt(1.0 + r);
      vals.push_back(weighted);
      fitted = std::max(fitted, weighted);
    }
    std::ostringstream note;
    note << "I(v)(1+|v|)^1/2 at |v|=1,2,4,8,16:";
    for (double v : vals) note << ' ' << v;
    // bounded: the largest value must not exceed the fitted constant from the
    // first samples by more than 50% (no growth trend)
    const double early = std::max(vals[0], vals[1]);
    rep.add("gain-kernel decay probe bounded", fitted / early, 1.5, fitted <= 1.5 * early,
            note.str());
  }
  return rep;
}

Report run_suite(const std::string& suite, const RunConfig& cfg) {
  if (suite == "identities") return verify_identities(cfg);
  if (suite == "conservation") return verify_conservation(cfg);
  if (suite == "spectral") return verify_spectral(cfg);
  if (suite == "entropy") return verify_entropy(cfg);
  if (suite == "carleman") return verify_carleman(cfg);
  throw std::invalid_argument("unknown verify suite '" + suite +
                              "' (expected identities|conservation|spectral|entropy|carleman)");
}

}  // namespace bmx
