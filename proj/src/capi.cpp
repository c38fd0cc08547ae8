#include "boltzmix.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "boltzmix/collision_geometry.hpp"
#include "boltzmix/plot.hpp"
#include "boltzmix/verify.hpp"

namespace {

thread_local std::string g_last_error;

bmx_status fail(bmx_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename Fn>
bmx_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    return fail(BMX_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::runtime_error& e) {
    return fail(BMX_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(BMX_ERR_INTERNAL, e.what());
  }
}

bmx::Vec3 vec(const double v[3]) { return {v[0], v[1], v[2]}; }

void store(const bmx::Vec3& v, double out[3]) {
  out[0] = v.x;
  out[1] = v.y;
  out[2] = v.z;
}

}  // namespace

struct bmx_config {
  bmx::RunConfig cfg;
};

struct bmx_system {
  bmx::RunConfig cfg;
  bmx::Mixture mixture;
  bmx::KernelSpec kernel;
  bmx::VelocityGrid grid;
  bmx::SphereRule rule;
  bmx::WeightSpec weight;
  bmx::ThreadPool pool;
  bmx::CollisionFrequencyTable nu;

  explicit bmx_system(const bmx::RunConfig& c)
      : cfg(c),
        mixture(c.mixture()),
        kernel(c.kernel()),
        grid(c.grid()),
        rule(c.rule()),
        weight(c.weight()),
        pool(c.run_workers),
        nu(bmx::build_nu(mixture, kernel, grid, rule, pool)) {}
};

struct bmx_state {
  bmx::MixtureState state;
};

extern "C" {

const char* bmx_version(void) { return "boltzmix 1.0.0"; }

const char* bmx_last_error(void) { return g_last_error.c_str(); }

bmx_status bmx_config_create(bmx_config** out) {
  if (!out) return fail(BMX_ERR_INVALID_ARGUMENT, "null output pointer");
  return guarded([&] {
    *out = new bmx_config{};
    return BMX_OK;
  });
}

bmx_status bmx_config_load_file(const char* path, bmx_config** out) {
  if (!path || !out) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> bmx_status {
    try {
      *out = new bmx_config{bmx::load_config_file(path)};
    } catch (const std::invalid_argument& e) {
      return fail(BMX_ERR_CONFIG, e.what());
    }
    return BMX_OK;
  });
}

bmx_status bmx_config_load_string(const char* text, bmx_config** out) {
  if (!text || !out) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> bmx_status {
    try {
      *out = new bmx_config{bmx::parse_config(text)};
    } catch (const std::invalid_argument& e) {
      return fail(BMX_ERR_CONFIG, e.what());
    }
    return BMX_OK;
  });
}

bmx_status bmx_config_set(bmx_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> bmx_status {
    try {
      cfg->cfg.set(key, value);
    } catch (const std::invalid_argument& e) {
      return fail(BMX_ERR_CONFIG, e.what());
    }
    return BMX_OK;
  });
}

bmx_status bmx_config_serialize(const bmx_config* cfg, char* buf, size_t buf_len, size_t* needed) {
  if (!cfg) return fail(BMX_ERR_INVALID_ARGUMENT, "null config");
  return guarded([&] {
    const std::string text = cfg->cfg.serialize();
    if (needed) *needed = text.size() + 1;
    if (buf && buf_len > 0) {
      const size_t n = text.size() + 1 <= buf_len ? text.size() : buf_len - 1;
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
    return BMX_OK;
  });
}

void bmx_config_destroy(bmx_config* cfg) { delete cfg; }

bmx_status bmx_maxwellian(double mass, double density, const double v[3], double* out) {
  if (!v || !out) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  if (!(mass > 0.0) || !(density > 0.0))
    return fail(BMX_ERR_INVALID_ARGUMENT, "mass and density must be positive");
  *out = bmx::maxwellian(bmx::SpeciesParams{mass, density}, vec(v));
  return BMX_OK;
}

bmx_status bmx_velocity_weight(double q, const double v[3], double* out) {
  if (!v || !out) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  if (!(q > 4.0)) return fail(BMX_ERR_INVALID_ARGUMENT, "weight exponent must exceed 4");
  *out = bmx::velocity_weight(bmx::WeightSpec{q}, vec(v));
  return BMX_OK;
}

bmx_status bmx_post_collision_sigma(double mi, double mj, const double v[3],
                                    const double v_star[3], const double sigma[3],
                                    double v_prime[3], double v_star_prime[3]) {
  if (!v || !v_star || !sigma || !v_prime || !v_star_prime)
    return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const bmx::PostCollision pc = bmx::post_collision_sigma(mi, mj, vec(v), vec(v_star), vec(sigma));
    store(pc.v_prime, v_prime);
    store(pc.v_star_prime, v_star_prime);
    return BMX_OK;
  });
}

bmx_status bmx_post_collision_omega(double mi, double mj, const double v[3],
                                    const double v_star[3], const double omega[3],
                                    double v_prime[3], double v_star_prime[3]) {
  if (!v || !v_star || !omega || !v_prime || !v_star_prime)
    return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const bmx::PostCollision pc = bmx::post_collision_omega(mi, mj, vec(v), vec(v_star), vec(omega));
    store(pc.v_prime, v_prime);
    store(pc.v_star_prime, v_star_prime);
    return BMX_OK;
  });
}

bmx_status bmx_carleman_sphere(double mi, double mj, const double v[3],
                               const double v_star_prime[3], double center[3], double* radius,
                               int* degenerate) {
  if (!v || !v_star_prime || !center || !radius || !degenerate)
    return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const bmx::CarlemanSphere s = bmx::carleman_sphere(vec(v), vec(v_star_prime), mi, mj);
    store(s.center, center);
    *radius = s.radius;
    *degenerate = s.degenerate ? 1 : 0;
    return BMX_OK;
  });
}

bmx_status bmx_exponent_cancellation(double mi, double mj, const double v[3],
                                     const double v_star_prime[3], double* lhs, double* rhs) {
  if (!v || !v_star_prime || !lhs || !rhs) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const bmx::ExponentCancellation ec =
        bmx::exponent_cancellation(vec(v), vec(v_star_prime), mi, mj);
    *lhs = ec.lhs;
    *rhs = ec.rhs;
    return BMX_OK;
  });
}

bmx_status bmx_sphere_average_exp(int n_polar, int n_azimuth, double k, const double x[3],
                                  double* quadrature, double* closed_form) {
  if (!x || !quadrature || !closed_form) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    const bmx::SphereRule rule = bmx::make_sphere_rule(n_polar, n_azimuth);
    *quadrature = bmx::sphere_average_exp(rule, k, vec(x));
    *closed_form = bmx::sphere_average_exp_exact(k, bmx::norm(vec(x)));
    return BMX_OK;
  });
}

bmx_status bmx_system_create(const bmx_config* cfg, bmx_system** out) {
  if (!cfg || !out) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> bmx_status {
    try {
      cfg->cfg.validate();
      *out = new bmx_system(cfg->cfg);
    } catch (const std::invalid_argument& e) {
      return fail(BMX_ERR_CONFIG, e.what());
    }
    return BMX_OK;
  });
}

void bmx_system_destroy(bmx_system* sys) { delete sys; }

bmx_status bmx_system_species_count(const bmx_system* sys, int* out) {
  if (!sys || !out) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  *out = sys->mixture.count();
  return BMX_OK;
}

bmx_status bmx_system_node_count(const bmx_system* sys, size_t* out) {
  if (!sys || !out) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  *out = sys->grid.node_count();
  return BMX_OK;
}

bmx_status bmx_system_collision_frequency(const bmx_system* sys, int species, double* out) {
  if (!sys || !out) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  if (species < 0 || species >= sys->mixture.count())
    return fail(BMX_ERR_INVALID_ARGUMENT, "species index out of range");
  const auto nu = sys->nu.of(species);
  std::memcpy(out, nu.data(), nu.size() * sizeof(double));
  return BMX_OK;
}

bmx_status bmx_system_mass_defect(const bmx_system* sys, double* out) {
  if (!sys || !out) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  *out = bmx::maxwellian_mass_defect(sys->mixture, sys->grid);
  return BMX_OK;
}

bmx_status bmx_state_create(const bmx_system* sys, const bmx_config* cfg, bmx_state** out) {
  if (!sys || !cfg || !out) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new bmx_state{bmx::build_initial_state(cfg->cfg, sys->pool)};
    return BMX_OK;
  });
}

bmx_status bmx_state_create_equilibrium(const bmx_system* sys, bmx_state** out) {
  if (!sys || !out) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new bmx_state{
        bmx::MixtureState::equilibrium(sys->mixture, sys->grid, sys->cfg.torus_cells)};
    return BMX_OK;
  });
}

void bmx_state_destroy(bmx_state* st) { delete st; }

bmx_status bmx_state_cells(const bmx_state* st, int* out) {
  if (!st || !out) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  *out = st->state.cells();
  return BMX_OK;
}

bmx_status bmx_state_get(const bmx_state* st, int cell, int species, double* out) {
  if (!st || !out) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  if (cell < 0 || cell >= st->state.cells() || species < 0 ||
      species >= st->state.species_count())
    return fail(BMX_ERR_INVALID_ARGUMENT, "cell or species index out of range");
  const auto v = st->state.values(cell, species);
  std::memcpy(out, v.data(), v.size() * sizeof(double));
  return BMX_OK;
}

bmx_status bmx_state_set(bmx_state* st, int cell, int species, const double* values) {
  if (!st || !values) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  if (cell < 0 || cell >= st->state.cells() || species < 0 ||
      species >= st->state.species_count())
    return fail(BMX_ERR_INVALID_ARGUMENT, "cell or species index out of range");
  auto v = st->state.values(cell, species);
  std::memcpy(v.data(), values, v.size() * sizeof(double));
  return BMX_OK;
}

bmx_status bmx_state_min_value(const bmx_state* st, double* out) {
  if (!st || !out) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  *out = st->state.min_value();
  return BMX_OK;
}

bmx_status bmx_step(const bmx_system* sys, bmx_state* st, double dt) {
  if (!sys || !st) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    bmx::StepConfig sc = sys->cfg.step();
    if (dt > 0.0) sc.dt = dt;
    sc.dt = bmx::resolve_dt(sc, sys->mixture, sys->kernel, sys->grid, sys->rule, sys->pool);
    st->state = st->state.cells() > 1
                    ? bmx::step_torus(st->state, sys->kernel, sys->rule, sc, sys->pool)
                    : bmx::step_homogeneous(st->state, sys->kernel, sys->rule, sc, sys->pool);
    return BMX_OK;
  });
}

bmx_status bmx_collision_tally(const bmx_system* sys, const bmx_state* st, int cell, int species,
                               double* gain, double* loss) {
  if (!sys || !st) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  if (cell < 0 || cell >= st->state.cells() || species < 0 ||
      species >= st->state.species_count())
    return fail(BMX_ERR_INVALID_ARGUMENT, "cell or species index out of range");
  return guarded([&] {
    const bmx::CollisionTally tally =
        bmx::evaluate_collision(st->state, sys->kernel, sys->rule, sys->pool, cell);
    const std::size_t nn = sys->grid.node_count();
    if (gain) std::memcpy(gain, tally.gain_of(species, nn).data(), nn * sizeof(double));
    if (loss) std::memcpy(loss, tally.loss_of(species, nn).data(), nn * sizeof(double));
    return BMX_OK;
  });
}

bmx_status bmx_diagnostics(const bmx_system* sys, const bmx_state* st, double time, double* buf,
                           size_t len, size_t* needed) {
  if (!sys || !st) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  const int n = sys->mixture.count();
  const size_t want = 9 + 4 * static_cast<size_t>(n);
  if (needed) *needed = want;
  if (!buf) return BMX_OK;
  if (len < want) return fail(BMX_ERR_INVALID_ARGUMENT, "diagnostics buffer too small");
  return guarded([&] {
    const bmx::DiagnosticsRecord rec = bmx::collect_diagnostics(
        st->state, sys->kernel, sys->rule, sys->nu, sys->weight, time, sys->pool);
    size_t p = 0;
    buf[p++] = rec.time;
    for (double m : rec.mass) buf[p++] = m;
    buf[p++] = rec.momentum.x;
    buf[p++] = rec.momentum.y;
    buf[p++] = rec.momentum.z;
    buf[p++] = rec.energy;
    buf[p++] = rec.entropy;
    buf[p++] = rec.rel_entropy;
    buf[p++] = rec.entropy_production;
    for (double v : rec.winf) buf[p++] = v;
    for (double v : rec.gauss) buf[p++] = v;
    for (double v : rec.rfreq_ratio) buf[p++] = v;
    return BMX_OK;
  });
}

}  // extern "C"

namespace {

void write_run_outputs(const bmx::RunConfig& cfg, const bmx::RunResult& result,
                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream os(dir / "diagnostics.csv");
    if (!os) throw std::runtime_error("cannot write " + (dir / "diagnostics.csv").string());
    bmx::write_csv(os, static_cast<int>(cfg.species.size()), result.records);
  }
  {
    std::ofstream os(dir / "resolved.cfg");
    if (!os) throw std::runtime_error("cannot write " + (dir / "resolved.cfg").string());
    os << cfg.serialize();
    os << "# resolved dt = " << result.dt << '\n';
    os << "# steps = " << result.steps << '\n';
  }
  if (cfg.output_plots) {
    std::vector<double> t;
    for (const auto& r : result.records) t.push_back(r.time);
    const int n = static_cast<int>(cfg.species.size());
    auto series_of = [&](const std::string& field) {
      std::vector<std::pair<std::string, std::vector<double>>> out;
      const bool per_species = field == "winf" || field == "gauss" || field == "rfreq" ||
                               field == "mass";
      const int count = per_species ? n : 1;
      for (int i = 0; i < count; ++i) {
        std::vector<double> ys;
        for (const auto& r : result.records) {
          if (field == "mass") ys.push_back(r.mass[i]);
          else if (field == "winf") ys.push_back(r.winf[i]);
          else if (field == "gauss") ys.push_back(r.gauss[i]);
          else if (field == "rfreq") ys.push_back(r.rfreq_ratio[i]);
          else if (field == "entropy") ys.push_back(r.entropy);
          else if (field == "rel_entropy") ys.push_back(r.rel_entropy);
          else if (field == "energy") ys.push_back(r.energy);
          else ys.push_back(r.entropy_production);
        }
        out.emplace_back(per_species ? field + "_" + std::to_string(i + 1) : field,
                         std::move(ys));
      }
      return out;
    };
    const auto plots = dir / "plots";
    std::filesystem::create_directories(plots);
    bmx::write_svg_plot((plots / "rel_entropy.svg").string(), "relative entropy", t,
                        series_of("rel_entropy"));
    bmx::write_svg_plot((plots / "winf.svg").string(), "weighted sup norm", t, series_of("winf"),
                        true);
    bmx::write_svg_plot((plots / "mass.svg").string(), "species mass", t, series_of("mass"));
    bmx::write_svg_plot((plots / "energy.svg").string(), "total energy", t, series_of("energy"));
    bmx::write_svg_plot((plots / "gauss.svg").string(), "gaussian monitor", t, series_of("gauss"));
    bmx::write_svg_plot((plots / "rfreq.svg").string(), "collision frequency ratio", t,
                        series_of("rfreq"));
  }
}

bmx::RunResult run_configured(const bmx::RunConfig& cfg) {
  bmx::ThreadPool pool(cfg.run_workers);
  const bmx::Mixture mix = cfg.mixture();
  const bmx::KernelSpec kernel = cfg.kernel();
  const bmx::SphereRule rule = cfg.rule();
  const bmx::MixtureState initial = bmx::build_initial_state(cfg, pool);
  return bmx::run_simulation(initial, kernel, rule, cfg.step(), cfg.weight(), cfg.run_t_end,
                             cfg.run_sample_every, pool);
}

}  // namespace

extern "C" {

bmx_status bmx_simulate(const bmx_config* cfg, const char* out_dir) {
  if (!cfg || !out_dir) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> bmx_status {
    try {
      cfg->cfg.validate();
    } catch (const std::invalid_argument& e) {
      return fail(BMX_ERR_CONFIG, e.what());
    }
    const bmx::RunResult result = run_configured(cfg->cfg);
    write_run_outputs(cfg->cfg, result, out_dir);
    return BMX_OK;
  });
}

bmx_status bmx_verify(const bmx_config* cfg, const char* suite, const char* report_path) {
  if (!cfg || !suite) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> bmx_status {
    bmx::Report report;
    try {
      report = bmx::run_suite(suite, cfg->cfg);
    } catch (const std::invalid_argument& e) {
      return fail(BMX_ERR_CONFIG, e.what());
    }
    const std::string text = report.to_text();
    if (report_path) {
      std::ofstream os(report_path);
      if (!os) return fail(BMX_ERR_IO, std::string("cannot write report to ") + report_path);
      os << text;
    }
    g_last_error = text;
    return report.all_pass() ? BMX_OK : BMX_ERR_CHECK_FAILED;
  });
}

bmx_status bmx_sweep(const bmx_config* cfg, const char* key, const char* values,
                     const char* out_dir) {
  if (!cfg || !key || !values || !out_dir) return fail(BMX_ERR_INVALID_ARGUMENT, "null argument");
  return guarded([&]() -> bmx_status {
    std::vector<std::string> vals;
    std::istringstream is(values);
    std::string item;
    while (std::getline(is, item, ',')) {
      if (!item.empty()) vals.push_back(item);
    }
    if (vals.empty()) return fail(BMX_ERR_INVALID_ARGUMENT, "sweep needs at least one value");

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    std::ofstream summary(dir / "sweep.csv");
    if (!summary) return fail(BMX_ERR_IO, "cannot write sweep.csv");
    summary << "value,final_rel_entropy,decay_rate,decay_r2,max_mass_drift,max_energy_drift,"
               "min_value\n";

    for (std::size_t i = 0; i < vals.size(); ++i) {
      bmx::RunConfig rc = cfg->cfg;
      try {
        rc.set(key, vals[i]);
        rc.validate();
      } catch (const std::invalid_argument& e) {
        return fail(BMX_ERR_CONFIG, e.what());
      }
      const bmx::RunResult result = run_configured(rc);
      write_run_outputs(rc, result, dir / ("run_" + std::to_string(i)));

      const auto& recs = result.records;
      double max_mass_drift = 0.0, max_energy_drift = 0.0;
      for (const auto& r : recs) {
        for (std::size_t s = 0; s < r.mass.size(); ++s)
          max_mass_drift = std::max(
              max_mass_drift, std::fabs(r.mass[s] - recs.front().mass[s]) /
                                  std::max(1e-300, std::fabs(recs.front().mass[s])));
        max_energy_drift =
            std::max(max_energy_drift, std::fabs(r.energy - recs.front().energy) /
                                           std::max(1e-300, recs.front().energy));
      }
      double rate = 0.0, r2 = 0.0;
      try {
        const bmx::DecayFit fit = bmx::fit_decay_rate(recs, "winf", 0, 0.25 * rc.run_t_end,
                                                      rc.run_t_end);
        rate = fit.rate;
        r2 = fit.r_squared;
      } catch (const std::invalid_argument&) {
        // short runs may not have enough samples; leave the columns at 0
      }
      summary << vals[i] << ',' << recs.back().rel_entropy << ',' << rate << ',' << r2 << ','
              << max_mass_drift << ',' << max_energy_drift << ','
              << result.final_state.min_value() << '\n';
    }
    return BMX_OK;
  });
}

}  // extern "C"
