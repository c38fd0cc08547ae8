#include "boltzmix/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bmx {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (...) {
    throw std::invalid_argument("config key '" + key + "': expected a number, got '" + v + "'");
  }
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  const int i = static_cast<int>(x);
  if (x != i) throw std::invalid_argument("config key '" + key + "': expected an integer");
  return i;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "on") return true;
  if (v == "false" || v == "0" || v == "off") return false;
  throw std::invalid_argument("config key '" + key + "': expected true/false");
}

}  // namespace

KernelSpec RunConfig::kernel() const {
  const int n = static_cast<int>(species.size());
  KernelSpec k(n, kernel_gamma, kernel_c_phi, kernel_c_b,
               AngularProfile{kernel_angular, kernel_angular_coeff});
  if (!kernel_c_phi_pairs.empty()) {
    if (kernel_c_phi_pairs.size() != static_cast<std::size_t>(n) * n)
      throw std::invalid_argument("kernel.c_phi pair overrides must cover the full matrix");
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) k.set_c_phi(i, j, kernel_c_phi_pairs[i * n + j]);
  }
  return k;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  // species.N.mass / species.N.density
  if (key.rfind("species.", 0) == 0) {
    if (key == "species.count") {
      const int n = to_int(key, value);
      if (n < 1) throw std::invalid_argument("species.count must be >= 1");
      species.resize(n, SpeciesParams{1.0, 1.0});
      return;
    }
    std::istringstream is(key.substr(8));
    int idx = 0;
    char dot = 0;
    std::string field;
    if (is >> idx >> dot && dot == '.' && std::getline(is, field)) {
      if (idx < 1 || idx > static_cast<int>(species.size()))
        throw std::invalid_argument("config key '" + key + "': species index out of range (set species.count first)");
      if (field == "mass") {
        species[idx - 1].mass = to_double(key, value);
        return;
      }
      if (field == "density") {
        species[idx - 1].eq_density = to_double(key, value);
        return;
      }
    }
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
  if (key.rfind("kernel.c_phi.", 0) == 0) {
    std::istringstream is(key.substr(13));
    int i = 0, j = 0;
    char dot = 0;
    if (is >> i >> dot >> j && dot == '.' && is.eof()) {
      const int n = static_cast<int>(species.size());
      if (i < 1 || j < 1 || i > n || j > n)
        throw std::invalid_argument("config key '" + key + "': pair index out of range");
      if (kernel_c_phi_pairs.empty())
        kernel_c_phi_pairs.assign(static_cast<std::size_t>(n) * n, kernel_c_phi);
      const double x = to_double(key, value);
      kernel_c_phi_pairs[(i - 1) * n + (j - 1)] = x;
      kernel_c_phi_pairs[(j - 1) * n + (i - 1)] = x;
      return;
    }
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
  if (key == "kernel.gamma") { kernel_gamma = to_double(key, value); return; }
  if (key == "kernel.c_phi") { kernel_c_phi = to_double(key, value); return; }
  if (key == "kernel.c_b") { kernel_c_b = to_double(key, value); return; }
  if (key == "kernel.angular") {
    if (value == "abs_cos") { kernel_angular = AngularKind::AbsCos; return; }
    if (value == "cos_sq") { kernel_angular = AngularKind::CosSq; return; }
    throw std::invalid_argument("config key 'kernel.angular': unknown profile '" + value + "'");
  }
  if (key == "kernel.angular_coeff") { kernel_angular_coeff = to_double(key, value); return; }
  if (key == "grid.half_width") { grid_half_width = to_double(key, value); return; }
  if (key == "grid.points") { grid_points = to_int(key, value); return; }
  if (key == "sphere.n_polar") { sphere_n_polar = to_int(key, value); return; }
  if (key == "sphere.n_azimuth") { sphere_n_azimuth = to_int(key, value); return; }
  if (key == "weight.q") { weight_q = to_double(key, value); return; }
  if (key == "step.dt") { step_dt = to_double(key, value); return; }
  if (key == "step.scheme") {
    if (value == "semi_implicit_loss") { step_scheme = Scheme::SemiImplicitLoss; return; }
    if (value == "explicit_euler") { step_scheme = Scheme::ExplicitEuler; return; }
    throw std::invalid_argument("config key 'step.scheme': unknown scheme '" + value + "'");
  }
  if (key == "step.conservation_fix") { step_conservation_fix = to_bool(key, value); return; }
  if (key == "torus.cells") { torus_cells = to_int(key, value); return; }
  if (key == "scenario.name") { scenario = value; return; }
  if (key == "scenario.amplitude") { scenario_amplitude = to_double(key, value); return; }
  if (key == "scenario.bulk_speed") { scenario_bulk_speed = to_double(key, value); return; }
  if (key == "run.t_end") { run_t_end = to_double(key, value); return; }
  if (key == "run.sample_every") { run_sample_every = to_int(key, value); return; }
  if (key == "run.workers") { run_workers = static_cast<unsigned>(to_int(key, value)); return; }
  if (key == "run.seed") { run_seed = static_cast<std::uint64_t>(to_double(key, value)); return; }
  if (key == "output.plots") { output_plots = to_bool(key, value); return; }
  throw std::invalid_argument("unknown config key '" + key + "'");
}

void RunConfig::validate() const {
  Mixture mix(species);
  (void)kernel();
  (void)grid();
  (void)make_sphere_rule(sphere_n_polar, sphere_n_azimuth);
  if (!(weight_q > 4.0)) throw std::invalid_argument("weight.q must exceed 4");
  if (step_dt < 0.0) throw std::invalid_argument("step.dt must be >= 0 (0 = auto)");
  if (torus_cells != 1 && torus_cells < 8)
    throw std::invalid_argument("torus.cells must be 1 (homogeneous) or >= 8");
  if (run_t_end < 0.0) throw std::invalid_argument("run.t_end must be >= 0");
  if (run_sample_every < 1) throw std::invalid_argument("run.sample_every must be >= 1");
  if (scenario != "equilibrium" && scenario != "two_species_relax" &&
      scenario != "large_amplitude" && scenario != "bi_maxwellian" &&
      scenario != "standing_wave")
    throw std::invalid_argument("unknown scenario '" + scenario + "'");
  if (scenario == "standing_wave" && torus_cells < 8)
    throw std::invalid_argument("scenario standing_wave needs torus.cells >= 8");
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  // first pass for species.count so indexed keys resolve in any order
  std::vector<std::pair<std::string, std::string>> entries;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "species.count")
      cfg.set(key, value);
    else
      entries.emplace_back(key, value);
  }
  for (const auto& [k, v] : entries) cfg.set(k, v);
  cfg.validate();
  return cfg;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config(os.str());
}

std::string RunConfig::serialize() const {
  std::ostringstream os;
  os.precision(17);
  os << "species.count = " << species.size() << '\n';
  for (std::size_t i = 0; i < species.size(); ++i) {
    os << "species." << i + 1 << ".mass = " << species[i].mass << '\n';
    os << "species." << i + 1 << ".density = " << species[i].eq_density << '\n';
  }
  os << "kernel.gamma = " << kernel_gamma << '\n';
  os << "kernel.c_phi = " << kernel_c_phi << '\n';
  if (!kernel_c_phi_pairs.empty()) {
    const int n = static_cast<int>(species.size());
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        os << "kernel.c_phi." << i + 1 << '.' << j + 1 << " = " << kernel_c_phi_pairs[i * n + j]
           << '\n';
  }
  os << "kernel.c_b = " << kernel_c_b << '\n';
  os << "kernel.angular = " << angular_kind_name(kernel_angular) << '\n';
  os << "kernel.angular_coeff = " << kernel_angular_coeff << '\n';
  os << "grid.half_width = " << grid_half_width << '\n';
  os << "grid.points = " << grid_points << '\n';
  os << "sphere.n_polar = " << sphere_n_polar << '\n';
  os << "sphere.n_azimuth = " << sphere_n_azimuth << '\n';
  os << "weight.q = " << weight_q << '\n';
  os << "step.dt = " << step_dt << '\n';
  os << "step.scheme = "
     << (step_scheme == Scheme::SemiImplicitLoss ? "semi_implicit_loss" : "explicit_euler") << '\n';
  os << "step.conservation_fix = " << (step_conservation_fix ? "true" : "false") << '\n';
  os << "torus.cells = " << torus_cells << '\n';
  os << "scenario.name = " << scenario << '\n';
  os << "scenario.amplitude = " << scenario_amplitude << '\n';
  os << "scenario.bulk_speed = " << scenario_bulk_speed << '\n';
  os << "run.t_end = " << run_t_end << '\n';
  os << "run.sample_every = " << run_sample_every << '\n';
  os << "run.workers = " << run_workers << '\n';
  os << "run.seed = " << run_seed << '\n';
  os << "output.plots = " << (output_plots ? "true" : "false") << '\n';
  return os.str();
}

namespace {

// Shifted Maxwellian at bulk u and temperature T.
double shifted_maxwellian(const SpeciesParams& sp, const Vec3& v, const Vec3& u, double T) {
  const double c = sp.eq_density * std::pow(sp.mass / (2.0 * M_PI * T), 1.5);
  const Vec3 d = v - u;
  return c * std::exp(-0.5 * sp.mass * norm2(d) / T);
}

void clamp_nonnegative(MixtureState& st) {
  for (double& x : st.raw()) x = std::max(0.0, x);
}

}  // namespace

MixtureState build_initial_state(const RunConfig& cfg, const ThreadPool& pool) {
  const Mixture mix = cfg.mixture();
  const VelocityGrid grid = cfg.grid();
  const int cells = cfg.torus_cells;
  const std::size_t nn = grid.node_count();

  MixtureState st = MixtureState::equilibrium(mix, grid, cells);
  const ConservedMoments eq_moments = cell_moments(st, 0, pool);

  if (cfg.scenario == "equilibrium") return st;

  if (cfg.scenario == "two_species_relax") {
    const double a = cfg.scenario_amplitude;
    for (int i = 0; i < mix.count(); ++i) {
      const Vec3 c{i % 2 == 0 ? 1.0 : -1.0, 0.0, 0.0};
      for (int cc = 0; cc < cells; ++cc) {
        auto F = st.values(cc, i);
        for (std::size_t k = 0; k < nn; ++k) {
          const Vec3 v = grid.node(k);
          F[k] *= 1.0 + a * std::exp(-norm2(v - c));
        }
      }
    }
    clamp_nonnegative(st);
    for (int cc = 0; cc < cells; ++cc) conservation_fix_cell(st, cc, eq_moments, pool);
    return st;
  }

  if (cfg.scenario == "bi_maxwellian") {
    const double u = cfg.scenario_bulk_speed;
    // alternate bulk directions; two species balance momentum exactly and the
    // common temperature is lowered so total energy matches the equilibrium
    std::vector<Vec3> bulk(mix.count());
    for (int i = 0; i < mix.count(); ++i) bulk[i] = {i % 2 == 0 ? u : -u, 0.0, 0.0};
    if (mix.count() == 2) {
      bulk[1].x = -u * mix[0].mass * mix[0].eq_density / (mix[1].mass * mix[1].eq_density);
    }
    double kinetic = 0.0;
    for (int i = 0; i < mix.count(); ++i)
      kinetic += mix[i].mass * mix[i].eq_density * norm2(bulk[i]);
    const double T = 1.0 - kinetic / (3.0 * mix.total_density());
    if (T <= 0.0) throw std::invalid_argument("bi_maxwellian bulk speed too large for unit energy");
    for (int i = 0; i < mix.count(); ++i)
      for (int cc = 0; cc < cells; ++cc) {
        auto F = st.values(cc, i);
        for (std::size_t k = 0; k < nn; ++k)
          F[k] = shifted_maxwellian(mix[i], grid.node(k), bulk[i], T);
      }
    return st;
  }

  if (cfg.scenario == "large_amplitude") {
    // Narrow sign-alternating bumps in f at the radius maximizing w sqrt(mu),
    // so ||w f||_inf is large while the relative entropy stays small.
    const double frac = cfg.scenario_amplitude;  // fraction of sqrt(mu) at the bump center
    const double width2 = 0.35 * 0.35;
    for (int i = 0; i < mix.count(); ++i) {
      const double m = mix[i].mass;
      const double r2 = 10.0 / m - 1.0;
      const double r = r2 > 0.0 ? std::sqrt(r2) : 1.0;
      const Vec3 centers[6] = {{r, 0, 0}, {-r, 0, 0}, {0, r, 0}, {0, -r, 0}, {0, 0, r}, {0, 0, -r}};
      const double signs[6] = {1, -1, -1, 1, 1, -1};
      for (int cc = 0; cc < cells; ++cc) {
        auto F = st.values(cc, i);
        for (std::size_t k = 0; k < nn; ++k) {
          const Vec3 v = grid.node(k);
          double f = 0.0;
          for (int b = 0; b < 6; ++b) {
            const double amp = frac * mix.sqrt_maxwellian(i, centers[b]);
            f += signs[b] * amp * std::exp(-norm2(v - centers[b]) / (2.0 * width2));
          }
          F[k] += mix.sqrt_maxwellian(i, v) * f;
        }
      }
    }
    clamp_nonnegative(st);
    for (int cc = 0; cc < cells; ++cc) conservation_fix_cell(st, cc, eq_moments, pool);
    clamp_nonnegative(st);
    return st;
  }

  if (cfg.scenario == "standing_wave") {
    const double a = cfg.scenario_amplitude;
    for (int cc = 0; cc < cells; ++cc) {
      const double x = (cc + 0.5) / cells;
      const double fac = 1.0 + a * std::cos(2.0 * M_PI * x);
      for (int i = 0; i < mix.count(); ++i) {
        auto F = st.values(cc, i);
        for (std::size_t k = 0; k < nn; ++k) F[k] *= fac;
      }
    }
    clamp_nonnegative(st);
    return st;
  }

  throw std::invalid_argument("unknown scenario '" + cfg.scenario + "'");
}

}  // namespace bmx
