#ifndef BOLTZMIX_CONFIG_HPP
#define BOLTZMIX_CONFIG_HPP

#include <cstdint>
#include <string>

#include "boltzmix/solver.hpp"

namespace bmx {

// Flat dotted-key configuration. Unknown keys are rejected so a typo can
// never silently fall back to a default.
struct RunConfig {
  std::vector<SpeciesParams> species{{1.0, 1.0}, {2.0, 0.5}};

  double kernel_gamma = 0.0;
  double kernel_c_phi = 1.0;  // uniform pair constant unless overridden
  std::vector<double> kernel_c_phi_pairs;  // optional full matrix, row-major
  double kernel_c_b = 1.0;
  AngularKind kernel_angular = AngularKind::AbsCos;
  double kernel_angular_coeff = 1.0;

  double grid_half_width = 8.0;
  int grid_points = 16;

  int sphere_n_polar = 8;
  int sphere_n_azimuth = 8;

  double weight_q = 5.0;

  double step_dt = 0.0;  // 0 = auto
  Scheme step_scheme = Scheme::SemiImplicitLoss;
  bool step_conservation_fix = true;

  int torus_cells = 1;

  std::string scenario = "two_species_relax";
  double scenario_amplitude = 0.2;
  double scenario_bulk_speed = 0.3;

  double run_t_end = 4.0;
  int run_sample_every = 5;
  unsigned run_workers = 0;
  std::uint64_t run_seed = 1234;

  bool output_plots = false;

  Mixture mixture() const { return Mixture(species); }
  KernelSpec kernel() const;
  VelocityGrid grid() const { return VelocityGrid(grid_half_width, grid_points); }
  SphereRule rule() const { return make_sphere_rule(sphere_n_polar, sphere_n_azimuth); }
  WeightSpec weight() const { return WeightSpec{weight_q}; }
  StepConfig step() const { return StepConfig{step_dt, step_scheme, step_conservation_fix}; }

  void set(const std::string& key, const std::string& value);
  void validate() const;
  std::string serialize() const;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

// Scenario construction. Physical, nonnegative, and (where the scenario
// prescribes it) moment-projected onto the reference Maxwellian invariants.
MixtureState build_initial_state(const RunConfig& cfg, const ThreadPool& pool);

}  // namespace bmx

#endif
