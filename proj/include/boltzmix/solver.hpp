#ifndef BOLTZMIX_SOLVER_HPP
#define BOLTZMIX_SOLVER_HPP

#include <vector>

#include "boltzmix/diagnostics.hpp"

namespace bmx {

enum class Scheme { SemiImplicitLoss, ExplicitEuler };

struct StepConfig {
  double dt = 0.0;  // <= 0 resolves to 0.2 / max nu
  Scheme scheme = Scheme::SemiImplicitLoss;
  bool conservation_fix = true;
};

struct TorusConfig {
  int cells = 1;  // 1 = space-homogeneous; >= 8 for the 1D torus
};

// Multiplicative N+4 moment projection F <- F (1 + sum_k lambda_k psi_k),
// solved from the moment Gram system. If the straight correction would drive
// any node negative, lambda is damped to the largest nonnegativity-preserving
// fraction (theta = 1 in normal operation). Returns theta.
double conservation_fix_cell(MixtureState& state, int cell, const ConservedMoments& target,
                             const ThreadPool& pool);

ConservedMoments cell_moments(const MixtureState& state, int cell, const ThreadPool& pool);

// Loss-implicit / gain-explicit update of the homogeneous equation:
// F_new = (F + dt * gain(F)) / (1 + dt * R(F)), nonnegative by construction.
MixtureState step_homogeneous(const MixtureState& state, const KernelSpec& kernel,
                              const SphereRule& rule, const StepConfig& cfg,
                              const ThreadPool& pool);

// Strang splitting: half-step free transport on the unit torus
// (semi-Lagrangian shift with periodic linear interpolation), collision step
// per cell, half-step transport.
MixtureState step_torus(const MixtureState& state, const KernelSpec& kernel,
                        const SphereRule& rule, const StepConfig& cfg, const ThreadPool& pool);

double resolve_dt(const StepConfig& cfg, const Mixture& mixture, const KernelSpec& kernel,
                  const VelocityGrid& grid, const SphereRule& rule, const ThreadPool& pool);

struct RunResult {
  std::vector<DiagnosticsRecord> records;
  MixtureState final_state;
  double dt = 0.0;
  int steps = 0;
};

// Marches the state to t_end, sampling diagnostics every `sample_every`
// steps (plus the initial and final states). Works for homogeneous and
// torus states alike.
RunResult run_simulation(const MixtureState& initial, const KernelSpec& kernel,
                         const SphereRule& rule, const StepConfig& cfg, const WeightSpec& weight,
                         double t_end, int sample_every, const ThreadPool& pool);

DiagnosticsRecord collect_diagnostics(const MixtureState& state, const KernelSpec& kernel,
                                      const SphereRule& rule, const CollisionFrequencyTable& nu,
                                      const WeightSpec& weight, double time,
                                      const ThreadPool& pool);

// Dense (N+4)x(N+4) solve by Gaussian elimination with partial pivoting.
std::vector<double> solve_dense(std::vector<double> a, std::vector<double> b);

}  // namespace bmx

#endif
