#ifndef BOLTZMIX_VERIFY_HPP
#define BOLTZMIX_VERIFY_HPP

#include <random>
#include <string>

#include "boltzmix/config.hpp"

namespace bmx {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string note;
};

struct Report {
  std::string suite;
  std::vector<CheckResult> checks;

  bool all_pass() const;
  void add(std::string name, double measured, double threshold, bool pass, std::string note = "");
  // pass = measured <= threshold
  void add_max(std::string name, double measured, double threshold, std::string note = "");
  std::string to_text() const;
};

using Rng = std::mt19937_64;

// ---- reusable check primitives -------------------------------------------

// Max relative |lhs-rhs| of the exponent cancellation and max rhs over random
// draws in [-box, box]^3 with masses in [m_lo, m_hi], |m_i - m_j| >= m_gap.
struct CancellationSweep {
  double max_rel_diff = 0.0;
  double max_rhs = -1e300;
};
CancellationSweep sweep_cancellation(int draws, double box, double m_lo, double m_hi, double m_gap,
                                     Rng& rng);

// Max relative quadrature error of the sphere exponential integral over
// random (k, x) with k|x| <= kx_max.
double sweep_sphere_exp(const SphereRule& rule, int draws, double kx_max, Rng& rng);

// Carleman-vs-direct gain comparison with Gaussian test functions. Calibrates
// the mass constant at v = 0 and reports the worst relative mismatch over
// `points` random evaluation points with |v| <= v_box.
struct CarlemanComparison {
  double constant = 0.0;
  double worst_rel = 0.0;
};
CarlemanComparison compare_carleman_direct(double gamma, double mi, double mj, int points,
                                           double v_box, int outer_points, int inner_polar,
                                           int inner_azimuth, Rng& rng, const ThreadPool& pool);

// Smooth positive pseudo-random physical state with the equilibrium's
// conserved moments (multiplicative bumps, clamp, moment projection).
MixtureState random_positive_state(const Mixture& mix, const VelocityGrid& grid, Rng& rng,
                                   const ThreadPool& pool, double amplitude = 0.4,
                                   bool match_moments = true);

// Smooth pseudo-random perturbation state (signed, velocity-localized).
MixtureState random_perturbation_state(const Mixture& mix, const VelocityGrid& grid, Rng& rng,
                                       double amplitude = 0.5);

// Same analytic bump recipe sampled on any grid (for refinement studies).
MixtureState seeded_smooth_state(const Mixture& mix, const VelocityGrid& grid, std::uint64_t seed,
                                 double amplitude, const ThreadPool& pool);

// eps_quad yardstick: |D(mu)| on the configured grid/kernel.
double measure_eps_quad(const Mixture& mix, const KernelSpec& kernel, const VelocityGrid& grid,
                        const SphereRule& rule, const ThreadPool& pool);

// ---- suites ---------------------------------------------------------------

Report verify_identities(const RunConfig& cfg);
Report verify_conservation(const RunConfig& cfg);
Report verify_spectral(const RunConfig& cfg);
Report verify_entropy(const RunConfig& cfg);
Report verify_carleman(const RunConfig& cfg);

// Dispatch by name; throws on unknown suite.
Report run_suite(const std::string& suite, const RunConfig& cfg);

}  // namespace bmx

#endif
