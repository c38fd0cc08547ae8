#ifndef BOLTZMIX_DIAGNOSTICS_HPP
#define BOLTZMIX_DIAGNOSTICS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "boltzmix/collision.hpp"
#include "boltzmix/linearized.hpp"

namespace bmx {

struct DiagnosticsRecord {
  double time = 0.0;
  std::vector<double> mass;  // per species
  Vec3 momentum;
  double energy = 0.0;
  double entropy = 0.0;
  double rel_entropy = 0.0;
  double entropy_production = 0.0;
  std::vector<double> winf;         // ||w f_i||_inf
  std::vector<double> gauss;        // max over cells of int exp(-|v|^2/4)|h_i| dv
  std::vector<double> rfreq_ratio;  // min over nodes of R_i / nu_i
};

struct ConservedMoments {
  std::vector<double> mass;
  Vec3 momentum;
  double energy = 0.0;  // sum_i (1/2) m_i int |v|^2 F_i
};

// Cell-averaged conserved moments (the spatial torus has unit volume).
ConservedMoments conserved_moments(const MixtureState& state, const ThreadPool& pool);

double entropy(const MixtureState& state, const ThreadPool& pool);
double relative_entropy(const MixtureState& state, const ThreadPool& pool);

// Quadruple-form entropy production. The post-collision distributions are
// trilinear interpolants of the raw F values, so the residual |D(mu)| is a
// direct measurement of the configuration's interpolation + quadrature error
// scale; that residual is the toolkit's eps_quad yardstick. Each quadrature
// term carries the pointwise sign (b - a)(log a - log b) <= 0, so D <= 0 by
// construction.
double entropy_production(const MixtureState& state, const KernelSpec& kernel,
                          const SphereRule& rule, const ThreadPool& pool);

struct EntropySplit {
  double lhs = 0.0;  // quadratic core + linear tail of |F - mu|
  double rhs = 0.0;  // relative entropy
};

EntropySplit entropy_splitting_check(const MixtureState& state, const ThreadPool& pool);

std::vector<double> weighted_sup_norm(const MixtureState& pert, const WeightSpec& weight);

std::vector<double> gauss_monitor(const MixtureState& pert, const WeightSpec& weight,
                                  const ThreadPool& pool);

std::vector<double> rfreq_ratio(const MixtureState& state, const KernelSpec& kernel,
                                const SphereRule& rule, const CollisionFrequencyTable& nu,
                                const ThreadPool& pool);

struct DecayFit {
  double rate = 0.0;
  double r_squared = 0.0;
  int samples = 0;
};

// Least-squares slope of log(field) against time inside [t_begin, t_end].
// Throws if fewer than 10 positive samples fall in the window.
DecayFit fit_decay_rate(const std::vector<DiagnosticsRecord>& records,
                        const std::string& field_name, int species, double t_begin, double t_end);

double record_field(const DiagnosticsRecord& rec, const std::string& field_name, int species);

std::string csv_header(int n_species);
std::string csv_row(const DiagnosticsRecord& rec);
void write_csv(std::ostream& os, int n_species, const std::vector<DiagnosticsRecord>& records);

// Fraction of the continuum Maxwellian mass lost to the velocity truncation,
// reported so the grid choice is never silent.
double maxwellian_mass_defect(const Mixture& mixture, const VelocityGrid& grid);

}  // namespace bmx

#endif
