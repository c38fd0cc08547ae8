/* boltzmix C API: deterministic discrete-velocity simulation and verification
 * of the multi-species Boltzmann equation with unequal particle masses.
 *
 * All functions return BMX_OK (0) on success or a negative status code; the
 * last error message for the calling thread is available through
 * bmx_last_error(). Handles are opaque and must be released with the
 * matching destroy function.
 */
#ifndef BOLTZMIX_H
#define BOLTZMIX_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bmx_status {
  BMX_OK = 0,
  BMX_ERR_INVALID_ARGUMENT = -1,
  BMX_ERR_CONFIG = -2,
  BMX_ERR_IO = -3,
  BMX_ERR_UNSUPPORTED = -4,
  BMX_ERR_CHECK_FAILED = -5,
  BMX_ERR_INTERNAL = -6
} bmx_status;

const char* bmx_version(void);

/* Message describing the most recent failure on this thread. */
const char* bmx_last_error(void);

/* ---- configuration ----------------------------------------------------- */

typedef struct bmx_config bmx_config;

bmx_status bmx_config_create(bmx_config** out);
bmx_status bmx_config_load_file(const char* path, bmx_config** out);
bmx_status bmx_config_load_string(const char* text, bmx_config** out);
/* Set one dotted key, e.g. "kernel.gamma" = "1.0". Unknown keys fail. */
bmx_status bmx_config_set(bmx_config* cfg, const char* key, const char* value);
/* Serialized resolved configuration; copy into buf (buf_len includes the
 * terminating NUL). Returns the required length through needed. */
bmx_status bmx_config_serialize(const bmx_config* cfg, char* buf, size_t buf_len, size_t* needed);
void bmx_config_destroy(bmx_config* cfg);

/* ---- stateless kinematics ------------------------------------------------ */

bmx_status bmx_maxwellian(double mass, double density, const double v[3], double* out);
bmx_status bmx_velocity_weight(double q, const double v[3], double* out);
bmx_status bmx_post_collision_sigma(double mi, double mj, const double v[3],
                                    const double v_star[3], const double sigma[3],
                                    double v_prime[3], double v_star_prime[3]);
bmx_status bmx_post_collision_omega(double mi, double mj, const double v[3],
                                    const double v_star[3], const double omega[3],
                                    double v_prime[3], double v_star_prime[3]);
/* degenerate is set to 1 and center/radius zeroed when the masses are equal
 * within tolerance (hyperplane case). */
bmx_status bmx_carleman_sphere(double mi, double mj, const double v[3],
                               const double v_star_prime[3], double center[3], double* radius,
                               int* degenerate);
bmx_status bmx_exponent_cancellation(double mi, double mj, const double v[3],
                                     const double v_star_prime[3], double* lhs, double* rhs);
/* Quadrature of the sphere exponential integral with an (n_polar, n_azimuth)
 * product rule, plus its closed form. */
bmx_status bmx_sphere_average_exp(int n_polar, int n_azimuth, double k, const double x[3],
                                  double* quadrature, double* closed_form);

/* ---- system and states --------------------------------------------------- */

typedef struct bmx_system bmx_system;  /* species + kernel + grid + rule + weight */
typedef struct bmx_state bmx_state;    /* distribution values on the grid */

bmx_status bmx_system_create(const bmx_config* cfg, bmx_system** out);
void bmx_system_destroy(bmx_system* sys);

bmx_status bmx_system_species_count(const bmx_system* sys, int* out);
bmx_status bmx_system_node_count(const bmx_system* sys, size_t* out);
/* nu_i(v_k) for one species, buffer of node_count doubles. */
bmx_status bmx_system_collision_frequency(const bmx_system* sys, int species, double* out);
/* Fraction of Maxwellian mass lost to velocity truncation (worst species). */
bmx_status bmx_system_mass_defect(const bmx_system* sys, double* out);

/* Scenario named by the config (equilibrium, two_species_relax,
 * large_amplitude, bi_maxwellian, standing_wave). */
bmx_status bmx_state_create(const bmx_system* sys, const bmx_config* cfg, bmx_state** out);
bmx_status bmx_state_create_equilibrium(const bmx_system* sys, bmx_state** out);
void bmx_state_destroy(bmx_state* st);

bmx_status bmx_state_cells(const bmx_state* st, int* out);
/* Copy the F_i values of one cell into a node_count buffer, or write them. */
bmx_status bmx_state_get(const bmx_state* st, int cell, int species, double* out);
bmx_status bmx_state_set(bmx_state* st, int cell, int species, const double* values);
bmx_status bmx_state_min_value(const bmx_state* st, double* out);

/* One positivity-preserving step (dt <= 0 uses the configured/auto step). */
bmx_status bmx_step(const bmx_system* sys, bmx_state* st, double dt);

/* Collision operator tallies for one species of one cell. Either output may
 * be NULL. */
bmx_status bmx_collision_tally(const bmx_system* sys, const bmx_state* st, int cell, int species,
                               double* gain, double* loss);

/* time, mass_1..N, px, py, pz, energy, entropy, rel_entropy,
 * entropy_production, winf_1..N, gauss_1..N, rfreq_1..N; `len` is the number
 * of doubles the buffer holds; needed reports 9 + 4N. */
bmx_status bmx_diagnostics(const bmx_system* sys, const bmx_state* st, double time, double* buf,
                           size_t len, size_t* needed);

/* ---- batch drivers -------------------------------------------------------- */

/* Run the configured scenario; writes diagnostics.csv, resolved.cfg and
 * optional plots under out_dir. */
bmx_status bmx_simulate(const bmx_config* cfg, const char* out_dir);

/* Run one verification suite (identities, conservation, spectral, entropy,
 * carleman); writes a plain-text report. Returns BMX_ERR_CHECK_FAILED when
 * any check fails. */
bmx_status bmx_verify(const bmx_config* cfg, const char* suite, const char* report_path);

/* One run per comma-separated value of the dotted config key; aggregated
 * summary CSV (final relative entropy, fitted decay rate, max drift). */
bmx_status bmx_sweep(const bmx_config* cfg, const char* key, const char* values,
                     const char* out_dir);

#ifdef __cplusplus
}
#endif

#endif /* BOLTZMIX_H */
