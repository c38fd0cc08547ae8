#ifndef BOLTZMIX_COLLISION_GEOMETRY_HPP
#define BOLTZMIX_COLLISION_GEOMETRY_HPP

#include <stdexcept>
#include <utility>

#include "boltzmix/species.hpp"
#include "boltzmix/vec3.hpp"

namespace bmx {

struct PostCollision {
  Vec3 v_prime;
  Vec3 v_star_prime;
};

// Scattering-vector parameterization: both outgoing velocities lie on the
// line through the center of mass, displaced along sigma. Conserves
// m_i v + m_j v_* and the kinetic energy for any unit sigma.
PostCollision post_collision_sigma(double mi, double mj, const Vec3& v, const Vec3& v_star,
                                   const Vec3& sigma);

// Deflection-direction parameterization: velocities change only along omega.
// omega perpendicular to v_* - v leaves the pair untouched.
PostCollision post_collision_omega(double mi, double mj, const Vec3& v, const Vec3& v_star,
                                   const Vec3& omega);

// sigma corresponding to a given omega: sigma = u_hat - 2 (u_hat . omega) omega,
// with u_hat the unit relative velocity.
Vec3 sigma_from_omega(const Vec3& v, const Vec3& v_star, const Vec3& omega);

// Locus of pre-collision velocities v' reaching (v, v'_*) for unequal masses:
// a sphere of radius R about O. Equal masses degenerate to a hyperplane and
// only set the flag.
struct CarlemanSphere {
  Vec3 center;
  double radius = 0.0;
  bool degenerate = false;
};

CarlemanSphere carleman_sphere(const Vec3& v, const Vec3& v_star_prime, double mi, double mj);

// The five exponential factors produced by the Carleman change of variables,
// combined (lhs) against the single negative semi-definite quadratic form
// they collapse to (rhs). Throws for (near-)equal masses.
struct ExponentCancellation {
  double lhs = 0.0;
  double rhs = 0.0;
};

ExponentCancellation exponent_cancellation(const Vec3& v, const Vec3& v_star_prime, double mi,
                                           double mj);

}  // namespace bmx

#endif
