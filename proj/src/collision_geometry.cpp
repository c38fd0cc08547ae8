#include "boltzmix/collision_geometry.hpp"

#include <cmath>

namespace bmx {

namespace {

void require_unit(const Vec3& u, const char* what) {
  if (std::fabs(norm(u) - 1.0) > 1e-12) {
    throw std::invalid_argument(std::string(what) + " must be a unit vector");
  }
}

}  // namespace

PostCollision post_collision_sigma(double mi, double mj, const Vec3& v, const Vec3& v_star,
                                   const Vec3& sigma) {
  require_unit(sigma, "sigma");
  const double msum = mi + mj;
  const Vec3 p = (mi * v + mj * v_star) / msum;
  const double r = norm(v - v_star);
  return {p + (mj * r / msum) * sigma, p - (mi * r / msum) * sigma};
}

PostCollision post_collision_omega(double mi, double mj, const Vec3& v, const Vec3& v_star,
                                   const Vec3& omega) {
  require_unit(omega, "omega");
  const double msum = mi + mj;
  const double a = dot(v_star - v, omega);
  return {v + (2.0 * mj / msum) * a * omega, v_star - (2.0 * mi / msum) * a * omega};
}

Vec3 sigma_from_omega(const Vec3& v, const Vec3& v_star, const Vec3& omega) {
  const Vec3 u = v - v_star;
  const double r = norm(u);
  if (r == 0.0) throw std::invalid_argument("sigma_from_omega needs v != v_star");
  const Vec3 uh = u / r;
  return uh - 2.0 * dot(uh, omega) * omega;
}

CarlemanSphere carleman_sphere(const Vec3& v, const Vec3& v_star_prime, double mi, double mj) {
  CarlemanSphere s;
  if (masses_equal(mi, mj)) {
    s.degenerate = true;
    return s;
  }
  const double dm = mi - mj;
  s.radius = mj * norm(v - v_star_prime) / std::fabs(dm);
  s.center = (mi * v - mj * v_star_prime) / dm;
  return s;
}

ExponentCancellation exponent_cancellation(const Vec3& v, const Vec3& v_star_prime, double mi,
                                           double mj) {
  if (masses_equal(mi, mj)) {
    throw std::invalid_argument(
        "exponent cancellation is defined for distinct masses (hyperplane case otherwise)");
  }
  const CarlemanSphere s = carleman_sphere(v, v_star_prime, mi, mj);
  const double R = s.radius;
  const double O = norm(s.center);
  ExponentCancellation out;
  out.lhs = -0.25 * mj * norm2(v_star_prime) + 0.25 * mi * norm2(v) - 0.25 * mi * R * R -
            0.25 * mi * O * O + 0.5 * mi * R * O;
  const double dm2 = (mi - mj) * (mi - mj);
  const double d = norm(mi * v - mj * v_star_prime) - mi * norm(v - v_star_prime);
  out.rhs = -0.25 * mj / dm2 * d * d;
  return out;
}

}  // namespace bmx
