#ifndef BOLTZMIX_SPHERE_RULE_HPP
#define BOLTZMIX_SPHERE_RULE_HPP

#include <vector>

#include "boltzmix/vec3.hpp"

namespace bmx {

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Product quadrature on S^2: two Gauss-Legendre panels in t = cos(theta)
// over [-1,0] and [0,1], uniform trapezoid in azimuth. The panel split puts
// the |cos theta| kink of the angular profiles on a panel boundary, so those
// profiles integrate exactly. Weights sum to 4*pi.
struct SphereRule {
  int n_polar = 0;
  int n_azimuth = 0;
  // Per node: polar coordinate t, in-plane components a = sqrt(1-t^2)cos(phi),
  // b = sqrt(1-t^2)sin(phi), and the weight. A direction in the frame
  // (axis, e1, e2) is t*axis + a*e1 + b*e2.
  std::vector<double> t, a, b, w;

  std::size_t size() const { return t.size(); }
  Vec3 node(std::size_t s, const Vec3& axis, const Vec3& e1, const Vec3& e2) const {
    return t[s] * axis + a[s] * e1 + b[s] * e2;
  }
};

// n_polar: total polar nodes (even, >= 4); n_azimuth >= 8.
SphereRule make_sphere_rule(int n_polar, int n_azimuth);

// Quadrature of the surface integral of exp(-k sigma . x); the closed form
// is 4*pi*sinh(k|x|)/(k|x|).
double sphere_average_exp(const SphereRule& rule, double k, const Vec3& x);

// Closed form, with the series branch of sinh(z)/z below z = 1e-8.
double sphere_average_exp_exact(double k, double x_norm);

}  // namespace bmx

#endif
