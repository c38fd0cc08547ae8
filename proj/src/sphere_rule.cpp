#include "boltzmix/sphere_rule.hpp"

#include <cmath>
#include <stdexcept>

namespace bmx {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    weights[i] = weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

SphereRule make_sphere_rule(int n_polar, int n_azimuth) {
  if (n_polar < 4 || n_polar % 2 != 0)
    throw std::invalid_argument("sphere rule: n_polar must be an even integer >= 4");
  if (n_azimuth < 8) throw std::invalid_argument("sphere rule: n_azimuth must be >= 8");
  const int half = n_polar / 2;
  std::vector<double> gx, gw;
  gauss_legendre(half, gx, gw);

  SphereRule rule;
  rule.n_polar = n_polar;
  rule.n_azimuth = n_azimuth;
  const std::size_t total = static_cast<std::size_t>(n_polar) * n_azimuth;
  rule.t.reserve(total);
  rule.a.reserve(total);
  rule.b.reserve(total);
  rule.w.reserve(total);

  const double wphi = 2.0 * M_PI / n_azimuth;
  for (int sgn = 0; sgn < 2; ++sgn) {
    for (int p = 0; p < half; ++p) {
      // map [-1,1] to [0,1], mirror for the lower panel
      const double tp = 0.5 * (gx[p] + 1.0);
      const double t = sgn == 0 ? -tp : tp;
      const double wt = 0.5 * gw[p];
      const double st = std::sqrt(std::max(0.0, 1.0 - t * t));
      for (int q = 0; q < n_azimuth; ++q) {
        const double phi = wphi * q;
        rule.t.push_back(t);
        rule.a.push_back(st * std::cos(phi));
        rule.b.push_back(st * std::sin(phi));
        rule.w.push_back(wt * wphi);
      }
    }
  }
  return rule;
}

double sphere_average_exp(const SphereRule& rule, double k, const Vec3& x) {
  if (!(k > 0.0)) throw std::invalid_argument("sphere_average_exp: k must be positive");
  const double xn = norm(x);
  if (xn == 0.0) return 4.0 * M_PI;
  const Vec3 axis = x / xn;
  Vec3 e1, e2;
  orthonormal_frame(axis, e1, e2);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const Vec3 sigma = rule.node(i, axis, e1, e2);
    s += rule.w[i] * std::exp(-k * dot(sigma, x));
  }
  return s;
}

double sphere_average_exp_exact(double k, double x_norm) {
  const double z = k * x_norm;
  if (z < 1e-8) {
    // sinh(z)/z = 1 + z^2/6 + z^4/120 + ...
    return 4.0 * M_PI * (1.0 + z * z / 6.0);
  }
  return 4.0 * M_PI * std::sinh(z) / z;
}

}  // namespace bmx
