#ifndef BOLTZMIX_KERNEL_HPP
#define BOLTZMIX_KERNEL_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace bmx {

// Angular part of the collision kernel, b(cos theta). Admissible profiles
// satisfy 0 <= b(t) <= c_b * |t| on [-1, 1] (Grad cutoff with the |cos|
// envelope), which both built-in shapes do for coeff <= c_b.
enum class AngularKind { AbsCos, CosSq };

struct AngularProfile {
  AngularKind kind = AngularKind::AbsCos;
  double coeff = 1.0;

  double operator()(double t) const {
    return kind == AngularKind::AbsCos ? coeff * std::fabs(t) : coeff * t * t;
  }
};

inline const char* angular_kind_name(AngularKind k) {
  return k == AngularKind::AbsCos ? "abs_cos" : "cos_sq";
}

// Pairwise kernel B_ij(z, sigma) = c_phi_ij * |z|^gamma * b_ij(cos theta),
// hard potentials gamma in [0, 1], symmetric in (i, j).
class KernelSpec {
 public:
  KernelSpec() = default;
  KernelSpec(int n_species, double gamma, double c_phi, double c_b, AngularProfile angular)
      : n_(n_species),
        gamma_(gamma),
        c_b_(c_b),
        c_phi_(static_cast<std::size_t>(n_species) * n_species, c_phi),
        angular_(static_cast<std::size_t>(n_species) * n_species, angular) {
    validate();
  }

  int species_count() const { return n_; }
  double gamma() const { return gamma_; }
  double c_b() const { return c_b_; }

  double c_phi(int i, int j) const { return c_phi_[idx(i, j)]; }
  void set_c_phi(int i, int j, double v) {
    c_phi_[idx(i, j)] = v;
    c_phi_[idx(j, i)] = v;
    validate();
  }

  const AngularProfile& angular(int i, int j) const { return angular_[idx(i, j)]; }
  void set_angular(int i, int j, AngularProfile p) {
    angular_[idx(i, j)] = p;
    angular_[idx(j, i)] = p;
    validate();
  }

  // |z|^gamma with the hard-potential conventions: gamma == 0 gives 1
  // everywhere (including z = 0), gamma > 0 vanishes at z = 0.
  double relative_speed_factor(double r) const {
    if (gamma_ == 0.0) return 1.0;
    if (r <= 0.0) return 0.0;
    if (gamma_ == 1.0) return r;
    return std::pow(r, gamma_);
  }

  double evaluate(int i, int j, double r, double cos_theta) const {
    return c_phi(i, j) * relative_speed_factor(r) * angular(i, j)(cos_theta);
  }

 private:
  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(i) * n_ + j; }

  void validate() const {
    if (n_ <= 0) throw std::invalid_argument("kernel needs at least one species");
    if (!(gamma_ >= 0.0 && gamma_ <= 1.0))
      throw std::invalid_argument("kernel gamma must lie in [0,1]");
    if (!(c_b_ > 0.0)) throw std::invalid_argument("kernel c_b must be positive");
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        if (c_phi_[idx(i, j)] < 0.0)
          throw std::invalid_argument("kernel c_phi must be nonnegative");
        if (c_phi_[idx(i, j)] != c_phi_[idx(j, i)])
          throw std::invalid_argument("kernel c_phi must be symmetric");
        if (angular_[idx(i, j)].coeff < 0.0 || angular_[idx(i, j)].coeff > c_b_)
          throw std::invalid_argument("angular profile violates the c_b cap");
      }
  }

  int n_ = 0;
  double gamma_ = 0.0;
  double c_b_ = 1.0;
  std::vector<double> c_phi_;
  std::vector<AngularProfile> angular_;
};

}  // namespace bmx

#endif
