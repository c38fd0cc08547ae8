#ifndef BOLTZMIX_LINEARIZED_HPP
#define BOLTZMIX_LINEARIZED_HPP

#include <span>
#include <vector>

#include "boltzmix/collision.hpp"

namespace bmx {

// nu_ij(v_k) = iint B_ij mu_j(v_*) dsigma dv_* and the species sums.
struct CollisionFrequencyTable {
  int n_species = 0;
  std::size_t nodes = 0;
  std::vector<double> nu;       // [i][node]
  std::vector<double> nu_pair;  // [i][j][node]

  std::span<const double> of(int i) const { return {nu.data() + i * nodes, nodes}; }
  std::span<const double> pair(int i, int j) const {
    return {nu_pair.data() + (static_cast<std::size_t>(i) * n_species + j) * nodes, nodes};
  }
  double max() const;
  double min() const;
};

CollisionFrequencyTable build_nu(const Mixture& mixture, const KernelSpec& kernel,
                                 const VelocityGrid& grid, const SphereRule& rule,
                                 const ThreadPool& pool);

// Orthonormal kernel basis of the linearized operator: N species-mass
// directions, 3 momentum directions, 1 energy direction.
class KernelBasis {
 public:
  KernelBasis() = default;
  KernelBasis(const Mixture& mixture, const VelocityGrid& grid, const ThreadPool& pool);

  int count() const { return n_species_ + 4; }
  int species_count() const { return n_species_; }
  std::span<const double> phi(int k, int i) const {
    return {data_.data() + (static_cast<std::size_t>(k) * n_species_ + i) * nodes_, nodes_};
  }
  // Gram matrix entry <phi_a, phi_b> under the grid quadrature.
  double gram(int a, int b) const { return gram_[static_cast<std::size_t>(a) * count() + b]; }
  double max_gram_defect() const;

 private:
  int n_species_ = 0;
  std::size_t nodes_ = 0;
  std::vector<double> data_;
  std::vector<double> gram_;
};

// K_i(f) from its integral definition (gain-type coupling terms minus the
// local sqrt(mu_i) f_j term).
std::vector<double> apply_K(const MixtureState& pert, const KernelSpec& kernel,
                            const SphereRule& rule, int i, const ThreadPool& pool);

// L_i(f) = -nu_i f_i + K_i(f).
std::vector<double> apply_L(const MixtureState& pert, const KernelSpec& kernel,
                            const SphereRule& rule, const CollisionFrequencyTable& nu, int i,
                            const ThreadPool& pool);

struct Projection {
  std::vector<double> coefficients;  // <f, phi_k>
  MixtureState macro;
  MixtureState micro;
};

Projection project_PL(const MixtureState& pert, const KernelBasis& basis, const ThreadPool& pool);

struct CoercivityProbe {
  double dirichlet = 0.0;   // <f, L f>
  double micro_norm = 0.0;  // ||(I - P_L) f||^2 in L^2(<v>^(gamma/2))
};

CoercivityProbe coercivity_probe(const MixtureState& pert, const KernelSpec& kernel,
                                 const SphereRule& rule, const CollisionFrequencyTable& nu,
                                 const KernelBasis& basis, const ThreadPool& pool);

// L^2_v inner product over species of two perturbation states.
double inner_product(const MixtureState& a, const MixtureState& b, const ThreadPool& pool);

}  // namespace bmx

#endif
