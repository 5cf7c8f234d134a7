#pragma once

#include <span>
#include <vector>

#include "ssrent/fock.hpp"
#include "ssrent/monotones.hpp"
#include "ssrent/qubit_state.hpp"
#include "ssrent/random.hpp"

namespace ssrent {

// all four weights 1/4 and gamma = 1/4
QubitSSRState rho_sep();
// the four product states (|0> + w|1>)(|0> + w|1>)/2, w in {1, i, -1, -i}, each with weight 1/4
std::vector<std::pair<double, GeneralPureState>> rho_sep_product_terms();

struct FormationPoint {
  double p = 0.0;
  double cbar = 0.0;
  double ef_ssr = 0.0;
  double vf_ssr = 0.0;
  double ef = 0.0;  // without the superselection rule
  bool separable_candidate = true;  // cbar <= (1 - p)/p
};
FormationPoint formation_point(const QubitSSRState& rho);

struct PureTerm {
  double probability;
  SectoredPureState state;
};
// weighted EoE = p E(cbar), weighted SiV = p cbar^2
std::vector<PureTerm> optimal_decomposition(const QubitSSRState& rho);
MonotonePair decomposition_average(std::span<const PureTerm> terms);
BlockDensityMatrix decomposition_density(std::span<const PureTerm> terms);

// rho = (+)_n r_n |chi_n><chi_n| (one pure state per total particle number)
class DirectSumOfPure {
 public:
  struct Component {
    double weight;
    int total;
    CVector vector;  // normalized, BlockBasis(alice, bob, total) order
  };

  DirectSumOfPure(LocalSpace alice, LocalSpace bob, std::vector<Component> components);
  // throws NotDirectSumOfPure when some block has rank > 1
  static DirectSumOfPure from_density(const BlockDensityMatrix& rho, double tol = 1e-10);

  const LocalSpace& alice_space() const { return alice_; }
  const LocalSpace& bob_space() const { return bob_; }
  const std::vector<Component>& components() const { return components_; }
  double variance_of_formation() const;
  BlockDensityMatrix density() const;

 private:
  LocalSpace alice_, bob_;
  std::vector<Component> components_;
};

// 4 Var(N_A) of a vector in the block basis of one total
double block_vector_siv(const LocalSpace& alice, const LocalSpace& bob, int total, const CVector& v);

struct AdditivityTrial {
  double lhs = 0.0;          // min over canonical and sampled decompositions of rho (x) sigma
  double rhs = 0.0;          // V_F(rho) + V_F(sigma)
  double min_sampled = 0.0;  // best random decomposition
  int samples = 0;
};
AdditivityTrial vf_additivity_trial(const BlockDensityMatrix& rho, const BlockDensityMatrix& sigma, Rng& rng,
                                    int samples = 200, int max_terms = 8);

// weighted SiV of a random decomposition of sum_i r_i |chi_i><chi_i| built from
// isometries acting on the components of each total block
double sampled_decomposition_siv(const LocalSpace& alice, const LocalSpace& bob,
                                 std::span<const DirectSumOfPure::Component> components, Rng& rng, int max_terms);

// weighted (EoE, SiV) of a random decomposition of the one-particle block of a qubit state
MonotonePair sampled_qubit_decomposition(const QubitSSRState& rho, Rng& rng, int max_terms = 8);

enum class EVFamily { pure_qubit, pure_qutrit, mixed_qubit };
struct EVPoint {
  double eoe = 0.0;  // E_F^SSR for mixed states
  double siv = 0.0;  // V_F^SSR for mixed states
  double p = 1.0;
  double cbar = 0.0;
  bool separable_candidate = false;
};
std::vector<EVPoint> ev_region_sample(EVFamily family, int samples, Rng& rng);

// Projection of a decomposition without the superselection rule onto total-number sectors,
// applied to every term of the copies-fold product.
struct EcProjectionTrial {
  double eoe_before = 0.0;  // weighted EoE of the product decomposition
  double eoe_after = 0.0;   // weighted EoE after measuring the total particle number
  double bound = 0.0;       // eoe_before + log2(N + 1)
  int max_total = 0;
};
EcProjectionTrial ec_projection_trial(std::span<const std::pair<double, GeneralPureState>> decomposition,
                                      int copies);
// random decomposition sum_j |zeta_j><zeta_j| of rho with zeta_j = sum_i U_ji sqrt(l_i) e_i
std::vector<std::pair<double, GeneralPureState>> random_decomposition(const BlockDensityMatrix& rho, int terms,
                                                                      Rng& rng);

}  // namespace ssrent
