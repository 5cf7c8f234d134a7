#pragma once

#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssrent/fock.hpp"

namespace ssrent {

// lam is majorized by mu (lam ≺ mu): sorted partial sums of mu dominate those of lam
bool is_majorized_by(std::span<const double> lam, std::span<const double> mu, double tol = 1e-10);

struct SSRSchmidtVector {
  std::map<int, std::vector<double>> per_sector;  // descending, unnormalized
  double total() const;
};
SSRSchmidtVector ssr_schmidt_vector(const SectoredPureState& state);

struct ConversionTarget {
  double probability;
  SectoredPureState state;
};

class ConversionTask {
 public:
  ConversionTask(SectoredPureState source, std::vector<ConversionTarget> targets);
  static ConversionTask deterministic(SectoredPureState source, SectoredPureState target);

  const SectoredPureState& source() const { return source_; }
  const std::vector<ConversionTarget>& targets() const { return targets_; }

 private:
  SectoredPureState source_;
  std::vector<ConversionTarget> targets_;
};

struct ConversionVerdict {
  bool convertible = true;
  std::optional<int> failing_sector;
  double gap = 0.0;  // size of the violated sector-total or partial-sum condition
  std::string reason;
};

// sector-wise majorization with equal sector weights; assumes no particle-number shifts
ConversionVerdict ssr_convertible(const ConversionTask& task);

// qubit levels |0>,|1> on each side -> two-mode states |01>,|10> (constant local number)
SectoredPureState hat_embedding(const SectoredPureState& qubit_state);

// lam = sum_j p_j P_j mu, P_j permutations: (P_j mu)_k = mu[perm_j[k]]
struct WeightedPermutation {
  double weight;
  std::vector<int> perm;
};
std::vector<WeightedPermutation> permutation_mixture(std::span<const double> lam, std::span<const double> mu,
                                                     double tol = 1e-12);

// Deterministic conversion protocol for one sector: Alice applies alice[j], Bob the unitary bob[j].
struct SectorProtocol {
  int sector = 0;
  std::vector<double> weights;
  std::vector<CMatrix> alice;
  std::vector<CMatrix> bob;
};
// Alice first measures her particle number, then runs the sector protocol.
std::vector<SectorProtocol> conversion_protocol(const SectoredPureState& source, const SectoredPureState& target);
// per sector: sum_j |<target_n|out_j>|^2 / w_n^2
std::map<int, double> protocol_fidelities(const SectoredPureState& source, const SectoredPureState& target,
                                          const std::vector<SectorProtocol>& protocol);

// weights of Alice's total particle number over `copies` copies of phi
std::map<int, double> product_state_distribution(const SectoredPureState& phi, int copies);

struct GaussianConvergence {
  bool gap_detected = false;
  int gap_period = 1;
  double kl_divergence = std::numeric_limits<double>::quiet_NaN();  // bits
  double variance_ratio = std::numeric_limits<double>::quiet_NaN();
};
GaussianConvergence gaussian_convergence(const SectoredPureState& phi, int copies);

bool typical_subspace_bounds(int copies, double p0, double epsilon);

enum class SplitUnit {
  vepr,         // |0>|1> + |1>|0>
  wide_singlet  // |0>|2> + |2>|0>, for states on particle numbers {m, m+2}
};
struct ResourceSplit {
  double eepr_rate = 0.0;
  double unit_rate = 0.0;
};
ResourceSplit resource_split(const SectoredPureState& phi, SplitUnit unit = SplitUnit::vepr);

struct ProjectionBoundTrial {
  double lhs = 0.0;
  double rhs = 0.0;
  int max_total = 0;
};
// averaged entanglement after measuring the total particle number vs E(psi) + log(N+1)
ProjectionBoundTrial number_projection_bound_trial(const GeneralPureState& psi);

}  // namespace ssrent
