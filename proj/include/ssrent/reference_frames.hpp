#pragma once

#include <map>
#include <vector>

#include "ssrent/fock.hpp"

namespace ssrent {

// sum_n e^{2 pi i k n / N} |n, N-1-n> / sqrt(N)
SectoredPureState fourier_hiding_state(int n_states, int k);

enum class Task { distinguish, teleport };
const char* to_string(Task task);

// Delta -> weight
using Kernel = std::map<int, double>;

// distinguish: (N - |D|)/N^2; teleport: Haar average of sum_n p_n p_{n+D},
// (N - |D| + N delta_{D0}) / (N (N+1))
Kernel task_kernel(Task task, int n);
// (N - |D| + delta_{D0}) / (N (N+1)); does not sum to one, kept for comparison
Kernel teleport_kernel_single_delta(int n);

enum class HelperKind { constant, gaussian, rho_sep, coherent };
const char* to_string(HelperKind kind);

struct HelperProfile {
  HelperKind kind = HelperKind::constant;
  double size = 1.0;  // M, SiV V, unused, or alpha
};
void validate(const HelperProfile& helper);

// discrete Gaussian helper: amplitudes ~ exp(-m^2 / V) (so 4 Var = V), |m| <= 6 sigma
std::vector<double> gaussian_helper_amplitudes(double v);
// helper as a state: constant / gaussian pure, rho_sep, phase-averaged coherent pair
BlockDensityMatrix helper_state(const HelperProfile& helper);

// C(D) = sum over blocks of <n, T-n| rho |n+D, T-n-D>; nondegenerate frames only
Kernel frame_kernel(const BlockDensityMatrix& frame);
// max_delta < 0: full support
Kernel helper_kernel(const HelperProfile& helper, int max_delta = -1);
double gaussian_kernel_closed_form(double v, int delta);

double kernel_overlap(const Kernel& pi, const Kernel& c);
double error_probability(Task task, const HelperProfile& helper, int n);
// closed forms for constant and gaussian helpers
double table_closed_form(Task task, HelperKind kind, int n, double size);

struct GaussianRatio {
  double p_err = 0.0;
  double ratio = 0.0;  // siv(phi) / (4 V)
};
// teleporting phi with a Gaussian helper of SiV v_helper
GaussianRatio gaussian_ratio_check(const SectoredPureState& phi, double v_helper);

// smallest constant-helper size M with distinguish error <= eps
int required_helper_size(int n, double eps);

// Full simulation of the Fourier-state discrimination with a shared frame: both parties
// measure their local number, then Fourier POVMs; the guess is the sum of the outcomes.
// Success probability averaged over k.
double simulate_distinguish(int n, const BlockDensityMatrix& frame);

// truncation: smallest cutoff >= 2a^2 + 6 sqrt(2a^2) with Poisson tail < 1e-10
int coherent_cutoff(double alpha);
double poisson_weight(double mean, int k);
// sum_N p_N |theta_N><theta_N|, p_N Poisson(2 alpha^2), theta_N binomial
BlockDensityMatrix coherent_reference(double alpha, int cutoff);

struct PhaseMixtureCertificate {
  int phases = 0;
  double max_deviation = 0.0;  // vs the truncated K-phase mixture of coherent pairs
};
PhaseMixtureCertificate coherent_phase_certificate(double alpha, int cutoff, int phases = 0);

// sum_N p_N siv(theta_N) = sum_N p_N N
double coherent_vf_oracle(double alpha, int cutoff);

struct TeleportResult {
  double fidelity = 0.0;
  double condition_residual = 0.0;
  double s_alice = 0.0;  // sum rho_{n,m-1}^{n,m-1}
  double s_bob = 0.0;    // sum rho_{n-1,m}^{n-1,m}
  double s_cross = 0.0;  // sum rho_{n-1,m}^{n,m-1}
};
// phi = a|0,1> + b|1,0> shared by Alice and Charlie; Alice's share is sent to Bob
// using the frame and an ideal constant-number channel
TeleportResult mixed_teleport(const SectoredPureState& phi, const BlockDensityMatrix& frame);

struct RhoSepDistinguish {
  double vepr_branch_probability = 0.0;
  double lost_branch_probability = 0.0;
  double vepr_branch_success = 0.0;
  double lost_branch_success = 0.0;
  double success_probability = 0.0;  // from the branches
  double simulated = 0.0;            // the same protocol run on rho_sep directly
};
// distinguishing |01> +- |10> with rho_sep as the frame
RhoSepDistinguish rho_sep_distinguish();

struct QuantumHiding {
  BlockDensityMatrix hidden;      // payload (x) flag registers per party
  SectoredPureState recovered;    // payload after the global undo
  int particle_cost = 0;          // N^2 - 1
  double dephasing_residual = 0.0;
  double recovery_fidelity = 0.0; // worst over flags
};
QuantumHiding quantum_hide(cplx alpha, cplx beta, int n);

}  // namespace ssrent
