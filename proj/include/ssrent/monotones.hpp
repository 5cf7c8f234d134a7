#pragma once

#include <span>

#include "ssrent/fock.hpp"
#include "ssrent/qubit_state.hpp"

namespace ssrent {

// entropies are in bits; 0 log 0 = 0; weights in [-1e-10, 0] count as 0
double shannon_entropy(std::span<const double> weights);
double binary_entropy(double p);
// von Neumann entropy of the reduced state of an (unnormalized) coefficient matrix
double entanglement_entropy(const CMatrix& coefficients);

struct MonotonePair {
  double eoe = 0.0;
  double siv = 0.0;
};

double eoe(const SectoredPureState& state);
// 4 Var(N_party)
double siv(const SectoredPureState& state, Party party = Party::alice);
MonotonePair monotones(const SectoredPureState& state);

double concurrence(const QubitSSRState& rho);
// E(C) = H(1/2 + sqrt(1 - C^2)/2)
double formation_function(double c);

struct SsrConcurrence {
  double p = 0.0;     // weight of the one-particle block
  double cbar = 0.0;  // concurrence of the normalized one-particle block
};
SsrConcurrence ssr_concurrence(const QubitSSRState& rho);

struct MonotonicityTrial {
  MonotonePair before;
  MonotonePair after_avg;
  double total_probability = 0.0;
};

// averages the monotones over the outcomes of `kraus` applied by `party`
MonotonicityTrial monotonicity_trial(const SectoredPureState& state, const LocalKrausSet& kraus,
                                     Party party = Party::alice);

}  // namespace ssrent
