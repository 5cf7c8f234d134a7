#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ssrent/fock.hpp"
#include "ssrent/qubit_state.hpp"

namespace ssrent {

struct StandardForm {
  double v = 0.0;
  double w = 0.0;
  double success_probability = 1.0;
  bool entangled() const { return v > w; }
};

// normalized diag(w, 1, 1, w) with coherence v on |01>,|10>
QubitSSRState standard_state(double v, double w);

struct FilterPair {
  Eigen::Matrix2d alice = Eigen::Matrix2d::Identity();  // diagonal, largest entry 1
  Eigen::Matrix2d bob = Eigen::Matrix2d::Identity();
  bool exact = true;  // false when the standard form is only reached as a limit
};
FilterPair standard_form_filters(const QubitSSRState& rho);

// Throws DegenerateBlock when w01 w10 = 0. When exactly one of w00, w11 vanishes the
// form is a limit of filters and success_probability is reported as 0.
StandardForm standard_form(const QubitSSRState& rho);

enum class OneCopyMove {
  increase_w,  // mix in t(|00><00| + |11><11|): (v, w + t)
  shrink_both  // mix in t(|01><01| + |10><10|): (v, w)/(1 + t)
};
StandardForm one_copy_move(const StandardForm& sf, OneCopyMove mode, double amount);

enum class RecurrenceVariant { two_copy_a, two_copy_b, three_copy_separable, three_copy_entangled };

struct RecurrenceMap {
  RecurrenceVariant variant;
  int arity;
  // rows: output |0>, |1>; columns: copies' bit strings, first copy most significant
  Eigen::MatrixXd alice_op;
  Eigen::MatrixXd bob_op;
  std::function<StandardForm(double, double)> closed_form;
};
RecurrenceMap recurrence_map(RecurrenceVariant variant);
const char* to_string(RecurrenceVariant variant);
RecurrenceVariant recurrence_variant_from_string(const std::string& name);

StandardForm two_copy_map(const StandardForm& sf, RecurrenceVariant variant);
StandardForm three_copy_map(const StandardForm& sf, RecurrenceVariant variant);
// closed form, re-standardized (v >= 0)
StandardForm apply_closed_form(const StandardForm& sf, RecurrenceVariant variant);

// Explicit simulation: copies of the standard state, bilateral POVM (completed with a
// failure operator), re-standardization. success_probability is the POVM success rate.
StandardForm simulate_recurrence(const StandardForm& sf, RecurrenceVariant variant);

struct IterationResult {
  StandardForm final_form;
  int steps = 0;
  bool converged = false;
};
// stops when successive (v, w) move less than tol or after max_steps
IterationResult iterate_recurrence(const StandardForm& sf, RecurrenceVariant variant, double tol = 1e-9,
                                   int max_steps = 1000);

// two copies projected locally onto one-particle subspaces; returned in the
// |0^> = |01>, |1^> = |10> basis, which has constant local particle number
QubitSSRState distill_entanglement_projection(const StandardForm& sf);

struct ExtractionBranch {
  int alice_outcome;
  int bob_outcome;
  double probability;
  bool matched;
  double eoe;  // weighted EoE of the block decomposition of the branch state
  double siv;  // SiV of the branch state when it is pure, else weighted over blocks
};

struct ExtractionResult {
  double success_probability = 0.0;  // exact
  double matched_fidelity = 0.0;     // overlap of matched branches with the V-EPR-like target
  double matched_eoe = 0.0;
  double matched_siv = 0.0;
  double residual_entanglement = 0.0;  // EoE left in unmatched branches
  double monte_carlo_yield = 0.0;      // fraction of successful rounds
  int rounds = 0;
  std::vector<ExtractionBranch> branches;
};
// rho_sep (x) E-EPR -> V-EPR-like state with probability 1/2
ExtractionResult extract_vepr(int rounds, std::uint64_t seed);

}  // namespace ssrent
