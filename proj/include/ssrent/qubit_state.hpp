#pragma once

#include <Eigen/Dense>

#include "ssrent/fock.hpp"

namespace ssrent {

// Two-qubit state allowed by the superselection rule:
//   w00|00><00| + w01|01><01| + w10|10><10| + w11|11><11| + gamma|01><10| + h.c.
// gamma is made real and non-negative by a local phase on construction.
class QubitSSRState {
 public:
  QubitSSRState(double w00, double w01, double w10, double w11, cplx gamma);

  // w01 = w10 = p/2, gamma = p cbar / 2, w00 = w11 = (1-p)/2
  static QubitSSRState from_p_cbar(double p, double cbar);
  static QubitSSRState from_density(const BlockDensityMatrix& rho, double tol = 1e-12);

  double w00() const { return w00_; }
  double w01() const { return w01_; }
  double w10() const { return w10_; }
  double w11() const { return w11_; }
  double gamma() const { return gamma_; }
  // phase removed by the canonicalizing local unitary
  double gamma_phase() const { return phase_; }

  Eigen::Matrix4cd matrix() const;  // basis |00>,|01>,|10>,|11>
  BlockDensityMatrix density() const;

 private:
  double w00_, w01_, w10_, w11_, gamma_, phase_;
};

LocalSpace qubit_space();

}  // namespace ssrent
