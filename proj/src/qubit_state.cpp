#include "ssrent/qubit_state.hpp"

#include <cmath>
#include <string>

namespace ssrent {

LocalSpace qubit_space() { return LocalSpace::levels(1); }

QubitSSRState::QubitSSRState(double w00, double w01, double w10, double w11, cplx gamma)
    : w00_(w00), w01_(w01), w10_(w10), w11_(w11), gamma_(std::abs(gamma)), phase_(std::arg(gamma)) {
  for (double w : {w00, w01, w10, w11})
    if (!(w >= -1e-12)) throw Error(ErrorCode::invalid_state, "negative diagonal weight");
  w00_ = std::max(w00_, 0.0);
  w01_ = std::max(w01_, 0.0);
  w10_ = std::max(w10_, 0.0);
  w11_ = std::max(w11_, 0.0);
  double tr = w00_ + w01_ + w10_ + w11_;
  if (std::abs(tr - 1.0) > 1e-12) throw Error(ErrorCode::invalid_state, "weights sum to " + std::to_string(tr));
  if (gamma_ > std::sqrt(w01_ * w10_) + 1e-12)
    throw Error(ErrorCode::invalid_state, "|gamma| exceeds sqrt(w01 w10)");
}

QubitSSRState QubitSSRState::from_p_cbar(double p, double cbar) {
  if (p < 0.0 || p > 1.0 || cbar < 0.0 || cbar > 1.0)
    throw Error(ErrorCode::out_of_range, "need 0 <= p, cbar <= 1");
  return QubitSSRState((1.0 - p) / 2, p / 2, p / 2, (1.0 - p) / 2, p * cbar / 2);
}

QubitSSRState QubitSSRState::from_density(const BlockDensityMatrix& rho, double tol) {
  if (!(rho.alice_space() == qubit_space()) || !(rho.bob_space() == qubit_space()))
    throw Error(ErrorCode::dimension_mismatch, "not a two-qubit state");
  LocalLabel z{0, 0}, o{1, 0};
  cplx e00 = rho.element(z, z, z, z), e11 = rho.element(o, o, o, o);
  cplx e01 = rho.element(z, o, z, o), e10 = rho.element(o, z, o, z);
  cplx g = rho.element(z, o, o, z);
  for (cplx d : {e00, e01, e10, e11})
    if (std::abs(d.imag()) > tol) throw Error(ErrorCode::invalid_state, "complex diagonal");
  return QubitSSRState(e00.real(), e01.real(), e10.real(), e11.real(), g);
}

Eigen::Matrix4cd QubitSSRState::matrix() const {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = w00_;
  m(1, 1) = w01_;
  m(2, 2) = w10_;
  m(3, 3) = w11_;
  m(1, 2) = gamma_;
  m(2, 1) = gamma_;
  return m;
}

BlockDensityMatrix QubitSSRState::density() const {
  std::map<int, CMatrix> blocks;
  auto one = [](double x) {
    CMatrix m(1, 1);
    m(0, 0) = x;
    return m;
  };
  if (w00_ > 0.0) blocks.emplace(0, one(w00_));
  CMatrix b1(2, 2);  // basis (a=0,b=1), (a=1,b=0)
  b1 << w01_, gamma_, gamma_, w10_;
  if (b1.cwiseAbs().maxCoeff() > 0.0) blocks.emplace(1, b1);
  if (w11_ > 0.0) blocks.emplace(2, one(w11_));
  return BlockDensityMatrix(qubit_space(), qubit_space(), std::move(blocks));
}

}  // namespace ssrent
