#include "ssrent/monotones.hpp"

#include <cmath>
#include <vector>

namespace ssrent {

double shannon_entropy(std::span<const double> weights) {
  double h = 0.0;
  for (double w : weights) {
    if (w < -1e-10) throw Error(ErrorCode::invalid_argument, "negative probability in entropy");
    if (w > 0.0) h -= w * std::log2(w);
  }
  return h;
}

double binary_entropy(double p) {
  double w[2] = {p, 1.0 - p};
  return shannon_entropy(w);
}

double entanglement_entropy(const CMatrix& coefficients) {
  if (coefficients.size() == 0) return 0.0;
  double nrm2 = coefficients.squaredNorm();
  if (nrm2 == 0.0) throw Error(ErrorCode::zero_vector, "entropy of the zero vector");
  Eigen::JacobiSVD<CMatrix> svd(coefficients);
  std::vector<double> w;
  for (int k = 0; k < svd.singularValues().size(); ++k) {
    double s = svd.singularValues()(k);
    w.push_back(s * s / nrm2);
  }
  return shannon_entropy(w);
}

double eoe(const SectoredPureState& state) {
  // the reduced state is block diagonal in Alice's particle number
  double nrm2 = 0.0;
  std::vector<double> w;
  for (const auto& [n, m] : state.sectors()) nrm2 += m.squaredNorm();
  if (nrm2 == 0.0) throw Error(ErrorCode::zero_vector, "entropy of the zero vector");
  for (const auto& [n, m] : state.sectors()) {
    Eigen::JacobiSVD<CMatrix> svd(m);
    for (int k = 0; k < svd.singularValues().size(); ++k) {
      double s = svd.singularValues()(k);
      w.push_back(s * s / nrm2);
    }
  }
  return shannon_entropy(w);
}

double siv(const SectoredPureState& state, Party party) {
  double nrm2 = 0.0, m1 = 0.0, m2 = 0.0;
  int total = state.total_particles();
  for (const auto& [n, m] : state.sectors()) {
    double w = m.squaredNorm();
    double k = party == Party::alice ? n : total - n;
    nrm2 += w;
    m1 += w * k;
    m2 += w * k * k;
  }
  if (nrm2 == 0.0) throw Error(ErrorCode::zero_vector, "variance of the zero vector");
  m1 /= nrm2;
  m2 /= nrm2;
  return std::max(0.0, 4.0 * (m2 - m1 * m1));
}

MonotonePair monotones(const SectoredPureState& state) { return {eoe(state), siv(state)}; }

double concurrence(const QubitSSRState& rho) {
  return std::max(0.0, 2.0 * rho.gamma() - 2.0 * std::sqrt(rho.w00() * rho.w11()));
}

double formation_function(double c) {
  c = std::min(std::max(c, 0.0), 1.0);
  return binary_entropy(0.5 + 0.5 * std::sqrt(1.0 - c * c));
}

SsrConcurrence ssr_concurrence(const QubitSSRState& rho) {
  double p = rho.w01() + rho.w10();
  if (p <= 0.0) return {0.0, 0.0};
  return {p, std::min(1.0, 2.0 * rho.gamma() / p)};
}

MonotonicityTrial monotonicity_trial(const SectoredPureState& state, const LocalKrausSet& kraus, Party party) {
  MonotonicityTrial t;
  SectoredPureState phi = state.normalized();
  t.before = monotones(phi);
  for (std::size_t i = 0; i < kraus.size(); ++i) {
    SectoredPureState out = apply_kraus_operator(phi, kraus, i, party);
    double p = out.norm();
    p *= p;
    if (p < 1e-14) continue;
    MonotonePair m = monotones(out);
    t.after_avg.eoe += p * m.eoe;
    t.after_avg.siv += p * m.siv;
    t.total_probability += p;
  }
  return t;
}

}  // namespace ssrent
