#pragma once
// Independent reference computations. Dense, slow, no shared code paths with the library
// beyond reading amplitudes and labels.

#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ssrent/fock.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;

inline double entropy_bits(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 1e-15) h -= x * std::log2(x);
  return h;
}

// dense Alice x Bob coefficient matrix built from the amplitude list
inline MatrixXcd dense_coefficients(const ssrent::SectoredPureState& s) {
  MatrixXcd c = MatrixXcd::Zero(s.alice_space().dimension(), s.bob_space().dimension());
  for (const auto& a : s.amplitudes()) c(s.alice_space().flat(a.alice), s.bob_space().flat(a.bob)) += a.value;
  return c / c.norm();
}

inline double eoe(const ssrent::SectoredPureState& s) {
  MatrixXcd c = dense_coefficients(s);
  MatrixXcd ra = c * c.adjoint();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(ra);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return entropy_bits(ev);
}

// 4 Var of Alice's particle number, from the amplitude list
inline double siv(const ssrent::SectoredPureState& s) {
  double norm = 0.0, m1 = 0.0, m2 = 0.0;
  for (const auto& a : s.amplitudes()) {
    double p = std::norm(a.value);
    norm += p;
    m1 += p * a.alice.particles;
    m2 += p * a.alice.particles * a.alice.particles;
  }
  m1 /= norm;
  m2 /= norm;
  return 4.0 * (m2 - m1 * m1);
}

// Wootters: sqrt of eigenvalues of rho (sy x sy) rho^* (sy x sy), basis |00>,|01>,|10>,|11>
inline double wootters_concurrence(const Eigen::Matrix4cd& rho) {
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(3, 0) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  Eigen::Matrix4cd tilde = yy * rho.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(rho * tilde);
  std::vector<double> l;
  for (int i = 0; i < 4; ++i) l.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i).real())));
  std::sort(l.rbegin(), l.rend());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

inline double binary_entropy(double p) { return entropy_bits({p, 1.0 - p}); }

// (v, w) from a dense 4x4 state with real non-negative coherence modulus
inline std::pair<double, double> standard_vw(const Eigen::Matrix4cd& r) {
  double w00 = r(0, 0).real(), w01 = r(1, 1).real(), w10 = r(2, 2).real(), w11 = r(3, 3).real();
  double g = std::abs(r(1, 2));
  return {g / std::sqrt(w01 * w10), std::sqrt(w00 * w11 / (w01 * w10))};
}

inline Eigen::Matrix4cd standard_matrix(double v, double w) {
  Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
  r(0, 0) = w;
  r(1, 1) = 1.0;
  r(2, 2) = 1.0;
  r(3, 3) = w;
  r(1, 2) = v;
  r(2, 1) = v;
  return r / (2.0 * (1.0 + w));
}

// k copies of a two-qubit state, bilateral operators (2 x 2^k, copies' bits with the first copy
// most significant), renormalized and re-standardized
inline std::pair<double, double> brute_force_recurrence(double v, double w, const Eigen::MatrixXd& ma,
                                                        const Eigen::MatrixXd& mb) {
  int k = 0;
  while ((1 << k) < ma.cols()) ++k;
  Eigen::Matrix4cd one = standard_matrix(v, w);
  int da = 1 << k;
  MatrixXcd big = MatrixXcd::Zero(da * da, da * da);  // index: alice bits * da + bob bits
  // element <a b|rho^{(x)k}|a' b'> = prod over copies of one(a_c b_c, a'_c b'_c)
  for (int a = 0; a < da; ++a)
    for (int b = 0; b < da; ++b)
      for (int a2 = 0; a2 < da; ++a2)
        for (int b2 = 0; b2 < da; ++b2) {
          cplx x = 1.0;
          for (int c = 0; c < k; ++c) {
            int sh = k - 1 - c;
            int i = ((a >> sh) & 1) * 2 + ((b >> sh) & 1);
            int j = ((a2 >> sh) & 1) * 2 + ((b2 >> sh) & 1);
            x *= one(i, j);
            if (x == cplx(0.0)) break;
          }
          big(a * da + b, a2 * da + b2) = x;
        }
  // kron(ma, mb), rows |x y>, columns |alice bits, bob bits>
  MatrixXcd kr = MatrixXcd::Zero(4, da * da);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y)
      for (int a = 0; a < da; ++a)
        for (int b = 0; b < da; ++b) kr(x * 2 + y, a * da + b) = ma(x, a) * mb(y, b);
  Eigen::Matrix4cd out = kr * big * kr.adjoint();
  out /= out.trace();
  return standard_vw(out);
}

// Haar average of sum_n p_n p_{n+D} for random states on N levels
inline std::map<int, double> haar_teleport_kernel(int n, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::map<int, double> k;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> p(n);
    double z = 0.0;
    for (auto& x : p) {
      double re = g(rng), im = g(rng);
      x = re * re + im * im;
      z += x;
    }
    for (auto& x : p) x /= z;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) k[b - a] += p[a] * p[b] / samples;
  }
  return k;
}

// 1 - sum_D Pi(D) C(D) with both kernels written out as explicit double sums
inline double constant_helper_error(bool teleport, int n, int m) {
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      int d = b - a;
      double pi = teleport ? (a == b ? 2.0 : 1.0) / (n * (n + 1.0)) : 1.0 / (double(n) * n);
      double c = 0.0;
      for (int x = 0; x < m; ++x)
        if (x + d >= 0 && x + d < m) c += 1.0 / m;
      s += pi * c;
    }
  return 1.0 - s;
}

inline double poisson_mean_by_sum(double mean, int cutoff) {
  double s = 0.0, p = std::exp(-mean);
  for (int k = 0; k <= cutoff; ++k) {
    if (k > 0) p *= mean / k;
    s += p * k;
  }
  return s;
}

}  // namespace oracle
