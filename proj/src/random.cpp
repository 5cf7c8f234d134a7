#include "ssrent/random.hpp"

#include <algorithm>
#include <cmath>

namespace ssrent {

cplx complex_gaussian(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  double re = g(rng);
  double im = g(rng);
  return {re, im};
}

CMatrix gaussian_matrix(Rng& rng, int rows, int cols) {
  CMatrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = complex_gaussian(rng);
  return m;
}

CMatrix random_isometry(Rng& rng, int rows, int cols) {
  if (rows < cols) throw Error(ErrorCode::invalid_argument, "isometry needs rows >= cols");
  if (cols == 0) return CMatrix::Zero(rows, 0);
  CMatrix g = gaussian_matrix(rng, rows, cols);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(rows, cols);
  // fix the phases so the distribution is Haar
  CMatrix r = qr.matrixQR().topLeftCorner(cols, cols).triangularView<Eigen::Upper>();
  for (int k = 0; k < cols; ++k) {
    cplx d = r(k, k);
    if (std::abs(d) > 0.0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

CMatrix random_unitary(Rng& rng, int n) { return random_isometry(rng, n, n); }

SectoredPureState random_pure_state(Rng& rng, const LocalSpace& alice, const LocalSpace& bob, int total) {
  std::map<int, CMatrix> sectors;
  for (int n = 0; n <= total; ++n) {
    int da = alice.degeneracy(n), db = bob.degeneracy(total - n);
    if (da * db == 0) continue;
    sectors.emplace(n, gaussian_matrix(rng, da, db));
  }
  if (sectors.empty()) throw Error(ErrorCode::zero_vector, "no sector carries this total particle number");
  return SectoredPureState(alice, bob, total, std::move(sectors)).normalized();
}

GeneralPureState random_general_state(Rng& rng, const LocalSpace& alice, const LocalSpace& bob) {
  CMatrix c = gaussian_matrix(rng, alice.dimension(), bob.dimension());
  c /= c.norm();
  return {alice, bob, c};
}

BlockDensityMatrix random_density(Rng& rng, const LocalSpace& alice, const LocalSpace& bob, int rank) {
  int top = alice.max_particles() + bob.max_particles();
  std::map<int, CMatrix> blocks;
  double tr = 0.0;
  for (int n = 0; n <= top; ++n) {
    BlockBasis basis(alice, bob, n);
    if (basis.size() == 0) continue;
    CMatrix g = gaussian_matrix(rng, basis.size(), std::max(rank, 1));
    CMatrix m = g * g.adjoint();
    tr += m.trace().real();
    blocks.emplace(n, m);
  }
  for (auto& [n, m] : blocks) m = ((0.5 * (m + m.adjoint())) / tr).eval();
  return BlockDensityMatrix(alice, bob, std::move(blocks));
}

LocalKrausSet random_kraus_set(Rng& rng, const LocalSpace& space, int outcomes, bool shifted) {
  if (outcomes < 1) throw Error(ErrorCode::invalid_argument, "need at least one outcome");
  std::vector<int> shifts(outcomes, 0);
  LocalSpace out = space;
  if (shifted) {
    for (int k = 0; k < outcomes; ++k) shifts[k] = k % 2;
    std::vector<int> d(space.max_particles() + 2, 0);
    for (int m = 0; m < static_cast<int>(d.size()); ++m)
      d[m] = std::max(space.degeneracy(m), space.degeneracy(m - 1));
    out = LocalSpace(d);
  }
  std::vector<CMatrix> ops(outcomes, CMatrix::Zero(out.dimension(), space.dimension()));
  for (int n = 0; n <= space.max_particles(); ++n) {
    int dn = space.degeneracy(n);
    if (dn == 0) continue;
    int rows = 0;
    for (int k = 0; k < outcomes; ++k) rows += out.degeneracy(n + shifts[k]);
    CMatrix v = random_isometry(rng, rows, dn);
    int r = 0;
    for (int k = 0; k < outcomes; ++k) {
      int dk = out.degeneracy(n + shifts[k]);
      ops[k].block(out.offset(n + shifts[k]), space.offset(n), dk, dn) = v.middleRows(r, dk);
      r += dk;
    }
  }
  return LocalKrausSet(space, std::move(ops), shifts, out);
}

}  // namespace ssrent
