#include "ssrent/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace ssrent {

namespace {

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double herm_defect(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

CMatrix hermitize(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

// ---------------------------------------------------------------- LocalSpace

LocalSpace::LocalSpace() : LocalSpace(std::vector<int>{1}) {}

LocalSpace::LocalSpace(std::vector<int> degeneracy) : deg_(std::move(degeneracy)) {
  if (deg_.empty()) throw Error(ErrorCode::invalid_argument, "local space needs at least one level");
  for (int d : deg_)
    if (d < 0) throw Error(ErrorCode::invalid_argument, "negative degeneracy");
  while (deg_.size() > 1 && deg_.back() == 0) deg_.pop_back();
  offsets_.assign(deg_.size() + 1, 0);
  for (std::size_t n = 0; n < deg_.size(); ++n) offsets_[n + 1] = offsets_[n] + deg_[n];
  if (offsets_.back() == 0) throw Error(ErrorCode::invalid_argument, "local space has dimension 0");
}

LocalSpace LocalSpace::levels(int max_particles) {
  if (max_particles < 0) throw Error(ErrorCode::invalid_argument, "max_particles < 0");
  return LocalSpace(std::vector<int>(max_particles + 1, 1));
}

LocalSpace LocalSpace::modes(int count) {
  if (count < 0 || count > 20) throw Error(ErrorCode::invalid_argument, "mode count out of range");
  std::vector<int> d(count + 1);
  for (int n = 0; n <= count; ++n) d[n] = static_cast<int>(binom(count, n));
  return LocalSpace(d);
}

int LocalSpace::degeneracy(int n) const {
  if (n < 0 || n > max_particles()) return 0;
  return deg_[n];
}

int LocalSpace::offset(int n) const {
  if (n < 0) return 0;
  if (n > max_particles()) return dimension();
  return offsets_[n];
}

bool LocalSpace::contains(const LocalLabel& l) const {
  return l.index >= 0 && l.index < degeneracy(l.particles);
}

int LocalSpace::flat(const LocalLabel& l) const {
  if (!contains(l))
    throw Error(ErrorCode::index_out_of_range, "label (" + std::to_string(l.particles) + "," +
                                                   std::to_string(l.index) + ") not in local space");
  return offsets_[l.particles] + l.index;
}

LocalLabel LocalSpace::label(int flat) const {
  if (flat < 0 || flat >= dimension()) throw Error(ErrorCode::index_out_of_range, "flat index");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), flat);
  int n = static_cast<int>(it - offsets_.begin()) - 1;
  return {n, flat - offsets_[n]};
}

bool LocalSpace::nondegenerate() const {
  return std::all_of(deg_.begin(), deg_.end(), [](int d) { return d == 1; });
}

LocalLabel mode_label(unsigned bits, int count) {
  if (count < 0 || count > 20 || (count < 32 && (bits >> count) != 0u))
    throw Error(ErrorCode::invalid_argument, "bit string longer than mode count");
  int ones = std::popcount(bits);
  int remaining = ones;
  long long rank = 0;
  for (int p = count - 1; p >= 0 && remaining > 0; --p) {
    if (bits & (1u << p)) {
      rank += binom(p, remaining);
      --remaining;
    }
  }
  return {ones, static_cast<int>(rank)};
}

unsigned mode_bits(const LocalLabel& l, int count) {
  for (unsigned b = 0; b < (1u << count); ++b)
    if (std::popcount(b) == l.particles && mode_label(b, count).index == l.index) return b;
  throw Error(ErrorCode::index_out_of_range, "label not in mode register");
}

// -------------------------------------------------------------- RegisterPair

RegisterPair::RegisterPair(LocalSpace first, LocalSpace second)
    : first_(std::move(first)), second_(std::move(second)) {
  int top = first_.max_particles() + second_.max_particles();
  std::vector<int> d(top + 1, 0);
  for (int p = 0; p <= first_.max_particles(); ++p)
    for (int q = 0; q <= second_.max_particles(); ++q) d[p + q] += first_.degeneracy(p) * second_.degeneracy(q);
  combined_ = LocalSpace(d);
  int da = first_.dimension(), db = second_.dimension();
  kron_to_flat_.resize(static_cast<std::size_t>(da) * db);
  for (int fa = 0; fa < da; ++fa)
    for (int fb = 0; fb < db; ++fb)
      kron_to_flat_[fa * db + fb] = combined_.flat(combine(first_.label(fa), second_.label(fb)));
}

LocalLabel RegisterPair::combine(const LocalLabel& a, const LocalLabel& b) const {
  if (!first_.contains(a) || !second_.contains(b))
    throw Error(ErrorCode::index_out_of_range, "register label out of range");
  int n = a.particles + b.particles;
  int idx = 0;
  for (int p = 0; p < a.particles; ++p) idx += first_.degeneracy(p) * second_.degeneracy(n - p);
  idx += a.index * second_.degeneracy(b.particles) + b.index;
  return {n, idx};
}

std::pair<LocalLabel, LocalLabel> RegisterPair::split(const LocalLabel& c) const {
  if (!combined_.contains(c)) throw Error(ErrorCode::index_out_of_range, "combined label out of range");
  int n = c.particles, idx = c.index;
  for (int p = 0; p <= std::min(n, first_.max_particles()); ++p) {
    int d2 = second_.degeneracy(n - p);
    int block = first_.degeneracy(p) * d2;
    if (idx < block) return {{p, idx / d2}, {n - p, idx % d2}};
    idx -= block;
  }
  throw Error(ErrorCode::index_out_of_range, "combined label out of range");
}

CMatrix RegisterPair::tensor(const CMatrix& a, const CMatrix& b) const {
  int da = first_.dimension(), db = second_.dimension();
  if (a.rows() != da || a.cols() != da || b.rows() != db || b.cols() != db)
    throw Error(ErrorCode::dimension_mismatch, "register operator shape");
  int d = combined_.dimension();
  CMatrix r = CMatrix::Zero(d, d);
  for (int i = 0; i < da * db; ++i)
    for (int j = 0; j < da * db; ++j)
      r(kron_to_flat_[i], kron_to_flat_[j]) = a(i / db, j / db) * b(i % db, j % db);
  return r;
}

// ---------------------------------------------------------------- BlockBasis

BlockBasis::BlockBasis(const LocalSpace& alice, const LocalSpace& bob, int total)
    : alice_(alice), bob_(bob), total_(total) {
  for (int na = 0; na <= std::min(total, alice.max_particles()); ++na) {
    int da = alice.degeneracy(na), db = bob.degeneracy(total - na);
    if (da * db == 0) continue;
    sector_offset_[na] = size();
    for (int i = 0; i < da; ++i)
      for (int j = 0; j < db; ++j) labels_.push_back({{na, i}, {total - na, j}});
  }
}

int BlockBasis::position(const LocalLabel& a, const LocalLabel& b) const {
  if (a.particles + b.particles != total_ || !alice_.contains(a) || !bob_.contains(b)) return -1;
  return sector_offset_.at(a.particles) + a.index * bob_.degeneracy(b.particles) + b.index;
}

// --------------------------------------------------------- SectoredPureState

SectoredPureState::SectoredPureState(LocalSpace alice, LocalSpace bob, int total,
                                     std::map<int, CMatrix> sectors)
    : alice_(std::move(alice)), bob_(std::move(bob)), total_(total) {
  if (total < 0) throw Error(ErrorCode::invalid_argument, "negative total particle number");
  for (auto& [n, m] : sectors) {
    if (n < 0 || n > total) throw Error(ErrorCode::sector_out_of_range, "sector " + std::to_string(n));
    int da = alice_.degeneracy(n), db = bob_.degeneracy(total - n);
    if (m.size() == 0) continue;
    if (m.rows() != da || m.cols() != db)
      throw Error(ErrorCode::dimension_mismatch, "sector " + std::to_string(n) + " has shape " +
                                                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    sectors_.emplace(n, std::move(m));
  }
}

SectoredPureState SectoredPureState::from_amplitudes(std::span<const Amplitude> amplitudes,
                                                     std::optional<LocalSpace> alice,
                                                     std::optional<LocalSpace> bob) {
  if (amplitudes.empty()) throw Error(ErrorCode::zero_vector, "no amplitudes");
  int total = amplitudes.front().alice.particles + amplitudes.front().bob.particles;
  auto infer = [&](bool is_alice) {
    std::vector<int> d;
    for (const auto& amp : amplitudes) {
      const LocalLabel& l = is_alice ? amp.alice : amp.bob;
      if (l.particles < 0 || l.index < 0) throw Error(ErrorCode::invalid_argument, "negative label");
      if (static_cast<int>(d.size()) <= l.particles) d.resize(l.particles + 1, 0);
      d[l.particles] = std::max(d[l.particles], l.index + 1);
    }
    return LocalSpace(d);
  };
  for (const auto& amp : amplitudes)
    if (amp.alice.particles + amp.bob.particles != total)
      throw Error(ErrorCode::mixed_total_number,
                  "amplitudes carry total particle numbers " + std::to_string(total) + " and " +
                      std::to_string(amp.alice.particles + amp.bob.particles));
  LocalSpace sa = alice ? *alice : infer(true);
  LocalSpace sb = bob ? *bob : infer(false);
  std::map<int, CMatrix> sectors;
  for (const auto& amp : amplitudes) {
    if (!sa.contains(amp.alice) || !sb.contains(amp.bob))
      throw Error(ErrorCode::dimension_mismatch, "amplitude label outside the declared local space");
    int n = amp.alice.particles;
    auto it = sectors.find(n);
    if (it == sectors.end())
      it = sectors.emplace(n, CMatrix::Zero(sa.degeneracy(n), sb.degeneracy(total - n))).first;
    it->second(amp.alice.index, amp.bob.index) += amp.value;
  }
  SectoredPureState s(sa, sb, total, std::move(sectors));
  double nrm = s.norm();
  if (nrm == 0.0) throw Error(ErrorCode::zero_vector, "all amplitudes vanish");
  if (std::abs(nrm * nrm - 1.0) > 1e-12) return s.normalized();
  return s;
}

double SectoredPureState::norm() const {
  double s = 0.0;
  for (const auto& [n, m] : sectors_) s += m.squaredNorm();
  return std::sqrt(s);
}

SectoredPureState SectoredPureState::normalized() const {
  double nrm = norm();
  if (nrm == 0.0) throw Error(ErrorCode::zero_vector, "cannot normalize the zero vector");
  std::map<int, CMatrix> out;
  for (const auto& [n, m] : sectors_) out.emplace(n, m / nrm);
  return SectoredPureState(alice_, bob_, total_, std::move(out));
}

CMatrix SectoredPureState::coefficients() const {
  CMatrix c = CMatrix::Zero(alice_.dimension(), bob_.dimension());
  for (const auto& [n, m] : sectors_)
    c.block(alice_.offset(n), bob_.offset(total_ - n), m.rows(), m.cols()) = m;
  return c;
}

CVector SectoredPureState::block_vector() const {
  BlockBasis basis(alice_, bob_, total_);
  CVector v = CVector::Zero(basis.size());
  for (const auto& [n, m] : sectors_)
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) v(basis.position({n, i}, {total_ - n, j})) = m(i, j);
  return v;
}

std::vector<Amplitude> SectoredPureState::amplitudes() const {
  std::vector<Amplitude> out;
  for (const auto& [n, m] : sectors_)
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        if (m(i, j) != cplx(0.0, 0.0)) out.push_back({{n, i}, {total_ - n, j}, m(i, j)});
  return out;
}

BlockDensityMatrix SectoredPureState::density() const {
  CVector v = normalized().block_vector();
  std::map<int, CMatrix> blocks;
  blocks.emplace(total_, hermitize(v * v.adjoint()));
  return BlockDensityMatrix(alice_, bob_, std::move(blocks));
}

cplx SectoredPureState::inner(const SectoredPureState& other) const {
  if (!(alice_ == other.alice_) || !(bob_ == other.bob_))
    throw Error(ErrorCode::dimension_mismatch, "inner product of states on different spaces");
  if (total_ != other.total_) return {0.0, 0.0};
  cplx s{0.0, 0.0};
  for (const auto& [n, m] : sectors_) {
    auto it = other.sectors_.find(n);
    if (it != other.sectors_.end()) s += (m.conjugate().cwiseProduct(it->second)).sum();
  }
  return s;
}

std::map<int, double> SectoredPureState::sector_weights() const {
  std::map<int, double> w;
  for (const auto& [n, m] : sectors_) w[n] = m.squaredNorm();
  return w;
}

std::vector<double> schmidt_sector(const SectoredPureState& state, int n) {
  if (n < 0 || n > state.total_particles())
    throw Error(ErrorCode::sector_out_of_range, "sector " + std::to_string(n));
  auto it = state.sectors().find(n);
  if (it == state.sectors().end()) return {};
  Eigen::JacobiSVD<CMatrix> svd(it->second);
  std::vector<double> w;
  for (int k = 0; k < svd.singularValues().size(); ++k) {
    double s = svd.singularValues()(k);
    w.push_back(s * s);
  }
  std::sort(w.begin(), w.end(), std::greater<>());
  return w;
}

SectoredPureState tensor(const SectoredPureState& x, const SectoredPureState& y) {
  RegisterPair ra(x.alice_space(), y.alice_space());
  RegisterPair rb(x.bob_space(), y.bob_space());
  int nx = x.total_particles(), ny = y.total_particles();
  std::map<int, CMatrix> out;
  for (const auto& [p, mx] : x.sectors())
    for (const auto& [q, my] : y.sectors()) {
      int n = p + q;
      auto it = out.find(n);
      if (it == out.end())
        it = out.emplace(n, CMatrix::Zero(ra.combined().degeneracy(n),
                                          rb.combined().degeneracy(nx + ny - n))).first;
      for (int i = 0; i < mx.rows(); ++i)
        for (int j = 0; j < mx.cols(); ++j)
          for (int k = 0; k < my.rows(); ++k)
            for (int l = 0; l < my.cols(); ++l) {
              LocalLabel a = ra.combine({p, i}, {q, k});
              LocalLabel b = rb.combine({nx - p, j}, {ny - q, l});
              it->second(a.index, b.index) += mx(i, j) * my(k, l);
            }
    }
  return SectoredPureState(ra.combined(), rb.combined(), nx + ny, std::move(out));
}

SectoredPureState state_from_block_vector(const LocalSpace& alice, const LocalSpace& bob, int total,
                                          const CVector& v) {
  BlockBasis basis(alice, bob, total);
  if (v.size() != basis.size()) throw Error(ErrorCode::dimension_mismatch, "block vector length");
  std::map<int, CMatrix> sectors;
  for (int k = 0; k < basis.size(); ++k) {
    const auto& [a, b] = basis.labels()[k];
    auto it = sectors.find(a.particles);
    if (it == sectors.end())
      it = sectors.emplace(a.particles, CMatrix::Zero(alice.degeneracy(a.particles), bob.degeneracy(b.particles)))
               .first;
    it->second(a.index, b.index) = v(k);
  }
  return SectoredPureState(alice, bob, total, std::move(sectors));
}

GeneralPureState tensor(const GeneralPureState& x, const GeneralPureState& y) {
  RegisterPair ra(x.alice, y.alice), rb(x.bob, y.bob);
  int dxa = x.alice.dimension(), dxb = x.bob.dimension();
  int dya = y.alice.dimension(), dyb = y.bob.dimension();
  CMatrix c = CMatrix::Zero(ra.combined().dimension(), rb.combined().dimension());
  for (int i = 0; i < dxa; ++i)
    for (int j = 0; j < dxb; ++j) {
      cplx v = x.coefficients(i, j);
      if (v == cplx(0.0, 0.0)) continue;
      for (int k = 0; k < dya; ++k)
        for (int l = 0; l < dyb; ++l)
          c(ra.kron_to_flat()[i * dya + k], rb.kron_to_flat()[j * dyb + l]) = v * y.coefficients(k, l);
    }
  return {ra.combined(), rb.combined(), c};
}

CMatrix dense_density(std::span<const std::pair<double, GeneralPureState>> terms) {
  if (terms.empty()) throw Error(ErrorCode::invalid_argument, "empty decomposition");
  int db = terms.front().second.bob.dimension();
  int d = terms.front().second.alice.dimension() * db;
  CMatrix rho = CMatrix::Zero(d, d);
  for (const auto& [w, psi] : terms) {
    if (psi.coefficients.rows() * psi.coefficients.cols() != d)
      throw Error(ErrorCode::dimension_mismatch, "decomposition terms on different spaces");
    CVector v(d);
    for (int i = 0; i < psi.coefficients.rows(); ++i)
      for (int j = 0; j < psi.coefficients.cols(); ++j) v(i * db + j) = psi.coefficients(i, j);
    double n2 = v.squaredNorm();
    if (n2 > 0.0) rho += (w / n2) * v * v.adjoint();
  }
  return rho;
}

// -------------------------------------------------------- BlockDensityMatrix

BlockDensityMatrix::BlockDensityMatrix(LocalSpace alice, LocalSpace bob, std::map<int, CMatrix> blocks)
    : alice_(std::move(alice)), bob_(std::move(bob)) {
  double tr = 0.0;
  for (auto& [n, m] : blocks) {
    if (n < 0) throw Error(ErrorCode::sector_out_of_range, "negative total particle number");
    int d = BlockBasis(alice_, bob_, n).size();
    if (m.rows() != d || m.cols() != d)
      throw Error(ErrorCode::dimension_mismatch, "block " + std::to_string(n) + " should be " +
                                                     std::to_string(d) + "x" + std::to_string(d));
    if (d == 0) continue;
    if (herm_defect(m) > 1e-12)
      throw Error(ErrorCode::invalid_state, "block " + std::to_string(n) + " is not Hermitian");
    tr += m.trace().real();
    blocks_.emplace(n, std::move(m));
  }
  if (std::abs(tr - 1.0) > 1e-12)
    throw Error(ErrorCode::invalid_state, "trace " + std::to_string(tr) + " differs from 1");
}

BlockDensityMatrix BlockDensityMatrix::from_dense(const LocalSpace& alice, const LocalSpace& bob,
                                                  const CMatrix& dense, double tol) {
  int da = alice.dimension(), db = bob.dimension();
  if (dense.rows() != da * db || dense.cols() != da * db)
    throw Error(ErrorCode::dimension_mismatch, "dense matrix shape");
  auto total_of = [&](int k) { return alice.label(k / db).particles + bob.label(k % db).particles; };
  for (int r = 0; r < da * db; ++r)
    for (int c = 0; c < da * db; ++c)
      if (total_of(r) != total_of(c) && std::abs(dense(r, c)) > tol)
        throw Error(ErrorCode::invalid_state, "coherence between different total particle numbers");
  std::map<int, CMatrix> blocks;
  int top = alice.max_particles() + bob.max_particles();
  for (int n = 0; n <= top; ++n) {
    BlockBasis basis(alice, bob, n);
    if (basis.size() == 0) continue;
    CMatrix m(basis.size(), basis.size());
    for (int i = 0; i < basis.size(); ++i)
      for (int j = 0; j < basis.size(); ++j) {
        const auto& [a, b] = basis.labels()[i];
        const auto& [a2, b2] = basis.labels()[j];
        m(i, j) = dense(alice.flat(a) * db + bob.flat(b), alice.flat(a2) * db + bob.flat(b2));
      }
    if (m.cwiseAbs().maxCoeff() > 0.0) blocks.emplace(n, m);
  }
  return BlockDensityMatrix(alice, bob, std::move(blocks));
}

double BlockDensityMatrix::trace() const {
  double t = 0.0;
  for (const auto& [n, m] : blocks_) t += m.trace().real();
  return t;
}

double BlockDensityMatrix::min_eigenvalue() const {
  double lo = 0.0;
  bool first = true;
  for (const auto& [n, m] : blocks_) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
    double e = es.eigenvalues().minCoeff();
    lo = first ? e : std::min(lo, e);
    first = false;
  }
  return lo;
}

void BlockDensityMatrix::check_positive(double tol) const {
  double e = min_eigenvalue();
  if (e < -tol) throw Error(ErrorCode::invalid_state, "negative eigenvalue " + std::to_string(e));
}

CMatrix BlockDensityMatrix::dense() const {
  int db = bob_.dimension();
  int d = alice_.dimension() * db;
  CMatrix out = CMatrix::Zero(d, d);
  for (const auto& [n, m] : blocks_) {
    BlockBasis basis(alice_, bob_, n);
    std::vector<int> flat(basis.size());
    for (int i = 0; i < basis.size(); ++i)
      flat[i] = alice_.flat(basis.labels()[i].first) * db + bob_.flat(basis.labels()[i].second);
    for (int i = 0; i < basis.size(); ++i)
      for (int j = 0; j < basis.size(); ++j) out(flat[i], flat[j]) = m(i, j);
  }
  return out;
}

cplx BlockDensityMatrix::element(const LocalLabel& a, const LocalLabel& b, const LocalLabel& a2,
                                 const LocalLabel& b2) const {
  int n = a.particles + b.particles;
  if (a2.particles + b2.particles != n) return {0.0, 0.0};
  auto it = blocks_.find(n);
  if (it == blocks_.end()) return {0.0, 0.0};
  BlockBasis basis(alice_, bob_, n);
  int i = basis.position(a, b), j = basis.position(a2, b2);
  if (i < 0 || j < 0) throw Error(ErrorCode::index_out_of_range, "element label");
  return it->second(i, j);
}

BlockDensityMatrix dephase(const BlockDensityMatrix& rho) {
  std::map<int, CMatrix> out;
  for (const auto& [n, m] : rho.blocks()) {
    BlockBasis basis = rho.basis(n);
    CMatrix d = m;
    for (int i = 0; i < basis.size(); ++i)
      for (int j = 0; j < basis.size(); ++j)
        if (basis.labels()[i].first.particles != basis.labels()[j].first.particles) d(i, j) = 0.0;
    out.emplace(n, d);
  }
  return BlockDensityMatrix(rho.alice_space(), rho.bob_space(), std::move(out));
}

CMatrix partial_trace(const BlockDensityMatrix& rho, Party keep) {
  const LocalSpace& kept = keep == Party::alice ? rho.alice_space() : rho.bob_space();
  CMatrix r = CMatrix::Zero(kept.dimension(), kept.dimension());
  for (const auto& [n, m] : rho.blocks()) {
    BlockBasis basis = rho.basis(n);
    const auto& labels = basis.labels();
    for (int i = 0; i < basis.size(); ++i)
      for (int j = 0; j < basis.size(); ++j) {
        const auto& [a, b] = labels[i];
        const auto& [a2, b2] = labels[j];
        if (keep == Party::alice) {
          if (b == b2) r(kept.flat(a), kept.flat(a2)) += m(i, j);
        } else {
          if (a == a2) r(kept.flat(b), kept.flat(b2)) += m(i, j);
        }
      }
  }
  return r;
}

BlockDensityMatrix tensor(const BlockDensityMatrix& x, const BlockDensityMatrix& y) {
  RegisterPair ra(x.alice_space(), y.alice_space());
  RegisterPair rb(x.bob_space(), y.bob_space());
  std::map<int, CMatrix> out;
  for (const auto& [p, mx] : x.blocks())
    for (const auto& [q, my] : y.blocks()) {
      int n = p + q;
      BlockBasis bx = x.basis(p), by = y.basis(q);
      BlockBasis bn(ra.combined(), rb.combined(), n);
      std::vector<int> pos(static_cast<std::size_t>(bx.size()) * by.size());
      for (int i = 0; i < bx.size(); ++i)
        for (int k = 0; k < by.size(); ++k) {
          const auto& [a1, b1] = bx.labels()[i];
          const auto& [a2, b2] = by.labels()[k];
          pos[i * by.size() + k] = bn.position(ra.combine(a1, a2), rb.combine(b1, b2));
        }
      auto it = out.find(n);
      if (it == out.end()) it = out.emplace(n, CMatrix::Zero(bn.size(), bn.size())).first;
      CMatrix& o = it->second;
      for (int i = 0; i < bx.size(); ++i)
        for (int j = 0; j < bx.size(); ++j) {
          cplx xij = mx(i, j);
          if (xij == cplx(0.0, 0.0)) continue;
          for (int k = 0; k < by.size(); ++k)
            for (int l = 0; l < by.size(); ++l)
              o(pos[i * by.size() + k], pos[j * by.size() + l]) += xij * my(k, l);
        }
    }
  for (auto& [n, m] : out) m = hermitize(m);
  return BlockDensityMatrix(ra.combined(), rb.combined(), std::move(out));
}

BlockDensityMatrix mixture(std::span<const std::pair<double, BlockDensityMatrix>> terms) {
  if (terms.empty()) throw Error(ErrorCode::invalid_argument, "empty mixture");
  const LocalSpace& a = terms.front().second.alice_space();
  const LocalSpace& b = terms.front().second.bob_space();
  std::map<int, CMatrix> out;
  for (const auto& [w, rho] : terms) {
    if (w < 0.0) throw Error(ErrorCode::invalid_argument, "negative mixture weight");
    if (!(rho.alice_space() == a) || !(rho.bob_space() == b))
      throw Error(ErrorCode::dimension_mismatch, "mixture of states on different spaces");
    for (const auto& [n, m] : rho.blocks()) {
      auto it = out.find(n);
      if (it == out.end()) out.emplace(n, w * m);
      else it->second += w * m;
    }
  }
  return BlockDensityMatrix(a, b, std::move(out));
}

double max_abs_difference(const BlockDensityMatrix& x, const BlockDensityMatrix& y) {
  if (!(x.alice_space() == y.alice_space()) || !(x.bob_space() == y.bob_space()))
    throw Error(ErrorCode::dimension_mismatch, "comparison of states on different spaces");
  double d = 0.0;
  for (const auto& [n, m] : x.blocks()) {
    auto it = y.blocks().find(n);
    d = std::max(d, it == y.blocks().end() ? m.cwiseAbs().maxCoeff() : (m - it->second).cwiseAbs().maxCoeff());
  }
  for (const auto& [n, m] : y.blocks())
    if (!x.blocks().count(n)) d = std::max(d, m.cwiseAbs().maxCoeff());
  return d;
}

// ------------------------------------------------------------ LocalKrausSet

LocalKrausSet::LocalKrausSet(LocalSpace input, std::vector<CMatrix> operators, std::vector<int> shifts,
                             std::optional<LocalSpace> output, double tol)
    : input_(std::move(input)), ops_(std::move(operators)), shifts_(std::move(shifts)) {
  if (shifts_.empty()) shifts_.assign(ops_.size(), 0);
  outputs_.assign(ops_.size(), output ? *output : input_);
  validate(tol);
}

LocalKrausSet::LocalKrausSet(LocalSpace input, std::vector<CMatrix> operators, std::vector<int> shifts,
                             std::vector<LocalSpace> outputs, double tol)
    : input_(std::move(input)), ops_(std::move(operators)), shifts_(std::move(shifts)),
      outputs_(std::move(outputs)) {
  if (shifts_.empty()) shifts_.assign(ops_.size(), 0);
  validate(tol);
}

void LocalKrausSet::validate(double tol) const {
  if (ops_.empty()) throw Error(ErrorCode::invalid_argument, "empty Kraus set");
  if (shifts_.size() != ops_.size() || outputs_.size() != ops_.size())
    throw Error(ErrorCode::dimension_mismatch, "one shift and one output space per operator");
  int d = input_.dimension();
  CMatrix sum = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k < ops_.size(); ++k) {
    const CMatrix& m = ops_[k];
    const LocalSpace& out = outputs_[k];
    if (m.rows() != out.dimension() || m.cols() != d)
      throw Error(ErrorCode::dimension_mismatch, "Kraus operator " + std::to_string(k) + " has wrong shape");
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c)
        if (std::abs(m(r, c)) > tol && out.label(r).particles != input_.label(c).particles + shifts_[k])
          throw Error(ErrorCode::invalid_argument,
                      "Kraus operator " + std::to_string(k) + " does not shift particle number by " +
                          std::to_string(shifts_[k]));
    sum += m.adjoint() * m;
  }
  double defect = (sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (defect > tol)
    throw Error(ErrorCode::invalid_argument, "Kraus set is not complete (defect " + std::to_string(defect) + ")");
}

LocalKrausSet LocalKrausSet::identity(const LocalSpace& space) {
  return LocalKrausSet(space, {CMatrix::Identity(space.dimension(), space.dimension())});
}

LocalKrausSet LocalKrausSet::number_projectors(const LocalSpace& space) {
  std::vector<CMatrix> ops;
  int d = space.dimension();
  for (int n = 0; n <= space.max_particles(); ++n) {
    if (space.degeneracy(n) == 0) continue;
    CMatrix p = CMatrix::Zero(d, d);
    for (int i = 0; i < space.degeneracy(n); ++i) p(space.offset(n) + i, space.offset(n) + i) = 1.0;
    ops.push_back(p);
  }
  return LocalKrausSet(space, std::move(ops));
}

LocalKrausSet LocalKrausSet::filter(const LocalSpace& space, const CMatrix& f) {
  int d = space.dimension();
  if (f.rows() != d || f.cols() != d) throw Error(ErrorCode::dimension_mismatch, "filter shape");
  CMatrix rest = CMatrix::Identity(d, d) - f.adjoint() * f;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(rest));
  if (es.eigenvalues().minCoeff() < -1e-12) throw Error(ErrorCode::invalid_argument, "filter is not a contraction");
  Eigen::VectorXd s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  CMatrix comp = es.eigenvectors() * s.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  // eigenvectors may mix levels only through roundoff
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      if (space.label(r).particles != space.label(c).particles) comp(r, c) = 0.0;
  return LocalKrausSet(space, {f, comp});
}

bool LocalKrausSet::common_output() const {
  return std::all_of(outputs_.begin(), outputs_.end(), [&](const LocalSpace& s) { return s == outputs_.front(); });
}

CMatrix LocalKrausSet::level_block(std::size_t i, int n) const {
  const LocalSpace& out = outputs_.at(i);
  int m = n + shifts_[i];
  int rows = out.degeneracy(m), cols = input_.degeneracy(n);
  if (rows == 0 || cols == 0) return CMatrix::Zero(rows, cols);
  return ops_[i].block(out.offset(m), input_.offset(n), rows, cols);
}

namespace {

std::map<int, CMatrix> branch_blocks(const BlockDensityMatrix& rho, const LocalKrausSet& alice, std::size_t i,
                                     const LocalKrausSet& bob, std::size_t j) {
  const LocalSpace& oa = alice.output_space(i);
  const LocalSpace& ob = bob.output_space(j);
  int sa = alice.shift(i), sb = bob.shift(j);
  std::map<int, CMatrix> out;
  for (const auto& [n, m] : rho.blocks()) {
    BlockBasis in = rho.basis(n);
    BlockBasis ob_basis(oa, ob, n + sa + sb);
    if (ob_basis.size() == 0) continue;
    CMatrix k = CMatrix::Zero(ob_basis.size(), in.size());
    std::map<int, CMatrix> ablk, bblk;
    for (int q = 0; q < in.size(); ++q) {
      const auto& [a, b] = in.labels()[q];
      auto ia = ablk.find(a.particles);
      if (ia == ablk.end()) ia = ablk.emplace(a.particles, alice.level_block(i, a.particles)).first;
      auto ib = bblk.find(b.particles);
      if (ib == bblk.end()) ib = bblk.emplace(b.particles, bob.level_block(j, b.particles)).first;
      const CMatrix& am = ia->second;
      const CMatrix& bm = ib->second;
      for (int x = 0; x < am.rows(); ++x)
        for (int y = 0; y < bm.rows(); ++y) {
          int r = ob_basis.position({a.particles + sa, x}, {b.particles + sb, y});
          k(r, q) = am(x, a.index) * bm(y, b.index);
        }
    }
    CMatrix blk = k * m * k.adjoint();
    auto it = out.find(n + sa + sb);
    if (it == out.end()) out.emplace(n + sa + sb, blk);
    else it->second += blk;
  }
  return out;
}

}  // namespace

KrausResult apply_local_kraus(const BlockDensityMatrix& rho, const LocalKrausSet& alice, const LocalKrausSet& bob,
                              std::optional<std::pair<std::size_t, std::size_t>> select) {
  if (!(alice.input_space() == rho.alice_space()) || !(bob.input_space() == rho.bob_space()))
    throw Error(ErrorCode::dimension_mismatch, "Kraus input space does not match the state");
  std::map<int, CMatrix> acc;
  LocalSpace oa = alice.output_space(0), ob = bob.output_space(0);
  if (select) {
    auto [i, j] = *select;
    if (i >= alice.size() || j >= bob.size()) throw Error(ErrorCode::index_out_of_range, "outcome index");
    acc = branch_blocks(rho, alice, i, bob, j);
    oa = alice.output_space(i);
    ob = bob.output_space(j);
  } else {
    if (!alice.common_output() || !bob.common_output())
      throw Error(ErrorCode::dimension_mismatch, "non-selective channel needs a common output space");
    for (std::size_t i = 0; i < alice.size(); ++i)
      for (std::size_t j = 0; j < bob.size(); ++j)
        for (auto& [n, m] : branch_blocks(rho, alice, i, bob, j)) {
          auto it = acc.find(n);
          if (it == acc.end()) acc.emplace(n, m);
          else it->second += m;
        }
  }
  double p = 0.0;
  for (const auto& [n, m] : acc) p += m.trace().real();
  if (select && p < 1e-14) throw Error(ErrorCode::zero_probability_outcome, "outcome probability " + std::to_string(p));
  if (p <= 0.0) throw Error(ErrorCode::zero_probability_outcome, "channel output vanishes");
  for (auto& [n, m] : acc) m = hermitize(m / p);
  return {BlockDensityMatrix(oa, ob, std::move(acc)), select ? p : 1.0};
}

SectoredPureState apply_kraus_operator(const SectoredPureState& state, const LocalKrausSet& kraus, std::size_t i,
                                       Party party) {
  if (i >= kraus.size()) throw Error(ErrorCode::index_out_of_range, "Kraus operator index");
  const LocalSpace& in = party == Party::alice ? state.alice_space() : state.bob_space();
  if (!(kraus.input_space() == in)) throw Error(ErrorCode::dimension_mismatch, "Kraus input space");
  int s = kraus.shift(i);
  int total = state.total_particles() + s;
  if (total < 0) throw Error(ErrorCode::invalid_argument, "negative total after shift");
  std::map<int, CMatrix> out;
  for (const auto& [n, m] : state.sectors()) {
    if (party == Party::alice) {
      CMatrix blk = kraus.level_block(i, n);
      if (blk.rows() == 0) continue;
      out.emplace(n + s, blk * m);
    } else {
      CMatrix blk = kraus.level_block(i, state.total_particles() - n);
      if (blk.rows() == 0) continue;
      out.emplace(n, m * blk.transpose());
    }
  }
  if (party == Party::alice) return SectoredPureState(kraus.output_space(i), state.bob_space(), total, std::move(out));
  return SectoredPureState(state.alice_space(), kraus.output_space(i), total, std::move(out));
}

}  // namespace ssrent
