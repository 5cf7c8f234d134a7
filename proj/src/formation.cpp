#include "ssrent/formation.hpp"

#include "ssrent/convertibility.hpp"

#include <cmath>
#include <map>

namespace ssrent {

namespace {

SectoredPureState one_particle_state(cplx c01, cplx c10) {
  std::map<int, CMatrix> sectors;
  CMatrix a(1, 1), b(1, 1);
  a(0, 0) = c01;
  b(0, 0) = c10;
  if (c01 != cplx(0.0, 0.0)) sectors.emplace(0, a);
  if (c10 != cplx(0.0, 0.0)) sectors.emplace(1, b);
  return SectoredPureState(qubit_space(), qubit_space(), 1, std::move(sectors));
}

SectoredPureState product_level_state(int n) {
  std::map<int, CMatrix> sectors;
  sectors.emplace(n / 2, CMatrix::Ones(1, 1));
  return SectoredPureState(qubit_space(), qubit_space(), n, std::move(sectors));
}

}  // namespace

QubitSSRState rho_sep() { return QubitSSRState(0.25, 0.25, 0.25, 0.25, 0.25); }

std::vector<std::pair<double, GeneralPureState>> rho_sep_product_terms() {
  std::vector<std::pair<double, GeneralPureState>> out;
  const cplx phases[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (cplx w : phases) {
    CMatrix c(2, 2);
    c << 1.0, w, w, w * w;
    out.push_back({0.25, {qubit_space(), qubit_space(), c / 2.0}});
  }
  return out;
}

FormationPoint formation_point(const QubitSSRState& rho) {
  FormationPoint f;
  SsrConcurrence sc = ssr_concurrence(rho);
  f.p = sc.p;
  f.cbar = sc.cbar;
  f.ef_ssr = sc.p * formation_function(sc.cbar);
  f.vf_ssr = sc.p * sc.cbar * sc.cbar;
  f.ef = formation_function(concurrence(rho));
  f.separable_candidate = sc.p <= 0.0 || sc.cbar * sc.p <= (1.0 - sc.p) + 1e-12;
  return f;
}

std::vector<PureTerm> optimal_decomposition(const QubitSSRState& rho) {
  std::vector<PureTerm> out;
  if (rho.w00() > 0.0) out.push_back({rho.w00(), product_level_state(0)});
  double p = rho.w01() + rho.w10();
  if (p > 0.0) {
    double x = rho.w01() / p;
    double cbar = std::min(1.0, 2.0 * rho.gamma() / p);
    double s = 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - cbar * cbar)));
    if (2.0 * s - 1.0 < 1e-12) {
      out.push_back({p, one_particle_state(std::sqrt(x), std::sqrt(1.0 - x))});
    } else {
      double q = std::min(1.0, std::max(0.0, (x - (1.0 - s)) / (2.0 * s - 1.0)));
      if (q > 1e-15) out.push_back({p * q, one_particle_state(std::sqrt(s), std::sqrt(1.0 - s))});
      if (1.0 - q > 1e-15) out.push_back({p * (1.0 - q), one_particle_state(std::sqrt(1.0 - s), std::sqrt(s))});
    }
  }
  if (rho.w11() > 0.0) out.push_back({rho.w11(), product_level_state(2)});
  return out;
}

MonotonePair decomposition_average(std::span<const PureTerm> terms) {
  MonotonePair m;
  for (const auto& t : terms) {
    MonotonePair x = monotones(t.state);
    m.eoe += t.probability * x.eoe;
    m.siv += t.probability * x.siv;
  }
  return m;
}

BlockDensityMatrix decomposition_density(std::span<const PureTerm> terms) {
  if (terms.empty()) throw Error(ErrorCode::invalid_argument, "empty decomposition");
  const LocalSpace& a = terms.front().state.alice_space();
  const LocalSpace& b = terms.front().state.bob_space();
  std::map<int, CMatrix> blocks;
  double tr = 0.0;
  for (const auto& t : terms) {
    CVector v = t.state.normalized().block_vector();
    CMatrix m = t.probability * v * v.adjoint();
    tr += t.probability;
    auto it = blocks.find(t.state.total_particles());
    if (it == blocks.end()) blocks.emplace(t.state.total_particles(), m);
    else it->second += m;
  }
  for (auto& [n, m] : blocks) m = (0.5 * (m + m.adjoint()) / tr).eval();
  return BlockDensityMatrix(a, b, std::move(blocks));
}

DirectSumOfPure::DirectSumOfPure(LocalSpace alice, LocalSpace bob, std::vector<Component> components)
    : alice_(std::move(alice)), bob_(std::move(bob)), components_(std::move(components)) {
  double tr = 0.0;
  std::map<int, int> seen;
  for (auto& c : components_) {
    if (c.weight < 0.0) throw Error(ErrorCode::invalid_argument, "negative component weight");
    if (c.vector.size() != BlockBasis(alice_, bob_, c.total).size())
      throw Error(ErrorCode::dimension_mismatch, "component vector length");
    if (++seen[c.total] > 1) throw Error(ErrorCode::not_direct_sum_of_pure, "two components with the same total");
    double n = c.vector.norm();
    if (n == 0.0) throw Error(ErrorCode::zero_vector, "zero component");
    c.vector /= n;
    tr += c.weight;
  }
  if (std::abs(tr - 1.0) > 1e-10) throw Error(ErrorCode::invalid_state, "component weights do not sum to 1");
}

DirectSumOfPure DirectSumOfPure::from_density(const BlockDensityMatrix& rho, double tol) {
  std::vector<Component> comps;
  for (const auto& [n, m] : rho.blocks()) {
    double tr = m.trace().real();
    if (tr <= 1e-15) continue;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    int d = static_cast<int>(m.rows());
    if (d > 1 && es.eigenvalues()(d - 2) > tol)
      throw Error(ErrorCode::not_direct_sum_of_pure, "block " + std::to_string(n) + " has rank > 1");
    comps.push_back({tr, n, es.eigenvectors().col(d - 1)});
  }
  double tot = 0.0;
  for (const auto& c : comps) tot += c.weight;
  for (auto& c : comps) c.weight /= tot;
  return DirectSumOfPure(rho.alice_space(), rho.bob_space(), std::move(comps));
}

double DirectSumOfPure::variance_of_formation() const {
  double v = 0.0;
  for (const auto& c : components_) v += c.weight * block_vector_siv(alice_, bob_, c.total, c.vector);
  return v;
}

BlockDensityMatrix DirectSumOfPure::density() const {
  std::map<int, CMatrix> blocks;
  for (const auto& c : components_) blocks.emplace(c.total, c.weight * c.vector * c.vector.adjoint());
  for (auto& [n, m] : blocks) m = (0.5 * (m + m.adjoint())).eval();
  return BlockDensityMatrix(alice_, bob_, std::move(blocks));
}

double block_vector_siv(const LocalSpace& alice, const LocalSpace& bob, int total, const CVector& v) {
  BlockBasis basis(alice, bob, total);
  if (v.size() != basis.size()) throw Error(ErrorCode::dimension_mismatch, "block vector length");
  double w = 0.0, m1 = 0.0, m2 = 0.0;
  for (int k = 0; k < basis.size(); ++k) {
    double x = std::norm(v(k));
    double n = basis.labels()[k].first.particles;
    w += x;
    m1 += x * n;
    m2 += x * n * n;
  }
  if (w == 0.0) throw Error(ErrorCode::zero_vector, "variance of the zero vector");
  m1 /= w;
  m2 /= w;
  return std::max(0.0, 4.0 * (m2 - m1 * m1));
}

double sampled_decomposition_siv(const LocalSpace& alice, const LocalSpace& bob,
                                 std::span<const DirectSumOfPure::Component> components, Rng& rng, int max_terms) {
  std::map<int, std::vector<const DirectSumOfPure::Component*>> groups;
  for (const auto& c : components) groups[c.total].push_back(&c);
  double total = 0.0;
  for (const auto& [n, g] : groups) {
    int k = static_cast<int>(g.size());
    int hi = std::max(k, max_terms);
    std::uniform_int_distribution<int> pick(k, hi);
    int terms = pick(rng);
    CMatrix u = random_isometry(rng, terms, k);
    for (int j = 0; j < terms; ++j) {
      CVector z = CVector::Zero(g.front()->vector.size());
      for (int i = 0; i < k; ++i) z += u(j, i) * std::sqrt(g[i]->weight) * g[i]->vector;
      double q = z.squaredNorm();
      if (q < 1e-300) continue;
      total += q * block_vector_siv(alice, bob, n, z);
    }
  }
  return total;
}

AdditivityTrial vf_additivity_trial(const BlockDensityMatrix& rho, const BlockDensityMatrix& sigma, Rng& rng,
                                    int samples, int max_terms) {
  DirectSumOfPure a = DirectSumOfPure::from_density(rho);
  DirectSumOfPure b = DirectSumOfPure::from_density(sigma);
  AdditivityTrial t;
  t.rhs = a.variance_of_formation() + b.variance_of_formation();
  std::vector<DirectSumOfPure::Component> prod;
  LocalSpace pa, pb;
  for (const auto& ca : a.components())
    for (const auto& cb : b.components()) {
      SectoredPureState x = state_from_block_vector(a.alice_space(), a.bob_space(), ca.total, ca.vector);
      SectoredPureState y = state_from_block_vector(b.alice_space(), b.bob_space(), cb.total, cb.vector);
      SectoredPureState xy = tensor(x, y);
      pa = xy.alice_space();
      pb = xy.bob_space();
      prod.push_back({ca.weight * cb.weight, xy.total_particles(), xy.block_vector()});
    }
  double canonical = 0.0;
  for (const auto& c : prod) canonical += c.weight * block_vector_siv(pa, pb, c.total, c.vector);
  t.min_sampled = INFINITY;
  for (int s = 0; s < samples; ++s)
    t.min_sampled = std::min(t.min_sampled, sampled_decomposition_siv(pa, pb, prod, rng, max_terms));
  t.samples = samples;
  t.lhs = std::min(canonical, t.min_sampled);
  return t;
}

MonotonePair sampled_qubit_decomposition(const QubitSSRState& rho, Rng& rng, int max_terms) {
  Eigen::Matrix2cd blk;
  blk << rho.w01(), rho.gamma(), rho.gamma(), rho.w10();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(blk);
  std::vector<Eigen::Vector2cd> vecs;
  for (int i = 0; i < 2; ++i)
    if (es.eigenvalues()(i) > 1e-15) vecs.push_back(std::sqrt(es.eigenvalues()(i)) * es.eigenvectors().col(i));
  MonotonePair m;
  if (vecs.empty()) return m;
  int k = static_cast<int>(vecs.size());
  std::uniform_int_distribution<int> pick(k, std::max(k, max_terms));
  int terms = pick(rng);
  CMatrix u = random_isometry(rng, terms, k);
  for (int j = 0; j < terms; ++j) {
    Eigen::Vector2cd z = Eigen::Vector2cd::Zero();
    for (int i = 0; i < k; ++i) z += u(j, i) * vecs[i];
    double q = z.squaredNorm();
    if (q < 1e-300) continue;
    double x = std::norm(z(0)) / q;
    m.eoe += q * binary_entropy(x);
    m.siv += q * 4.0 * x * (1.0 - x);
  }
  return m;
}

std::vector<EVPoint> ev_region_sample(EVFamily family, int samples, Rng& rng) {
  std::vector<EVPoint> out;
  out.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    EVPoint pt;
    if (family == EVFamily::mixed_qubit) {
      QubitSSRState q = QubitSSRState::from_density(random_density(rng, qubit_space(), qubit_space(), 4));
      FormationPoint f = formation_point(q);
      pt = {f.ef_ssr, f.vf_ssr, f.p, f.cbar, f.separable_candidate};
    } else {
      int top = family == EVFamily::pure_qubit ? 1 : 2;
      SectoredPureState phi =
          random_pure_state(rng, LocalSpace::levels(top), LocalSpace::levels(top), top);
      MonotonePair m = monotones(phi);
      pt.eoe = m.eoe;
      pt.siv = m.siv;
      pt.separable_candidate = m.eoe < 1e-12;
    }
    out.push_back(pt);
  }
  return out;
}

EcProjectionTrial ec_projection_trial(std::span<const std::pair<double, GeneralPureState>> decomposition,
                                      int copies) {
  if (copies < 1) throw Error(ErrorCode::invalid_argument, "copies must be >= 1");
  if (decomposition.empty()) throw Error(ErrorCode::invalid_argument, "empty decomposition");
  double combos = std::pow(static_cast<double>(decomposition.size()), copies);
  if (combos > 1e5) throw Error(ErrorCode::scale_exceeded, "too many product terms");
  EcProjectionTrial t;
  std::vector<std::size_t> idx(copies, 0);
  double wsum = 0.0;
  while (true) {
    double w = 1.0;
    GeneralPureState psi = decomposition[idx[0]].second;
    w *= decomposition[idx[0]].first;
    for (int c = 1; c < copies; ++c) {
      psi = tensor(psi, decomposition[idx[c]].second);
      w *= decomposition[idx[c]].first;
    }
    psi.coefficients /= psi.coefficients.norm();
    ProjectionBoundTrial a = number_projection_bound_trial(psi);
    t.eoe_before += w * entanglement_entropy(psi.coefficients);
    t.eoe_after += w * a.lhs;
    t.max_total = std::max(t.max_total, a.max_total);
    wsum += w;
    int c = 0;
    while (c < copies && ++idx[c] == decomposition.size()) idx[c++] = 0;
    if (c == copies) break;
  }
  t.eoe_before /= wsum;
  t.eoe_after /= wsum;
  t.bound = t.eoe_before + std::log2(t.max_total + 1.0);
  return t;
}

std::vector<std::pair<double, GeneralPureState>> random_decomposition(const BlockDensityMatrix& rho, int terms,
                                                                      Rng& rng) {
  CMatrix d = rho.dense();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(d);
  std::vector<CVector> vecs;
  for (int i = 0; i < d.rows(); ++i)
    if (es.eigenvalues()(i) > 1e-14) vecs.push_back(std::sqrt(es.eigenvalues()(i)) * es.eigenvectors().col(i));
  int k = static_cast<int>(vecs.size());
  int kk = std::max(terms, k);
  CMatrix u = random_isometry(rng, kk, k);
  int db = rho.bob_space().dimension();
  std::vector<std::pair<double, GeneralPureState>> out;
  for (int j = 0; j < kk; ++j) {
    CVector z = CVector::Zero(d.rows());
    for (int i = 0; i < k; ++i) z += u(j, i) * vecs[i];
    double q = z.squaredNorm();
    if (q < 1e-300) continue;
    CMatrix c(rho.alice_space().dimension(), db);
    for (int r = 0; r < c.rows(); ++r)
      for (int s = 0; s < db; ++s) c(r, s) = z(r * db + s);
    out.push_back({q, {rho.alice_space(), rho.bob_space(), c}});
  }
  return out;
}

}  // namespace ssrent
