#include "ssrent/convertibility.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "ssrent/monotones.hpp"

namespace ssrent {

namespace {

std::vector<double> sorted_desc(std::span<const double> x, std::size_t len) {
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end(), std::greater<>());
  v.resize(std::max(len, v.size()), 0.0);
  return v;
}

std::vector<double> add_weighted(std::vector<double> acc, const std::vector<double>& x, double p) {
  std::vector<double> s = sorted_desc(x, acc.size());
  acc.resize(s.size(), 0.0);
  for (std::size_t k = 0; k < s.size(); ++k) acc[k] += p * s[k];
  return acc;
}

constexpr double kWeightTol = 1e-15;

}  // namespace

bool is_majorized_by(std::span<const double> lam, std::span<const double> mu, double tol) {
  std::size_t len = std::max(lam.size(), mu.size());
  std::vector<double> a = sorted_desc(lam, len), b = sorted_desc(mu, len);
  double sa = 0.0, sb = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    sa += a[k];
    sb += b[k];
    if (sa > sb + tol) return false;
  }
  return std::abs(sa - sb) <= tol;
}

double SSRSchmidtVector::total() const {
  double t = 0.0;
  for (const auto& [n, v] : per_sector) t = std::accumulate(v.begin(), v.end(), t);
  return t;
}

SSRSchmidtVector ssr_schmidt_vector(const SectoredPureState& state) {
  SSRSchmidtVector v;
  SectoredPureState phi = state.normalized();
  for (const auto& [n, m] : phi.sectors()) v.per_sector[n] = schmidt_sector(phi, n);
  return v;
}

ConversionTask::ConversionTask(SectoredPureState source, std::vector<ConversionTarget> targets)
    : source_(source.normalized()) {
  if (targets.empty()) throw Error(ErrorCode::invalid_argument, "conversion task without targets");
  double sum = 0.0;
  for (auto& t : targets) {
    if (!(t.probability > 0.0)) throw Error(ErrorCode::invalid_argument, "target probabilities must be positive");
    if (t.state.total_particles() != source_.total_particles())
      throw Error(ErrorCode::mixed_total_number, "targets must share the source's total particle number");
    sum += t.probability;
    targets_.push_back({t.probability, t.state.normalized()});
  }
  if (std::abs(sum - 1.0) > 1e-12) throw Error(ErrorCode::invalid_argument, "target probabilities do not sum to 1");
}

ConversionTask ConversionTask::deterministic(SectoredPureState source, SectoredPureState target) {
  return ConversionTask(std::move(source), {{1.0, std::move(target)}});
}

ConversionVerdict ssr_convertible(const ConversionTask& task) {
  SSRSchmidtVector src = ssr_schmidt_vector(task.source());
  std::map<int, std::vector<double>> avg;
  std::set<int> sectors;
  for (const auto& [n, v] : src.per_sector) sectors.insert(n);
  for (const auto& t : task.targets()) {
    SSRSchmidtVector tv = ssr_schmidt_vector(t.state);
    for (const auto& [n, v] : tv.per_sector) {
      sectors.insert(n);
      avg[n] = add_weighted(avg[n], v, t.probability);
    }
  }
  ConversionVerdict verdict;
  for (int n : sectors) {
    std::vector<double> lam = src.per_sector.count(n) ? src.per_sector.at(n) : std::vector<double>{};
    std::vector<double> mu = avg.count(n) ? avg.at(n) : std::vector<double>{};
    std::size_t len = std::max(lam.size(), mu.size());
    lam = sorted_desc(lam, len);
    mu = sorted_desc(mu, len);
    double tl = std::accumulate(lam.begin(), lam.end(), 0.0);
    double tm = std::accumulate(mu.begin(), mu.end(), 0.0);
    if (std::abs(tl - tm) > 1e-10) {
      std::ostringstream os;
      os << "sector " << n << ": weight " << tl << " cannot become " << tm;
      return {false, n, std::abs(tl - tm), os.str()};
    }
    double sl = 0.0, sm = 0.0, worst = 0.0;
    int worst_k = -1;
    for (std::size_t k = 0; k < len; ++k) {
      sl += lam[k];
      sm += mu[k];
      if (sl - sm > 1e-10 && sl - sm > worst) {
        worst = sl - sm;
        worst_k = static_cast<int>(k);
      }
    }
    if (worst_k >= 0) {
      std::ostringstream os;
      os << "sector " << n << ": partial sum " << worst_k + 1 << " exceeds the target's by " << worst;
      return {false, n, worst, os.str()};
    }
  }
  return verdict;
}

SectoredPureState hat_embedding(const SectoredPureState& qubit_state) {
  if (!(qubit_state.alice_space() == LocalSpace::levels(1)) || !(qubit_state.bob_space() == LocalSpace::levels(1)))
    throw Error(ErrorCode::not_a_qubit_state, "hat embedding needs qubit levels on both sides");
  CMatrix c = qubit_state.coefficients();  // 2x2, rows: Alice level
  // |0> -> |01> = label (1,0), |1> -> |10> = label (1,1)
  std::map<int, CMatrix> sectors;
  sectors.emplace(1, c);
  return SectoredPureState(LocalSpace::modes(2), LocalSpace::modes(2), 2, std::move(sectors));
}

std::vector<WeightedPermutation> permutation_mixture(std::span<const double> lam, std::span<const double> mu,
                                                     double tol) {
  std::size_t d = std::max(lam.size(), mu.size());
  std::vector<double> y = sorted_desc(lam, d), x = sorted_desc(mu, d);
  if (!is_majorized_by(y, x)) throw Error(ErrorCode::invalid_argument, "lam is not majorized by mu");
  struct TTransform {
    std::size_t j, k;
    double t;
  };
  std::vector<TTransform> steps;
  for (std::size_t guard = 0; guard < 4 * d + 4; ++guard) {
    std::size_t j = d;
    for (std::size_t i = 0; i < d; ++i)
      if (x[i] > y[i] + tol) j = i;
    if (j == d) break;
    std::size_t k = d;
    for (std::size_t i = j + 1; i < d; ++i)
      if (x[i] < y[i] - tol) {
        k = i;
        break;
      }
    if (k == d) break;
    double delta = std::min(x[j] - y[j], y[k] - x[k]);
    double move = delta / (x[j] - x[k]);
    x[j] -= delta;
    x[k] += delta;
    steps.push_back({j, k, 1.0 - move});
  }
  std::map<std::vector<int>, double> mix;
  std::vector<int> id(d);
  std::iota(id.begin(), id.end(), 0);
  mix[id] = 1.0;
  for (const auto& s : steps) {
    std::map<std::vector<int>, double> next;
    for (const auto& [perm, w] : mix) {
      if (s.t > 0.0) next[perm] += w * s.t;
      if (s.t < 1.0) {
        std::vector<int> q = perm;
        std::swap(q[s.j], q[s.k]);
        next[q] += w * (1.0 - s.t);
      }
    }
    mix = std::move(next);
  }
  std::vector<WeightedPermutation> out;
  for (const auto& [perm, w] : mix)
    if (w > 0.0) out.push_back({w, perm});
  return out;
}

std::vector<SectorProtocol> conversion_protocol(const SectoredPureState& source, const SectoredPureState& target) {
  if (!(source.alice_space() == target.alice_space()) || !(source.bob_space() == target.bob_space()))
    throw Error(ErrorCode::dimension_mismatch, "protocol construction needs equal local spaces");
  SectoredPureState src = source.normalized(), tgt = target.normalized();
  ConversionVerdict v = ssr_convertible(ConversionTask::deterministic(src, tgt));
  if (!v.convertible) throw Error(ErrorCode::invalid_argument, "not convertible: " + v.reason);
  std::vector<SectorProtocol> out;
  for (const auto& [n, s] : src.sectors()) {
    if (s.squaredNorm() < kWeightTol) continue;
    const CMatrix& t = tgt.sectors().at(n);
    int da = static_cast<int>(s.rows()), db = static_cast<int>(s.cols());
    int d = std::min(da, db);
    Eigen::JacobiSVD<CMatrix> ss(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::JacobiSVD<CMatrix> ts(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
    std::vector<double> lam(d), mu(d);
    for (int k = 0; k < d; ++k) {
      lam[k] = ss.singularValues()(k) * ss.singularValues()(k);
      mu[k] = ts.singularValues()(k) * ts.singularValues()(k);
    }
    const CMatrix& u = ss.matrixU();
    const CMatrix& up = ts.matrixU();
    CMatrix vb = ss.matrixV().conjugate(), vbp = ts.matrixV().conjugate();
    SectorProtocol proto;
    proto.sector = n;
    for (const auto& [p, perm] : permutation_mixture(lam, mu)) {
      CMatrix m = CMatrix::Zero(da, da);
      for (int k = 0; k < d; ++k)
        if (lam[k] > kWeightTol)
          m += std::sqrt(p * mu[perm[k]] / lam[k]) * up.col(perm[k]) * u.col(k).adjoint();
      CMatrix w = CMatrix::Zero(db, db);
      for (int k = 0; k < db; ++k) {
        int pk = k < d ? perm[k] : k;
        w += vbp.col(pk) * vb.col(k).adjoint();
      }
      proto.weights.push_back(p);
      proto.alice.push_back(m);
      proto.bob.push_back(w);
    }
    CMatrix q = CMatrix::Zero(da, da);
    for (int k = 0; k < da; ++k)
      if (k >= d || lam[k] <= kWeightTol) q += u.col(k) * u.col(k).adjoint();
    if (q.cwiseAbs().maxCoeff() > 0.0) {
      proto.weights.push_back(0.0);
      proto.alice.push_back(q);
      proto.bob.push_back(CMatrix::Identity(db, db));
    }
    out.push_back(std::move(proto));
  }
  return out;
}

std::map<int, double> protocol_fidelities(const SectoredPureState& source, const SectoredPureState& target,
                                          const std::vector<SectorProtocol>& protocol) {
  SectoredPureState src = source.normalized(), tgt = target.normalized();
  std::map<int, double> fid;
  for (const auto& proto : protocol) {
    const CMatrix& s = src.sectors().at(proto.sector);
    const CMatrix& t = tgt.sectors().at(proto.sector);
    double w = s.squaredNorm();
    double f = 0.0;
    for (std::size_t j = 0; j < proto.alice.size(); ++j) {
      CMatrix o = proto.alice[j] * s * proto.bob[j].transpose();
      f += std::norm((t.conjugate().cwiseProduct(o)).sum());
    }
    fid[proto.sector] = f / (w * w);
  }
  return fid;
}

std::map<int, double> product_state_distribution(const SectoredPureState& phi, int copies) {
  if (copies < 1) throw Error(ErrorCode::invalid_argument, "copies must be >= 1");
  if (copies > 500) throw Error(ErrorCode::scale_exceeded, "more than 500 copies");
  auto weights = phi.normalized().sector_weights();
  int lo = weights.begin()->first, hi = weights.rbegin()->first;
  int levels = hi - lo + 1;
  std::vector<double> logp(levels, -INFINITY);
  for (const auto& [n, w] : weights)
    if (w > 0.0) logp[n - lo] = std::log(w);
  double compositions = std::exp(std::lgamma(copies + levels) - std::lgamma(copies + 1.0) - std::lgamma(levels));
  if (compositions > 2e6) throw Error(ErrorCode::scale_exceeded, "too many occupation patterns");
  std::map<int, double> dist;
  for (int n = copies * lo; n <= copies * hi; ++n) dist[n] = 0.0;
  double base = std::lgamma(copies + 1.0);
  std::vector<int> counts(levels, 0);
  std::function<void(int, int, double, int)> rec = [&](int level, int left, double logw, int n) {
    if (level == levels - 1) {
      double lw = logw;
      if (left > 0) {
        if (!std::isfinite(logp[level])) return;
        lw += left * logp[level] - std::lgamma(left + 1.0);
      }
      dist[n + left * (lo + level)] += std::exp(base + lw);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      if (c > 0 && !std::isfinite(logp[level])) break;
      double lw = logw + (c > 0 ? c * logp[level] : 0.0) - std::lgamma(c + 1.0);
      rec(level + 1, left - c, lw, n + c * (lo + level));
    }
  };
  rec(0, copies, 0.0, 0);
  return dist;
}

GaussianConvergence gaussian_convergence(const SectoredPureState& phi, int copies) {
  GaussianConvergence out;
  auto weights = phi.normalized().sector_weights();
  std::vector<int> support;
  for (const auto& [n, w] : weights)
    if (w > kWeightTol) support.push_back(n);
  int g = 0;
  for (int n : support) g = std::gcd(g, n - support.front());
  if (g == 0) throw Error(ErrorCode::invalid_argument, "state has a definite local particle number (zero SiV)");
  if (g > 1) {
    out.gap_detected = true;
    out.gap_period = g;
    return out;
  }
  auto dist = product_state_distribution(phi, copies);
  double mean = 0.0, m2 = 0.0;
  for (const auto& [n, w] : dist) {
    mean += w * n;
    m2 += w * n * static_cast<double>(n);
  }
  double var = m2 - mean * mean;
  out.variance_ratio = var / (copies * siv(phi) / 4.0);
  std::map<int, double> gauss;
  double z = 0.0;
  for (const auto& [n, w] : dist) {
    double x = std::exp(-(n - mean) * (n - mean) / (2.0 * var));
    gauss[n] = x;
    z += x;
  }
  double kl = 0.0;
  for (const auto& [n, w] : dist)
    if (w > 0.0) kl += w * std::log2(w / (gauss[n] / z));
  out.kl_divergence = std::max(kl, 0.0);
  return out;
}

bool typical_subspace_bounds(int copies, double p0, double epsilon) {
  if (copies < 1 || !(p0 > 0.0 && p0 < 1.0) || !(epsilon > 0.0 && epsilon < std::min(p0, 1.0 - p0)))
    throw Error(ErrorCode::invalid_argument, "need N >= 1, 0 < p0 < 1, 0 < eps < min(p0, 1 - p0)");
  const double ln2 = std::log(2.0);
  for (int n0 = 0; n0 <= copies; ++n0) {
    double f = static_cast<double>(n0) / copies;
    if (!(std::abs(f - p0) < epsilon)) continue;
    double log2c = (std::lgamma(copies + 1.0) - std::lgamma(n0 + 1.0) - std::lgamma(copies - n0 + 1.0)) / ln2;
    double nh = copies * binary_entropy(f);
    if (log2c > nh + 1e-9) return false;
    if (log2c < nh - 2.0 * std::log2(copies + 1.0) - 1e-9) return false;
  }
  return true;
}

ResourceSplit resource_split(const SectoredPureState& phi, SplitUnit unit) {
  SectoredPureState s = phi.normalized();
  std::vector<int> support;
  for (const auto& [n, w] : s.sector_weights())
    if (w > kWeightTol) support.push_back(n);
  int span = support.back() - support.front();
  double e = eoe(s), v = siv(s);
  if (unit == SplitUnit::vepr) {
    if (span > 1) throw Error(ErrorCode::not_a_qubit_state, "local particle number takes more than two adjacent values");
    return {e - v, v};
  }
  if (span > 2 || (support.size() > 2) || (span == 1))
    throw Error(ErrorCode::not_a_qubit_state, "local particle number must take values in {m, m+2}");
  return {e - v / 4.0, v / 4.0};
}

ProjectionBoundTrial number_projection_bound_trial(const GeneralPureState& psi) {
  const CMatrix& c = psi.coefficients;
  if (c.rows() != psi.alice.dimension() || c.cols() != psi.bob.dimension())
    throw Error(ErrorCode::dimension_mismatch, "coefficient matrix shape");
  double nrm2 = c.squaredNorm();
  if (nrm2 == 0.0) throw Error(ErrorCode::zero_vector, "zero state");
  int top = 0;
  std::map<int, CMatrix> parts;
  for (int i = 0; i < c.rows(); ++i)
    for (int j = 0; j < c.cols(); ++j) {
      if (std::abs(c(i, j)) <= 1e-15) continue;
      int n = psi.alice.label(i).particles + psi.bob.label(j).particles;
      top = std::max(top, n);
      auto it = parts.find(n);
      if (it == parts.end()) it = parts.emplace(n, CMatrix::Zero(c.rows(), c.cols())).first;
      it->second(i, j) = c(i, j);
    }
  ProjectionBoundTrial t;
  t.max_total = top;
  for (const auto& [n, m] : parts) t.lhs += m.squaredNorm() / nrm2 * entanglement_entropy(m);
  t.rhs = entanglement_entropy(c) + std::log2(top + 1.0);
  return t;
}

}  // namespace ssrent
