#include "ssrent/reference_frames.hpp"

#include <cmath>
#include <numbers>

#include "ssrent/formation.hpp"
#include "ssrent/monotones.hpp"

namespace ssrent {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// pure state sum_m amp[m] |m, T - m> on levels(T) x levels(T)
SectoredPureState profile_state(const std::vector<double>& amp) {
  int t = static_cast<int>(amp.size()) - 1;
  LocalSpace s = LocalSpace::levels(t);
  std::map<int, CMatrix> sec;
  for (int m = 0; m <= t; ++m) sec.emplace(m, CMatrix::Constant(1, 1, amp[m]));
  return SectoredPureState(s, s, t, std::move(sec));
}

// sum_m a_m a_{m+D} for a real profile
Kernel profile_kernel(const std::vector<double>& amp, int max_delta) {
  int n = static_cast<int>(amp.size());
  int lim = max_delta < 0 ? n - 1 : std::min(max_delta, n - 1);
  Kernel c;
  for (int d = 0; d <= lim; ++d) {
    double s = 0.0;
    for (int m = 0; m + d < n; ++m) s += amp[m] * amp[m + d];
    c[d] = s;
    if (d > 0) c[-d] = s;
  }
  return c;
}

double poisson_tail(double mean, int cutoff) {
  double tail = 0.0;
  for (int k = cutoff + 1;; ++k) {
    double p = poisson_weight(mean, k);
    tail += p;
    if (k > mean && p < 1e-300) break;
    if (k > mean && p < tail * 1e-17) break;
  }
  return tail;
}

void require_nondegenerate(const BlockDensityMatrix& frame) {
  if (!frame.alice_space().nondegenerate() || !frame.bob_space().nondegenerate())
    throw Error(ErrorCode::invalid_argument, "frame must live on non-degenerate level spaces");
}

}  // namespace

SectoredPureState fourier_hiding_state(int n_states, int k) {
  if (n_states < 1) throw Error(ErrorCode::invalid_argument, "N must be >= 1");
  if (k < 0 || k >= n_states) throw Error(ErrorCode::index_out_of_range, "k must satisfy 0 <= k < N");
  LocalSpace s = LocalSpace::levels(n_states - 1);
  std::map<int, CMatrix> sec;
  double norm = 1.0 / std::sqrt(static_cast<double>(n_states));
  for (int n = 0; n < n_states; ++n)
    sec.emplace(n, CMatrix::Constant(1, 1, norm * std::polar(1.0, kTwoPi * ((static_cast<long>(k) * n) % n_states) / n_states)));
  return SectoredPureState(s, s, n_states - 1, std::move(sec));
}

const char* to_string(Task task) { return task == Task::distinguish ? "distinguish" : "teleport"; }

const char* to_string(HelperKind kind) {
  switch (kind) {
    case HelperKind::constant: return "constant";
    case HelperKind::gaussian: return "gaussian";
    case HelperKind::rho_sep: return "rho_sep";
    case HelperKind::coherent: return "coherent";
  }
  return "?";
}

Kernel task_kernel(Task task, int n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "N must be >= 1");
  Kernel k;
  double nn = n;
  for (int d = -(n - 1); d <= n - 1; ++d) {
    double overlap = n - std::abs(d);
    if (task == Task::distinguish) k[d] = overlap / (nn * nn);
    else k[d] = (overlap + (d == 0 ? nn : 0.0)) / (nn * (nn + 1.0));
  }
  return k;
}

Kernel teleport_kernel_single_delta(int n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "N must be >= 1");
  Kernel k;
  double nn = n;
  for (int d = -(n - 1); d <= n - 1; ++d) k[d] = (n - std::abs(d) + (d == 0 ? 1.0 : 0.0)) / (nn * (nn + 1.0));
  return k;
}

void validate(const HelperProfile& helper) {
  switch (helper.kind) {
    case HelperKind::constant:
      if (!(helper.size >= 1.0) || helper.size != std::floor(helper.size))
        throw Error(ErrorCode::invalid_argument, "constant helper needs an integer M >= 1");
      break;
    case HelperKind::gaussian:
      if (!(helper.size > 0.0) || !std::isfinite(helper.size))
        throw Error(ErrorCode::invalid_argument, "gaussian helper needs V > 0");
      break;
    case HelperKind::coherent:
      if (!(helper.size > 0.0) || !std::isfinite(helper.size))
        throw Error(ErrorCode::invalid_argument, "coherent helper needs alpha > 0");
      break;
    case HelperKind::rho_sep:
      break;
  }
}

std::vector<double> gaussian_helper_amplitudes(double v) {
  if (!(v > 0.0)) throw Error(ErrorCode::out_of_range, "V must be > 0");
  double sigma = std::sqrt(v) / 2.0;
  int k = static_cast<int>(std::ceil(6.0 * sigma));
  if (k > 5'000'000) throw Error(ErrorCode::scale_exceeded, "gaussian helper too wide");
  std::vector<double> amp(2 * k + 1);
  double norm = 0.0;
  for (int m = -k; m <= k; ++m) {
    double a = std::exp(-static_cast<double>(m) * m / v);
    amp[m + k] = a;
    norm += a * a;
  }
  norm = std::sqrt(norm);
  for (double& a : amp) a /= norm;
  return amp;
}

BlockDensityMatrix helper_state(const HelperProfile& helper) {
  validate(helper);
  switch (helper.kind) {
    case HelperKind::constant: {
      int m = static_cast<int>(helper.size);
      return profile_state(std::vector<double>(m, 1.0 / std::sqrt(static_cast<double>(m)))).density();
    }
    case HelperKind::gaussian:
      return profile_state(gaussian_helper_amplitudes(helper.size)).density();
    case HelperKind::rho_sep:
      return rho_sep().density();
    case HelperKind::coherent:
      return coherent_reference(helper.size, coherent_cutoff(helper.size));
  }
  throw Error(ErrorCode::invalid_argument, "unknown helper");
}

Kernel frame_kernel(const BlockDensityMatrix& frame) {
  require_nondegenerate(frame);
  Kernel c;
  for (const auto& [t, m] : frame.blocks()) {
    BlockBasis basis = frame.basis(t);
    const auto& labels = basis.labels();
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) c[labels[j].first.particles - labels[i].first.particles] += m(i, j).real();
  }
  return c;
}

Kernel helper_kernel(const HelperProfile& helper, int max_delta) {
  validate(helper);
  switch (helper.kind) {
    case HelperKind::constant: {
      int m = static_cast<int>(helper.size);
      int lim = max_delta < 0 ? m - 1 : std::min(max_delta, m - 1);
      Kernel c;
      for (int d = -lim; d <= lim; ++d) c[d] = static_cast<double>(m - std::abs(d)) / m;
      return c;
    }
    case HelperKind::gaussian:
      return profile_kernel(gaussian_helper_amplitudes(helper.size), max_delta);
    case HelperKind::rho_sep:
      return frame_kernel(rho_sep().density());
    case HelperKind::coherent: {
      double mean = 2.0 * helper.size * helper.size;
      int cutoff = coherent_cutoff(helper.size);
      int lim = max_delta < 0 ? cutoff : std::min(max_delta, cutoff);
      double kept = 0.0;
      Kernel c;
      for (int t = 0; t <= cutoff; ++t) {
        double p = poisson_weight(mean, t);
        kept += p;
        if (p == 0.0) continue;
        for (int d = 0; d <= std::min(lim, t); ++d) {
          double s = 0.0;
          for (int n = 0; n + d <= t; ++n)
            s += std::exp(0.5 * (log_binomial(t, n) + log_binomial(t, n + d)) - t * std::numbers::ln2);
          c[d] += p * s;
        }
      }
      for (auto& [d, v] : c) v /= kept;
      for (int d = 1; d <= lim; ++d) c[-d] = c[d];
      return c;
    }
  }
  throw Error(ErrorCode::invalid_argument, "unknown helper");
}

double gaussian_kernel_closed_form(double v, int delta) { return std::exp(-static_cast<double>(delta) * delta / (2.0 * v)); }

double kernel_overlap(const Kernel& pi, const Kernel& c) {
  double s = 0.0;
  for (const auto& [d, w] : pi) {
    auto it = c.find(d);
    if (it != c.end()) s += w * it->second;
  }
  return s;
}

double error_probability(Task task, const HelperProfile& helper, int n) {
  return 1.0 - kernel_overlap(task_kernel(task, n), helper_kernel(helper, n - 1));
}

double table_closed_form(Task task, HelperKind kind, int n, double size) {
  double nn = n;
  if (kind == HelperKind::constant)
    return task == Task::distinguish ? (nn + 1.0) * (nn - 1.0) / (3.0 * size * nn) : nn / (3.0 * size);
  if (kind == HelperKind::gaussian)
    return task == Task::distinguish ? (nn + 1.0) * (nn - 1.0) / (12.0 * size) : nn * (nn - 1.0) / (12.0 * size);
  throw Error(ErrorCode::invalid_argument, "no closed form for this helper");
}

GaussianRatio gaussian_ratio_check(const SectoredPureState& phi, double v_helper) {
  if (!(v_helper > 0.0)) throw Error(ErrorCode::out_of_range, "V must be > 0");
  std::map<int, double> w = phi.sector_weights();
  double norm = 0.0;
  for (const auto& [n, p] : w) norm += p;
  Kernel pi;
  for (const auto& [n, p] : w)
    for (const auto& [m, q] : w) pi[m - n] += p * q / (norm * norm);
  int span = pi.empty() ? 0 : pi.rbegin()->first;
  GaussianRatio r;
  r.p_err = 1.0 - kernel_overlap(pi, helper_kernel({HelperKind::gaussian, v_helper}, span));
  r.ratio = siv(phi) / (4.0 * v_helper);
  return r;
}

int required_helper_size(int n, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::out_of_range, "eps must be > 0");
  for (int m = 1; m <= 10'000'000; ++m)
    if (error_probability(Task::distinguish, {HelperKind::constant, static_cast<double>(m)}, n) <= eps) return m;
  throw Error(ErrorCode::scale_exceeded, "helper size above 1e7");
}

double simulate_distinguish(int n, const BlockDensityMatrix& frame) {
  require_nondegenerate(frame);
  int fa = frame.alice_space().max_particles(), fb = frame.bob_space().max_particles();
  double success = 0.0;
  for (int k = 0; k < n; ++k) {
    BlockDensityMatrix rho = tensor(fourier_hiding_state(n, k).density(), frame);
    RegisterPair ra(LocalSpace::levels(n - 1), frame.alice_space());
    RegisterPair rb(LocalSpace::levels(n - 1), frame.bob_space());
    for (const auto& [tot, m] : rho.blocks()) {
      BlockBasis basis = rho.basis(tot);
      for (int a = 0; a <= ra.combined().max_particles(); ++a) {
        int b = tot - a;
        if (b < 0 || b > rb.combined().max_particles()) continue;
        // hidden-state index n on each side: Alice holds n, Bob holds N-1-n
        std::vector<int> sa, sb;
        for (int x = 0; x < n; ++x) {
          if (a - x >= 0 && a - x <= fa) sa.push_back(x);
          int bx = n - 1 - x;
          if (b - bx >= 0 && b - bx <= fb) sb.push_back(x);
        }
        if (sa.empty() || sb.empty()) continue;
        std::vector<int> pos(sa.size() * sb.size());
        for (std::size_t i = 0; i < sa.size(); ++i)
          for (std::size_t j = 0; j < sb.size(); ++j) {
            LocalLabel la = ra.combine({sa[i], 0}, {a - sa[i], 0});
            LocalLabel lb = rb.combine({n - 1 - sb[j], 0}, {b - (n - 1 - sb[j]), 0});
            pos[i * sb.size() + j] = basis.position(la, lb);
          }
        for (int ja = 0; ja < n; ++ja)
          for (int jb = 0; jb < n; ++jb) {
            if ((ja + jb) % n != k) continue;
            CVector v = CVector::Zero(basis.size());
            for (std::size_t i = 0; i < sa.size(); ++i)
              for (std::size_t j = 0; j < sb.size(); ++j) {
                long ph = (static_cast<long>(ja) * sa[i] + static_cast<long>(jb) * sb[j]) % n;
                v(pos[i * sb.size() + j]) = std::polar(1.0 / n, kTwoPi * ph / n);
              }
            success += (v.adjoint() * m * v)(0, 0).real() / n;
          }
      }
    }
  }
  return success;
}

double poisson_weight(double mean, int k) {
  if (k < 0) return 0.0;
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
}

int coherent_cutoff(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::out_of_range, "alpha must be >= 0");
  double mean = 2.0 * alpha * alpha;
  int k = static_cast<int>(std::ceil(mean + 6.0 * std::sqrt(mean)));
  while (poisson_tail(mean, k) >= 1e-10) ++k;
  return k;
}

BlockDensityMatrix coherent_reference(double alpha, int cutoff) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::out_of_range, "alpha must be >= 0");
  double mean = 2.0 * alpha * alpha;
  if (cutoff < std::ceil(mean + 6.0 * std::sqrt(mean)) || poisson_tail(mean, cutoff) >= 1e-10)
    throw Error(ErrorCode::cutoff_too_small, "cutoff " + std::to_string(cutoff) + " below the truncation rule");
  if (cutoff > 400) throw Error(ErrorCode::scale_exceeded, "cutoff above 400");
  double kept = 1.0 - poisson_tail(mean, cutoff);
  LocalSpace s = LocalSpace::levels(cutoff);
  std::map<int, CMatrix> blocks;
  for (int t = 0; t <= cutoff; ++t) {
    double p = poisson_weight(mean, t) / kept;
    Eigen::VectorXd theta(t + 1);
    for (int n = 0; n <= t; ++n) theta(n) = std::exp(0.5 * log_binomial(t, n) - 0.5 * t * std::numbers::ln2);
    blocks.emplace(t, (p * theta * theta.transpose()).cast<cplx>());
  }
  return BlockDensityMatrix(s, s, std::move(blocks));
}

PhaseMixtureCertificate coherent_phase_certificate(double alpha, int cutoff, int phases) {
  BlockDensityMatrix rho = coherent_reference(alpha, cutoff);
  PhaseMixtureCertificate cert;
  cert.phases = phases > 0 ? phases : 4 * cutoff;
  if (cert.phases <= cutoff) throw Error(ErrorCode::invalid_argument, "need more phases than the cutoff");
  double mean = 2.0 * alpha * alpha;
  // coherence between totals T, T' survives the phase average with weight avg_k e^{i phi_k (T - T')}
  double worst_phase = 0.0;
  for (int d = 1; d <= cutoff; ++d) {
    cplx s = 0.0;
    for (int k = 0; k < cert.phases; ++k) s += std::polar(1.0, kTwoPi * k * d / cert.phases);
    worst_phase = std::max(worst_phase, std::abs(s) / cert.phases);
  }
  // cross-block entries of |a e^{i phi}>|a e^{i phi}> are bounded by sqrt(p_T p_T') <= 1
  cert.max_deviation = worst_phase;
  // surviving entries: product of coherent amplitudes e^{-a^2} a^n / sqrt(n!)
  for (const auto& [t, m] : rho.blocks())
    for (int n = 0; n <= t; ++n)
      for (int n2 = 0; n2 <= t; ++n2) {
        double direct;
        if (alpha == 0.0) {
          direct = t == 0 ? 1.0 : 0.0;
        } else {
          direct = std::exp(-mean + 2.0 * t * std::log(alpha) -
                            0.5 * (std::lgamma(n + 1.0) + std::lgamma(t - n + 1.0) + std::lgamma(n2 + 1.0) +
                                   std::lgamma(t - n2 + 1.0)));
        }
        cert.max_deviation = std::max(cert.max_deviation, std::abs(m(n, n2) - direct));
      }
  return cert;
}

double coherent_vf_oracle(double alpha, int cutoff) {
  double mean = 2.0 * alpha * alpha;
  double s = 0.0, kept = 0.0;
  for (int t = 0; t <= cutoff; ++t) {
    double p = poisson_weight(mean, t);
    // siv of the binomial profile over (n, T - n): 4 * T/4
    s += p * t;
    kept += p;
  }
  return s / kept;
}

TeleportResult mixed_teleport(const SectoredPureState& phi, const BlockDensityMatrix& frame) {
  LocalSpace q = LocalSpace::levels(1);
  if (!(phi.alice_space() == q) || !(phi.bob_space() == q) || phi.total_particles() != 1)
    throw Error(ErrorCode::not_a_qubit_state, "phi must be a|0,1> + b|1,0>");
  require_nondegenerate(frame);
  for (const auto& [t, m] : frame.blocks())
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        if (std::abs(m(i, j).imag()) > 1e-12 || m(i, j).real() < -1e-12)
          throw Error(ErrorCode::frame_not_nonnegative, "frame coefficients must be real and non-negative");
  SectoredPureState p = phi.normalized();
  cplx a = p.sectors().count(0) ? p.sectors().at(0)(0, 0) : cplx(0.0);
  cplx b = p.sectors().count(1) ? p.sectors().at(1)(0, 0) : cplx(0.0);
  double a2 = std::norm(a), b2 = std::norm(b);

  TeleportResult r;
  for (const auto& [t, m] : frame.blocks()) {
    BlockBasis basis = frame.basis(t);
    auto idx = [&](int n) { return basis.position({n, 0}, {t - n, 0}); };
    // Alice's total local number x + n = s; Bob's pair {(u=0, m), (u=1, m+1)}
    for (int s = 0; s <= t + 1; ++s) {
      int i0 = idx(s), i1 = idx(s - 1);  // frame (s, t-s) with u=0, (s-1, t-s+1) with u=1
      Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
      if (i0 >= 0) out(0, 0) = a2 * m(i0, i0);
      if (i1 >= 0) out(1, 1) = b2 * m(i1, i1);
      if (i0 >= 0 && i1 >= 0) {
        out(0, 1) = a * std::conj(b) * m(i0, i1);
        out(1, 0) = std::conj(out(0, 1));
        r.s_cross += m(i1, i0).real();
      }
      if (i0 >= 0) r.s_alice += m(i0, i0).real();
      if (i1 >= 0) r.s_bob += m(i1, i1).real();
      Eigen::Vector2cd target(a, b);
      r.fidelity += (target.adjoint() * out * target)(0, 0).real();
    }
  }
  r.condition_residual = std::max({std::abs(r.s_alice - r.s_bob), std::abs(r.s_alice - r.s_cross),
                                   std::abs(r.s_bob - r.s_cross)});
  return r;
}

RhoSepDistinguish rho_sep_distinguish() {
  BlockDensityMatrix rs = rho_sep().density();
  const auto& blocks = rs.blocks();
  RhoSepDistinguish d;
  double p1 = blocks.at(1).trace().real();
  double p02 = blocks.at(0).trace().real() + blocks.at(2).trace().real();
  d.vepr_branch_probability = p1;
  d.lost_branch_probability = p02;
  std::map<int, CMatrix> vepr{{1, blocks.at(1) / p1}};
  std::map<int, CMatrix> lost{{0, blocks.at(0) / p02}, {2, blocks.at(2) / p02}};
  d.vepr_branch_success = simulate_distinguish(2, BlockDensityMatrix(rs.alice_space(), rs.bob_space(), vepr));
  d.lost_branch_success = simulate_distinguish(2, BlockDensityMatrix(rs.alice_space(), rs.bob_space(), lost));
  d.success_probability = p1 * d.vepr_branch_success + p02 * d.lost_branch_success;
  d.simulated = simulate_distinguish(2, rs);
  return d;
}

QuantumHiding quantum_hide(cplx alpha, cplx beta, int n) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "N must be >= 2");
  if (n > 6) throw Error(ErrorCode::scale_exceeded, "N above 6");
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-12)
    throw Error(ErrorCode::not_normalized, "|alpha|^2 + |beta|^2 must be 1");
  std::vector<cplx> c(n, 0.0);
  c[0] = alpha;
  c[1] = beta;
  LocalSpace payload = LocalSpace::levels(n - 1);
  // flag levels 0, N, 2N, ...; the levels in between are never occupied and carry no states
  std::vector<int> flag_deg(n * (n - 1) + 1, 0);
  for (int j = 0; j < n; ++j) flag_deg[j * n] = 1;
  LocalSpace flag(flag_deg);
  auto shifted = [&](int k) {
    std::map<int, CMatrix> sec;
    for (int x = 0; x < n; ++x) sec.emplace(x, CMatrix::Constant(1, 1, c[(x + k) % n]));
    return SectoredPureState(payload, payload, n - 1, std::move(sec));
  };
  // flag: Fourier state on levels spaced by N, so the local number fixes both registers
  auto flag_amp = [&](int k, int j) { return std::polar(1.0 / std::sqrt(static_cast<double>(n)), kTwoPi * ((k * j) % n) / n); };
  auto flag_state = [&](int k) {
    std::map<int, CMatrix> sec;
    for (int j = 0; j < n; ++j) sec.emplace(j * n, CMatrix::Constant(1, 1, flag_amp(k, j)));
    return SectoredPureState(flag, flag, n * (n - 1), std::move(sec));
  };
  std::vector<BlockDensityMatrix> phis, flags;
  for (int k = 0; k < n; ++k) {
    phis.push_back(shifted(k).density());
    flags.push_back(flag_state(k).density());
  }
  std::vector<std::pair<double, BlockDensityMatrix>> hid, uncorrelated;
  for (int k = 0; k < n; ++k) {
    hid.emplace_back(1.0 / n, tensor(phis[k], flags[k]));
    for (int j = 0; j < n; ++j) uncorrelated.emplace_back(1.0 / (n * n), tensor(phis[k], flags[j]));
  }
  QuantumHiding h{mixture(hid), shifted(0), n * n - 1, 0.0, 1.0};
  h.dephasing_residual = max_abs_difference(dephase(h.hidden), dephase(mixture(uncorrelated)));

  // global recovery: project onto flag k, undo the cyclic shift
  RegisterPair ra(payload, flag), rb(payload, flag);
  for (int k = 0; k < n; ++k) {
    CMatrix pk = CMatrix::Zero(n, n);
    for (int x = 0; x < n; ++x)
      for (int x2 = 0; x2 < n; ++x2)
        for (int j = 0; j < n; ++j)
          for (int j2 = 0; j2 < n; ++j2) {
            LocalLabel a1 = ra.combine({x, 0}, {j * n, 0}), b1 = rb.combine({n - 1 - x, 0}, {(n - 1 - j) * n, 0});
            LocalLabel a2 = ra.combine({x2, 0}, {j2 * n, 0}), b2 = rb.combine({n - 1 - x2, 0}, {(n - 1 - j2) * n, 0});
            pk(x, x2) += std::conj(flag_amp(k, j)) * h.hidden.element(a1, b1, a2, b2) * flag_amp(k, j2);
          }
    pk /= pk.trace().real();
    Eigen::SelfAdjointEigenSolver<CMatrix> es(pk);
    CVector u = es.eigenvectors().col(n - 1);
    CVector rec(n);
    for (int m = 0; m < n; ++m) rec(m) = u(((m - k) % n + n) % n);
    int lead = 0;
    rec.cwiseAbs().maxCoeff(&lead);
    rec *= std::polar(1.0, -std::arg(rec(lead)));
    for (int m = 0; m < n; ++m)
      if (std::abs(rec(m)) < 1e-15) rec(m) = 0.0;
    CVector expected(n);
    for (int x = 0; x < n; ++x) expected(x) = c[(x + k) % n];
    h.recovery_fidelity = std::min(h.recovery_fidelity, (expected.adjoint() * pk * expected)(0, 0).real());
    if (k == 0) {
      std::map<int, CMatrix> sec;
      for (int m = 0; m < n; ++m) sec.emplace(m, CMatrix::Constant(1, 1, rec(m)));
      h.recovered = SectoredPureState(payload, payload, n - 1, std::move(sec));
    }
  }
  return h;
}

}  // namespace ssrent
