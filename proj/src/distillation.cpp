#include "ssrent/distillation.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <random>

#include "ssrent/formation.hpp"
#include "ssrent/monotones.hpp"

namespace ssrent {

QubitSSRState standard_state(double v, double w) {
  if (!(v >= 0.0 && v <= 1.0 + 1e-12) || !(w >= 0.0))
    throw Error(ErrorCode::out_of_range, "standard form needs 0 <= v <= 1 and w >= 0");
  v = std::min(v, 1.0);
  double z = 2.0 * (1.0 + w);
  return QubitSSRState(w / z, 1.0 / z, 1.0 / z, w / z, v / z);
}

FilterPair standard_form_filters(const QubitSSRState& rho) {
  if (!(rho.w01() * rho.w10() > 0.0))
    throw Error(ErrorCode::degenerate_block, "one-particle block has w01 w10 = 0");
  FilterPair f;
  double r = std::sqrt(rho.w10() / rho.w01());  // b / a
  double ab = 1.0;
  if (rho.w00() > 0.0 && rho.w11() > 0.0) {
    ab = std::sqrt(rho.w00() / rho.w11());
  } else if (rho.w00() > 0.0 || rho.w11() > 0.0) {
    f.exact = false;
    return f;
  }
  double a = std::sqrt(ab / r), b = a * r;
  f.alice.diagonal() << 1.0, a;
  f.bob.diagonal() << 1.0, b;
  f.alice /= std::max(1.0, a);
  f.bob /= std::max(1.0, b);
  return f;
}

StandardForm standard_form(const QubitSSRState& rho) {
  FilterPair f = standard_form_filters(rho);
  double n = std::sqrt(rho.w01() * rho.w10());
  StandardForm sf;
  sf.v = std::min(1.0, rho.gamma() / n);
  sf.w = std::sqrt(rho.w00() * rho.w11()) / n;
  if (!f.exact) {
    sf.success_probability = 0.0;
    return sf;
  }
  double a0 = f.alice(0, 0), a1 = f.alice(1, 1), b0 = f.bob(0, 0), b1 = f.bob(1, 1);
  sf.success_probability = a0 * a0 * b0 * b0 * rho.w00() + a0 * a0 * b1 * b1 * rho.w01() +
                           a1 * a1 * b0 * b0 * rho.w10() + a1 * a1 * b1 * b1 * rho.w11();
  return sf;
}

StandardForm one_copy_move(const StandardForm& sf, OneCopyMove mode, double amount) {
  if (!(amount >= 0.0) || !std::isfinite(amount)) throw Error(ErrorCode::out_of_range, "amount must be >= 0");
  if (mode == OneCopyMove::increase_w) return {sf.v, sf.w + amount, 1.0};
  return {sf.v / (1.0 + amount), sf.w / (1.0 + amount), 1.0};
}

const char* to_string(RecurrenceVariant variant) {
  switch (variant) {
    case RecurrenceVariant::two_copy_a: return "two-copy-a";
    case RecurrenceVariant::two_copy_b: return "two-copy-b";
    case RecurrenceVariant::three_copy_separable: return "separable";
    case RecurrenceVariant::three_copy_entangled: return "entangled";
  }
  return "?";
}

RecurrenceVariant recurrence_variant_from_string(const std::string& name) {
  if (name == "a" || name == "two-copy-a") return RecurrenceVariant::two_copy_a;
  if (name == "b" || name == "two-copy-b") return RecurrenceVariant::two_copy_b;
  if (name == "separable" || name == "three-copy-separable") return RecurrenceVariant::three_copy_separable;
  if (name == "entangled" || name == "three-copy-entangled") return RecurrenceVariant::three_copy_entangled;
  throw Error(ErrorCode::invalid_argument, "unknown recurrence variant '" + name + "'");
}

RecurrenceMap recurrence_map(RecurrenceVariant variant) {
  RecurrenceMap m{variant, 2, {}, {}, {}};
  Eigen::MatrixXd a2(2, 4), b2(2, 4), a3(2, 8), a3e(2, 8), b3e(2, 8);
  a2 << 1, 0, 0, 0,
        0, 1, 1, 0;
  b2 << 0, 1, 1, 0,
        0, 0, 0, 1;
  a3 << 0, 1, 1, 0, 1, 0, 0, 0,
        0, 0, 0, 1, 0, 1, 1, 0;
  a3e << 0, 1, 1, 0, -1, 0, 0, 0,
         0, 0, 0, 1, 0, 1, 1, 0;
  b3e << 0, 1, 1, 0, 1, 0, 0, 0,
         0, 0, 0, -1, 0, 1, 1, 0;
  switch (variant) {
    case RecurrenceVariant::two_copy_a:
      m.alice_op = a2;
      m.bob_op = a2;
      m.closed_form = [](double v, double w) {
        return StandardForm{v, std::sqrt((1.0 + v * v + w * w) / 2.0), 1.0};
      };
      break;
    case RecurrenceVariant::two_copy_b:
      m.alice_op = a2;
      m.bob_op = b2;
      m.closed_form = [](double v, double w) {
        double s = std::sqrt(2.0 / (1.0 + v * v + w * w));
        return StandardForm{s * v, s * w, 1.0};
      };
      break;
    case RecurrenceVariant::three_copy_separable:
      m.arity = 3;
      m.alice_op = a3;
      m.bob_op = a3;
      m.closed_form = [](double v, double w) {
        double d = 1.0 + 2.0 * v * v + 2.0 * w * w;
        return StandardForm{v + (v - v * v * v) / d, w * (2.0 + 2.0 * v * v + w * w) / d, 1.0};
      };
      break;
    case RecurrenceVariant::three_copy_entangled:
      m.arity = 3;
      m.alice_op = a3e;
      m.bob_op = b3e;
      m.closed_form = [](double v, double w) {
        double d = 3.0 + 6.0 * v * v + 6.0 * w * w;
        return StandardForm{v * (6.0 + 3.0 * v * v - 2.0 * w * w) / d, w * (6.0 - 2.0 * v * v + 3.0 * w * w) / d, 1.0};
      };
      break;
  }
  return m;
}

StandardForm apply_closed_form(const StandardForm& sf, RecurrenceVariant variant) {
  StandardForm out = recurrence_map(variant).closed_form(sf.v, sf.w);
  // a negative coherence is removed by a local phase
  out.v = std::abs(out.v);
  return out;
}

StandardForm two_copy_map(const StandardForm& sf, RecurrenceVariant variant) {
  if (variant != RecurrenceVariant::two_copy_a && variant != RecurrenceVariant::two_copy_b)
    throw Error(ErrorCode::invalid_argument, "not a two-copy variant");
  return apply_closed_form(sf, variant);
}

StandardForm three_copy_map(const StandardForm& sf, RecurrenceVariant variant) {
  if (variant != RecurrenceVariant::three_copy_separable && variant != RecurrenceVariant::three_copy_entangled)
    throw Error(ErrorCode::invalid_argument, "not a three-copy variant");
  return apply_closed_form(sf, variant);
}

namespace {

// flat index in the combined register of `arity` qubits for each bit string
std::vector<int> copy_register_map(int arity, LocalSpace& combined) {
  LocalSpace q = qubit_space();
  std::vector<int> flat(1u << arity);
  if (arity == 2) {
    RegisterPair rp(q, q);
    combined = rp.combined();
    for (unsigned x = 0; x < 4; ++x)
      flat[x] = combined.flat(rp.combine({static_cast<int>(x >> 1), 0}, {static_cast<int>(x & 1u), 0}));
  } else {
    RegisterPair rp2(q, q);
    RegisterPair rp3(rp2.combined(), q);
    combined = rp3.combined();
    for (unsigned x = 0; x < 8; ++x) {
      LocalLabel l12 = rp2.combine({static_cast<int>((x >> 2) & 1u), 0}, {static_cast<int>((x >> 1) & 1u), 0});
      flat[x] = combined.flat(rp3.combine(l12, {static_cast<int>(x & 1u), 0}));
    }
  }
  return flat;
}

LocalKrausSet completed_povm(const Eigen::MatrixXd& op, const std::vector<int>& flat, const LocalSpace& combined) {
  int d = combined.dimension();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(op);
  double smax = svd.singularValues()(0);
  CMatrix m = CMatrix::Zero(2, d);
  int shift = 0;
  bool found = false;
  for (int x = 0; x < op.cols(); ++x) {
    if (op(0, x) != 0.0 && !found) {
      shift = -std::popcount(static_cast<unsigned>(x));
      found = true;
    }
    for (int r = 0; r < 2; ++r) m(r, flat[x]) = op(r, x) / smax;
  }
  CMatrix rest = CMatrix::Identity(d, d) - m.adjoint() * m;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (rest + rest.adjoint()));
  Eigen::VectorXd s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  CMatrix fail = es.eigenvectors() * s.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      if (combined.label(r).particles != combined.label(c).particles) fail(r, c) = 0.0;
  return LocalKrausSet(combined, {m, fail}, {shift, 0}, std::vector<LocalSpace>{qubit_space(), combined});
}

}  // namespace

StandardForm simulate_recurrence(const StandardForm& sf, RecurrenceVariant variant) {
  RecurrenceMap map = recurrence_map(variant);
  BlockDensityMatrix one = standard_state(sf.v, sf.w).density();
  BlockDensityMatrix rho = one;
  for (int c = 1; c < map.arity; ++c) rho = tensor(rho, one);
  LocalSpace combined;
  std::vector<int> flat = copy_register_map(map.arity, combined);
  LocalKrausSet alice = completed_povm(map.alice_op, flat, combined);
  LocalKrausSet bob = completed_povm(map.bob_op, flat, combined);
  KrausResult r = apply_local_kraus(rho, alice, bob, std::make_pair(std::size_t{0}, std::size_t{0}));
  StandardForm out = standard_form(QubitSSRState::from_density(r.state));
  out.success_probability = r.probability;
  return out;
}

IterationResult iterate_recurrence(const StandardForm& sf, RecurrenceVariant variant, double tol, int max_steps) {
  IterationResult res{sf, 0, false};
  RecurrenceMap map = recurrence_map(variant);
  for (int k = 0; k < max_steps; ++k) {
    StandardForm next = map.closed_form(res.final_form.v, res.final_form.w);
    next.v = std::abs(next.v);
    double move = std::max(std::abs(next.v - res.final_form.v), std::abs(next.w - res.final_form.w));
    res.final_form = next;
    res.steps = k + 1;
    if (move < tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

QubitSSRState distill_entanglement_projection(const StandardForm& sf) {
  if (!(sf.v >= 0.0 && sf.v <= 1.0 + 1e-12) || !(sf.w >= 0.0))
    throw Error(ErrorCode::out_of_range, "standard form needs 0 <= v <= 1 and w >= 0");
  double w2 = sf.w * sf.w, v2 = std::min(1.0, sf.v) * std::min(1.0, sf.v);
  double z = 2.0 * (1.0 + w2);
  return QubitSSRState(w2 / z, 1.0 / z, 1.0 / z, w2 / z, v2 / z);
}

namespace {

struct BranchStats {
  double eoe = 0.0;
  double siv = 0.0;
};

BranchStats block_stats(const BlockDensityMatrix& rho) {
  BranchStats st;
  for (const auto& [n, m] : rho.blocks()) {
    double tr = m.trace().real();
    if (tr < 1e-15) continue;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
    int d = static_cast<int>(m.rows());
    for (int k = 0; k < d; ++k) {
      double lam = es.eigenvalues()(k);
      if (lam < 1e-14) continue;
      SectoredPureState chi = state_from_block_vector(rho.alice_space(), rho.bob_space(), n, es.eigenvectors().col(k));
      st.eoe += lam * eoe(chi);
      st.siv += lam * siv(chi);
    }
  }
  return st;
}

}  // namespace

ExtractionResult extract_vepr(int rounds, std::uint64_t seed) {
  if (rounds < 1) throw Error(ErrorCode::invalid_argument, "rounds must be >= 1");
  LocalSpace m2 = LocalSpace::modes(2);
  std::vector<Amplitude> amps = {{mode_label(0b01, 2), mode_label(0b10, 2), 1.0},
                                 {mode_label(0b10, 2), mode_label(0b01, 2), 1.0}};
  SectoredPureState eepr = SectoredPureState::from_amplitudes(amps, m2, m2);
  BlockDensityMatrix rho = tensor(eepr.density(), rho_sep().density());
  RegisterPair reg(m2, qubit_space());
  const LocalSpace& space = reg.combined();
  // bit string e1 e2 x: the E-EPR modes, then the rho_sep qubit
  auto flat = [&](unsigned bits) {
    return space.flat(reg.combine(mode_label(bits >> 1, 2), {static_cast<int>(bits & 1u), 0}));
  };
  int d = space.dimension();
  CMatrix p1 = CMatrix::Zero(d, d), p2 = CMatrix::Zero(d, d);
  for (unsigned b : {0b010u, 0b101u}) p1(flat(b), flat(b)) = 1.0;
  for (unsigned b : {0b100u, 0b011u}) p2(flat(b), flat(b)) = 1.0;
  CMatrix rest = CMatrix::Identity(d, d) - p1 - p2;
  LocalKrausSet meas(space, {p1, p2, rest});

  ExtractionResult res;
  res.rounds = rounds;
  double fail_p = 0.0;
  std::vector<double> probs;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      KrausResult kr{rho, 0.0};
      try {
        kr = apply_local_kraus(rho, meas, meas, std::make_pair(std::size_t(i), std::size_t(j)));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::zero_probability_outcome) throw;
        probs.push_back(0.0);
        continue;
      }
      bool matched = i == j && i < 2;
      BranchStats st = block_stats(kr.state);
      res.branches.push_back({i, j, kr.probability, matched, st.eoe, st.siv});
      probs.push_back(kr.probability);
      if (matched) {
        unsigned lo = i == 0 ? 0b010u : 0b100u, hi = i == 0 ? 0b101u : 0b011u;
        LocalLabel l0 = space.label(flat(lo)), l1 = space.label(flat(hi));
        cplx f = kr.state.element(l0, l1, l0, l1) + kr.state.element(l1, l0, l1, l0) +
                 kr.state.element(l0, l1, l1, l0) + kr.state.element(l1, l0, l0, l1);
        res.success_probability += kr.probability;
        res.matched_fidelity += kr.probability * 0.5 * f.real();
        res.matched_eoe += kr.probability * st.eoe;
        res.matched_siv += kr.probability * st.siv;
      } else {
        fail_p += kr.probability;
        res.residual_entanglement += kr.probability * st.eoe;
      }
    }
  if (res.success_probability > 0.0) {
    res.matched_fidelity /= res.success_probability;
    res.matched_eoe /= res.success_probability;
    res.matched_siv /= res.success_probability;
  }
  if (fail_p > 0.0) res.residual_entanglement /= fail_p;

  Rng rng(seed);
  std::discrete_distribution<int> pick(probs.begin(), probs.end());
  int hits = 0;
  for (int r = 0; r < rounds; ++r) {
    int k = pick(rng);
    int i = k / 3, j = k % 3;
    if (i == j && i < 2) ++hits;
  }
  res.monte_carlo_yield = static_cast<double>(hits) / rounds;
  return res;
}

}  // namespace ssrent
