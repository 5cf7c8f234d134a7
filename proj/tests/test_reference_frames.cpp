#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ssrent/formation.hpp"
#include "ssrent/monotones.hpp"
#include "ssrent/reference_frames.hpp"
#include "states.hpp"

using namespace ssrent;

TEST(FourierStates, OrthogonalAndDephasedIdentical) {
  for (int n = 1; n <= 8; ++n) {
    BlockDensityMatrix d0 = dephase(fourier_hiding_state(n, 0).density());
    for (int k = 0; k < n; ++k) {
      SectoredPureState zk = fourier_hiding_state(n, k);
      EXPECT_NEAR(zk.norm(), 1.0, 1e-12);
      for (int j = 0; j < k; ++j) EXPECT_LT(std::abs(zk.inner(fourier_hiding_state(n, j))), 1e-12);
      EXPECT_LT(max_abs_difference(dephase(zk.density()), d0), 1e-12);
    }
  }
}

TEST(Kernels, NormalizedAndSymmetric) {
  for (int n = 1; n <= 6; ++n)
    for (Task t : {Task::distinguish, Task::teleport}) {
      double s = 0.0;
      for (auto [d, w] : task_kernel(t, n)) {
        s += w;
        EXPECT_DOUBLE_EQ(w, task_kernel(t, n).at(-d));
      }
      EXPECT_NEAR(s, 1.0, 1e-12);
    }
}

TEST(Kernels, TeleportKernelMatchesHaarAverage) {
  for (int n = 2; n <= 4; ++n) {
    auto mc = oracle::haar_teleport_kernel(n, 200000, 1000 + n);
    for (auto [d, w] : task_kernel(Task::teleport, n)) EXPECT_NEAR(mc.at(d), w, 3e-3) << n << " " << d;
    // the single-delta variant is visibly off at D = 0
    EXPECT_GT(std::abs(mc.at(0) - teleport_kernel_single_delta(n).at(0)), 0.05);
  }
}

TEST(Kernels, ConstantHelperExactSums) {
  for (int n = 1; n <= 6; ++n)
    for (int m = 1; m <= 64; ++m) {
      double d = error_probability(Task::distinguish, {HelperKind::constant, double(m)}, n);
      double t = error_probability(Task::teleport, {HelperKind::constant, double(m)}, n);
      EXPECT_NEAR(d, oracle::constant_helper_error(false, n, m), 1e-12);
      EXPECT_NEAR(t, oracle::constant_helper_error(true, n, m), 1e-12);
      if (m >= n - 1) {
        EXPECT_NEAR(d, table_closed_form(Task::distinguish, HelperKind::constant, n, m), 1e-12);
        EXPECT_NEAR(t, (n - 1.0) / (3.0 * m), 1e-12);
      }
    }
}

TEST(Kernels, GaussianHelperAsymptotics) {
  for (int n = 2; n <= 6; ++n)
    for (double v : {1e4, 4e4}) {
      for (Task t : {Task::distinguish, Task::teleport}) {
        double exact = error_probability(t, {HelperKind::gaussian, v}, n);
        double closed = table_closed_form(t, HelperKind::gaussian, n, v);
        EXPECT_NEAR(exact / closed, 1.0, 0.01) << n << " " << v;
      }
      for (int d = 0; d < n; ++d)
        EXPECT_NEAR(helper_kernel({HelperKind::gaussian, v}).at(d), gaussian_kernel_closed_form(v, d), 1e-9);
    }
}

TEST(Kernels, GaussianHelperSiv) {
  auto amp = gaussian_helper_amplitudes(400.0);
  double m1 = 0, m2 = 0;
  int k = static_cast<int>(amp.size() / 2);
  for (int i = 0; i < static_cast<int>(amp.size()); ++i) {
    double p = amp[i] * amp[i], m = i - k;
    m1 += p * m;
    m2 += p * m * m;
  }
  // truncation at six standard deviations costs ~1e-7 relative
  EXPECT_NEAR(4 * (m2 - m1 * m1), 400.0, 1e-4);
}

TEST(Kernels, PipelineMatchesDensityMatrixSimulation) {
  for (int n = 1; n <= 4; ++n)
    for (int m = 1; m <= 8; ++m) {
      HelperProfile h{HelperKind::constant, double(m)};
      EXPECT_NEAR(1.0 - simulate_distinguish(n, helper_state(h)), error_probability(Task::distinguish, h, n), 1e-10);
    }
  // a frame with no phase information leaves the states hidden
  std::vector<Amplitude> a{{{0, 0}, {0, 0}, 1.0}};
  BlockDensityMatrix empty = SectoredPureState::from_amplitudes(a).density();
  for (int n = 1; n <= 4; ++n) EXPECT_NEAR(simulate_distinguish(n, empty), 1.0 / n, 1e-12);
}

TEST(Kernels, RequiredHelperSize) {
  int m = required_helper_size(3, 0.01);
  EXPECT_LE(error_probability(Task::distinguish, {HelperKind::constant, double(m)}, 3), 0.01);
  EXPECT_GT(error_probability(Task::distinguish, {HelperKind::constant, double(m - 1)}, 3), 0.01);
}

TEST(Kernels, GaussianRatio) {
  SectoredPureState phi = fixtures::vepr();
  GaussianRatio g = gaussian_ratio_check(phi, 1e4);
  EXPECT_NEAR(g.ratio, siv(phi) / 4e4, 1e-15);
  EXPECT_NEAR(g.p_err / g.ratio, 1.0, 0.01);
}

TEST(HelperValidation, Errors) {
  EXPECT_THROW(helper_state({HelperKind::constant, 0.0}), Error);
  EXPECT_THROW(helper_state({HelperKind::constant, 2.5}), Error);
  EXPECT_THROW(helper_state({HelperKind::gaussian, -1.0}), Error);
  EXPECT_THROW(table_closed_form(Task::teleport, HelperKind::rho_sep, 2, 1), Error);
}

TEST(RhoSepFrame, DistinguishBranches) {
  RhoSepDistinguish r = rho_sep_distinguish();
  EXPECT_NEAR(r.vepr_branch_probability, 0.5, 1e-12);
  EXPECT_NEAR(r.lost_branch_probability, 0.5, 1e-12);
  EXPECT_NEAR(r.lost_branch_success, 0.5, 1e-12);
  EXPECT_NEAR(r.vepr_branch_success, 0.75, 1e-12);
  EXPECT_NEAR(r.success_probability, 0.625, 1e-12);
  EXPECT_NEAR(r.simulated, r.success_probability, 1e-12);
  // a pure V-EPR frame on its own
  EXPECT_NEAR(simulate_distinguish(2, fixtures::vepr().density()), 0.75, 1e-12);
}

TEST(CoherentFrame, ReferenceState) {
  double alpha = 2.0;
  int cutoff = coherent_cutoff(alpha);
  BlockDensityMatrix r = coherent_reference(alpha, cutoff);
  EXPECT_NEAR(r.trace(), 1.0, 1e-12);
  EXPECT_GE(r.min_eigenvalue(), -1e-12);
  PhaseMixtureCertificate c = coherent_phase_certificate(alpha, cutoff);
  EXPECT_LT(c.max_deviation, 1e-8);
  EXPECT_NEAR(coherent_vf_oracle(alpha, cutoff), oracle::poisson_mean_by_sum(2 * alpha * alpha, cutoff), 1e-8);
  EXPECT_NEAR(coherent_vf_oracle(3.0, coherent_cutoff(3.0)), 18.0, 1e-8);
  try {
    coherent_reference(alpha, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::cutoff_too_small);
  }
}

TEST(CoherentFrame, TeleportTrend) {
  SectoredPureState phi = fixtures::qubit_pure(0.3);
  double prev_inf = 1.0, prev_res = 1.0;
  for (double alpha : {2.0, 4.0, 6.0, 8.0}) {
    TeleportResult t = mixed_teleport(phi, coherent_reference(alpha, coherent_cutoff(alpha)));
    EXPECT_LT(1 - t.fidelity, prev_inf);
    EXPECT_LT(t.condition_residual, prev_res);
    prev_inf = 1 - t.fidelity;
    prev_res = t.condition_residual;
  }
  EXPECT_LT(prev_res, 0.01);
}

TEST(CoherentFrame, TeleportErrors) {
  BlockDensityMatrix f = coherent_reference(1.0, coherent_cutoff(1.0));
  try {
    mixed_teleport(fixtures::eepr(), f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_a_qubit_state);
  }
  // a perfect frame for one-particle transfer: fidelity from the V-EPR coherence alone
  TeleportResult v = mixed_teleport(fixtures::vepr(), fixtures::vepr().density());
  EXPECT_GT(v.fidelity, 0.5);
  EXPECT_LE(v.fidelity, 1.0 + 1e-12);
}

TEST(QuantumHiding, RoundTrip) {
  for (int n = 2; n <= 6; ++n)
    for (auto [a, b] : {std::pair<cplx, cplx>{1.0, 0.0}, {std::sqrt(0.5), cplx(0, std::sqrt(0.5))},
                        {0.6, cplx(0.48, 0.64)}}) {
      QuantumHiding h = quantum_hide(a, b, n);
      EXPECT_EQ(h.particle_cost, n * n - 1);
      EXPECT_LT(h.dephasing_residual, 1e-12);
      EXPECT_GT(h.recovery_fidelity, 1 - 1e-12);
    }
  EXPECT_THROW(quantum_hide(1.0, 1.0, 3), Error);
  EXPECT_THROW(quantum_hide(1.0, 0.0, 7), Error);
}
