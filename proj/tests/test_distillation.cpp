#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ssrent/distillation.hpp"
#include "ssrent/formation.hpp"
#include "ssrent/monotones.hpp"
#include "ssrent/random.hpp"

using namespace ssrent;

namespace {

const RecurrenceVariant kAll[] = {RecurrenceVariant::two_copy_a, RecurrenceVariant::two_copy_b,
                                  RecurrenceVariant::three_copy_separable, RecurrenceVariant::three_copy_entangled};

Eigen::Matrix4cd kron2(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b) {
  Eigen::Matrix4cd k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) k(i * 2 + j, x * 2 + y) = a(i, x) * b(j, y);
  return k;
}

}  // namespace

TEST(StandardForm, Examples) {
  StandardForm s = standard_form(rho_sep());
  EXPECT_NEAR(s.v, 1.0, 1e-12);
  EXPECT_NEAR(s.w, 1.0, 1e-12);
  StandardForm v = standard_form(QubitSSRState(0, 0.5, 0.5, 0, 0.5));
  EXPECT_NEAR(v.v, 1.0, 1e-12);
  EXPECT_NEAR(v.w, 0.0, 1e-12);
  StandardForm x = standard_form(QubitSSRState(1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6, 1.0 / 3));
  EXPECT_NEAR(x.v, 1.0, 1e-12);
  EXPECT_NEAR(x.w, 0.5, 1e-12);
  EXPECT_TRUE(x.entangled());
}

TEST(StandardForm, DegenerateBlock) {
  try {
    standard_form(QubitSSRState(0.5, 0.5, 0.0, 0.0, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_block);
  }
}

TEST(StandardForm, LimitWhenOneOuterWeightVanishes) {
  StandardForm s = standard_form(QubitSSRState(0.2, 0.4, 0.4, 0.0, 0.1));
  EXPECT_EQ(s.success_probability, 0.0);
  EXPECT_NEAR(s.w, 0.0, 1e-15);
  EXPECT_FALSE(standard_form_filters(QubitSSRState(0.2, 0.4, 0.4, 0.0, 0.1)).exact);
}

TEST(StandardForm, FiltersReproduceFormAndInvert) {
  Rng rng(83);
  for (int t = 0; t < 300; ++t) {
    QubitSSRState q = QubitSSRState::from_density(random_density(rng, qubit_space(), qubit_space(), 1 + t % 4));
    StandardForm sf = standard_form(q);
    FilterPair f = standard_form_filters(q);
    ASSERT_TRUE(f.exact);
    Eigen::Matrix4cd k = kron2(f.alice, f.bob);
    Eigen::Matrix4cd out = k * q.matrix() * k.adjoint();
    double prob = out.trace().real();
    EXPECT_NEAR(prob, sf.success_probability, 1e-12);
    out /= prob;
    auto [v, w] = oracle::standard_vw(out);
    EXPECT_NEAR(std::min(v, 1.0), sf.v, 1e-10);
    EXPECT_NEAR(w, sf.w, 1e-10);
    // same through the Kraus machinery
    LocalKrausSet fa = LocalKrausSet::filter(qubit_space(), f.alice.cast<cplx>());
    LocalKrausSet fb = LocalKrausSet::filter(qubit_space(), f.bob.cast<cplx>());
    KrausResult kr = apply_local_kraus(q.density(), fa, fb, std::make_pair<std::size_t, std::size_t>(0, 0));
    EXPECT_NEAR(kr.probability, sf.success_probability, 1e-12);
    // reverse filters bring the standard state back
    Eigen::Matrix2d ia = f.alice.inverse(), ib = f.bob.inverse();
    Eigen::Matrix4cd ki = kron2(ia, ib);
    Eigen::Matrix4cd back = ki * out * ki.adjoint();
    back /= back.trace();
    EXPECT_LT((back - q.matrix()).norm(), 1e-10);
    // idempotence
    StandardForm again = standard_form(standard_state(sf.v, sf.w));
    EXPECT_NEAR(again.v, sf.v, 1e-12);
    EXPECT_NEAR(again.w, sf.w, 1e-12);
  }
}

TEST(OneCopyMoves, Examples) {
  StandardForm a = one_copy_move({1, 1}, OneCopyMove::increase_w, 0.5);
  EXPECT_DOUBLE_EQ(a.v, 1.0);
  EXPECT_DOUBLE_EQ(a.w, 1.5);
  StandardForm b = one_copy_move({1, 0}, OneCopyMove::shrink_both, 1.0);
  EXPECT_DOUBLE_EQ(b.v, 0.5);
  EXPECT_DOUBLE_EQ(b.w, 0.0);
  StandardForm c = one_copy_move({0.7, 0.3}, OneCopyMove::increase_w, 0.0);
  EXPECT_DOUBLE_EQ(c.v, 0.7);
  EXPECT_DOUBLE_EQ(c.w, 0.3);
  EXPECT_THROW(one_copy_move({1, 1}, OneCopyMove::shrink_both, -0.1), Error);
}

TEST(OneCopyMoves, MatchExplicitMixing) {
  // mixing t(|00><00|+|11><11|) into the unnormalized standard matrix raises w by t
  double v = 0.6, w = 0.4, t = 0.3;
  Eigen::Matrix4cd m = oracle::standard_matrix(v, w) * 2.0 * (1 + w);
  m(0, 0) += t;
  m(3, 3) += t;
  auto [v1, w1] = oracle::standard_vw(m / m.trace());
  StandardForm s = one_copy_move({v, w}, OneCopyMove::increase_w, t);
  EXPECT_NEAR(s.v, v1, 1e-12);
  EXPECT_NEAR(s.w, w1, 1e-12);
  Eigen::Matrix4cd n = oracle::standard_matrix(v, w) * 2.0 * (1 + w);
  n(1, 1) += t;
  n(2, 2) += t;
  auto [v2, w2] = oracle::standard_vw(n / n.trace());
  StandardForm r = one_copy_move({v, w}, OneCopyMove::shrink_both, t);
  EXPECT_NEAR(r.v, v2, 1e-12);
  EXPECT_NEAR(r.w, w2, 1e-12);
}

TEST(Recurrence, ClosedFormExamples) {
  StandardForm b = two_copy_map({1, 0}, RecurrenceVariant::two_copy_b);
  EXPECT_NEAR(b.v, 1.0, 1e-12);
  EXPECT_NEAR(b.w, 0.0, 1e-12);
  StandardForm a = two_copy_map({1, 0}, RecurrenceVariant::two_copy_a);
  EXPECT_NEAR(a.v, 1.0, 1e-12);
  EXPECT_NEAR(a.w, 1.0, 1e-12);
  StandardForm a0 = two_copy_map({0, 0}, RecurrenceVariant::two_copy_a);
  EXPECT_NEAR(a0.v, 0.0, 1e-12);
  EXPECT_NEAR(a0.w, std::sqrt(0.5), 1e-12);
  StandardForm s = three_copy_map({1, 1}, RecurrenceVariant::three_copy_separable);
  EXPECT_DOUBLE_EQ(s.v, 1.0);
  EXPECT_DOUBLE_EQ(s.w, 1.0);
  StandardForm e = three_copy_map({1, 0}, RecurrenceVariant::three_copy_entangled);
  EXPECT_DOUBLE_EQ(e.v, 1.0);
  EXPECT_DOUBLE_EQ(e.w, 0.0);
  EXPECT_THROW(two_copy_map({1, 0}, RecurrenceVariant::three_copy_separable), Error);
  EXPECT_THROW(three_copy_map({1, 0}, RecurrenceVariant::two_copy_a), Error);
}

TEST(Recurrence, EntangledIterationConverges) {
  IterationResult r = iterate_recurrence({0.8, 0.4}, RecurrenceVariant::three_copy_entangled);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.steps, 1000);
  EXPECT_NEAR(r.final_form.v, 1.0, 1e-6);
  EXPECT_NEAR(r.final_form.w, 0.0, 1e-6);
  IterationResult s = iterate_recurrence({0.5, 0.9}, RecurrenceVariant::three_copy_separable);
  EXPECT_NEAR(s.final_form.v, 1.0, 1e-6);
  EXPECT_NEAR(s.final_form.w, 1.0, 1e-6);
}

TEST(Recurrence, ClosedFormsMatchBruteForce) {
  for (RecurrenceVariant var : kAll) {
    RecurrenceMap m = recurrence_map(var);
    ASSERT_EQ(m.alice_op.rows(), 2);
    ASSERT_EQ(m.alice_op.cols(), 1 << m.arity);
    for (int i = 0; i <= 20; ++i)
      for (int j = 0; j <= 20; ++j) {
        double v = i / 20.0, w = 2.0 * j / 20.0;
        double wo = (var == RecurrenceVariant::two_copy_a && w == 0.0) ? 1e-7 : w;
        StandardForm c = apply_closed_form({v, w}, var);
        auto [bv, bw] = oracle::brute_force_recurrence(v, wo, m.alice_op, m.bob_op);
        EXPECT_NEAR(c.v, bv, 1e-10) << to_string(var) << " " << v << " " << w;
        EXPECT_NEAR(c.w, bw, 1e-10) << to_string(var) << " " << v << " " << w;
      }
  }
}

TEST(Recurrence, KrausSimulationMatchesBruteForce) {
  for (RecurrenceVariant var : kAll) {
    RecurrenceMap m = recurrence_map(var);
    for (double v : {0.1, 0.5, 0.9})
      for (double w : {0.2, 0.7, 1.6}) {
        StandardForm s = simulate_recurrence({v, w}, var);
        auto [bv, bw] = oracle::brute_force_recurrence(v, w, m.alice_op, m.bob_op);
        EXPECT_NEAR(s.v, bv, 1e-10);
        EXPECT_NEAR(s.w, bw, 1e-10);
        EXPECT_GT(s.success_probability, 0.0);
        EXPECT_LE(s.success_probability, 1.0 + 1e-12);
      }
  }
}

TEST(Recurrence, SeparableMapKeepsSeparableStates) {
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      double v = i / 20.0, w = 2.0 * j / 20.0;
      if (v > w) continue;
      StandardForm s = apply_closed_form({v, w}, RecurrenceVariant::three_copy_separable);
      EXPECT_LE(s.v, s.w + 1e-12) << v << " " << w;
    }
}

TEST(Recurrence, VariantNames) {
  for (RecurrenceVariant v : kAll) EXPECT_EQ(recurrence_variant_from_string(to_string(v)), v);
  EXPECT_THROW(recurrence_variant_from_string("bogus"), Error);
}

TEST(ProjectionDistillation, Examples) {
  QubitSSRState bell = distill_entanglement_projection({1, 0});
  EXPECT_NEAR(concurrence(bell), 1.0, 1e-12);
  EXPECT_NEAR(oracle::wootters_concurrence(bell.matrix()), 1.0, 1e-10);
  EXPECT_NEAR(concurrence(distill_entanglement_projection({1, 1})), 0.0, 1e-12);
  EXPECT_GT(concurrence(distill_entanglement_projection({0.9, 0.5})), 0.0);
  for (int i = 0; i <= 10; ++i)
    for (int j = 0; j <= 10; ++j) {
      double v = i / 10.0, w = 2.0 * j / 10.0;
      bool ent = oracle::wootters_concurrence(distill_entanglement_projection({v, w}).matrix()) > 1e-9;
      EXPECT_EQ(ent, v > w + 1e-12) << v << " " << w;
    }
}

TEST(Extraction, SingleRoundExact) {
  ExtractionResult r = extract_vepr(2000, 7);
  EXPECT_NEAR(r.success_probability, 0.5, 1e-12);
  EXPECT_NEAR(r.matched_fidelity, 1.0, 1e-12);
  EXPECT_NEAR(r.matched_eoe, 1.0, 1e-12);
  EXPECT_NEAR(r.matched_siv, 1.0, 1e-12);
  EXPECT_NEAR(r.residual_entanglement, 0.0, 1e-12);
  EXPECT_NEAR(r.monte_carlo_yield, 0.5, 0.05);
  for (const auto& b : r.branches)
    if (!b.matched) EXPECT_NEAR(b.eoe, 0.0, 1e-12);
  // yield equals V_F of the consumed rho_sep
  EXPECT_NEAR(r.success_probability * r.matched_siv, formation_point(rho_sep()).vf_ssr, 1e-12);
}
