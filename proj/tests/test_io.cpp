#include <gtest/gtest.h>

#include "ssrent/formation.hpp"
#include "ssrent/io.hpp"
#include "ssrent/random.hpp"
#include "ssrent/reference_frames.hpp"
#include "states.hpp"

using namespace ssrent;

namespace {

std::string error_text(const std::string& json) {
  try {
    parse_state(json);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::parse_error);
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Json, PureRoundTripIsBitExact) {
  Rng rng(91);
  for (int t = 0; t < 50; ++t) {
    SectoredPureState s = random_pure_state(rng, LocalSpace({1, 2, 1}), LocalSpace::levels(3), 1 + t % 4);
    std::string a = to_json(s);
    SectoredPureState back = parse_pure_state(a);
    EXPECT_EQ(to_json(back), a);
    for (const auto& [n, m] : s.sectors()) EXPECT_EQ((m - back.sectors().at(n)).norm(), 0.0);
  }
  SectoredPureState e = fixtures::eepr();
  EXPECT_EQ(to_json(parse_pure_state(to_json(e))), to_json(e));
}

TEST(Json, DensityRoundTripIsBitExact) {
  Rng rng(97);
  std::vector<BlockDensityMatrix> states{rho_sep().density(), fourier_hiding_state(4, 1).density(),
                                         random_density(rng, LocalSpace::modes(2), LocalSpace::levels(2), 3)};
  for (const auto& r : states) {
    std::string a = to_json(r);
    BlockDensityMatrix back = parse_density(a);
    EXPECT_EQ(to_json(back), a);
    EXPECT_EQ(max_abs_difference(back, r), 0.0);
  }
}

TEST(Json, DensityBasisMayBePermuted) {
  std::string j = R"({"blocks": [
    {"total_particles": 1, "basis": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
     "re": [[0.7, 0.1], [0.1, 0.3]]}]})";
  BlockDensityMatrix r = parse_density(j);
  EXPECT_DOUBLE_EQ(r.element({1, 0}, {0, 0}, {1, 0}, {0, 0}).real(), 0.7);
  EXPECT_DOUBLE_EQ(r.element({0, 0}, {1, 0}, {0, 0}, {1, 0}).real(), 0.3);
}

TEST(Json, ErrorsNameTheField) {
  EXPECT_NE(error_text(R"({"amplitudes": [{"a": [0, 0], "b": [1, 0], "re": "x"}]})").find("amplitudes[0].re"),
            std::string::npos);
  EXPECT_NE(error_text(R"({"amplitudes": [{"a": [0], "b": [1, 0], "re": 1}]})").find("amplitudes[0].a"),
            std::string::npos);
  EXPECT_NE(error_text(R"({"amplitudes": [{"b": [1, 0], "re": 1}]})").find("amplitudes[0].a"), std::string::npos);
  EXPECT_NE(error_text("{\"amplitudes\": [\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_text(R"({"foo": 1})").find("<root>"), std::string::npos);
  EXPECT_NE(error_text(R"({"total_particles": 2, "amplitudes": [{"a": [0, 0], "b": [1, 0], "re": 1}]})")
                .find("total_particles"),
            std::string::npos);
  EXPECT_NE(error_text(R"({"alice_degeneracy": [1, 1], "bob_degeneracy": [1, 1],
                           "blocks": [{"total_particles": 1, "basis": [[[0, 0], [1, 0]]], "re": [[1]]}]})")
                .find("blocks[0].basis"),
            std::string::npos);
}

TEST(Json, MixedTotalReportedAsParseError) {
  std::string t = error_text(R"({"amplitudes": [{"a": [0, 0], "b": [1, 0], "re": 1}, {"a": [1, 0], "b": [1, 0], "re": 1}]})");
  EXPECT_NE(t.find("amplitudes"), std::string::npos);
}

TEST(Json, TaskParsing) {
  std::string src = to_json(fixtures::vepr());
  ConversionTask d = parse_task(src, to_json(fixtures::qubit_pure(1.0 / 3.0)));
  EXPECT_EQ(d.targets().size(), 1u);
  EXPECT_FALSE(ssr_convertible(d).convertible);
  std::string ens = R"({"targets": [{"probability": 0.5, "state": )" + to_json(fixtures::qubit_pure(1.0)) +
                    R"(}, {"probability": 0.5, "state": )" + to_json(fixtures::qubit_pure(0.0)) + "}]}";
  ConversionTask p = parse_task(src, ens);
  EXPECT_EQ(p.targets().size(), 2u);
  EXPECT_TRUE(ssr_convertible(p).convertible);
  try {
    parse_task(src, R"({"targets": [{"probability": "half", "state": {}}]})");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("targets[0].probability"), std::string::npos);
  }
}
