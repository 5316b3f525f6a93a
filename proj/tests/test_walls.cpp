#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "coassoc/walls.hpp"
#include "oracles.hpp"

using namespace coassoc;

namespace {

SpectrumResult laplace0(std::vector<double> v, std::size_t zeros = 1) {
  SpectrumResult r;
  r.op = SpectralOperator::laplace0;
  r.eigenvalues = std::move(v);
  r.zero_mode_count = zeros;
  return r;
}

SpectrumResult curl(std::vector<double> v) {
  SpectrumResult r;
  r.op = SpectralOperator::curl;
  r.eigenvalues = std::move(v);
  return r;
}

/// Exact low spectrum of the flat unit torus, built from the Fourier oracle.
std::pair<SpectrumResult, SpectrumResult> torus_spectra() {
  const oracle::FlatTorus t;
  std::vector<double> l{0.0};
  for (std::size_t i = 0; i < t.laplace0_multiplicity(t.lambda1()); ++i) l.push_back(t.lambda1());
  std::vector<double> c;
  for (std::size_t i = 0; i < t.curl_multiplicity(t.gamma1()); ++i) c.push_back(-t.gamma1());
  for (std::size_t i = 0; i < t.curl_multiplicity(t.gamma1()); ++i) c.push_back(t.gamma1());
  return {laplace0(l), curl(c)};
}

}  // namespace

TEST(Walls, EmptySpectraGiveOnlyZero) {
  const auto ws = wall_set(laplace0({0.0}), curl({}));
  ASSERT_EQ(ws.walls.size(), 1u);
  EXPECT_EQ(ws.walls[0].rate, 0.0);
  EXPECT_FALSE(ws.walls[0].d_nonzero.has_value());
  EXPECT_TRUE(ws.includes_zero);
}

TEST(Walls, DeltaWallsAreSymmetric) {
  const auto ws = wall_set(laplace0({0.0, 4.0}), curl({}));
  ASSERT_EQ(ws.walls.size(), 3u);
  EXPECT_DOUBLE_EQ(ws.walls[0].rate, -2.0);
  EXPECT_DOUBLE_EQ(ws.walls[2].rate, 2.0);
}

TEST(Walls, CurlWallsKeepTheirSign) {
  const auto ws = wall_set(laplace0({0.0}), curl({-1.5, 3.0}));
  ASSERT_EQ(ws.walls.size(), 3u);
  EXPECT_DOUBLE_EQ(ws.walls[0].rate, -1.5);
  EXPECT_DOUBLE_EQ(ws.walls[2].rate, 3.0);
  EXPECT_EQ(ws.walls[2].sources[0].kind, WallSourceKind::curl);
}

TEST(Walls, RejectsWrongOperators) { EXPECT_THROW(wall_set(curl({}), laplace0({0.0})), Error); }

TEST(Walls, RejectsMixedLevels) {
  auto c = curl({1.0});
  c.mesh_level = 2;
  EXPECT_THROW(wall_set(laplace0({0.0}), c), Error);
}

TEST(Walls, NearbyValuesMerge) {
  const auto ws = wall_set(laplace0({0.0, 4.0, 4.0 * (1 + 1e-9)}), curl({2.0 * (1 - 1e-8)}), Orientation::induced, {1e-6});
  ASSERT_EQ(ws.walls.size(), 3u);
  EXPECT_EQ(*ws.walls[2].d_nonzero, 3u);
  EXPECT_EQ(*ws.walls[0].d_nonzero, 2u);
  EXPECT_NEAR(ws.walls[2].rate, 2.0, 1e-7);
}

TEST(Walls, FlatTorusMultiplicity) {
  const oracle::FlatTorus t;
  const auto [l, c] = torus_spectra();
  const auto ws = wall_set(l, c);
  EXPECT_EQ(wall_multiplicity(ws, t.gamma1()), t.wall_multiplicity(t.gamma1()));
  EXPECT_EQ(wall_multiplicity(ws, -t.gamma1()), t.wall_multiplicity(-t.gamma1()));
  EXPECT_EQ(t.wall_multiplicity(t.gamma1()), 12u);
  EXPECT_NEAR(*nearest_negative_wall(ws), -2 * std::numbers::pi, 1e-12);
}

TEST(Walls, MultiplicityOffWallsIsZero) {
  const auto [l, c] = torus_spectra();
  const auto ws = wall_set(l, c);
  EXPECT_EQ(wall_multiplicity(ws, 1.0), 0u);
  EXPECT_EQ(wall_multiplicity(ws, 0.0), 0u);
}

TEST(Walls, InvariantKernelAtZero) {
  EXPECT_EQ(invariant_kernel_at_zero({1, 0, 0, 1}), 1u);
  EXPECT_EQ(invariant_kernel_at_zero({1, 3, 3, 1}), 4u);
  EXPECT_EQ(invariant_kernel_at_zero({1, 1, 1, 1}), 2u);
}

TEST(Walls, IndexJump) {
  EXPECT_EQ(full_operator_index_jump({1, 3, 3, 1}), 16u);
  EXPECT_EQ(full_operator_index_jump({1, 0, 0, 1}), 4u);
  EXPECT_EQ(full_operator_index_jump({0, 0, 0, 0}), 0u);
}

TEST(AdmissibleGamma, BetaBinds) {
  const auto [l, c] = torus_spectra();
  const auto r = admissible_gamma(wall_set(l, c), -1.0);
  EXPECT_FALSE(r.empty);
  EXPECT_EQ(r.binding, RateBinding::beta);
  EXPECT_DOUBLE_EQ(r.lower, -1.0);
  EXPECT_EQ(r.upper, 0.0);
}

TEST(AdmissibleGamma, SphereWallBinds) {
  const auto r = admissible_gamma(wall_set(laplace0({0.0, 3.0}), curl({-2.0, 2.0})), -2.0);
  EXPECT_EQ(r.binding, RateBinding::wall);
  EXPECT_NEAR(r.lower, -std::sqrt(3.0), 1e-12);
}

TEST(AdmissibleGamma, CloseWallBinds) {
  const auto r = admissible_gamma(wall_set(laplace0({0.0}), curl({-0.5})), -2.0);
  EXPECT_EQ(r.binding, RateBinding::wall);
  EXPECT_DOUBLE_EQ(r.lower, -0.5);
}

TEST(AdmissibleGamma, TieBindsToWall) {
  const auto r = admissible_gamma(wall_set(laplace0({0.0}), curl({-0.5})), -0.5);
  EXPECT_EQ(r.binding, RateBinding::wall);
}

TEST(AdmissibleGamma, NonNegativeBetaIsEmpty) {
  EXPECT_TRUE(admissible_gamma(wall_set(laplace0({0.0}), curl({})), 0.0).empty);
  EXPECT_TRUE(admissible_gamma(wall_set(laplace0({0.0}), curl({})), 0.5).empty);
}

TEST(AdmissibleGamma, WallAtZeroMinusIsEmpty) {
  EXPECT_TRUE(admissible_gamma(wall_set(laplace0({0.0}), curl({-1e-15})), -1.0).empty);
}
