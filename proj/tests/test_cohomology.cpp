#include <gtest/gtest.h>

#include "coassoc/cohomology.hpp"
#include "coassoc/generators.hpp"
#include "oracles.hpp"

using namespace coassoc;

namespace {

template <std::size_t N>
std::vector<std::size_t> vec(const std::array<std::size_t, N>& a) {
  return {a.begin(), a.end()};
}

std::vector<oracle::Simplex> tops_of(const ManifoldPair& p) { return p.total.simplices(4); }
std::vector<oracle::Simplex> link_of(const ManifoldPair& p) { return p.link.simplices(3); }

}  // namespace

TEST(Betti, Sphere) { EXPECT_EQ(betti(builtin::s3_boundary_complex()), (std::vector<std::size_t>{1, 0, 0, 1})); }

TEST(Betti, Simplex) {
  EXPECT_EQ(betti(SimplicialComplex::build({{0, 1, 2, 3, 4}})), (std::vector<std::size_t>{1, 0, 0, 0, 0}));
}

TEST(Betti, ThreeTorusAgreesWithOracle) {
  const auto m = builtin::t3(3);
  EXPECT_EQ(betti(m.complex), (std::vector<std::size_t>{1, 3, 3, 1}));
  EXPECT_EQ(oracle::betti(m.complex.simplices(3)), (std::vector<std::size_t>{1, 3, 3, 1}));
}

TEST(Betti, RelativeExamples) {
  EXPECT_EQ(relative_betti(builtin::ball4()), (std::vector<std::size_t>{0, 0, 0, 0, 1}));
  EXPECT_EQ(relative_betti(builtin::d2xt2(3)), (std::vector<std::size_t>{0, 0, 1, 2, 1}));
  EXPECT_EQ(relative_betti(builtin::cp2_minus_ball()), (std::vector<std::size_t>{0, 0, 1, 0, 1}));
}

TEST(Betti, PairsAgreeWithOracle) {
  for (const auto& p : {builtin::ball4(), builtin::d2xt2(3), builtin::cp2_minus_ball(), builtin::s3_cylinder()}) {
    EXPECT_EQ(betti(p.total), oracle::betti(tops_of(p)));
    EXPECT_EQ(betti(p.link), oracle::betti(link_of(p)));
    EXPECT_EQ(relative_betti(p), oracle::betti(tops_of(p), link_of(p)));
  }
}

TEST(Les, ProfileMatchesDirectBetti) {
  const auto p = builtin::d2xt2(3);
  const auto prof = les_of_pair(p);
  EXPECT_EQ(vec(prof.b_C), (std::vector<std::size_t>{1, 2, 1, 0, 0}));
  EXPECT_EQ(vec(prof.b_L), (std::vector<std::size_t>{1, 3, 3, 1}));
  EXPECT_EQ(vec(prof.b_cs), (std::vector<std::size_t>{0, 0, 1, 2, 1}));
  for (long d : prof.exactness_defects) EXPECT_EQ(d, 0);
  EXPECT_EQ(prof.exactness_defects.size(), 14u);
}

TEST(Les, RestrictionRankOnD2xT2) { EXPECT_EQ(les_of_pair(builtin::d2xt2(3)).les_ranks.r[1], 2u); }

TEST(Les, CompactSupportMapRankOnCp2) { EXPECT_EQ(les_of_pair(builtin::cp2_minus_ball()).les_ranks.j[2], 1u); }

TEST(DimV, Examples) {
  EXPECT_EQ(les_of_pair(builtin::ball4()).dim_V, 0u);
  EXPECT_EQ(les_of_pair(builtin::cp2_minus_ball()).dim_V, 1u);
  EXPECT_EQ(les_of_pair(builtin::d2xt2(3)).dim_V, 0u);
}

TEST(DimV, AlternatingSumExamples) {
  EXPECT_EQ(dim_v_formula(les_of_pair(builtin::cp2_minus_ball())), 1);
  EXPECT_EQ(dim_v_formula(les_of_pair(builtin::d2xt2(3))), 0);
}

TEST(DimV, AgreesWithOracleOnBuiltins) {
  for (const auto& p : {builtin::ball4(), builtin::d2xt2(3), builtin::cp2_minus_ball(), builtin::s3_cylinder()})
    EXPECT_EQ(les_of_pair(p).dim_V, oracle::dim_v(tops_of(p)));
}

TEST(DimV, RepresentativesAreRelativeCocycles) {
  const auto p = builtin::cp2_minus_ball();
  const auto prof = les_of_pair(p);
  const CochainComplex cx(p.total);
  for (const auto& c : prof.V_basis) {
    EXPECT_TRUE(cx.coboundary(2, c).empty());
    for (auto i : c.idx) EXPECT_FALSE(p.in_link[2][i]);
  }
}

TEST(DimV, DirectAgreesWithProfile) {
  const auto p = builtin::cp2_minus_ball();
  EXPECT_EQ(dim_v_direct(p).first, les_of_pair(p).dim_V);
}

TEST(DimV, RandomPairsAgreeWithOracle) {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const auto p = builtin::random_pair(seed);
    const auto prof = les_of_pair(p);
    EXPECT_EQ(static_cast<long>(prof.dim_V), dim_v_formula(prof)) << "seed " << seed;
    EXPECT_EQ(prof.dim_V, oracle::dim_v(tops_of(p))) << "seed " << seed;
    EXPECT_EQ(vec(prof.b_cs), oracle::betti(tops_of(p), link_of(p))) << "seed " << seed;
  }
}

TEST(Duality, Builtins) {
  for (const auto& p : {builtin::ball4(), builtin::d2xt2(3), builtin::cp2_minus_ball(), builtin::t4_minus_ball(3)}) {
    const auto prof = les_of_pair(p);
    for (int k = 0; k <= 4; ++k) EXPECT_EQ(prof.b_C[k], prof.b_cs[4 - k]);
    for (int k = 0; k <= 3; ++k) EXPECT_EQ(prof.b_L[k], prof.b_L[3 - k]);
  }
}

TEST(H3Kernel, SequenceValueMatchesBetti) {
  for (const auto& p : {builtin::ball4(), builtin::d2xt2(3), builtin::cp2_minus_ball()}) {
    const auto prof = les_of_pair(p);
    const long formula = static_cast<long>(prof.b_L[0]) - static_cast<long>(prof.b_C[0]) +
                         static_cast<long>(prof.b_C[1]) - static_cast<long>(prof.b_C[3]);
    EXPECT_EQ(static_cast<long>(h3_kernel_from_les(prof)), formula);
  }
}
