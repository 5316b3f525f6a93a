#include <gtest/gtest.h>

#include <cmath>

#include "coassoc/cohomology.hpp"
#include "coassoc/generators.hpp"
#include "oracles.hpp"

using namespace coassoc;

namespace {

std::vector<oracle::Simplex> tops_of(const SimplicialComplex& x) { return x.simplices(x.dim()); }

std::vector<oracle::Simplex> link_tops(const ManifoldPair& p) { return p.link.simplices(3); }

}  // namespace

TEST(SimplicialComplex, SimplexClosureCounts) {
  const auto x = SimplicialComplex::build({{0, 1, 2, 3, 4}});
  EXPECT_EQ(x.dim(), 4);
  EXPECT_EQ(x.count(0), 5u);
  EXPECT_EQ(x.count(1), 10u);
  EXPECT_EQ(x.count(2), 10u);
  EXPECT_EQ(x.count(3), 5u);
  EXPECT_EQ(x.count(4), 1u);
}

TEST(SimplicialComplex, BoundaryOfSimplexIsSphere) {
  const auto s = builtin::s3_boundary_complex();
  EXPECT_EQ(s.vertex_count(), 5u);
  EXPECT_EQ(s.count(3), 5u);
  EXPECT_EQ(betti(s), (std::vector<std::size_t>{1, 0, 0, 1}));
}

TEST(SimplicialComplex, RejectsRepeatedVertex) {
  try {
    SimplicialComplex::build({{0, 1, 1, 2}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RepeatedVertexInSimplex);
  }
}

TEST(SimplicialComplex, RejectsDuplicateSimplex) {
  try {
    SimplicialComplex::build({{0, 1, 2}, {2, 1, 0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DuplicateSimplex);
  }
}

TEST(SimplicialComplex, RejectsEmptyInput) { EXPECT_THROW(SimplicialComplex::build({}), Error); }

TEST(SimplicialComplex, EdgeBoundarySigns) {
  const auto x = SimplicialComplex::build({{0, 1}});
  const auto d = boundary_matrix(x, 1);
  ASSERT_EQ(d.rows(), 2u);
  ASSERT_EQ(d.cols(), 1u);
  EXPECT_EQ(d(0, 0), -1);
  EXPECT_EQ(d(1, 0), 1);
}

TEST(SimplicialComplex, BoundaryOfBoundaryVanishes) {
  const auto x = builtin::cp2_complex();
  for (int k = 2; k <= 4; ++k) {
    const auto prod = boundary_matrix(x, k - 1) * boundary_matrix(x, k);
    for (std::size_t r = 0; r < prod.rows(); ++r)
      for (std::size_t c = 0; c < prod.cols(); ++c) ASSERT_EQ(prod(r, c), 0);
  }
}

TEST(SimplicialComplex, BoundaryRankOfSphereAgreesWithOracle) {
  const auto s = builtin::s3_boundary_complex();
  const auto d = boundary_matrix(s, 3);
  std::vector<std::vector<mpq_class>> dense(d.rows(), std::vector<mpq_class>(d.cols()));
  for (std::size_t r = 0; r < d.rows(); ++r)
    for (std::size_t c = 0; c < d.cols(); ++c) dense[r][c] = d(r, c);
  EXPECT_EQ(oracle::rank_q(dense), 4u);
}

TEST(ExtractPair, SimplexGivesBallAndSphere) {
  const auto p = builtin::ball4();
  EXPECT_EQ(p.link.count(3), 5u);
  EXPECT_EQ(p.link.vertex_count(), 5u);
  EXPECT_EQ(betti(p.link), (std::vector<std::size_t>{1, 0, 0, 1}));
}

TEST(ExtractPair, LinkMatchesBoundaryOracle) {
  for (const auto& p : {builtin::ball4(), builtin::d2xt2(3), builtin::cp2_minus_ball()}) {
    auto expected = oracle::boundary_faces(oracle::closure(tops_of(p.total)));
    auto got = link_tops(p);
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, expected);
  }
}

TEST(ExtractPair, D2xT2LinkIsThreeTorus) {
  const auto p = builtin::d2xt2(3);
  EXPECT_EQ(oracle::betti(link_tops(p)), (std::vector<std::size_t>{1, 3, 3, 1}));
  EXPECT_EQ(betti(p.link), (std::vector<std::size_t>{1, 3, 3, 1}));
}

TEST(ExtractPair, OrientationIsCoherent) {
  for (const auto& p : {builtin::ball4(), builtin::cp2_minus_ball(), builtin::d2xt2(3)}) {
    const auto ref = oracle::orient(tops_of(p.total));
    ASSERT_FALSE(ref.empty());
    const int s = ref[0] * p.top_orientation[0];
    for (std::size_t t = 0; t < ref.size(); ++t) EXPECT_EQ(p.top_orientation[t], s * ref[t]);
  }
}

TEST(ExtractPair, RejectsNonOrientable) {
  try {
    extract_pair(builtin::mobius_times_triangle());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonOrientable);
  }
  EXPECT_TRUE(oracle::orient(tops_of(builtin::mobius_times_triangle())).empty());
}

TEST(ExtractPair, RejectsThreeSimplicesOnOneFace) {
  try {
    extract_pair(SimplicialComplex::build({{0, 1, 2, 3, 4}, {0, 1, 2, 3, 5}, {0, 1, 2, 3, 6}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPseudomanifold);
  }
}

TEST(ExtractPair, RejectsMissingFourSimplices) {
  try {
    extract_pair(SimplicialComplex::build({{0, 1, 2, 3, 4}, {5, 6}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPseudomanifold);
  }
}

TEST(ExtractPair, RejectsClosedManifold) {
  try {
    extract_pair(builtin::cp2_complex());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CompactComponent);
  }
}

TEST(ExtractPair, RejectsLowerDimension) { EXPECT_THROW(extract_pair(builtin::s3_boundary_complex()), Error); }

TEST(Generators, TorusCounts) {
  const auto m = builtin::t3(3);
  EXPECT_EQ(m.complex.vertex_count(), 27u);
  EXPECT_EQ(m.complex.count(3), 162u);
  EXPECT_EQ(subdivide(m).complex.count(3), 1296u);
}

TEST(Generators, TorusRejectsSmallGrid) { EXPECT_THROW(builtin::t3(2), Error); }

TEST(Generators, Cp2HasNineVertices) {
  const auto x = builtin::cp2_complex();
  EXPECT_EQ(x.vertex_count(), 9u);
  EXPECT_EQ(x.count(4), 36u);
  EXPECT_EQ(oracle::betti(tops_of(x)), (std::vector<std::size_t>{1, 0, 1, 0, 1}));
}

TEST(Generators, Cp2MinusBallHasSphereLink) {
  const auto p = builtin::cp2_minus_ball();
  EXPECT_EQ(p.total.vertex_count(), 8u);
  EXPECT_EQ(oracle::betti(link_tops(p)), (std::vector<std::size_t>{1, 0, 0, 1}));
}

TEST(Generators, RoundSphereVerticesOnUnitSphere) {
  const auto m = builtin::s3_round(2);
  for (const auto& p : m.coords) EXPECT_NEAR(std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]), 1.0, 1e-12);
  EXPECT_EQ(betti(m.complex), (std::vector<std::size_t>{1, 0, 0, 1}));
}

TEST(Generators, SubdivisionPreservesVolumeOnTorus) {
  const auto m = builtin::t3(3);
  EXPECT_NEAR(total_volume(m), 1.0, 1e-12);
  EXPECT_NEAR(total_volume(subdivide(m)), 1.0, 1e-12);
}

TEST(Generators, DispatchRejectsUnknownName) {
  try {
    builtin::generate("klein");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
  }
}

TEST(Generators, RandomPairsAreDeterministic) {
  EXPECT_EQ(builtin::random_pair(7).total, builtin::random_pair(7).total);
}
