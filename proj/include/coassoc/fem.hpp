#pragma once

// Lowest-order Whitney elements on a piecewise-flat 3-manifold.

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "coassoc/geometry.hpp"

namespace coassoc {

using SparseMatrix = Eigen::SparseMatrix<double>;

struct FEMatrices {
  SparseMatrix M0, M1, K0, K1;
  SparseMatrix Ccurl;     ///< Ccurl(f, e) = ∫ dW_e ∧ W_f over the oriented mesh
  SparseMatrix gradient;  ///< edges x vertices, the coboundary on 0-cochains
  std::size_t components = 0;  ///< connected components of the 1-skeleton
};

namespace fem_detail {

// Local edges of a sorted tetrahedron in lexicographic order: 01 02 03 12 13 23.
inline constexpr std::array<std::array<int, 2>, 6> kEdges = {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

/// Coefficients of d(lambda_i) in the basis d(lambda_1), d(lambda_2), d(lambda_3).
inline std::array<double, 3> grad_coeff(int i) {
  if (i == 0) return {-1, -1, -1};
  std::array<double, 3> c{};
  c[static_cast<std::size_t>(i) - 1] = 1;
  return c;
}

/// d(lambda_a) ∧ d(lambda_b) ∧ d(lambda_c) as a multiple of d(lambda_1) ∧ d(lambda_2) ∧ d(lambda_3).
inline double wedge3(int a, int b, int c) {
  return det3({grad_coeff(a), grad_coeff(b), grad_coeff(c)});
}

}  // namespace fem_detail

/// Number of connected components of the vertex-edge graph.
inline std::size_t count_components(const SimplicialComplex& x) {
  const std::size_t nv = x.vertex_count();
  std::vector<std::size_t> parent(nv);
  for (std::size_t i = 0; i < nv; ++i) parent[i] = i;
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  std::size_t n = nv;
  if (x.dim() >= 1)
    for (const auto& e : x.simplices(1)) {
      const auto a = find(*x.index_of({e[0]})), b = find(*x.index_of({e[1]}));
      if (a != b) {
        parent[a] = b;
        --n;
      }
    }
  return n;
}

inline FEMatrices assemble(const GeometricMesh& mesh) {
  using fem_detail::kEdges;
  validate(mesh);
  const auto& x = mesh.complex;
  const auto nv = static_cast<Eigen::Index>(x.count(0));
  const auto ne = static_cast<Eigen::Index>(x.count(1));
  std::vector<Eigen::Triplet<double>> m0, k0, m1, k1, cc;
  const auto& tets = x.simplices(3);
  for (std::size_t t = 0; t < tets.size(); ++t) {
    const auto& tet = tets[t];
    const auto gram = edge_gram(mesh, tet);
    Eigen::Matrix3d g3;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) g3(i, j) = gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    const double vol = std::sqrt(g3.determinant()) / 6.0;
    const Eigen::Matrix3d inv = g3.inverse();
    // g(i, j) = <grad lambda_i, grad lambda_j>, i, j = 0..3
    Eigen::Matrix4d g;
    g.block<3, 3>(1, 1) = inv;
    for (int i = 1; i < 4; ++i) {
      g(0, i) = g(i, 0) = -inv.row(i - 1).sum();
    }
    g(0, 0) = inv.sum();
    auto ll = [vol](int i, int j) { return vol * (i == j ? 2.0 : 1.0) / 20.0; };

    std::array<Eigen::Index, 4> vid;
    for (std::size_t i = 0; i < 4; ++i) vid[i] = static_cast<Eigen::Index>(*x.index_of({tet[i]}));
    std::array<Eigen::Index, 6> eid;
    for (std::size_t e = 0; e < 6; ++e)
      eid[e] = static_cast<Eigen::Index>(
          *x.index_of({tet[static_cast<std::size_t>(kEdges[e][0])], tet[static_cast<std::size_t>(kEdges[e][1])]}));

    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        m0.emplace_back(vid[static_cast<std::size_t>(i)], vid[static_cast<std::size_t>(j)], ll(i, j));
        k0.emplace_back(vid[static_cast<std::size_t>(i)], vid[static_cast<std::size_t>(j)], vol * g(i, j));
      }
    const int s = x.top_signs()[t];
    for (std::size_t e = 0; e < 6; ++e) {
      const int a = kEdges[e][0], b = kEdges[e][1];
      for (std::size_t f = 0; f < 6; ++f) {
        const int c = kEdges[f][0], d = kEdges[f][1];
        const double mass = ll(a, c) * g(b, d) - ll(a, d) * g(b, c) - ll(b, c) * g(a, d) + ll(b, d) * g(a, c);
        m1.emplace_back(eid[e], eid[f], mass);
        k1.emplace_back(eid[e], eid[f], 4.0 * vol * (g(a, c) * g(b, d) - g(a, d) * g(b, c)));
        // ∫ dW_ab ∧ W_cd = 2 ∫ dλa∧dλb∧(λc dλd − λd dλc); ∫_T λ dλ1∧dλ2∧dλ3 = s/24.
        const double curl = s * (fem_detail::wedge3(a, b, d) - fem_detail::wedge3(a, b, c)) / 12.0;
        if (curl != 0.0) cc.emplace_back(eid[f], eid[e], curl);
      }
    }
  }
  FEMatrices out;
  auto build = [](Eigen::Index r, Eigen::Index c, const std::vector<Eigen::Triplet<double>>& tr) {
    SparseMatrix m(r, c);
    m.setFromTriplets(tr.begin(), tr.end());
    m.makeCompressed();
    return m;
  };
  out.M0 = build(nv, nv, m0);
  out.K0 = build(nv, nv, k0);
  out.M1 = build(ne, ne, m1);
  out.K1 = build(ne, ne, k1);
  out.Ccurl = build(ne, ne, cc);
  std::vector<Eigen::Triplet<double>> gr;
  const auto& edges = x.simplices(1);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    gr.emplace_back(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(*x.index_of({edges[e][0]})), -1.0);
    gr.emplace_back(static_cast<Eigen::Index>(e), static_cast<Eigen::Index>(*x.index_of({edges[e][1]})), 1.0);
  }
  out.gradient = build(ne, nv, gr);
  out.components = count_components(x);
  return out;
}

}  // namespace coassoc
