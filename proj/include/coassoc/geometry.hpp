#pragma once

// Piecewise-flat 3-manifolds: a tetrahedral complex with vertex coordinates.

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "coassoc/error.hpp"
#include "coassoc/simplicial.hpp"

namespace coassoc {

using Point = std::array<double, 4>;

enum class Embedding {
  Euclidean,    ///< coordinates in R^d, d = 3 or 4
  FlatTorus,    ///< coordinates in the cube [0, period)^3 with periodic identification
  RoundSphere,  ///< coordinates on the unit sphere S^3 in R^4; refinement re-projects
};

struct GeometricMesh {
  SimplicialComplex complex;  ///< dimension 3; top_signs() carry the orientation
  std::vector<Point> coords;  ///< indexed by vertex id (ids are 0..n-1)
  int ambient_dim = 3;
  Embedding embedding = Embedding::Euclidean;
  double period = 1.0;
  int level = 0;

  /// Edge vector q - p under the embedding (minimum image on the flat torus).
  std::array<double, 4> edge_vector(VertexId p, VertexId q) const {
    std::array<double, 4> d{};
    for (int i = 0; i < ambient_dim; ++i) {
      double v = coords[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)] -
                 coords[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)];
      if (embedding == Embedding::FlatTorus) v -= period * std::round(v / period);
      d[static_cast<std::size_t>(i)] = v;
    }
    return d;
  }
};

inline double dot4(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

inline double det3(const std::array<std::array<double, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

inline double det4(std::array<std::array<double, 4>, 4> m) {
  double det = 1.0;
  for (std::size_t c = 0; c < 4; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < 4; ++r)
      if (std::abs(m[r][c]) > std::abs(m[p][c])) p = r;
    if (m[p][c] == 0.0) return 0.0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < 4; ++r) {
      const double f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < 4; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

/// Gram matrix of the three edge vectors from the first vertex of a sorted tetrahedron.
inline std::array<std::array<double, 3>, 3> edge_gram(const GeometricMesh& mesh, const Simplex& tet) {
  std::array<std::array<double, 4>, 3> e;
  for (std::size_t i = 0; i < 3; ++i) e[i] = mesh.edge_vector(tet[0], tet[i + 1]);
  std::array<std::array<double, 3>, 3> g{};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) g[i][j] = dot4(e[i], e[j]);
  return g;
}

inline double tet_volume(const GeometricMesh& mesh, const Simplex& tet) {
  const double d = det3(edge_gram(mesh, tet));
  return d > 0 ? std::sqrt(d) / 6.0 : 0.0;
}

/// Checks the mesh invariants: contiguous ids, non-degenerate tetrahedra, strict triangle inequalities.
inline void validate(const GeometricMesh& mesh) {
  if (mesh.complex.dim() != 3) fail(ErrorKind::InvalidInput, "geometric mesh must be 3-dimensional");
  const auto verts = mesh.complex.vertices();
  for (std::size_t i = 0; i < verts.size(); ++i)
    if (verts[i] != static_cast<VertexId>(i)) fail(ErrorKind::InvalidInput, "mesh vertex ids must be 0..n-1");
  if (mesh.coords.size() != verts.size()) fail(ErrorKind::InvalidInput, "missing vertex coordinates");
  for (const auto& tet : mesh.complex.simplices(3)) {
    double scale = 0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i + 1; j < 4; ++j) {
        const auto e = mesh.edge_vector(tet[i], tet[j]);
        scale = std::max(scale, std::sqrt(dot4(e, e)));
      }
    const double vol = tet_volume(mesh, tet);
    if (!(vol > 1e-12 * scale * scale * scale))
      fail(ErrorKind::DegenerateTetrahedron, "tetrahedron (" + std::to_string(tet[0]) + "," +
                                                 std::to_string(tet[1]) + "," + std::to_string(tet[2]) + "," +
                                                 std::to_string(tet[3]) + ") has zero volume");
    for (std::size_t f = 0; f < 4; ++f) {
      const Simplex tri = face(tet, f);
      double l[3];
      l[0] = std::sqrt(dot4(mesh.edge_vector(tri[0], tri[1]), mesh.edge_vector(tri[0], tri[1])));
      l[1] = std::sqrt(dot4(mesh.edge_vector(tri[1], tri[2]), mesh.edge_vector(tri[1], tri[2])));
      l[2] = std::sqrt(dot4(mesh.edge_vector(tri[0], tri[2]), mesh.edge_vector(tri[0], tri[2])));
      if (!(l[0] < l[1] + l[2] && l[1] < l[0] + l[2] && l[2] < l[0] + l[1]))
        fail(ErrorKind::DegenerateTetrahedron, "triangle inequality fails in a face");
    }
  }
}

inline double total_volume(const GeometricMesh& mesh) {
  double v = 0;
  for (const auto& tet : mesh.complex.simplices(3)) v += tet_volume(mesh, tet);
  return v;
}

/// Uniform (red) refinement: every tetrahedron splits into 4 corner tetrahedra and
/// an octahedron cut along its shortest diagonal. Orientation is inherited.
inline GeometricMesh subdivide(const GeometricMesh& mesh) {
  validate(mesh);
  const auto& edges = mesh.complex.simplices(1);
  const auto nv = static_cast<VertexId>(mesh.complex.vertex_count());

  GeometricMesh out;
  out.ambient_dim = mesh.ambient_dim;
  out.embedding = mesh.embedding;
  out.period = mesh.period;
  out.level = mesh.level + 1;
  out.coords = mesh.coords;
  out.coords.reserve(mesh.coords.size() + edges.size());
  for (const auto& e : edges) {
    const auto d = mesh.edge_vector(e[0], e[1]);
    Point m = mesh.coords[static_cast<std::size_t>(e[0])];
    for (std::size_t i = 0; i < 4; ++i) m[i] += 0.5 * d[i];
    if (mesh.embedding == Embedding::FlatTorus)
      for (int i = 0; i < mesh.ambient_dim; ++i) {
        auto& c = m[static_cast<std::size_t>(i)];
        c -= mesh.period * std::floor(c / mesh.period);
      }
    if (mesh.embedding == Embedding::RoundSphere) {
      const double r = std::sqrt(dot4(m, m));
      for (auto& c : m) c /= r;
    }
    out.coords.push_back(m);
  }

  // Barycentric coordinates (times 2) of the ten nodes of a refined tetrahedron:
  // 0..3 corners, 4..9 midpoints of local edges 01,02,03,12,13,23.
  static constexpr int kEdgeNode[4][4] = {{-1, 4, 5, 6}, {4, -1, 7, 8}, {5, 7, -1, 9}, {6, 8, 9, -1}};
  auto bary = [](int node) {
    std::array<int, 4> b{};
    if (node < 4) {
      b[static_cast<std::size_t>(node)] = 2;
      return b;
    }
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (kEdgeNode[i][j] == node) b[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(j)] = 1;
    return b;
  };

  std::vector<Simplex> children;
  children.reserve(mesh.complex.count(3) * 8);
  const auto& tets = mesh.complex.simplices(3);
  for (std::size_t t = 0; t < tets.size(); ++t) {
    const auto& tet = tets[t];
    std::array<VertexId, 10> id{};
    for (std::size_t i = 0; i < 4; ++i) id[i] = tet[i];
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        id[static_cast<std::size_t>(kEdgeNode[i][j])] =
            nv + static_cast<VertexId>(*mesh.complex.index_of({tet[static_cast<std::size_t>(i)],
                                                               tet[static_cast<std::size_t>(j)]}));

    std::vector<std::array<int, 4>> local = {{0, 4, 5, 6}, {4, 1, 7, 8}, {5, 7, 2, 9}, {6, 8, 9, 3}};
    // Octahedron nodes 4..9; opposite pairs (01,23), (02,13), (03,12).
    const std::array<std::array<int, 2>, 3> diagonals = {{{4, 9}, {5, 8}, {6, 7}}};
    std::size_t best = 0;
    double best_len = 0;
    for (std::size_t d = 0; d < 3; ++d) {
      const auto a = id[static_cast<std::size_t>(diagonals[d][0])];
      const auto b = id[static_cast<std::size_t>(diagonals[d][1])];
      const auto& pa = out.coords[static_cast<std::size_t>(a)];
      const auto& pb = out.coords[static_cast<std::size_t>(b)];
      std::array<double, 4> v{};
      for (std::size_t i = 0; i < 4; ++i) {
        v[i] = pb[i] - pa[i];
        if (mesh.embedding == Embedding::FlatTorus) v[i] -= mesh.period * std::round(v[i] / mesh.period);
      }
      const double len = dot4(v, v);
      if (d == 0 || len < best_len - 1e-12 * len) {
        best = d;
        best_len = len;
      }
    }
    const int p = diagonals[best][0], q = diagonals[best][1];
    // The four octahedron nodes other than p, q form a cycle around the diagonal.
    std::vector<int> ring;
    for (int node = 4; node <= 9; ++node)
      if (node != p && node != q) ring.push_back(node);
    // order the ring: consecutive nodes share a corner in their barycentric support
    auto shares = [&](int a, int b) {
      const auto ba = bary(a), bb = bary(b);
      for (std::size_t i = 0; i < 4; ++i)
        if (ba[i] && bb[i]) return true;
      return false;
    };
    for (std::size_t i = 1; i < ring.size(); ++i)
      for (std::size_t j = i; j < ring.size(); ++j)
        if (shares(ring[i - 1], ring[j])) {
          std::swap(ring[i], ring[j]);
          break;
        }
    for (std::size_t i = 0; i < 4; ++i) local.push_back({p, q, ring[i], ring[(i + 1) % 4]});

    for (const auto& c : local) {
      std::array<std::array<double, 3>, 3> m{};
      const auto b0 = bary(c[0]);
      for (std::size_t r = 0; r < 3; ++r) {
        const auto br = bary(c[r + 1]);
        for (std::size_t k = 0; k < 3; ++k) m[r][k] = br[k + 1] - b0[k + 1];
      }
      const double det = det3(m);
      Simplex child = {id[static_cast<std::size_t>(c[0])], id[static_cast<std::size_t>(c[1])],
                       id[static_cast<std::size_t>(c[2])], id[static_cast<std::size_t>(c[3])]};
      const int sign = (det > 0 ? 1 : -1) * mesh.complex.top_signs()[t];
      if (sign < 0) std::swap(child[0], child[1]);
      children.push_back(std::move(child));
    }
  }
  out.complex = SimplicialComplex::build(children);
  return out;
}

}  // namespace coassoc
