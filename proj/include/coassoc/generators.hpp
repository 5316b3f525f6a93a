#pragma once

// Built-in triangulations.
//
// Third-party combinatorial data (the 9-vertex CP^2) is embedded verbatim;
// the test suite checks it rather than trusting it.

#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "coassoc/geometry.hpp"
#include "coassoc/simplicial.hpp"

namespace coassoc::builtin {

inline void require_torus_size(int n) {
  if (n < 3) fail(ErrorKind::InvalidInput, "torus grid parameter n must be >= 3 (got " + std::to_string(n) + ")");
}

/// Kuhn (Freudenthal) triangulation of the d-torus on an n^d periodic grid:
/// d! simplices per cube, oriented by the sign of the axis permutation.
inline std::vector<Simplex> kuhn_torus(int d, int n) {
  require_torus_size(n);
  std::vector<int> stride(static_cast<std::size_t>(d), 1);
  for (int i = 1; i < d; ++i) stride[static_cast<std::size_t>(i)] = stride[static_cast<std::size_t>(i) - 1] * n;
  int cubes = 1;
  for (int i = 0; i < d; ++i) cubes *= n;
  std::vector<Simplex> out;
  for (int c = 0; c < cubes; ++c) {
    std::vector<int> pos(static_cast<std::size_t>(d));
    for (int i = 0, r = c; i < d; ++i, r /= n) pos[static_cast<std::size_t>(i)] = r % n;
    std::vector<int> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<int> p = pos;
      auto id = [&] {
        int v = 0;
        for (int i = 0; i < d; ++i) v += p[static_cast<std::size_t>(i)] * stride[static_cast<std::size_t>(i)];
        return v;
      };
      Simplex s = {id()};
      for (int axis : perm) {
        p[static_cast<std::size_t>(axis)] = (p[static_cast<std::size_t>(axis)] + 1) % n;
        s.push_back(id());
      }
      Simplex pc(perm.begin(), perm.end());
      if (sort_with_sign(pc) < 0) std::swap(s[0], s[1]);
      out.push_back(std::move(s));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

/// Flat unit 3-torus, n^3 vertices, 6 n^3 tetrahedra.
inline GeometricMesh t3(int n) {
  GeometricMesh m;
  m.complex = SimplicialComplex::build(kuhn_torus(3, n));
  m.embedding = Embedding::FlatTorus;
  m.ambient_dim = 3;
  m.period = 1.0;
  m.coords.resize(static_cast<std::size_t>(n * n * n));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        m.coords[static_cast<std::size_t>(i + n * j + n * n * k)] = {double(i) / n, double(j) / n, double(k) / n, 0.0};
  return m;
}

/// Orients tetrahedra in R^4 outward-normal-last with respect to the origin.
inline std::vector<Simplex> orient_outward(const std::vector<Simplex>& tets, const std::vector<Point>& coords) {
  std::vector<Simplex> out;
  for (Simplex s : tets) {
    std::array<std::array<double, 4>, 4> m{};
    Point c{};
    for (VertexId v : s)
      for (std::size_t i = 0; i < 4; ++i) c[i] += 0.25 * coords[static_cast<std::size_t>(v)][i];
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t i = 0; i < 4; ++i)
        m[i][r] = coords[static_cast<std::size_t>(s[r + 1])][i] - coords[static_cast<std::size_t>(s[0])][i];
    for (std::size_t i = 0; i < 4; ++i) m[i][3] = c[i];
    if (det4(m) < 0) std::swap(s[0], s[1]);
    out.push_back(std::move(s));
  }
  return out;
}

/// Boundary of the 4-simplex as a combinatorial complex (triangulated S^3, 5 tetrahedra),
/// oriented as the outward-normal-last boundary of the standard 4-simplex (0,1,2,3,4).
inline SimplicialComplex s3_boundary_complex() {
  std::vector<Simplex> tets;
  const Simplex top = {0, 1, 2, 3, 4};
  for (std::size_t i = 0; i < 5; ++i) {
    Simplex f = face(top, i);
    // induced orientation (-1)^i, then outward-last flips it once more
    if (i % 2 == 0) std::swap(f[0], f[1]);
    tets.push_back(std::move(f));
  }
  return SimplicialComplex::build(tets);
}

/// Vertices of a regular 4-simplex inscribed in the unit sphere of R^4.
inline std::vector<Point> regular_simplex_vertices() {
  std::vector<Point> p(5);
  const double t = (1.0 - std::sqrt(5.0)) / 4.0;
  for (std::size_t i = 0; i < 4; ++i) p[i][i] = 1.0;
  p[4] = {t, t, t, t};
  Point c{};
  for (const auto& v : p)
    for (std::size_t i = 0; i < 4; ++i) c[i] += v[i] / 5.0;
  for (auto& v : p) {
    for (std::size_t i = 0; i < 4; ++i) v[i] -= c[i];
    const double r = std::sqrt(dot4(v, v));
    for (auto& x : v) x /= r;
  }
  return p;
}

/// The boundary of the regular 4-simplex with its unit-sphere coordinates.
inline GeometricMesh s3_boundary_simplex() {
  GeometricMesh m;
  m.coords = regular_simplex_vertices();
  m.complex = SimplicialComplex::build(orient_outward(s3_boundary_complex().simplices(3), m.coords));
  m.ambient_dim = 4;
  m.embedding = Embedding::RoundSphere;
  return m;
}

/// Boundary of the 16-cell (cross-polytope) on the unit sphere: 8 vertices, 16 tetrahedra.
inline GeometricMesh s3_cross_polytope() {
  GeometricMesh m;
  m.coords.resize(8);
  for (std::size_t i = 0; i < 4; ++i) {
    m.coords[2 * i][i] = 1.0;
    m.coords[2 * i + 1][i] = -1.0;
  }
  std::vector<Simplex> tets;
  for (int mask = 0; mask < 16; ++mask) {
    Simplex s;
    for (int i = 0; i < 4; ++i) s.push_back(2 * i + ((mask >> i) & 1));
    tets.push_back(s);
  }
  m.complex = SimplicialComplex::build(orient_outward(tets, m.coords));
  m.ambient_dim = 4;
  m.embedding = Embedding::RoundSphere;
  return m;
}

/// The 24-cell on the unit sphere with each octahedral cell coned from its radially
/// projected center: 48 vertices, 192 tetrahedra.
inline GeometricMesh s3_coned_24cell() {
  GeometricMesh m;
  const double h = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j)
      for (int si = -1; si <= 1; si += 2)
        for (int sj = -1; sj <= 1; sj += 2) {
          Point p{};
          p[i] = si * h;
          p[j] = sj * h;
          m.coords.push_back(p);
        }
  // cell centers point along the dual 24-cell
  std::vector<Point> centers;
  for (std::size_t i = 0; i < 4; ++i)
    for (int si = -1; si <= 1; si += 2) {
      Point c{};
      c[i] = si;
      centers.push_back(c);
    }
  for (int mask = 0; mask < 16; ++mask) {
    Point c;
    for (std::size_t i = 0; i < 4; ++i) c[i] = ((mask >> i) & 1) ? -0.5 : 0.5;
    centers.push_back(c);
  }
  std::vector<Simplex> tets;
  for (const auto& c : centers) {
    const auto apex = static_cast<VertexId>(m.coords.size());
    std::vector<VertexId> cell;
    double best = -INFINITY;
    for (std::size_t v = 0; v < 24; ++v) best = std::max(best, dot4(m.coords[v], c));
    for (std::size_t v = 0; v < 24; ++v)
      if (dot4(m.coords[v], c) > best - 1e-9) cell.push_back(static_cast<VertexId>(v));
    // faces of the octahedron: triples with no antipodal pair inside the cell
    auto far = [&](VertexId a, VertexId b) {
      return dot4(m.coords[static_cast<std::size_t>(a)], m.coords[static_cast<std::size_t>(b)]) < 1e-9;
    };
    for (std::size_t a = 0; a < cell.size(); ++a)
      for (std::size_t b = a + 1; b < cell.size(); ++b)
        for (std::size_t d = b + 1; d < cell.size(); ++d)
          if (!far(cell[a], cell[b]) && !far(cell[a], cell[d]) && !far(cell[b], cell[d]))
            tets.push_back({apex, cell[a], cell[b], cell[d]});
    const double r = std::sqrt(dot4(c, c));
    Point u;
    for (std::size_t i = 0; i < 4; ++i) u[i] = c[i] / r;
    m.coords.push_back(u);
  }
  m.complex = SimplicialComplex::build(orient_outward(tets, m.coords));
  m.ambient_dim = 4;
  m.embedding = Embedding::RoundSphere;
  return m;
}

/// Unit round 3-sphere: the coned 24-cell refined `refine` times with radial projection.
inline GeometricMesh s3_round(int refine) {
  GeometricMesh m = s3_coned_24cell();
  for (int r = 0; r < refine; ++r) m = subdivide(m);
  return m;
}

// ---------------------------------------------------------------------------
// 4-manifolds with boundary

/// The 4-simplex; its link is the 5-tetrahedron 3-sphere.
inline ManifoldPair ball4() { return extract_pair(SimplicialComplex::build({{0, 1, 2, 3, 4}})); }

/// Kuhn triangulation of the 2-torus, n^2 vertices.
inline SimplicialComplex t2_complex(int n) { return SimplicialComplex::build(kuhn_torus(2, n)); }

/// D^2 x T^2 as the product of a triangle with the n x n torus; boundary S^1 x T^2 = T^3.
inline ManifoldPair d2xt2(int n) {
  const auto disk = SimplicialComplex::build({{0, 1, 2}});
  return extract_pair(SimplicialComplex::build(product_triangulation(disk, t2_complex(n))));
}

/// The 9-vertex triangulation of CP^2 (Kuehnel-Banchoff), 36 facets, vertices 1..9.
inline const std::vector<Simplex>& cp2_facets() {
  static const std::vector<Simplex> facets = {
      {1, 2, 3, 4, 5}, {1, 2, 3, 4, 7}, {1, 2, 3, 5, 8}, {1, 2, 3, 7, 8}, {1, 2, 4, 5, 6}, {1, 2, 4, 6, 7},
      {1, 2, 5, 6, 8}, {1, 2, 6, 7, 9}, {1, 2, 6, 8, 9}, {1, 2, 7, 8, 9}, {1, 3, 4, 5, 9}, {1, 3, 4, 7, 8},
      {1, 3, 4, 8, 9}, {1, 3, 5, 6, 8}, {1, 3, 5, 6, 9}, {1, 3, 6, 8, 9}, {1, 4, 5, 6, 7}, {1, 4, 5, 7, 9},
      {1, 4, 7, 8, 9}, {1, 5, 6, 7, 9}, {2, 3, 4, 5, 9}, {2, 3, 4, 6, 7}, {2, 3, 4, 6, 9}, {2, 3, 5, 7, 8},
      {2, 3, 5, 7, 9}, {2, 3, 6, 7, 9}, {2, 4, 5, 6, 8}, {2, 4, 5, 8, 9}, {2, 4, 6, 8, 9}, {2, 5, 7, 8, 9},
      {3, 4, 6, 7, 8}, {3, 4, 6, 8, 9}, {3, 5, 6, 7, 8}, {3, 5, 6, 7, 9}, {4, 5, 6, 7, 8}, {4, 5, 7, 8, 9},
  };
  return facets;
}

/// Closed CP^2 with vertex ids 0..8 (facets as listed; orientation not normalised).
inline SimplicialComplex cp2_complex() {
  std::vector<Simplex> f = cp2_facets();
  for (auto& s : f)
    for (auto& v : s) --v;
  return SimplicialComplex::build(f);
}

/// Coherently oriented facets of a closed 4-pseudomanifold (BFS on the dual graph).
inline std::vector<Simplex> coherent_facets(const SimplicialComplex& closed) {
  // Remove nothing: orient by propagating across shared 3-faces.
  const auto& tops = closed.simplices(4);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> cof(closed.count(3));
  for (std::size_t t = 0; t < tops.size(); ++t)
    for (std::size_t i = 0; i < 5; ++i) cof[*closed.index_of(face(tops[t], i))].emplace_back(t, i);
  std::vector<int> eps(tops.size(), 0);
  for (std::size_t start = 0; start < tops.size(); ++start) {
    if (eps[start]) continue;
    eps[start] = 1;
    std::vector<std::size_t> stack = {start};
    while (!stack.empty()) {
      const std::size_t s = stack.back();
      stack.pop_back();
      for (std::size_t i = 0; i < 5; ++i)
        for (const auto& [o, po] : cof[*closed.index_of(face(tops[s], i))]) {
          if (o == s || eps[o]) continue;
          const int ind = (i % 2 == 0) ? eps[s] : -eps[s];
          eps[o] = -ind * ((po % 2 == 0) ? 1 : -1);
          stack.push_back(o);
        }
    }
  }
  std::vector<Simplex> out = tops;
  for (std::size_t t = 0; t < out.size(); ++t)
    if (eps[t] < 0) std::swap(out[t][0], out[t][1]);
  return out;
}

/// Closed 4-complex minus the open star of `vertex`, relabelled to 0..n-2 preserving order.
inline std::vector<Simplex> remove_open_star(const std::vector<Simplex>& oriented, VertexId vertex) {
  std::vector<Simplex> out;
  for (const auto& s : oriented) {
    if (std::find(s.begin(), s.end(), vertex) != s.end()) continue;
    Simplex t = s;
    for (auto& v : t)
      if (v > vertex) --v;
    out.push_back(std::move(t));
  }
  return out;
}

/// CP^2 minus an open ball: the 9-vertex CP^2 minus the open star of its last vertex (8 vertices).
/// Oriented so that the generator of H^2 has self-intersection +1 (the complex orientation).
inline ManifoldPair cp2_minus_ball() {
  auto facets = coherent_facets(cp2_complex());
  for (auto& s : facets) std::swap(s[0], s[1]);
  return extract_pair(SimplicialComplex::build(remove_open_star(facets, 8)));
}

/// Kuhn 4-torus on the n^4 grid.
inline SimplicialComplex t4_complex(int n) { return SimplicialComplex::build(kuhn_torus(4, n)); }

/// T^4 minus the open star of vertex 0.
inline ManifoldPair t4_minus_ball(int n) {
  return extract_pair(SimplicialComplex::build(remove_open_star(kuhn_torus(4, n), 0)));
}

/// S^3 x [0,1] as the product of the 5-tetrahedron sphere with an edge; boundary two 3-spheres.
inline ManifoldPair s3_cylinder() {
  const auto edge = SimplicialComplex::build({{0, 1}});
  return extract_pair(SimplicialComplex::build(product_triangulation(s3_boundary_complex(), edge)));
}

/// Moebius band (5 vertices) times a triangle: a non-orientable 4-manifold with boundary.
inline SimplicialComplex mobius_times_triangle() {
  const auto mobius = SimplicialComplex::build({{0, 1, 2}, {1, 2, 3}, {2, 3, 4}, {3, 4, 0}, {4, 0, 1}});
  const auto tri = SimplicialComplex::build({{0, 1, 2}});
  return SimplicialComplex::build(product_triangulation(mobius, tri));
}

/// Random small manifold pair: a base pair modified by stellar subdivisions and relabelling.
/// Deterministic in `seed`.
inline ManifoldPair random_pair(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Simplex> tops;
  switch (rng() % 6) {
    case 0: tops = ball4().total.oriented_top(); break;
    case 1: tops = cp2_minus_ball().total.oriented_top(); break;
    case 2: tops = d2xt2(3).total.oriented_top(); break;
    case 3: tops = s3_cylinder().total.oriented_top(); break;
    case 4: {
      // two disjoint 4-simplices: disconnected C-bar and L
      tops = {{0, 1, 2, 3, 4}, {5, 6, 7, 8, 9}};
      break;
    }
    default: {
      // cp2 minus ball, disjoint union with a ball
      tops = cp2_minus_ball().total.oriented_top();
      tops.push_back({8, 9, 10, 11, 12});
      break;
    }
  }
  VertexId next = 0;
  for (const auto& s : tops)
    for (VertexId v : s) next = std::max(next, v + 1);
  const int moves = static_cast<int>(rng() % 5);
  for (int m = 0; m < moves; ++m) {
    const auto x = SimplicialComplex::build(tops);
    const int k = static_cast<int>(rng() % 5);  // dimension of the simplex to subdivide
    const auto& cells = x.simplices(k);
    if (k == 0) continue;
    const Simplex target = cells[rng() % cells.size()];
    tops = stellar_subdivide(tops, target, next++);
  }
  std::vector<VertexId> perm(static_cast<std::size_t>(next));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  // Drop ids that no simplex uses so vertex ids stay arbitrary but valid.
  return extract_pair(SimplicialComplex::build(relabel(tops, perm)));
}

/// A named built-in: either a manifold pair or a geometric link mesh.
struct Generated {
  std::optional<ManifoldPair> pair;
  std::optional<GeometricMesh> mesh;
};

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> n = {"t3",   "s3_boundary_simplex", "s3_round",     "ball4",
                                             "d2xt2", "cp2_minus_ball",     "t4_minus_ball"};
  return n;
}

/// `n` is the torus grid size; `refine` subdivides geometric meshes.
inline Generated generate(const std::string& name, int n = 3, int refine = 0) {
  if (refine < 0) fail(ErrorKind::InvalidInput, "refine must be >= 0");
  Generated g;
  auto refined = [refine](GeometricMesh m) {
    for (int r = 0; r < refine; ++r) m = subdivide(m);
    return m;
  };
  if (name == "t3") g.mesh = refined(t3(n));
  else if (name == "s3_boundary_simplex") g.mesh = refined(s3_boundary_simplex());
  else if (name == "s3_round") g.mesh = s3_round(refine);
  else if (name == "ball4") g.pair = ball4();
  else if (name == "d2xt2") g.pair = d2xt2(n);
  else if (name == "cp2_minus_ball") g.pair = cp2_minus_ball();
  else if (name == "t4_minus_ball") g.pair = t4_minus_ball(n);
  else fail(ErrorKind::InvalidInput, "unknown builtin '" + name + "'");
  return g;
}

}  // namespace coassoc::builtin
