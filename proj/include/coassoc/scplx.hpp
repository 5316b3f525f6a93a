#pragma once

// SCPLX v1 mesh text format.
//
//   scplx 1 dim=<k> [embedding=euclidean|torus|sphere] [period=<p>] [level=<r>]
//   v <id> [x y z [w]]
//   s <v0> ... <vk>
//
// Only maximal simplices are listed; the listed vertex order is the orientation.
// '#' starts a comment. The embedding, period and level keys extend the header for
// geometric meshes and default to euclidean, 1 and 0.

#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "coassoc/geometry.hpp"

namespace coassoc {

struct ScplxFile {
  SimplicialComplex complex;
  /// Coordinates by vertex id, present when every vertex line carries them.
  std::optional<std::vector<Point>> coords;
  int ambient_dim = 0;
  Embedding embedding = Embedding::Euclidean;
  double period = 1.0;
  int level = 0;
};

namespace scplx_detail {

[[noreturn]] inline void parse_error(std::size_t line, const std::string& what) {
  fail(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what);
}

inline long parse_int(const std::string& tok, std::size_t line) {
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(tok, &used);
  } catch (const std::exception&) {
    parse_error(line, "expected an integer, got '" + tok + "'");
  }
  if (used != tok.size()) parse_error(line, "expected an integer, got '" + tok + "'");
  return v;
}

inline double parse_double(const std::string& tok, std::size_t line) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception&) {
    parse_error(line, "expected a number, got '" + tok + "'");
  }
  if (used != tok.size() || !std::isfinite(v)) parse_error(line, "expected a finite number, got '" + tok + "'");
  return v;
}

inline const char* embedding_name(Embedding e) {
  switch (e) {
    case Embedding::Euclidean: return "euclidean";
    case Embedding::FlatTorus: return "torus";
    case Embedding::RoundSphere: return "sphere";
  }
  return "euclidean";
}

}  // namespace scplx_detail

/// Throws ParseError with the offending line number, or the SimplicialComplex build errors.
inline ScplxFile parse_scplx(std::istream& in) {
  using namespace scplx_detail;
  ScplxFile f;
  std::optional<int> dim;
  std::map<long, std::vector<double>> vertices;
  std::vector<Simplex> simplices;
  std::vector<std::size_t> simplex_lines;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ss(raw);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (!dim) {
      if (tok[0] != "scplx" || tok.size() < 3 || tok[1] != "1") parse_error(line, "expected header 'scplx 1 dim=<k>'");
      for (std::size_t i = 2; i < tok.size(); ++i) {
        const auto eq = tok[i].find('=');
        if (eq == std::string::npos) parse_error(line, "malformed header field '" + tok[i] + "'");
        const std::string key = tok[i].substr(0, eq), val = tok[i].substr(eq + 1);
        if (key == "dim") {
          const long d = parse_int(val, line);
          if (d < 1 || d > 4) parse_error(line, "dim must be between 1 and 4");
          dim = static_cast<int>(d);
        } else if (key == "embedding") {
          if (val == "euclidean") f.embedding = Embedding::Euclidean;
          else if (val == "torus") f.embedding = Embedding::FlatTorus;
          else if (val == "sphere") f.embedding = Embedding::RoundSphere;
          else parse_error(line, "unknown embedding '" + val + "'");
        } else if (key == "period") {
          f.period = parse_double(val, line);
          if (!(f.period > 0)) parse_error(line, "period must be positive");
        } else if (key == "level") {
          const long l = parse_int(val, line);
          if (l < 0) parse_error(line, "level must be nonnegative");
          f.level = static_cast<int>(l);
        } else {
          parse_error(line, "unknown header field '" + key + "'");
        }
      }
      if (!dim) parse_error(line, "header lacks dim=<k>");
      continue;
    }
    if (tok[0] == "v") {
      if (tok.size() < 2) parse_error(line, "vertex line needs an id");
      const long id = parse_int(tok[1], line);
      if (id < 0) parse_error(line, "negative vertex id");
      std::vector<double> x;
      for (std::size_t i = 2; i < tok.size(); ++i) x.push_back(parse_double(tok[i], line));
      if (!x.empty() && x.size() != 3 && x.size() != 4) parse_error(line, "vertex needs 0, 3 or 4 coordinates");
      if (!vertices.emplace(id, std::move(x)).second) parse_error(line, "vertex " + std::to_string(id) + " listed twice");
    } else if (tok[0] == "s") {
      Simplex s;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        const long v = parse_int(tok[i], line);
        if (v < 0 || v > INT32_MAX) parse_error(line, "vertex id out of range");
        s.push_back(static_cast<VertexId>(v));
      }
      if (s.empty() || static_cast<int>(s.size()) > *dim + 1)
        parse_error(line, "simplex must have between 1 and " + std::to_string(*dim + 1) + " vertices");
      simplices.push_back(std::move(s));
      simplex_lines.push_back(line);
    } else {
      parse_error(line, "unknown record '" + tok[0] + "'");
    }
  }
  if (!dim) parse_error(line, "missing header");
  if (simplices.empty()) parse_error(line, "no simplices");
  try {
    f.complex = SimplicialComplex::build(simplices);
  } catch (const Error& e) {
    // Report the first offending simplex line when the message names one.
    std::string msg = e.what();
    if (const auto colon = msg.find(": "); colon != std::string::npos) msg = msg.substr(colon + 2);
    const auto hash = msg.find('#');
    if (hash != std::string::npos) {
      const std::size_t n = std::stoul(msg.substr(hash + 1));
      if (n < simplex_lines.size()) msg = "line " + std::to_string(simplex_lines[n]) + ": " + msg;
    }
    throw Error(e.kind(), msg);
  }
  if (f.complex.dim() != *dim) parse_error(line, "header dim=" + std::to_string(*dim) + " but the top simplices have dimension " +
                                                     std::to_string(f.complex.dim()));
  for (VertexId v : f.complex.vertices())
    if (!vertices.empty() && !vertices.count(v)) parse_error(line, "vertex " + std::to_string(v) + " used but not declared");

  std::size_t with = 0, width = 0;
  for (const auto& [id, x] : vertices)
    if (!x.empty()) {
      ++with;
      if (width && x.size() != width) parse_error(line, "vertices mix 3 and 4 coordinates");
      width = x.size();
    }
  if (with > 0) {
    if (with != vertices.size()) parse_error(line, "either all vertices or none carry coordinates");
    const auto nv = f.complex.vertex_count();
    std::vector<Point> coords(vertices.rbegin()->first + 1);
    for (const auto& [id, x] : vertices)
      for (std::size_t i = 0; i < x.size(); ++i) coords[static_cast<std::size_t>(id)][i] = x[i];
    if (coords.size() != nv) parse_error(line, "geometric vertex ids must be 0..n-1 and all used");
    f.coords = std::move(coords);
    f.ambient_dim = static_cast<int>(width);
  }
  return f;
}

inline ScplxFile parse_scplx(const std::string& text) {
  std::istringstream in(text);
  return parse_scplx(in);
}

/// Maximal simplices of x; top-dimensional ones in their oriented order.
inline std::vector<Simplex> maximal_simplices(const SimplicialComplex& x) {
  std::vector<Simplex> out = x.oriented_top();
  for (int k = x.dim() - 1; k >= 0; --k) {
    std::vector<bool> covered(x.count(k), false);
    for (const auto& s : x.simplices(k + 1))
      for (std::size_t i = 0; i < s.size(); ++i) covered[*x.index_of(face(s, i))] = true;
    for (std::size_t i = 0; i < covered.size(); ++i)
      if (!covered[i]) out.push_back(x.simplices(k)[i]);
  }
  return out;
}

/// Canonical text: vertices by id, maximal simplices by dimension then canonical order.
inline std::string serialize_scplx(const SimplicialComplex& x, const std::vector<Point>* coords = nullptr,
                                   int ambient_dim = 3, Embedding embedding = Embedding::Euclidean, double period = 1.0,
                                   int level = 0) {
  std::ostringstream out;
  out << "scplx 1 dim=" << x.dim();
  if (coords) {
    out << " embedding=" << scplx_detail::embedding_name(embedding);
    if (embedding == Embedding::FlatTorus) {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", period);
      out << " period=" << buf;
    }
    out << " level=" << level;
  }
  out << '\n';
  for (VertexId v : x.vertices()) {
    out << "v " << v;
    if (coords)
      for (int i = 0; i < ambient_dim; ++i) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", (*coords)[static_cast<std::size_t>(v)][static_cast<std::size_t>(i)]);
        out << ' ' << buf;
      }
    out << '\n';
  }
  for (const auto& s : maximal_simplices(x)) {
    out << 's';
    for (VertexId v : s) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

inline std::string serialize_scplx(const GeometricMesh& m) {
  return serialize_scplx(m.complex, &m.coords, m.ambient_dim, m.embedding, m.period, m.level);
}

inline std::string serialize_scplx(const ScplxFile& f) {
  if (f.coords) return serialize_scplx(f.complex, &*f.coords, f.ambient_dim, f.embedding, f.period, f.level);
  return serialize_scplx(f.complex);
}

/// The file as a geometric 3-manifold mesh; validates geometry.
inline GeometricMesh to_mesh(const ScplxFile& f) {
  if (f.complex.dim() != 3) fail(ErrorKind::InvalidInput, "a geometric mesh needs dim=3");
  if (!f.coords) fail(ErrorKind::InvalidInput, "a geometric mesh needs vertex coordinates");
  GeometricMesh m;
  m.complex = f.complex;
  m.coords = *f.coords;
  m.ambient_dim = f.ambient_dim;
  m.embedding = f.embedding;
  m.period = f.period;
  m.level = f.level;
  if (m.embedding == Embedding::RoundSphere && m.ambient_dim != 4)
    fail(ErrorKind::InvalidInput, "sphere embedding needs 4 coordinates");
  if (m.embedding == Embedding::FlatTorus && m.ambient_dim != 3)
    fail(ErrorKind::InvalidInput, "torus embedding needs 3 coordinates");
  validate(m);
  return m;
}

}  // namespace coassoc
