#pragma once

// JSON and text renderings, MatrixMarket dumps and refinement plot data.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <unsupported/Eigen/SparseExtra>

#include "coassoc/moduli.hpp"

namespace coassoc::io {

using nlohmann::json;

/// Non-finite doubles become null.
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json profile_json(const CohomologyProfile& p) {
  return {
      {"betti_C", p.b_C},
      {"betti_L", p.b_L},
      {"betti_cs", p.b_cs},
      {"les_ranks", {{"j", p.les_ranks.j}, {"r", p.les_ranks.r}, {"connecting", p.les_ranks.connecting}}},
      {"exactness_defects", p.exactness_defects},
      {"dim_V", p.dim_V},
  };
}

inline json pairing_json(const PairingData& f) {
  json gram = json::array();
  for (std::size_t i = 0; i < f.gram.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < f.gram.cols(); ++j) row.push_back(exact::to_string(f.gram(i, j)));
    gram.push_back(row);
  }
  return {{"gram", gram}, {"dim_V_plus", f.v_plus}, {"dim_V_minus", f.v_minus}};
}

inline json spectrum_json(const SpectrumResult& s) {
  json groups = json::array();
  for (const auto& g : s.groups) groups.push_back({{"value", g.value}, {"multiplicity", g.multiplicity}});
  return {
      {"operator", to_string(s.op)},     {"eigenvalues", s.eigenvalues},         {"residuals", s.residuals},
      {"mesh_level", s.mesh_level},      {"zero_mode_count", s.zero_mode_count}, {"dofs", s.dofs},
      {"groups", groups},
  };
}

inline json walls_json(const WallSet& ws) {
  json walls = json::array();
  for (const auto& w : ws.walls) {
    json src = json::array();
    for (const auto& s : w.sources) src.push_back({{"kind", to_string(s.kind)}, {"value", s.value}});
    walls.push_back({{"rate", w.rate}, {"sources", src}, {"multiplicity", w.d_nonzero ? json(*w.d_nonzero) : json(nullptr)}});
  }
  return {{"orientation", to_string(ws.orientation)}, {"includes_zero", ws.includes_zero}, {"walls", walls}};
}

inline json interval_json(const RateInterval& r) {
  return {{"lower", number(r.lower)}, {"upper", r.upper}, {"binding", to_string(r.binding)}, {"empty", r.empty}};
}

inline json checks_json(const std::vector<Check>& checks) {
  json out = json::array();
  for (const auto& c : checks) out.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return out;
}

inline json report_json(const ModuliReport& r) {
  json j = {
      {"dim_moduli", r.dim_moduli},
      {"ker_dim", r.ker_dim},
      {"coker_dim", r.coker_dim},
      {"index", r.index},
      {"full_op_ker_gamma", r.full_op_ker_gamma},
      {"full_op_ker_minus_gamma", r.full_op_ker_minus_gamma},
      {"harmonic_image_dims", r.harmonic_image_dims},
      {"invariant_kernel_at_zero", r.invariant_kernel_at_zero},
      {"invariant_kernel_at_zero_is_lower_bound", true},
      {"full_operator_index_jump", r.full_operator_index_jump},
      {"nonzero_wall_count", "pure exponential solutions only"},
      {"beta", r.beta},
  };
  j.update(profile_json(r.profile));
  j.update(pairing_json(r.form));
  if (r.admissible_gamma) j["admissible_gamma"] = interval_json(*r.admissible_gamma);
  else j["admissible_gamma"] = "topology-only";
  if (r.spectral) {
    const auto& s = *r.spectral;
    j["mesh_level"] = s.mesh_level;
    j["mesh_betti"] = s.mesh_betti;
    j["lambda0"] = spectrum_json(s.laplace0);
    j["laplace1"] = spectrum_json(s.laplace1);
    json curl = json::array(), walls = json::array();
    for (const auto& o : s.oriented) {
      json c = spectrum_json(o.curl);
      c["orientation"] = to_string(o.orientation);
      curl.push_back(c);
      walls.push_back(walls_json(o.walls));
    }
    j["curl"] = curl;
    j["walls"] = walls;
    json cons = json::array();
    for (const auto& row : s.consistency) cons.push_back({{"gamma", row.gamma}, {"lambda", row.lambda}, {"gap", row.gap}});
    j["coexact_consistency"] = cons;
    j["residuals"] = {{"lambda0", s.laplace0.residuals}, {"laplace1", s.laplace1.residuals}};
  }
  j["checks"] = checks_json(r.checks);
  j["all_checks_pass"] = r.all_pass();
  return j;
}

namespace text_detail {

template <class A>
std::string list(const A& a) {
  std::ostringstream o;
  o << '(';
  bool first = true;
  for (const auto& v : a) {
    o << (first ? "" : ", ") << v;
    first = false;
  }
  o << ')';
  return o.str();
}

inline std::string fmt(double v, const char* pattern = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

}  // namespace text_detail

inline std::string spectrum_text(const SpectrumResult& s) {
  using text_detail::fmt;
  std::ostringstream o;
  o << to_string(s.op) << "  level " << s.mesh_level << "  dofs " << s.dofs << "  zero modes " << s.zero_mode_count << '\n';
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
    o << "  " << fmt(s.eigenvalues[i], "%14.8f") << "   residual " << fmt(s.residuals[i], "%.2e") << '\n';
  return o.str();
}

inline std::string walls_text(const WallSet& ws) {
  using text_detail::fmt;
  std::ostringstream o;
  o << "walls (" << to_string(ws.orientation) << ")\n";
  for (const auto& w : ws.walls) {
    o << "  " << fmt(w.rate, "%12.6f") << "  d=" << (w.d_nonzero ? std::to_string(*w.d_nonzero) : std::string("-")) << "  ";
    for (const auto& s : w.sources) o << ' ' << to_string(s.kind);
    o << '\n';
  }
  return o.str();
}

inline std::string interval_text(const RateInterval& r) {
  using text_detail::fmt;
  if (r.empty) return "empty (beta " + std::string(r.binding == RateBinding::beta ? "binds" : "or wall at 0") + ")";
  return "(" + fmt(r.lower) + ", 0) binding=" + to_string(r.binding);
}

inline std::string report_text(const ModuliReport& r) {
  using text_detail::fmt;
  using text_detail::list;
  std::ostringstream o;
  const auto& p = r.profile;
  o << "betti C        " << list(p.b_C) << '\n'
    << "betti L        " << list(p.b_L) << '\n'
    << "betti cs       " << list(p.b_cs) << '\n'
    << "dim V          " << p.dim_V << "  (V+ " << r.form.v_plus << ", V- " << r.form.v_minus << ")\n"
    << "dim moduli     " << r.dim_moduli << '\n'
    << "ker/coker/ind  " << r.ker_dim << " / " << r.coker_dim << " / " << r.index << '\n'
    << "full op ker    gamma " << r.full_op_ker_gamma << ", -gamma " << r.full_op_ker_minus_gamma << '\n'
    << "image dims     " << list(r.harmonic_image_dims) << '\n'
    << "kernel at 0    >= " << r.invariant_kernel_at_zero << '\n'
    << "index jump     " << r.full_operator_index_jump << '\n'
    << "admissible     " << (r.admissible_gamma ? interval_text(*r.admissible_gamma) : std::string("topology-only")) << '\n';
  if (r.spectral) {
    o << '\n' << spectrum_text(r.spectral->laplace0);
    for (const auto& e : r.spectral->oriented) o << spectrum_text(e.curl) << walls_text(e.walls);
  }
  o << "\nchecks\n";
  for (const auto& c : r.checks) o << "  " << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << c.detail << '\n';
  return o.str();
}

/// Writes M0, M1, K0, K1, Ccurl and the gradient as MatrixMarket coordinate files under `dir`.
inline std::vector<std::string> dump_matrices(const FEMatrices& fe, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::pair<const char*, const SparseMatrix*> mats[] = {{"M0", &fe.M0}, {"M1", &fe.M1}, {"K0", &fe.K0},
                                                              {"K1", &fe.K1}, {"Ccurl", &fe.Ccurl}, {"gradient", &fe.gradient}};
  std::vector<std::string> written;
  for (const auto& [name, m] : mats) {
    const auto path = (dir / (std::string(name) + ".mtx")).string();
    if (!Eigen::saveMarket(*m, path)) fail(ErrorKind::InvalidInput, "cannot write " + path);
    written.push_back(path);
  }
  return written;
}

struct PlotRow {
  int level = 0;
  std::size_t dofs = 0;
  double lambda1 = 0;
  double min_abs_curl = 0;
};

/// Continuum values used for the gap columns.
struct PlotOracle {
  double lambda1 = 0;
  double min_abs_curl = 0;
};

/// Whitespace-separated columns, one row per level, with a '#' header line.
inline std::string emit_plot_data(const std::vector<PlotRow>& rows, const std::optional<PlotOracle>& oracle = std::nullopt) {
  using text_detail::fmt;
  if (rows.size() < 2) fail(ErrorKind::InvalidInput, "need ≥2 levels");
  std::ostringstream o;
  o << "# level dofs lambda1 min_abs_curl";
  if (oracle) o << " gap_lambda1 gap_curl";
  o << '\n';
  for (const auto& r : rows) {
    o << r.level << ' ' << r.dofs << ' ' << fmt(r.lambda1, "%.12g") << ' ' << fmt(r.min_abs_curl, "%.12g");
    if (oracle)
      o << ' ' << fmt(std::abs(r.lambda1 - oracle->lambda1) / oracle->lambda1, "%.6e") << ' '
        << fmt(std::abs(r.min_abs_curl - oracle->min_abs_curl) / oracle->min_abs_curl, "%.6e");
    o << '\n';
  }
  return o.str();
}

}  // namespace coassoc::io
