#pragma once

// Moduli dimension and the kernel, cokernel and index bookkeeping of the linearized operator.

#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "coassoc/cohomology.hpp"
#include "coassoc/intersection_form.hpp"
#include "coassoc/walls.hpp"

namespace coassoc {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct OperatorCounts {
  std::size_t ker = 0;
  std::size_t coker = 0;
  long index = 0;
};

struct FullOperatorCounts {
  std::size_t ker_gamma = 0;
  std::size_t ker_minus_gamma = 0;
  std::array<std::size_t, 5> harmonic_image_dims{};
};

/// dim V₊ of the cup form on V.
inline std::size_t moduli_dimension(const ManifoldPair& pair) {
  const auto profile = les_of_pair(pair);
  return gram_on_V(pair, profile.V_basis).v_plus;
}

/// (dim V₊, b⁰(L) − b⁰(C) + b¹(C), difference) for small negative rates.
inline OperatorCounts linearized_operator_report(const CohomologyProfile& p, const PairingData& form) {
  OperatorCounts c;
  c.ker = form.v_plus;
  const long coker = static_cast<long>(p.b_L[0]) - static_cast<long>(p.b_C[0]) + static_cast<long>(p.b_C[1]);
  if (coker < 0) fail(ErrorKind::ExactnessViolation, "negative cokernel dimension");
  c.coker = static_cast<std::size_t>(coker);
  c.index = static_cast<long>(c.ker) - coker;
  return c;
}

inline OperatorCounts linearized_operator_report(const ManifoldPair& pair) {
  const auto p = les_of_pair(pair);
  return linearized_operator_report(p, gram_on_V(pair, p.V_basis));
}

/// Kernel of d + d* at rates ±γ: the images of H^k_cs → H^k, then those plus Σ b^k(L).
inline FullOperatorCounts full_operator_report(const CohomologyProfile& p) {
  FullOperatorCounts f;
  for (std::size_t k = 0; k < 5; ++k) f.harmonic_image_dims[k] = p.les_ranks.j[k];
  f.ker_gamma = std::accumulate(f.harmonic_image_dims.begin(), f.harmonic_image_dims.end(), std::size_t{0});
  f.ker_minus_gamma = f.ker_gamma + std::accumulate(p.b_L.begin(), p.b_L.end(), std::size_t{0});
  return f;
}

inline FullOperatorCounts full_operator_report(const ManifoldPair& pair) { return full_operator_report(les_of_pair(pair)); }

/// dim ker(H³_cs → H³) from the sequence against b⁰(L) − b⁰(C) + b¹(C) − b³(C).
inline Check h3_kernel_check(const CohomologyProfile& p) {
  const long from_les = static_cast<long>(h3_kernel_from_les(p));
  const long formula = static_cast<long>(p.b_L[0]) - static_cast<long>(p.b_C[0]) + static_cast<long>(p.b_C[1]) -
                       static_cast<long>(p.b_C[3]);
  return {"h3_kernel", from_les == formula,
          "sequence " + std::to_string(from_les) + ", Betti formula " + std::to_string(formula)};
}

enum class OrientationChoice { induced, reversed, both };

inline const char* to_string(OrientationChoice o) {
  switch (o) {
    case OrientationChoice::induced: return "induced";
    case OrientationChoice::reversed: return "reversed";
    case OrientationChoice::both: return "both";
  }
  return "?";
}

struct ReportOptions {
  int eigs = 12;
  double beta = -1.0;
  OrientationChoice orientation = OrientationChoice::induced;
  SpectralOptions spectral;
  WallOptions walls;
  double mirror_tol = 1e-10;  ///< relative, for the orientation-reversal check
};

struct OrientedSpectral {
  Orientation orientation = Orientation::induced;
  SpectrumResult curl;
  WallSet walls;
};

/// Spectral side of the report; absent in topology-only mode.
struct SpectralSection {
  int mesh_level = 0;
  std::array<std::size_t, 4> mesh_betti{};
  SpectrumResult laplace0;
  SpectrumResult laplace1;
  std::vector<OrientedSpectral> oriented;
  std::vector<ConsistencyRow> consistency;
};

struct ModuliReport {
  std::size_t dim_moduli = 0;
  std::size_t ker_dim = 0;
  std::size_t coker_dim = 0;
  long index = 0;
  std::size_t full_op_ker_gamma = 0;
  std::size_t full_op_ker_minus_gamma = 0;
  std::array<std::size_t, 5> harmonic_image_dims{};
  std::optional<RateInterval> admissible_gamma;  ///< absent in topology-only mode
  std::size_t invariant_kernel_at_zero = 0;
  std::size_t full_operator_index_jump = 0;
  double beta = -1.0;
  CohomologyProfile profile;
  PairingData form;
  std::optional<SpectralSection> spectral;
  std::vector<Check> checks;

  bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

namespace report_detail {

inline std::string num(long v) { return std::to_string(v); }

inline Check equal(std::string name, long a, long b, const std::string& what) {
  return {std::move(name), a == b, what + ": " + num(a) + " vs " + num(b)};
}

inline std::size_t sum(const auto& a) { return std::accumulate(a.begin(), a.end(), std::size_t{0}); }

}  // namespace report_detail

/// Every number of the report, with each identity recomputed by a second route and recorded
/// in `checks`. Upstream failures propagate as Error with the stage named.
inline ModuliReport assemble_report(const ManifoldPair& pair, const GeometricMesh* mesh, const ReportOptions& opt = {}) {
  using report_detail::equal;
  using report_detail::sum;
  if (!(opt.beta < 0)) fail(ErrorKind::InvalidInput, "beta must be negative");
  if (pair.link.count(0) == 0) fail(ErrorKind::CompactComponent, "the link is empty");
  ModuliReport r;
  r.beta = opt.beta;
  auto stage = [](const char* name, auto&& f) {
    try {
      return f();
    } catch (const SolverError&) {
      throw;
    } catch (const Error& e) {
      throw Error(e.kind(), std::string(name) + ": " + e.what());
    }
  };
  r.profile = stage("cohomology", [&] { return les_of_pair(pair); });
  const auto& p = r.profile;
  r.form = stage("intersection form", [&] { return gram_on_V(pair, p.V_basis); });
  const auto lin = linearized_operator_report(p, r.form);
  const auto full = full_operator_report(p);
  r.dim_moduli = r.form.v_plus;
  r.ker_dim = lin.ker;
  r.coker_dim = lin.coker;
  r.index = lin.index;
  r.full_op_ker_gamma = full.ker_gamma;
  r.full_op_ker_minus_gamma = full.ker_minus_gamma;
  r.harmonic_image_dims = full.harmonic_image_dims;
  r.invariant_kernel_at_zero = invariant_kernel_at_zero(p.b_L);
  r.full_operator_index_jump = full_operator_index_jump(p.b_L);

  auto& c = r.checks;
  {
    bool exact = true;
    for (long d : p.exactness_defects) exact = exact && d == 0;
    c.push_back({"les_exact", exact, std::to_string(p.exactness_defects.size()) + " nodes"});
    bool dual = true;
    for (std::size_t k = 0; k <= 4; ++k) dual = dual && p.b_C[k] == p.b_cs[4 - k];
    for (std::size_t k = 0; k <= 3; ++k) dual = dual && p.b_L[k] == p.b_L[3 - k];
    c.push_back({"poincare_duality", dual, "b^k(C) = b^{4-k}_cs(C), b^k(L) = b^{3-k}(L)"});
  }
  try {
    c.push_back(equal("dim_V_two_ways", dim_v_formula(p), static_cast<long>(p.dim_V), "alternating sum vs image rank"));
  } catch (const Error& e) {
    c.push_back({"dim_V_two_ways", false, e.what()});
  }
  c.push_back(equal("cup_form_nondegenerate", static_cast<long>(r.form.v_plus + r.form.v_minus),
                    static_cast<long>(p.dim_V), "v+ + v- vs dim V"));
  c.push_back({"cup_form_symmetric", r.form.gram.is_symmetric(), "exact"});
  c.push_back({"consistency_square", r.dim_moduli == r.form.v_plus && r.form.v_plus == r.ker_dim,
               "dim_moduli " + std::to_string(r.dim_moduli) + ", v+ " + std::to_string(r.form.v_plus) + ", ker " +
                   std::to_string(r.ker_dim)});
  // The cokernel again, as the H³ kernel of the sequence plus b³(C).
  c.push_back(equal("cokernel_via_sequence", static_cast<long>(r.coker_dim),
                    static_cast<long>(h3_kernel_from_les(p) + p.b_C[3]), "b0(L)-b0(C)+b1(C) vs ker(H3cs->H3)+b3(C)"));
  c.push_back(equal("index", r.index, static_cast<long>(r.ker_dim) - static_cast<long>(r.coker_dim), "ker - coker"));
  c.push_back(h3_kernel_check(p));
  // Σ_k (b^k(C) + b^k_cs − dim im_k) equals Σ_k dim im_k + Σ_k b^k(L) by exactness.
  {
    const long via_betti = static_cast<long>(sum(p.b_C) + sum(p.b_cs)) - static_cast<long>(r.full_op_ker_gamma);
    c.push_back(equal("kernel_jump", static_cast<long>(r.full_op_ker_minus_gamma), via_betti,
                      "ker_-gamma vs sum b(C) + sum b_cs - ker_gamma"));
    c.push_back(equal("kernel_jump_is_link_betti",
                      static_cast<long>(r.full_op_ker_minus_gamma) - static_cast<long>(r.full_op_ker_gamma),
                      static_cast<long>(sum(p.b_L)), "ker_-gamma - ker_gamma vs sum b(L)"));
    c.push_back(equal("index_jump", static_cast<long>(r.full_operator_index_jump),
                      2 * (static_cast<long>(r.full_op_ker_minus_gamma) - static_cast<long>(r.full_op_ker_gamma)),
                      "2 sum b(L) vs twice the kernel jump"));
  }
  if (!mesh) return r;

  SpectralSection s;
  s.mesh_level = mesh->level;
  const auto mb = betti(mesh->complex);
  for (std::size_t k = 0; k < 4 && k < mb.size(); ++k) s.mesh_betti[k] = mb[k];
  c.push_back({"mesh_matches_link", s.mesh_betti == p.b_L, "Betti numbers of the mesh vs the link"});
  const auto fe = stage("assembly", [&] { return assemble(*mesh); });
  s.laplace0 = laplacian0_spectrum(*mesh, fe, opt.eigs, opt.spectral);
  const auto modes = coclosed_modes(*mesh, fe, std::max(opt.eigs, 2 * opt.eigs + 8), opt.spectral);
  s.laplace1 = laplacian1_spectrum(modes, 2 * opt.eigs + 8, opt.spectral);
  c.push_back(equal("laplace0_zero_modes", static_cast<long>(s.laplace0.zero_mode_count),
                    static_cast<long>(s.mesh_betti[0]), "zero modes vs b0"));
  c.push_back(equal("laplace1_zero_modes", static_cast<long>(s.laplace1.zero_mode_count),
                    static_cast<long>(s.mesh_betti[1]), "zero modes vs b1"));
  std::vector<Orientation> os;
  if (opt.orientation != OrientationChoice::reversed) os.push_back(Orientation::induced);
  if (opt.orientation != OrientationChoice::induced) os.push_back(Orientation::reversed);
  for (Orientation o : os) {
    OrientedSpectral e;
    e.orientation = o;
    e.curl = curl_spectrum(modes, fe, opt.eigs, o, opt.spectral);
    e.walls = wall_set(s.laplace0, e.curl, o, opt.walls);
    c.push_back(equal(std::string("curl_zero_modes_") + to_string(o), static_cast<long>(e.curl.zero_mode_count),
                      static_cast<long>(mesh->complex.count(0) - s.mesh_betti[0] + s.mesh_betti[1]),
                      "closed forms vs #vertices - b0 + b1"));
    s.oriented.push_back(std::move(e));
  }
  if (s.oriented.size() == 2) {
    const auto& a = s.oriented[0].curl.eigenvalues;
    const auto& b = s.oriented[1].curl.eigenvalues;
    double err = a.size() == b.size() ? 0.0 : INFINITY, scale = 0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
      err = std::max(err, std::abs(a[i] + b[b.size() - 1 - i]));
      scale = std::max(scale, std::abs(a[i]));
    }
    c.push_back({"orientation_mirror", err <= opt.mirror_tol * std::max(scale, 1.0),
                 "max |gamma_induced + gamma_reversed| = " + std::to_string(err)});
  }
  s.consistency = coexact_consistency(s.oriented.front().curl, s.laplace1);

  // The admissible interval must avoid the walls of every requested orientation.
  RateInterval best;
  for (std::size_t i = 0; i < s.oriented.size(); ++i) {
    const auto iv = admissible_gamma(s.oriented[i].walls, opt.beta);
    if (i == 0 || iv.lower > best.lower) best = iv;
  }
  r.admissible_gamma = best;
  r.spectral = std::move(s);
  return r;
}

}  // namespace coassoc
