#pragma once

// Fredholm walls of the translation-invariant operator on the cylinder over L.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "coassoc/spectral.hpp"

namespace coassoc {

enum class WallSourceKind { zero, delta0, curl };

inline const char* to_string(WallSourceKind k) {
  switch (k) {
    case WallSourceKind::zero: return "zero";
    case WallSourceKind::delta0: return "delta0";
    case WallSourceKind::curl: return "curl";
  }
  return "?";
}

/// One spectral origin of a wall. `value` is λ for delta0, γ for curl and 0 for zero.
struct WallSource {
  WallSourceKind kind = WallSourceKind::zero;
  double value = 0;
};

struct Wall {
  double rate = 0;
  std::vector<WallSource> sources;
  /// mult_Δ(ε²) + mult_curl(ε); absent at ε = 0.
  std::optional<std::size_t> d_nonzero;
};

struct WallSet {
  std::vector<Wall> walls;  ///< ascending by rate; exactly one wall at 0
  bool includes_zero = true;
  Orientation orientation = Orientation::induced;
};

struct WallOptions {
  double merge_tol = 1e-6;  ///< relative; walls closer than this merge
};

/// Walls from the function Laplacian (±√λ for every positive λ) and from the nonzero curl
/// eigenvalues (at their signed value), plus the wall at 0.
inline WallSet wall_set(const SpectrumResult& laplace0, const SpectrumResult& curl,
                        Orientation orientation = Orientation::induced, const WallOptions& opt = {}) {
  if (laplace0.op != SpectralOperator::laplace0 || curl.op != SpectralOperator::curl)
    fail(ErrorKind::InvalidInput, "wall_set needs a laplace0 and a curl spectrum");
  if (laplace0.mesh_level != curl.mesh_level) fail(ErrorKind::InvalidInput, "spectra come from different mesh levels");
  std::vector<Wall> raw;
  raw.push_back({0.0, {{WallSourceKind::zero, 0.0}}, std::nullopt});
  for (std::size_t i = laplace0.zero_mode_count; i < laplace0.eigenvalues.size(); ++i) {
    const double l = laplace0.eigenvalues[i];
    if (!(l > 0)) continue;
    const double r = std::sqrt(l);
    raw.push_back({r, {{WallSourceKind::delta0, l}}, 1});
    raw.push_back({-r, {{WallSourceKind::delta0, l}}, 1});
  }
  for (double g : curl.eigenvalues)
    if (g != 0.0) raw.push_back({g, {{WallSourceKind::curl, g}}, 1});
  std::stable_sort(raw.begin(), raw.end(), [](const Wall& a, const Wall& b) { return a.rate < b.rate; });

  WallSet ws;
  ws.orientation = orientation;
  // Chain merging: a wall joins the previous group when it is within tolerance of its last member.
  double last = 0;
  for (const Wall& w : raw) {
    const bool zero = w.sources.front().kind == WallSourceKind::zero;
    const bool near = !ws.walls.empty() &&
                      std::abs(w.rate - last) <= opt.merge_tol * std::max(std::abs(w.rate), std::abs(last));
    if (near && !zero && ws.walls.back().d_nonzero) {
      Wall& g = ws.walls.back();
      const double n = static_cast<double>(*g.d_nonzero);
      g.rate = (g.rate * n + w.rate) / (n + 1);
      g.sources.push_back(w.sources.front());
      *g.d_nonzero += 1;
    } else {
      ws.walls.push_back(w);
    }
    last = w.rate;
  }
  return ws;
}

/// d(ε) at a nonzero rate: the number of Δ-modes with λ = ε² and curl modes with γ = ε,
/// summed over every wall within relative distance `tol` of ε. Returns 0 at ε = 0 or off the walls.
inline std::size_t wall_multiplicity(const WallSet& ws, double eps, double tol = 1e-6) {
  if (eps == 0.0) return 0;
  std::size_t n = 0;
  for (const Wall& w : ws.walls)
    if (w.d_nonzero && std::abs(w.rate - eps) <= tol * std::abs(eps)) n += *w.d_nonzero;
  return n;
}

/// The negative wall closest to 0, if any.
inline std::optional<double> nearest_negative_wall(const WallSet& ws) {
  std::optional<double> best;
  for (const Wall& w : ws.walls)
    if (w.rate < 0 && (!best || w.rate > *best)) best = w.rate;
  return best;
}

/// Dimension of the t-independent solutions at rate 0: harmonic 1-forms and constants on L.
/// A lower bound for d(0).
inline std::size_t invariant_kernel_at_zero(const std::array<std::size_t, 4>& b_L) { return b_L[1] + b_L[0]; }

/// Index jump of d + d* across the wall at 0.
inline std::size_t full_operator_index_jump(const std::array<std::size_t, 4>& b_L) {
  return 2 * (b_L[0] + b_L[1] + b_L[2] + b_L[3]);
}

enum class RateBinding { wall, beta };

inline const char* to_string(RateBinding b) { return b == RateBinding::wall ? "wall" : "beta"; }

/// The open interval (lower, 0) of admissible rates.
struct RateInterval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = 0;
  RateBinding binding = RateBinding::beta;
  bool empty = false;
};

/// (max(nearest negative wall, β), 0). A tie binds to the wall. Empty when β ≥ 0 or a
/// negative wall sits at 0 within `zero_tol`.
inline RateInterval admissible_gamma(const WallSet& ws, double beta, double zero_tol = 1e-12) {
  RateInterval r;
  const auto w = nearest_negative_wall(ws);
  if (w && *w >= beta) {
    r.lower = *w;
    r.binding = RateBinding::wall;
  } else {
    r.lower = beta;
    r.binding = RateBinding::beta;
  }
  r.empty = !(beta < 0) || !(r.lower < -zero_tol);
  return r;
}

}  // namespace coassoc
