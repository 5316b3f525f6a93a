#pragma once

// Spectra of the function Laplacian and of −*d on a piecewise-flat link.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "coassoc/eigensolver.hpp"
#include "coassoc/fem.hpp"

namespace coassoc {

enum class SpectralOperator { laplace0, laplace1, curl };
enum class Orientation { induced, reversed };

inline const char* to_string(SpectralOperator op) {
  switch (op) {
    case SpectralOperator::laplace0: return "laplace0";
    case SpectralOperator::laplace1: return "laplace1";
    case SpectralOperator::curl: return "curl";
  }
  return "?";
}
inline const char* to_string(Orientation o) { return o == Orientation::induced ? "induced" : "reversed"; }

struct SpectralOptions {
  EigenOptions eig;
  double group_tol = 1e-6;  ///< relative tolerance for multiplicity grouping
  double zero_tol = 1e-6;   ///< zero mode iff |value| ≤ zero_tol · max |reported value|
  double cluster_gap = 0.05;  ///< relative gap that separates eigenspaces of (K1, M1) for curl extraction
};

struct EigenGroup {
  double value = 0;  ///< mean of the grouped eigenvalues
  std::size_t multiplicity = 0;
};

struct SpectrumResult {
  SpectralOperator op = SpectralOperator::laplace0;
  std::vector<double> eigenvalues;  ///< ascending; curl lists nonzero values only
  std::vector<double> residuals;    ///< relative residual per eigenvalue
  int mesh_level = 0;
  std::size_t zero_mode_count = 0;
  std::size_t dofs = 0;
  std::vector<EigenGroup> groups;
};

/// Groups sorted values whose consecutive relative gaps are ≤ tol.
inline std::vector<EigenGroup> group_values(const std::vector<double>& sorted, double tol) {
  std::vector<EigenGroup> out;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    const bool split = i == sorted.size() ||
                       std::abs(sorted[i] - sorted[i - 1]) > tol * std::max(std::abs(sorted[i]), std::abs(sorted[i - 1]));
    if (!split) continue;
    EigenGroup g;
    for (std::size_t j = start; j < i; ++j) g.value += sorted[j];
    g.value /= static_cast<double>(i - start);
    g.multiplicity = i - start;
    out.push_back(g);
    start = i;
  }
  return out;
}

namespace spectral_detail {

inline RangeDeflation exact_forms(const GeometricMesh& mesh, const FEMatrices& fe) {
  std::vector<Eigen::Index> pinned;
  const auto& x = mesh.complex;
  std::vector<int> comp(x.count(0), -1);
  std::vector<std::vector<std::size_t>> adj(x.count(0));
  for (const auto& e : x.simplices(1)) {
    adj[static_cast<std::size_t>(e[0])].push_back(static_cast<std::size_t>(e[1]));
    adj[static_cast<std::size_t>(e[1])].push_back(static_cast<std::size_t>(e[0]));
  }
  for (std::size_t v = 0; v < comp.size(); ++v) {
    if (comp[v] >= 0) continue;
    pinned.push_back(static_cast<Eigen::Index>(v));
    std::vector<std::size_t> stack = {v};
    comp[v] = 1;
    while (!stack.empty()) {
      const auto u = stack.back();
      stack.pop_back();
      for (auto w : adj[u])
        if (comp[w] < 0) {
          comp[w] = 1;
          stack.push_back(w);
        }
    }
  }
  return RangeDeflation(fe.gradient, fe.M1, pinned);
}

inline double trace(const SparseMatrix& a) { return a.diagonal().cwiseAbs().sum(); }

/// Smallest-magnitude eigenpairs of (a, m): dense below the threshold, shift-invert above.
inline EigenPairs smallest(const SparseMatrix& a, const SparseMatrix& m, Eigen::Index nev, double sigma,
                           bool definite, const RangeDeflation* defl, const EigenOptions& opt) {
  if (a.rows() <= opt.dense_threshold) {
    auto all = dense_pencil(a, m, defl);
    std::vector<std::size_t> idx(all.values.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
      const double di = std::abs(all.values[i] - sigma), dj = std::abs(all.values[j] - sigma);
      return di != dj ? di < dj : all.values[i] < all.values[j];
    });
    idx.resize(std::min<std::size_t>(idx.size(), static_cast<std::size_t>(nev)));
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return all.values[i] < all.values[j]; });
    EigenPairs out;
    out.vectors.resize(a.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) {
      out.values.push_back(all.values[idx[j]]);
      out.residuals.push_back(all.residuals[idx[j]]);
      out.vectors.col(static_cast<Eigen::Index>(j)) = all.vectors.col(static_cast<Eigen::Index>(idx[j]));
    }
    return out;
  }
  return shift_invert(a, m, nev, sigma, definite, defl, opt);
}

inline void verify_residuals(const EigenPairs& p, const EigenOptions& opt, const char* what) {
  double worst = 0;
  for (double r : p.residuals) worst = std::max(worst, r);
  if (worst > opt.residual_tol)
    throw SolverError(std::string(what) + ": eigenpair residual " + std::to_string(worst) + " above tolerance", worst);
}

inline std::size_t count_zero(const std::vector<double>& v, double tol) {
  double scale = 0;
  for (double x : v) scale = std::max(scale, std::abs(x));
  std::size_t n = 0;
  for (double x : v)
    if (std::abs(x) <= tol * scale) ++n;
  return n;
}

}  // namespace spectral_detail

/// Smallest `count` eigenvalues of Δ = d*d on functions, pencil (K0, M0).
inline SpectrumResult laplacian0_spectrum(const GeometricMesh& mesh, const FEMatrices& fe, int count,
                                          const SpectralOptions& opt = {}) {
  if (count < 1) fail(ErrorKind::InvalidInput, "eigenvalue count must be >= 1");
  const double sigma = -1e-2 * spectral_detail::trace(fe.K0) / spectral_detail::trace(fe.M0);
  const auto p = spectral_detail::smallest(fe.K0, fe.M0, count, sigma, true, nullptr, opt.eig);
  spectral_detail::verify_residuals(p, opt.eig, "laplace0");
  SpectrumResult r;
  r.op = SpectralOperator::laplace0;
  r.eigenvalues = p.values;
  r.residuals = p.residuals;
  r.mesh_level = mesh.level;
  r.dofs = static_cast<std::size_t>(fe.K0.rows());
  r.zero_mode_count = spectral_detail::count_zero(r.eigenvalues, opt.zero_tol);
  r.groups = group_values(r.eigenvalues, opt.group_tol);
  return r;
}

inline SpectrumResult laplacian0_spectrum(const GeometricMesh& mesh, int count, const SpectralOptions& opt = {}) {
  return laplacian0_spectrum(mesh, assemble(mesh), count, opt);
}

/// Smallest `count` eigenvalues of the pencil (K1, M1) on the M1-orthogonal complement of
/// exact Whitney forms: harmonic zero modes followed by the coexact spectrum of d*d.
inline SpectrumResult laplacian1_spectrum(const GeometricMesh& mesh, const FEMatrices& fe, int count,
                                          const SpectralOptions& opt = {}) {
  if (count < 1) fail(ErrorKind::InvalidInput, "eigenvalue count must be >= 1");
  const auto defl = spectral_detail::exact_forms(mesh, fe);
  const double sigma = -1e-2 * spectral_detail::trace(fe.K1) / spectral_detail::trace(fe.M1);
  const auto p = spectral_detail::smallest(fe.K1, fe.M1, count, sigma, true, &defl, opt.eig);
  spectral_detail::verify_residuals(p, opt.eig, "laplace1");
  SpectrumResult r;
  r.op = SpectralOperator::laplace1;
  r.eigenvalues = p.values;
  r.residuals = p.residuals;
  r.mesh_level = mesh.level;
  r.dofs = static_cast<std::size_t>(fe.K1.rows());
  r.zero_mode_count = spectral_detail::count_zero(r.eigenvalues, opt.zero_tol);
  r.groups = group_values(r.eigenvalues, opt.group_tol);
  return r;
}

inline SpectrumResult laplacian1_spectrum(const GeometricMesh& mesh, int count, const SpectralOptions& opt = {}) {
  return laplacian1_spectrum(mesh, assemble(mesh), count, opt);
}

/// Low eigenpairs of (K1, M1) on the M1-complement of exact forms, ending at a spectral gap.
struct CoclosedModes {
  EigenPairs pairs;           ///< ascending; harmonic modes first
  std::size_t zeros = 0;      ///< harmonic modes
  std::size_t cut = 0;        ///< pairs[0, cut) close whole eigenspaces
  std::size_t exact_rank = 0; ///< dimension of the exact Whitney forms
  int mesh_level = 0;
  std::size_t dofs = 0;
};

/// At least `wanted` positive modes, cut at the widest relative gap above them so that no
/// eigenspace is truncated. The solve grows until that gap reaches cluster_gap, the space is
/// exhausted, or four times the first request has been computed.
inline CoclosedModes coclosed_modes(const GeometricMesh& mesh, const FEMatrices& fe, int wanted,
                                    const SpectralOptions& opt = {}) {
  if (wanted < 1) fail(ErrorKind::InvalidInput, "eigenvalue count must be >= 1");
  const auto defl = spectral_detail::exact_forms(mesh, fe);
  const double sigma = -1e-2 * spectral_detail::trace(fe.K1) / spectral_detail::trace(fe.M1);
  const Eigen::Index avail = fe.K1.rows() - defl.rank();
  Eigen::Index nev = wanted + 16;
  const Eigen::Index cap = 4 * nev;
  for (;;) {
    nev = std::min(nev, avail);
    auto p = spectral_detail::smallest(fe.K1, fe.M1, nev, sigma, true, &defl, opt.eig);
    spectral_detail::verify_residuals(p, opt.eig, "coclosed eigenspaces");
    const std::size_t zeros = spectral_detail::count_zero(p.values, opt.zero_tol);
    const std::size_t total = p.values.size();
    std::size_t cut = 0;
    double widest = -1;
    for (std::size_t i = std::max<std::size_t>(1, zeros + static_cast<std::size_t>(wanted)); i < total; ++i) {
      const double gap = (p.values[i] - p.values[i - 1]) / p.values[i - 1];
      if (gap > widest) {
        widest = gap;
        cut = i;
      }
    }
    const bool exhausted = nev >= avail;
    if (exhausted) cut = total;
    if (cut == 0 || (widest < opt.cluster_gap && !exhausted && nev < cap)) {
      nev += wanted + 16;
      continue;
    }
    CoclosedModes m;
    m.pairs = std::move(p);
    m.zeros = zeros;
    m.cut = cut;
    m.exact_rank = static_cast<std::size_t>(defl.rank());
    m.mesh_level = mesh.level;
    m.dofs = static_cast<std::size_t>(fe.K1.rows());
    return m;
  }
}

/// The first `count` values of the modes as a laplace1 spectrum.
inline SpectrumResult laplacian1_spectrum(const CoclosedModes& modes, int count, const SpectralOptions& opt = {}) {
  if (count < 1) fail(ErrorKind::InvalidInput, "eigenvalue count must be >= 1");
  const auto n = std::min(modes.pairs.values.size(), static_cast<std::size_t>(count));
  SpectrumResult r;
  r.op = SpectralOperator::laplace1;
  r.eigenvalues.assign(modes.pairs.values.begin(), modes.pairs.values.begin() + static_cast<long>(n));
  r.residuals.assign(modes.pairs.residuals.begin(), modes.pairs.residuals.begin() + static_cast<long>(n));
  r.mesh_level = modes.mesh_level;
  r.dofs = modes.dofs;
  r.zero_mode_count = std::min(modes.zeros, n);
  r.groups = group_values(r.eigenvalues, opt.group_tol);
  return r;
}

/// The `count` nonzero eigenvalues of −*d of smallest magnitude, s = +1 for the induced
/// orientation and −1 for the reversed one.
///
/// The Galerkin pencil (−s·Ccurl, M1) on Whitney forms is spectrally polluted, so it is
/// only used through Rayleigh-Ritz on the closed coclosed eigenspaces of (K1, M1), which
/// converge; −*d commutes with d*d and splits each such space into its ±γ parts.
/// `residuals` are those of the (K1, M1) eigenpairs used. zero_mode_count counts exact
/// plus harmonic forms.
inline SpectrumResult curl_spectrum(const CoclosedModes& modes, const FEMatrices& fe, int count, Orientation o,
                                    const SpectralOptions& opt = {}) {
  if (count < 1) fail(ErrorKind::InvalidInput, "eigenvalue count must be >= 1");
  const double s = o == Orientation::induced ? 1.0 : -1.0;
  const auto k = static_cast<Eigen::Index>(modes.cut - modes.zeros);
  const Eigen::MatrixXd x = modes.pairs.vectors.middleCols(static_cast<Eigen::Index>(modes.zeros), k);
  Eigen::MatrixXd h = x.transpose() * ((-s) * (fe.Ccurl * x));
  h = 0.5 * (h + h.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> theta(es.eigenvalues().data(), es.eigenvalues().data() + k);
  std::stable_sort(theta.begin(), theta.end(), [](double u, double v) {
    return std::abs(u) != std::abs(v) ? std::abs(u) < std::abs(v) : u < v;
  });
  theta.resize(std::min<std::size_t>(theta.size(), static_cast<std::size_t>(count)));
  std::sort(theta.begin(), theta.end());
  SpectrumResult r;
  r.op = SpectralOperator::curl;
  r.eigenvalues = theta;
  double worst = 0;
  for (std::size_t i = 0; i < modes.cut; ++i) worst = std::max(worst, modes.pairs.residuals[i]);
  r.residuals.assign(theta.size(), worst);
  r.mesh_level = modes.mesh_level;
  r.dofs = modes.dofs;
  r.zero_mode_count = modes.zeros + modes.exact_rank;
  r.groups = group_values(r.eigenvalues, opt.group_tol);
  return r;
}

inline SpectrumResult curl_spectrum(const GeometricMesh& mesh, const FEMatrices& fe, int count, Orientation o,
                                    const SpectralOptions& opt = {}) {
  return curl_spectrum(coclosed_modes(mesh, fe, count, opt), fe, count, o, opt);
}

inline SpectrumResult curl_spectrum(const GeometricMesh& mesh, int count, Orientation o, const SpectralOptions& opt = {}) {
  const auto fe = assemble(mesh);
  return curl_spectrum(mesh, fe, count, o, opt);
}

struct ConsistencyRow {
  double gamma = 0;
  double lambda = 0;
  double gap = 0;  ///< |γ² − λ| / λ
};

/// For each nonzero curl eigenvalue, the nearest positive eigenvalue of the coclosed 1-form
/// Laplacian and the relative gap between γ² and it.
inline std::vector<ConsistencyRow> coexact_consistency(const SpectrumResult& curl, const SpectrumResult& laplace1) {
  std::vector<double> positive;
  double scale = 0;
  for (double v : laplace1.eigenvalues) scale = std::max(scale, std::abs(v));
  for (std::size_t i = laplace1.zero_mode_count; i < laplace1.eigenvalues.size(); ++i) positive.push_back(laplace1.eigenvalues[i]);
  std::vector<ConsistencyRow> rows;
  if (positive.empty()) return rows;
  for (double g : curl.eigenvalues) {
    const double g2 = g * g;
    double best = positive.front();
    for (double l : positive)
      if (std::abs(l - g2) < std::abs(best - g2)) best = l;
    rows.push_back({g, best, std::abs(g2 - best) / best});
  }
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return std::abs(a.gamma) < std::abs(b.gamma); });
  return rows;
}

inline std::vector<ConsistencyRow> coexact_consistency(const GeometricMesh& mesh, int count, const SpectralOptions& opt = {}) {
  const auto fe = assemble(mesh);
  const auto modes = coclosed_modes(mesh, fe, 2 * count + 8, opt);
  return coexact_consistency(curl_spectrum(modes, fe, count, Orientation::induced, opt),
                             laplacian1_spectrum(modes, 2 * count + 8, opt));
}

}  // namespace coassoc
