// coassoc: command-line front end.
//
// Exit codes: 0 success, 1 parse or validation failure, 2 failed consistency check,
// 3 eigensolver non-convergence.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "coassoc/generators.hpp"
#include "coassoc/moduli.hpp"
#include "coassoc/report_io.hpp"
#include "coassoc/scplx.hpp"

namespace {

using namespace coassoc;
using io::json;

struct Config {
  std::string command;
  std::string name;  // gen
  std::string builtin;
  std::string mesh_path;
  std::string link;
  int n = 3;
  int refine = 0;
  int eigs = 12;
  double beta = -1.0;
  std::string format = "json";
  std::string orientation = "induced";
  std::string dump_dir;
  std::string output;
  std::string plot_path;
  double residual_tol = 1e-8;
  double group_tol = 1e-6;
  double zero_tol = 1e-6;
  double merge_tol = 1e-6;
  double cluster_gap = 0.05;
};

/// Failed `checks`; mapped to exit code 2.
struct ChecksFailed {
  std::string text;
};

SpectralOptions spectral_options(const Config& c) {
  SpectralOptions o;
  o.eig.residual_tol = c.residual_tol;
  o.group_tol = c.group_tol;
  o.zero_tol = c.zero_tol;
  o.cluster_gap = c.cluster_gap;
  return o;
}

OrientationChoice orientation_choice(const Config& c) {
  if (c.orientation == "reversed") return OrientationChoice::reversed;
  if (c.orientation == "both") return OrientationChoice::both;
  return OrientationChoice::induced;
}

std::vector<Orientation> orientations(const Config& c) {
  const auto o = orientation_choice(c);
  std::vector<Orientation> out;
  if (o != OrientationChoice::reversed) out.push_back(Orientation::induced);
  if (o != OrientationChoice::induced) out.push_back(Orientation::reversed);
  return out;
}

ScplxFile read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidInput, "cannot open " + path);
  try {
    return parse_scplx(in);
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
  }
}

void require_one_source(const Config& c) {
  if (c.builtin.empty() == c.mesh_path.empty()) fail(ErrorKind::InvalidInput, "give exactly one of --builtin and --mesh");
}

ManifoldPair load_pair(const Config& c) {
  require_one_source(c);
  if (!c.builtin.empty()) {
    auto g = builtin::generate(c.builtin, c.n, 0);
    if (!g.pair) fail(ErrorKind::InvalidInput, "'" + c.builtin + "' is a 3-manifold mesh, not a 4-manifold pair");
    return *g.pair;
  }
  const auto f = read_file(c.mesh_path);
  if (f.complex.dim() != 4) fail(ErrorKind::InvalidInput, c.mesh_path + " is not 4-dimensional");
  return extract_pair(f.complex);
}

GeometricMesh load_mesh_from(const std::string& source, const Config& c, int refine) {
  const auto& names = builtin::names();
  if (std::find(names.begin(), names.end(), source) != names.end()) {
    auto g = builtin::generate(source, c.n, refine);
    if (!g.mesh) fail(ErrorKind::InvalidInput, "'" + source + "' is a 4-manifold pair, not a geometric mesh");
    return *g.mesh;
  }
  GeometricMesh m = to_mesh(read_file(source));
  for (int r = 0; r < refine; ++r) m = subdivide(m);
  return m;
}

GeometricMesh load_mesh(const Config& c, int refine) {
  require_one_source(c);
  return load_mesh_from(c.builtin.empty() ? c.mesh_path : c.builtin, c, refine);
}

void emit(const Config& c, const json& j, const std::string& text) {
  std::ostringstream body;
  if (c.format == "json") body << j.dump(2) << '\n';
  else body << text;
  if (c.output.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out(c.output);
    if (!out) fail(ErrorKind::InvalidInput, "cannot write " + c.output);
    out << body.str();
  }
}

std::string betti_text(const char* label, const auto& b) { return std::string(label) + io::text_detail::list(b) + '\n'; }

int cmd_gen(const Config& c) {
  const auto g = builtin::generate(c.name, c.n, c.refine);
  const std::string text = g.mesh ? serialize_scplx(*g.mesh) : serialize_scplx(g.pair->total);
  if (c.output.empty()) std::cout << text;
  else {
    std::ofstream out(c.output);
    if (!out) fail(ErrorKind::InvalidInput, "cannot write " + c.output);
    out << text;
  }
  return 0;
}

int cmd_betti(const Config& c) {
  require_one_source(c);
  const bool file = !c.mesh_path.empty();
  std::optional<ScplxFile> f;
  if (file) f = read_file(c.mesh_path);
  const bool four = file ? f->complex.dim() == 4 : builtin::generate(c.builtin, c.n, 0).pair.has_value();
  if (four) {
    const auto pair = file ? extract_pair(f->complex) : load_pair(c);
    const auto bc = betti(pair.total), bl = betti(pair.link), bcs = relative_betti(pair);
    emit(c, {{"betti_C", bc}, {"betti_L", bl}, {"betti_cs", bcs}},
         betti_text("betti C   ", bc) + betti_text("betti L   ", bl) + betti_text("betti cs  ", bcs));
  } else {
    const auto x = file ? f->complex : load_mesh(c, 0).complex;
    const auto b = betti(x);
    emit(c, {{"betti", b}}, betti_text("betti ", b));
  }
  return 0;
}

int cmd_les(const Config& c) {
  const auto p = les_of_pair(load_pair(c));
  std::ostringstream t;
  t << betti_text("betti C   ", p.b_C) << betti_text("betti L   ", p.b_L) << betti_text("betti cs  ", p.b_cs)
    << betti_text("rank j    ", p.les_ranks.j) << betti_text("rank r    ", p.les_ranks.r)
    << betti_text("rank conn ", p.les_ranks.connecting) << "dim V " << p.dim_V << " (formula " << dim_v_formula(p) << ")\n";
  emit(c, io::profile_json(p), t.str());
  return 0;
}

int cmd_moduli(const Config& c) {
  const auto pair = load_pair(c);
  const auto p = les_of_pair(pair);
  const auto form = gram_on_V(pair, p.V_basis);
  json j = io::pairing_json(form);
  j["dim_V"] = p.dim_V;
  j["dim_moduli"] = form.v_plus;
  std::ostringstream t;
  t << "dim V " << p.dim_V << "  V+ " << form.v_plus << "  V- " << form.v_minus << "\ndim moduli " << form.v_plus << '\n';
  emit(c, j, t.str());
  return 0;
}

struct Oracle {
  double lambda1, curl;
};

std::optional<Oracle> oracle_for(const Config& c) {
  if (c.builtin == "t3") return Oracle{4 * std::numbers::pi * std::numbers::pi, 2 * std::numbers::pi};
  if (c.builtin == "s3_round") return Oracle{3.0, 2.0};
  return std::nullopt;
}

void write_plot_data(const Config& c) {
  if (c.refine < 1) fail(ErrorKind::InvalidInput, "need ≥2 levels (use --refine ≥ 1 with --plot-data)");
  const auto opt = spectral_options(c);
  std::vector<io::PlotRow> rows;
  for (int level = 0; level <= c.refine; ++level) {
    const auto m = load_mesh(c, level);
    const auto fe = assemble(m);
    const auto l0 = laplacian0_spectrum(m, fe, 2, opt);
    const auto cu = curl_spectrum(m, fe, 2, Orientation::induced, opt);
    double mc = INFINITY;
    for (double g : cu.eigenvalues) mc = std::min(mc, std::abs(g));
    rows.push_back({level, static_cast<std::size_t>(fe.K1.rows()), l0.eigenvalues.back(), mc});
  }
  std::optional<io::PlotOracle> o;
  if (auto k = oracle_for(c)) o = io::PlotOracle{k->lambda1, k->curl};
  std::ofstream out(c.plot_path);
  if (!out) fail(ErrorKind::InvalidInput, "cannot write " + c.plot_path);
  out << io::emit_plot_data(rows, o);
}

int cmd_spectrum(const Config& c, bool walls) {
  if (!c.plot_path.empty()) write_plot_data(c);
  const auto m = load_mesh(c, c.refine);
  const auto fe = assemble(m);
  if (!c.dump_dir.empty()) io::dump_matrices(fe, c.dump_dir);
  const auto opt = spectral_options(c);
  const auto l0 = laplacian0_spectrum(m, fe, c.eigs, opt);
  const auto modes = coclosed_modes(m, fe, 2 * c.eigs + 8, opt);
  const auto l1 = laplacian1_spectrum(modes, 2 * c.eigs + 8, opt);
  json j = {{"mesh_level", m.level}, {"lambda0", io::spectrum_json(l0)}, {"laplace1", io::spectrum_json(l1)}};
  std::ostringstream t;
  t << io::spectrum_text(l0) << io::spectrum_text(l1);
  json curls = json::array(), wall_list = json::array();
  std::optional<SpectrumResult> first;
  for (Orientation o : orientations(c)) {
    const auto cu = curl_spectrum(modes, fe, c.eigs, o, opt);
    if (!first) first = cu;
    json cj = io::spectrum_json(cu);
    cj["orientation"] = to_string(o);
    curls.push_back(cj);
    t << to_string(o) << ' ' << io::spectrum_text(cu);
    if (walls) {
      const auto ws = wall_set(l0, cu, o, {c.merge_tol});
      json wj = io::walls_json(ws);
      const auto iv = admissible_gamma(ws, c.beta);
      wj["admissible_gamma"] = io::interval_json(iv);
      wall_list.push_back(wj);
      t << io::walls_text(ws) << "admissible " << io::interval_text(iv) << '\n';
    }
  }
  j["curl"] = curls;
  json cons = json::array();
  for (const auto& r : coexact_consistency(*first, l1)) cons.push_back({{"gamma", r.gamma}, {"lambda", r.lambda}, {"gap", r.gap}});
  j["coexact_consistency"] = cons;
  if (walls) {
    j["walls"] = wall_list;
    j["beta"] = c.beta;
  }
  emit(c, j, t.str());
  return 0;
}

int cmd_report(const Config& c) {
  const auto pair = load_pair(c);
  std::optional<GeometricMesh> mesh;
  if (!c.link.empty()) mesh = load_mesh_from(c.link, c, c.refine);
  ReportOptions o;
  o.eigs = c.eigs;
  o.beta = c.beta;
  o.orientation = orientation_choice(c);
  o.spectral = spectral_options(c);
  o.walls.merge_tol = c.merge_tol;
  const auto r = assemble_report(pair, mesh ? &*mesh : nullptr, o);
  emit(c, io::report_json(r), io::report_text(r));
  if (!r.all_pass()) {
    std::string failed;
    for (const auto& ch : r.checks)
      if (!ch.pass) failed += " " + ch.name;
    throw ChecksFailed{"failed checks:" + failed};
  }
  return 0;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::ExactnessViolation:
    case ErrorKind::MismatchWithDirect:
    case ErrorKind::NotACocycle:
    case ErrorKind::DegenerateForm: return 2;
    case ErrorKind::SolverNonConvergence: return 3;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  Config c;
  CLI::App app{"Moduli counts and Fredholm walls for coassociative 4-folds with a cylindrical end"};
  app.require_subcommand(1);

  auto source = [&](CLI::App* s) {
    s->add_option("--builtin", c.builtin, "Built-in complex")->check(CLI::IsMember(builtin::names()));
    s->add_option("--mesh", c.mesh_path, "SCPLX v1 file");
    s->add_option("--n", c.n, "Torus grid size")->check(CLI::Range(3, 64));
  };
  auto output = [&](CLI::App* s) {
    s->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    s->add_option("-o,--output", c.output, "Write output to a file");
  };
  auto spectral = [&](CLI::App* s) {
    s->add_option("--refine", c.refine, "Refinement levels")->check(CLI::Range(0, 6));
    s->add_option("--eigs", c.eigs, "Eigenvalues per operator")->check(CLI::Range(1, 1000));
    s->add_option("--orientation", c.orientation, "Link orientation")->check(CLI::IsMember({"induced", "reversed", "both"}));
    s->add_option("--residual-tol", c.residual_tol, "Relative eigenpair residual bound")->check(CLI::PositiveNumber);
    s->add_option("--group-tol", c.group_tol, "Relative multiplicity grouping tolerance")->check(CLI::PositiveNumber);
    s->add_option("--zero-tol", c.zero_tol, "Relative zero-mode threshold")->check(CLI::PositiveNumber);
    s->add_option("--cluster-gap", c.cluster_gap, "Relative gap separating eigenspaces")->check(CLI::PositiveNumber);
  };
  auto beta = [&](CLI::App* s) {
    s->add_option("--beta", c.beta, "Decay rate of the end, < 0")
        ->check(CLI::Validator([](std::string& v) { return std::stod(v) < 0 ? std::string() : "beta must be < 0"; }, "<0"));
    s->add_option("--merge-tol", c.merge_tol, "Relative wall merge tolerance")->check(CLI::PositiveNumber);
  };

  auto* gen = app.add_subcommand("gen", "Write a built-in complex as SCPLX v1");
  gen->add_option("name", c.name, "Built-in name")->required()->check(CLI::IsMember(builtin::names()));
  gen->add_option("--n", c.n, "Torus grid size")->check(CLI::Range(3, 64));
  gen->add_option("--refine", c.refine, "Refinement levels")->check(CLI::Range(0, 6));
  gen->add_option("-o,--output", c.output, "Write to a file");

  auto* bet = app.add_subcommand("betti", "Betti numbers");
  source(bet);
  output(bet);
  auto* les = app.add_subcommand("les", "Cohomology of the pair and its long exact sequence");
  source(les);
  output(les);
  auto* mod = app.add_subcommand("moduli", "Cup form on V and the moduli dimension");
  source(mod);
  output(mod);
  auto* spe = app.add_subcommand("spectrum", "Spectra of the link Laplacian and curl");
  source(spe);
  output(spe);
  spectral(spe);
  spe->add_option("--dump-matrices", c.dump_dir, "Directory for MatrixMarket dumps");
  spe->add_option("--plot-data", c.plot_path, "Columnar convergence data over levels 0..refine");
  auto* wal = app.add_subcommand("walls", "Wall set and admissible rates");
  source(wal);
  output(wal);
  spectral(wal);
  beta(wal);
  auto* rep = app.add_subcommand("report", "Full report; exit 2 when a check fails");
  source(rep);
  output(rep);
  spectral(rep);
  beta(rep);
  rep->add_option("--link", c.link, "Geometric link mesh (built-in name or SCPLX file)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (gen->parsed()) return cmd_gen(c);
    if (bet->parsed()) return cmd_betti(c);
    if (les->parsed()) return cmd_les(c);
    if (mod->parsed()) return cmd_moduli(c);
    if (spe->parsed()) return cmd_spectrum(c, false);
    if (wal->parsed()) return cmd_spectrum(c, true);
    if (rep->parsed()) return cmd_report(c);
  } catch (const ChecksFailed& e) {
    std::cerr << e.text << '\n';
    return 2;
  } catch (const SolverError& e) {
    std::cerr << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 1;
}
