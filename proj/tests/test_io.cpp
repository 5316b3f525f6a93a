#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "coassoc/generators.hpp"
#include "coassoc/report_io.hpp"
#include "coassoc/scplx.hpp"

using namespace coassoc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

ErrorKind kind_of(const std::string& text) {
  try {
    parse_scplx(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return ErrorKind::InvalidInput;
}

std::string message_of(const std::string& text) {
  try {
    parse_scplx(text);
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "coassoc-tests";
  fs::create_directories(dir);
  return dir / name;
}

int run(const std::string& args) {
  const int rc = std::system((std::string(COASSOC_CLI) + " " + args).c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Scplx, RoundTripsPairs) {
  for (const auto& name : builtin::names()) {
    const auto g = builtin::generate(name);
    if (!g.pair) continue;
    const auto text = serialize_scplx(g.pair->total);
    const auto back = parse_scplx(text);
    EXPECT_EQ(back.complex, g.pair->total) << name;
    EXPECT_FALSE(back.coords.has_value());
    EXPECT_EQ(serialize_scplx(back), text) << name;
  }
}

TEST(Scplx, RoundTripsMeshesExactly) {
  for (const char* name : {"t3", "s3_boundary_simplex", "s3_round"}) {
    const auto m = *builtin::generate(name, 3, 1).mesh;
    const auto text = serialize_scplx(m);
    const auto back = to_mesh(parse_scplx(text));
    EXPECT_EQ(back.complex, m.complex) << name;
    EXPECT_EQ(back.coords, m.coords) << name;
    EXPECT_EQ(back.embedding, m.embedding);
    EXPECT_EQ(back.period, m.period);
    EXPECT_EQ(back.level, 1);
  }
}

TEST(Scplx, CommentsAndLowerFaces) {
  const auto f = parse_scplx("# a triangle and a loose edge\nscplx 1 dim=2\ns 0 1 2  # top\ns 3 4\n");
  EXPECT_EQ(f.complex.dim(), 2);
  EXPECT_EQ(f.complex.count(0), 5u);
  EXPECT_EQ(maximal_simplices(f.complex).size(), 2u);
}

TEST(Scplx, OrientationFollowsListedOrder) {
  const auto a = parse_scplx("scplx 1 dim=1\ns 0 1\n");
  const auto b = parse_scplx("scplx 1 dim=1\ns 1 0\n");
  EXPECT_EQ(a.complex.top_signs()[0], -b.complex.top_signs()[0]);
}

TEST(Scplx, ErrorsCarryLineNumbers) {
  EXPECT_EQ(kind_of("scplx 2 dim=3\n"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of("scplx 1 dim=3\nq 0 1\n"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of("scplx 1 dim=2\ns 0 x 2\n"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of("scplx 1 dim=2\ns 0 1 2 3\n"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of("scplx 1 dim=3\ns 0 1 2\n"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of("scplx 1 dim=2\n"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of(""), ErrorKind::ParseError);
  EXPECT_NE(message_of("scplx 1 dim=2\n\ns 0 x 2\n").find("line 3"), std::string::npos);
}

TEST(Scplx, BuildErrorsPointAtTheSimplex) {
  EXPECT_EQ(kind_of("scplx 1 dim=2\ns 0 1 2\ns 0 1 1\n"), ErrorKind::RepeatedVertexInSimplex);
  EXPECT_EQ(kind_of("scplx 1 dim=2\ns 0 1 2\ns 2 1 0\n"), ErrorKind::DuplicateSimplex);
  EXPECT_NE(message_of("scplx 1 dim=2\ns 0 1 2\n# x\ns 2 1 0\n").find("line 4"), std::string::npos);
}

TEST(Scplx, CoordinateRules) {
  EXPECT_EQ(kind_of("scplx 1 dim=1\nv 0 0 0 0\nv 1\ns 0 1\n"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of("scplx 1 dim=1\nv 0 0 0\ns 0 1\n"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of("scplx 1 dim=1 embedding=hyperbolic\ns 0 1\n"), ErrorKind::ParseError);
  EXPECT_EQ(kind_of("scplx 1 dim=1 period=-1\ns 0 1\n"), ErrorKind::ParseError);
  EXPECT_THROW(to_mesh(parse_scplx("scplx 1 dim=3\ns 0 1 2 3\n")), Error);
}

TEST(Json, GoldenTopologyReports) {
  for (const auto& name : builtin::names()) {
    const auto g = builtin::generate(name);
    if (!g.pair) continue;
    const auto path = fs::path(COASSOC_GOLDEN_DIR) / (name + ".json");
    ASSERT_TRUE(fs::exists(path)) << path;
    const auto golden = io::json::parse(slurp(path));
    EXPECT_EQ(io::report_json(assemble_report(*g.pair, nullptr)), golden) << name;
  }
}

TEST(Json, NonFiniteBecomesNull) {
  RateInterval r;
  r.lower = -INFINITY;
  EXPECT_TRUE(io::interval_json(r)["lower"].is_null());
}

TEST(PlotData, NeedsTwoLevels) {
  try {
    io::emit_plot_data({{0, 10, 1.0, 1.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("need ≥2 levels"), std::string::npos);
  }
}

TEST(PlotData, TorusLambdaColumnNonincreasing) {
  const auto out = scratch("t3.dat");
  ASSERT_EQ(run("spectrum --builtin t3 --refine 2 --eigs 2 --plot-data " + out.string() + " > /dev/null"), 0);
  std::istringstream in(slurp(out));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line.rfind("# level", 0), 0u);
  std::vector<double> lambda;
  for (int level; in >> level;) {
    double dofs, l, c, g1, g2;
    in >> dofs >> l >> c >> g1 >> g2;
    lambda.push_back(l);
  }
  ASSERT_EQ(lambda.size(), 3u);
  EXPECT_GE(lambda[0], lambda[1]);
  EXPECT_GE(lambda[1], lambda[2]);
}

TEST(MatrixDump, WritesMatrixMarket) {
  const auto dir = scratch("dump");
  const auto files = io::dump_matrices(assemble(builtin::s3_boundary_simplex()), dir);
  EXPECT_EQ(files.size(), 6u);
  for (const auto& f : files) EXPECT_EQ(slurp(f).rfind("%%MatrixMarket", 0), 0u);
}

TEST(Cli, GenRoundTrips) {
  const auto path = scratch("t3.scplx");
  ASSERT_EQ(run("gen t3 --n 3 -o " + path.string()), 0);
  const auto f = parse_scplx(slurp(path));
  EXPECT_EQ(f.complex, builtin::t3(3).complex);
  EXPECT_EQ(*f.coords, builtin::t3(3).coords);
}

TEST(Cli, ReportJson) {
  const auto path = scratch("cp2.json");
  ASSERT_EQ(run("report --builtin cp2_minus_ball --format json -o " + path.string()), 0);
  const auto j = io::json::parse(slurp(path));
  EXPECT_EQ(j["dim_moduli"], 1);
  EXPECT_EQ(j["admissible_gamma"], "topology-only");
  EXPECT_TRUE(j["all_checks_pass"].get<bool>());
}

TEST(Cli, ReportFromFileMatchesBuiltin) {
  const auto path = scratch("cp2.scplx");
  ASSERT_EQ(run("gen cp2_minus_ball -o " + path.string()), 0);
  const auto out = scratch("cp2-file.json");
  ASSERT_EQ(run("moduli --mesh " + path.string() + " -o " + out.string()), 0);
  EXPECT_EQ(io::json::parse(slurp(out))["dim_moduli"], 1);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("walls --builtin t3 --beta 0.5 2> /dev/null"), 1);
  EXPECT_EQ(run("spectrum --builtin t3 --refine 7 2> /dev/null"), 1);
  EXPECT_EQ(run("spectrum --builtin t3 --eigs 0 2> /dev/null"), 1);
  EXPECT_EQ(run("les --builtin nosuch 2> /dev/null"), 1);
  EXPECT_EQ(run("les --builtin t3 2> /dev/null"), 1);
  EXPECT_EQ(run("les 2> /dev/null"), 1);
  const auto bad = scratch("bad.scplx");
  std::ofstream(bad) << "scplx 1 dim=4\ns 0 1 2 3 4\ns 0 1 2 3 5\ns 0 1 2 3 6\n";
  EXPECT_EQ(run("les --mesh " + bad.string() + " 2> /dev/null"), 1);
  // The T³ link does not match an S³ mesh, so a check fails.
  EXPECT_EQ(run("report --builtin d2xt2 --link s3_boundary_simplex --eigs 2 > /dev/null 2>&1"), 2);
}

TEST(Cli, PlotDataNeedsRefinement) {
  EXPECT_EQ(run("spectrum --builtin t3 --plot-data " + scratch("x.dat").string() + " > /dev/null 2>&1"), 1);
}
