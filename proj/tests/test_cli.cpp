#include <gtest/gtest.h>

#include <sstream>

#include "holoext/cli.hpp"
#include "holoext/json_io.hpp"

using namespace holoext;

namespace {

const std::string kDemo = HOLOEXT_DEMO_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Json run_json(std::vector<std::string> args) {
  const auto r = run_cli(std::move(args));
  EXPECT_EQ(r.code, 0) << r.err;
  return Json::parse(r.out);
}

}  // namespace

TEST(Cli, PickSolveTwoPoint) {
  const Json j = run_json({"pick", "solve", "--input", kDemo + "/two_point.json"});
  EXPECT_NEAR(j["t_star"].get<double>(), 1.5, 1e-6);
  EXPECT_EQ(j["tool"], "holoext");
  EXPECT_EQ(j["version"], kVersion);
  EXPECT_EQ(j["seed"], 0);
  EXPECT_EQ(j["input_digest"].get<std::string>().rfind("sha256:", 0), 0u);
  EXPECT_FALSE(j["min_eigenvalue_trace"].empty());
}

TEST(Cli, ReportsAreByteIdentical) {
  const auto a = run_cli({"pick", "solve", "--input", kDemo + "/two_point.json", "--seed", "4"});
  const auto b = run_cli({"pick", "solve", "--input", kDemo + "/two_point.json", "--seed", "4"});
  EXPECT_EQ(a.out, b.out);
  const auto c = run_cli({"variety", "certificate", "--spec", "parabola", "--degree", "2", "--budget", "500", "--seed", "1"});
  const auto d = run_cli({"variety", "certificate", "--spec", "parabola", "--degree", "2", "--budget", "500", "--seed", "1"});
  EXPECT_EQ(c.out, d.out);
}

TEST(Cli, DigestDependsOnArguments) {
  const Json a = run_json({"pick", "solve", "--input", kDemo + "/two_point.json", "--seed", "1"});
  const Json b = run_json({"pick", "solve", "--input", kDemo + "/two_point.json", "--seed", "2"});
  EXPECT_NE(a["input_digest"], b["input_digest"]);
}

TEST(Cli, Sha256KnownVector) {
  EXPECT_EQ(cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, PickCsvAndPlot) {
  const std::string svg = ::testing::TempDir() + "/tstar.svg";
  const auto r = run_cli({"pick", "solve", "--input", kDemo + "/two_point.json", "--format", "csv", "--plot", svg});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("# tool=holoext", 0), 0u);
  EXPECT_NE(r.out.find("probe,t,min_eigenvalue"), std::string::npos);
  EXPECT_NE(cli::read_file(svg).find("<svg"), std::string::npos);
}

TEST(Cli, ModelCheckFailureWitness) {
  const Json j = run_json({"model", "check", "--input", kDemo + "/model_two_point.json"});
  EXPECT_NEAR(j["norm"].get<double>(), 1.5, 1e-9);
  EXPECT_FALSE(j["vn_V_pass"].get<bool>());
  EXPECT_TRUE(j["vn_Omega_pass"].get<bool>());
  EXPECT_LT(j["min_defect_eigenvalue"].get<double>(), 0.0);
  EXPECT_NEAR(j["minimal_sup_norm"].get<double>(), 1.5, 1e-8);
}

TEST(Cli, ExtremalCaraAndKoba) {
  const Json c = run_json({"extremal", "cara", "--input", kDemo + "/ball_datum.json", "--degree", "1", "--budget", "2000"});
  EXPECT_NEAR(c["value"].get<double>(), 0.5, 1e-6);
  const Json k = run_json({"extremal", "koba", "--input", kDemo + "/ball_datum.json"});
  EXPECT_NEAR(k["distance"].get<double>(), 0.5, 1e-12);
  EXPECT_TRUE(k["royden_wong"]["sign_pass"].get<bool>());
  const Json b = run_json({"extremal", "cara", "--input", kDemo + "/bidisk_datum.json", "--degree", "2", "--budget", "500"});
  EXPECT_GT(b["value"].get<double>(), 0.0);
}

TEST(Cli, KobayashiRejectsNonBall) {
  EXPECT_EQ(run_cli({"extremal", "koba", "--input", kDemo + "/bidisk_datum.json"}).code, 2);
}

TEST(Cli, DomainSlc) {
  const Json bad = run_json({"domain", "slc", "--input", kDemo + "/slc_ellipsoid.json"});
  EXPECT_FALSE(bad["pass"].get<bool>());
  EXPECT_NEAR(bad["worst_margin"].get<double>(), -0.1, 1e-12);
  const Json ball = run_json({"domain", "slc", "--input", kDemo + "/slc_ball.json", "--count", "10"});
  EXPECT_TRUE(ball["pass"].get<bool>());
  EXPECT_EQ(ball["points"].size(), 10u);
}

TEST(Cli, VarietyGeodesic) {
  const Json s = run_json({"variety", "geodesic", "--spec", "ball_slice", "--k", "1"});
  EXPECT_TRUE(s["pass"].get<bool>());
  const Json p = run_json({"variety", "geodesic", "--spec", "parabola"});
  EXPECT_FALSE(p["pass"].get<bool>());
  EXPECT_EQ(run_cli({"variety", "geodesic", "--spec", "sym_R"}).code, 2);
}

TEST(Cli, VarietyCertificateParabola) {
  const std::string svg = ::testing::TempDir() + "/margin.svg";
  const Json j = run_json({"variety", "certificate", "--spec", "parabola", "--degree", "3", "--budget", "2000", "--seed", "1", "--plot", svg});
  EXPECT_GT(j["margin"].get<double>(), 0.0);
  EXPECT_LE(j["sup_on_V"].get<double>(), 1.0 + 1e-9);
  EXPECT_EQ(j["stages"].size(), 3u);
  EXPECT_NE(cli::read_file(svg).find("polyline"), std::string::npos);
}

TEST(Cli, VarietyCertificateSweepCsv) {
  const auto r = run_cli({"variety", "certificate", "--spec", "parabola", "--degree", "1", "--budget", "250", "--pairs", "3", "--format", "csv"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("pair_id,i,j,baseline,achieved,margin"), std::string::npos);
  std::size_t lines = 0;
  for (char c : r.out) lines += c == '\n';
  EXPECT_EQ(lines, 1u + 1u + 1u + 3u);
}

TEST(Cli, VarietyCertificateUnionDefaultDatumIsDistinct) {
  const Json j = run_json({"variety", "certificate", "--spec", "sym_R_union_D", "--beta", "0", "--degree", "1", "--budget", "250"});
  EXPECT_EQ(j["datum_indices"], Json::array({0, 2}));
  EXPECT_EQ(j["baseline_kind"], "caratheodory_search");
  EXPECT_EQ(run_cli({"variety", "certificate", "--spec", "sym_R_union_D", "--datum", "0,1", "--budget", "250"}).code, 2);
}

TEST(Cli, VarietyCertificateRejectsEqualDatum) {
  EXPECT_EQ(run_cli({"variety", "certificate", "--spec", "parabola", "--datum", "1,1"}).code, 2);
  EXPECT_EQ(run_cli({"variety", "certificate", "--spec", "parabola", "--datum", "0,99"}).code, 2);
}

TEST(Cli, VarietyRetract) {
  const Json d = run_json({"variety", "retract", "--spec", "ball_slice"});
  EXPECT_TRUE(d["idempotent_pass"].get<bool>());
  EXPECT_TRUE(d["fixes_V_pass"].get<bool>());
  EXPECT_TRUE(d["range_in_V_pass"].get<bool>());
  const Json f = run_json({"variety", "retract", "--spec", "ball_slice", "--input", kDemo + "/lempert_retract.json"});
  EXPECT_TRUE(f["fixes_V_pass"].get<bool>());
}

TEST(Cli, Selftest) {
  const Json j = run_json({"selftest"});
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"frobnicate"}).code, 64);
  EXPECT_EQ(run_cli({}).code, 64);
  EXPECT_EQ(run_cli({"pick"}).code, 64);
  EXPECT_EQ(run_cli({"pick", "solve"}).code, 2);
  EXPECT_EQ(run_cli({"pick", "solve", "--input", "/nonexistent.json"}).code, 2);
  EXPECT_EQ(run_cli({"pick", "solve", "--input", kDemo + "/two_point.json", "--tol", "0"}).code, 2);
  EXPECT_EQ(run_cli({"extremal", "cara", "--input", kDemo + "/ball_datum.json", "--budget", "0"}).code, 2);
  EXPECT_EQ(run_cli({"pick", "solve", "--input", kDemo + "/two_point.json", "--format", "xml"}).code, 64);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, MalformedJsonHasLineAndColumn) {
  const auto r = run_cli({"pick", "solve", "--input", kDemo + "/malformed.json"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("malformed.json:4:"), std::string::npos) << r.err;
}

TEST(JsonIo, RoundTrips) {
  const Point p = make_point({Complex(0.1, -0.2), 0.3});
  EXPECT_EQ(point_from_json(point_to_json(p)), p);
  Poly q(2);
  q.set({2, 1}, Complex(0.5, -1.0));
  q.set({0, 0}, 3.0);
  EXPECT_EQ(poly_from_json(to_json(q)).terms(), q.terms());
  const auto ell = DomainSpec::ellipsoid({1.0, 2.0}, {0.5, 0.0});
  const auto back = domain_from_json(to_json(ell));
  EXPECT_EQ(back.alpha(), ell.alpha());
  EXPECT_EQ(back.beta(), ell.beta());
  const AnalyticDisc disc{{make_point({0.1, 0.0}), make_point({0.0, Complex(0.0, 0.9)})}};
  EXPECT_EQ(disc_from_json(to_json(disc)).coefficients, disc.coefficients);
}

TEST(JsonIo, RejectsBadShapes) {
  EXPECT_THROW(complex_from_json(Json::array({1, 2, 3})), InvalidInput);
  EXPECT_THROW(point_from_json(Json::array()), InvalidInput);
  EXPECT_THROW(domain_from_json(Json{{"kind", "torus"}}), InvalidInput);
  EXPECT_THROW(poly_from_json(Json{{"dim", 2}, {"terms", Json::array({Json{{"exp", {1}}, {"coef", 1.0}}})}}), InvalidInput);
}
