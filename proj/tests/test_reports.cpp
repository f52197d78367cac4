#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>

#include "grassmu/reports.hpp"

using grassmu::ParseError;
using grassmu::ResourceLimitError;
using namespace grassmu::reports;

namespace {

RunConfig config_for(const std::string& command, int n, int qmax = -1) {
  RunConfig c;
  c.command = command;
  c.n = n;
  c.qmax = qmax;
  return c;
}

json bpst_descriptor(double lambda = 1.0) {
  return json{{"kind", "bpst"},
              {"center", {0.0, 0.0, 0.0, 0.0}},
              {"lambda", lambda}};
}

json rank1_linear_descriptor() {
  json zero4 = json::array();
  for (int r = 0; r < 4; ++r) zero4.push_back({0.0, 0.0, 0.0, 0.0});
  json c1 = json::array();
  c1.push_back({0.0, 0.5, 0.0, 0.0});
  c1.push_back({-0.5, 0.0, 0.0, 0.0});
  c1.push_back({0.0, 0.0, 0.0, -0.5});
  c1.push_back({0.0, 0.0, 0.5, 0.0});
  return json{{"kind", "linear"}, {"c", {c1, zero4, zero4}}};
}

}  // namespace

TEST_CASE("cap resolution reads the environment") {
  unsetenv("GRASSMANN_MU_CAP");
  REQUIRE(resolved_cap() == 12);
  REQUIRE_NOTHROW(check_cap(12));
  REQUIRE_THROWS_AS(check_cap(13), ResourceLimitError);
  REQUIRE_THROWS_WITH(check_cap(13),
                      Catch::Matchers::ContainsSubstring("cap 12"));

  setenv("GRASSMANN_MU_CAP", "14", 1);
  REQUIRE(resolved_cap() == 14);
  REQUIRE_NOTHROW(check_cap(13));

  setenv("GRASSMANN_MU_CAP", "twelve", 1);
  REQUIRE_THROWS_AS(resolved_cap(), ParseError);
  setenv("GRASSMANN_MU_CAP", "2", 1);
  REQUIRE_THROWS_AS(resolved_cap(), ParseError);
  unsetenv("GRASSMANN_MU_CAP");
}

TEST_CASE("homology report carries groups, certificates and the config") {
  const json r = homology_report(config_for("homology", 5));
  REQUIRE(r["toolkit"]["name"] == "grassmann-mu");
  REQUIRE(r["config"]["command"] == "homology");
  REQUIRE(r["config"]["qmax"] == 6);  // resolved from -1 to the top degree

  const std::vector<int> quadric_betti{1, 0, 1, 0, 1, 0, 1};
  REQUIRE(r["groups"].size() == quadric_betti.size());
  for (std::size_t q = 0; q < quadric_betti.size(); ++q) {
    REQUIRE(r["groups"][q]["N"] == 5);
    REQUIRE(r["groups"][q]["q"] == static_cast<int>(q));
    REQUIRE(r["groups"][q]["free_rank"] == quadric_betti[q]);
    REQUIRE(r["groups"][q]["torsion"].empty());
  }

  const json& certs = r["certificates"];
  REQUIRE(certs["boundary_squared_zero"] == true);
  REQUIRE(certs["snf_remultiplication"] == true);
  REQUIRE(certs["euler_consistency"] == true);
  REQUIRE(certs["rational_rank_agreement"] == true);
  REQUIRE(report_certificates_ok(r));
}

TEST_CASE("homology reports are byte-identical across runs") {
  const json a = homology_report(config_for("homology", 6));
  const json b = homology_report(config_for("homology", 6));
  REQUIRE(a.dump() == b.dump());
}

TEST_CASE("degree-4 entries stabilize from eight columns on") {
  const json r8 = homology_report(config_for("homology", 8, 4));
  const json r9 = homology_report(config_for("homology", 9, 4));
  json e8 = r8["groups"][4];
  json e9 = r9["groups"][4];
  REQUIRE(e8["free_rank"] == 1);
  REQUIRE(e8["torsion"].empty());
  e8.erase("N");
  e9.erase("N");
  REQUIRE(e8 == e9);

  // the unstable slice below the stable range: rank two at seven columns
  const json r7 = homology_report(config_for("homology", 7, 4));
  REQUIRE(r7["groups"][4]["free_rank"] == 2);
}

TEST_CASE("homology report validates its arguments") {
  REQUIRE_THROWS_AS(homology_report(config_for("homology", 2)),
                    std::invalid_argument);
  REQUIRE_THROWS_AS(homology_report(config_for("homology", 13)),
                    ResourceLimitError);
}

TEST_CASE("generator report states the class coordinates") {
  const json r8 = generator_report(config_for("generator", 8));
  REQUIRE(r8["is_cycle"] == true);
  REQUIRE(r8["free_coordinates"].size() == 1);
  const long coord = r8["class_coordinate"].get<long>();
  REQUIRE((coord == 1 || coord == -1));
  REQUIRE(r8["coordinate_primitive"] == true);
  REQUIRE(r8["torsion_coordinates"].empty());
  REQUIRE(report_certificates_ok(r8));

  // at seven columns the middle homology has rank two and the cycle hits
  // a primitive mixed class
  const json r7 = generator_report(config_for("generator", 7));
  REQUIRE(r7["group"]["free_rank"] == 2);
  REQUIRE(r7["free_coordinates"].size() == 2);
  REQUIRE_FALSE(r7.contains("class_coordinate"));
  REQUIRE(r7["coordinate_primitive"] == true);
  REQUIRE(report_certificates_ok(r7));

  REQUIRE_THROWS_AS(generator_report(config_for("generator", 6)),
                    std::invalid_argument);
}

TEST_CASE("nu report lists the intersection pattern and the ledger") {
  const json r = nu_report(config_for("nu", 7));
  REQUIRE(r["coorientation"] == "minor-lex-reversed");
  REQUIRE(r["cells"].size() == 3);

  int hits = 0;
  for (const auto& cell : r["cells"]) {
    if (cell["cell"] == "e+(1,4,5)") {
      ++hits;
      REQUIRE(cell["points"].size() == 1);
      REQUIRE(cell["points"][0] == json::array({0.0, 0.0, 0.0, 0.0}));
      REQUIRE(cell["signs"] == json::array({-1}));
      REQUIRE(cell["grid_zero_nodes"] == 1);
    } else {
      REQUIRE(cell["points"].empty());
      REQUIRE(cell["grid_zero_nodes"] == 0);
    }
    REQUIRE(cell["residual_min_off_point"].get<double>() > 0.0);
  }
  REQUIRE(hits == 1);

  REQUIRE(r["complex_sign"] == 1);
  REQUIRE(r["nu_dot_S"] == -1);
  REQUIRE(r["mu_coefficient"] == -0.25);
  REQUIRE(report_certificates_ok(r));

  // the computation only involves the first seven columns
  const json r9 = nu_report(config_for("nu", 9));
  REQUIRE(r9["cells"] == r["cells"]);
  REQUIRE(r9["nu_dot_S"] == -1);
}

TEST_CASE("connection descriptors round-trip and reject bad fields") {
  const auto bpst = connection_from_descriptor(bpst_descriptor(0.5));
  REQUIRE(bpst.kind == grassmu::gauge::ConnectionKind::bpst);
  REQUIRE(bpst.bpst_lambda == 0.5);
  REQUIRE(bpst.domain_radius == 1.0);

  const auto lin = connection_from_descriptor(rank1_linear_descriptor());
  REQUIRE(lin.kind == grassmu::gauge::ConnectionKind::linear);
  REQUIRE(lin.linear_c[0](0, 1) == 0.5);

  const auto flat = connection_from_descriptor(json{{"kind", "flat"}});
  REQUIRE(flat.kind == grassmu::gauge::ConnectionKind::flat);

  REQUIRE_THROWS_WITH(connection_from_descriptor(json::array()),
                      Catch::Matchers::ContainsSubstring("connection:"));
  REQUIRE_THROWS_WITH(connection_from_descriptor(json{{"lambda", 1.0}}),
                      Catch::Matchers::ContainsSubstring("connection.kind"));
  REQUIRE_THROWS_WITH(connection_from_descriptor(json{{"kind", "spline"}}),
                      Catch::Matchers::ContainsSubstring("\"spline\""));

  json bad_center = bpst_descriptor();
  bad_center["center"] = {0.0, 0.0, 0.0};
  REQUIRE_THROWS_WITH(connection_from_descriptor(bad_center),
                      Catch::Matchers::ContainsSubstring("connection.center"));

  json bad_entry = bpst_descriptor();
  bad_entry["center"][2] = "x";
  REQUIRE_THROWS_WITH(
      connection_from_descriptor(bad_entry),
      Catch::Matchers::ContainsSubstring("connection.center[2]"));

  json no_lambda = bpst_descriptor();
  no_lambda.erase("lambda");
  REQUIRE_THROWS_WITH(connection_from_descriptor(no_lambda),
                      Catch::Matchers::ContainsSubstring("connection.lambda"));

  json bad_lambda = bpst_descriptor(-1.0);
  REQUIRE_THROWS_WITH(connection_from_descriptor(bad_lambda),
                      Catch::Matchers::ContainsSubstring("connection.lambda"));

  json stray = bpst_descriptor();
  stray["c"] = 3;
  REQUIRE_THROWS_WITH(connection_from_descriptor(stray),
                      Catch::Matchers::ContainsSubstring("unknown field"));

  json bad_row = rank1_linear_descriptor();
  bad_row["c"][0][2] = {0.0, 0.0};
  REQUIRE_THROWS_WITH(connection_from_descriptor(bad_row),
                      Catch::Matchers::ContainsSubstring("connection.c[0][2]"));

  json lopsided = rank1_linear_descriptor();
  lopsided["c"][0][0][0] = 1.0;  // breaks antisymmetry
  REQUIRE_THROWS_AS(connection_from_descriptor(lopsided),
                    std::invalid_argument);

  json bad_radius = bpst_descriptor();
  bad_radius["radius"] = 0.0;
  REQUIRE_THROWS_WITH(connection_from_descriptor(bad_radius),
                      Catch::Matchers::ContainsSubstring("connection.radius"));
}

TEST_CASE("frames parse from JSON rows") {
  json rows = json::array();
  rows.push_back({1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0});
  rows.push_back({0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0});
  rows.push_back({0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0});
  const auto frame = frame_from_json(rows);
  REQUIRE(frame.n() == 7);
  REQUIRE(frame.m(1, 3) == 1.0);

  REQUIRE_THROWS_WITH(frame_from_json(json::array()),
                      Catch::Matchers::ContainsSubstring("3 rows"));
  json ragged = rows;
  ragged[2] = {0.0, 0.0};
  REQUIRE_THROWS_WITH(frame_from_json(ragged),
                      Catch::Matchers::ContainsSubstring("frame[2]"));
  json text = rows;
  text[1][4] = "y";
  REQUIRE_THROWS_WITH(frame_from_json(text),
                      Catch::Matchers::ContainsSubstring("frame[1][4]"));
}

TEST_CASE("curvature reports carry the reducibility data") {
  RunConfig config = config_for("curvature", 0);
  const Eigen::Vector4d origin = Eigen::Vector4d::Zero();

  const json flat =
      curvature_report(config, json{{"kind", "flat"}}, origin);
  REQUIRE(flat["in_nu_p"] == true);
  REQUIRE(flat["sigma"] == json::array({0.0, 0.0, 0.0}));
  REQUIRE(flat["radial_residual"] == 0.0);
  REQUIRE(report_certificates_ok(flat));

  const json bpst = curvature_report(config, bpst_descriptor(), origin);
  REQUIRE(bpst["in_nu_p"] == false);
  REQUIRE(bpst["sigma"][0].get<double>() == Catch::Approx(4.0));
  REQUIRE(bpst["sigma"][2].get<double>() == Catch::Approx(4.0));
  REQUIRE(bpst["f_plus_norm"].get<double>() < 1e-6);
  REQUIRE(bpst["radial_residual"].get<double>() < 1e-12);
  REQUIRE(bpst["connection"]["kind"] == "bpst");
  REQUIRE(bpst["connection"]["lambda"] == 1.0);

  const json lin = curvature_report(config, rank1_linear_descriptor(), origin);
  REQUIRE(lin["in_nu_p"] == true);
  REQUIRE(lin["sigma"][1].get<double>() < 1e-10);
  REQUIRE(lin["sigma"][0].get<double>() == Catch::Approx(1.0));

  const json again = curvature_report(config, bpst_descriptor(), origin);
  REQUIRE(again.dump() == bpst.dump());
}

TEST_CASE("scan reports one row per descriptor") {
  RunConfig config = config_for("scan", 0);
  json families = json::array();
  families.push_back(json{{"kind", "flat"}});
  families.push_back(bpst_descriptor(0.5));
  families.push_back(bpst_descriptor(1.0));
  json off_center = bpst_descriptor(1.0);
  off_center["point"] = {0.25, 0.0, 0.0, 0.0};
  families.push_back(off_center);

  const json r = scan_report(config, families);
  REQUIRE(r["rows"].size() == 4);
  REQUIRE(r["rows"][0]["in_nu_p"] == true);
  REQUIRE(r["rows"][0]["sigma2"] == 0.0);
  REQUIRE(r["rows"][1]["sigma2"].get<double>() == Catch::Approx(16.0));
  REQUIRE(r["rows"][2]["sigma2"].get<double>() == Catch::Approx(4.0));
  const double d = 0.25 * 0.25 + 1.0;
  REQUIRE(r["rows"][3]["sigma2"].get<double>() ==
          Catch::Approx(4.0 / (d * d)));
  REQUIRE(r["rows"][3]["params"].contains("point"));
  REQUIRE(report_certificates_ok(r));

  REQUIRE_THROWS_AS(scan_report(config, json{{"kind", "flat"}}), ParseError);
}

TEST_CASE("certificate gate notices a failed certificate") {
  json r = homology_report(config_for("homology", 4));
  REQUIRE(report_certificates_ok(r));
  r["certificates"]["euler_consistency"] = false;
  REQUIRE_FALSE(report_certificates_ok(r));
  REQUIRE(report_certificates_ok(json{{"groups", json::array()}}));
}

TEST_CASE("human summaries name the key numbers") {
  const std::string homology =
      human_summary(homology_report(config_for("homology", 4)));
  REQUIRE_THAT(homology, Catch::Matchers::ContainsSubstring("H_0(G_4) = Z"));
  REQUIRE_THAT(homology, Catch::Matchers::ContainsSubstring("certificates: ok"));

  const std::string nu = human_summary(nu_report(config_for("nu", 7)));
  REQUIRE_THAT(nu, Catch::Matchers::ContainsSubstring("e+(1,4,5)"));
  REQUIRE_THAT(nu, Catch::Matchers::ContainsSubstring("-0.25"));

  const std::string curvature = human_summary(curvature_report(
      config_for("curvature", 0), bpst_descriptor(), Eigen::Vector4d::Zero()));
  REQUIRE_THAT(curvature, Catch::Matchers::ContainsSubstring("in_nu_p"));
}
