#pragma once

#include <json.hpp>

#include <cstdlib>
#include <future>
#include <set>
#include <string>
#include <vector>

#include "grassmu/errors.hpp"
#include "grassmu/frames.hpp"
#include "grassmu/gauge.hpp"
#include "grassmu/homology.hpp"
#include "grassmu/intlattice.hpp"
#include "grassmu/schubert.hpp"
#include "grassmu/tolerances.hpp"
#include "grassmu/version.hpp"

namespace grassmu::reports {

// ordered_json keeps insertion order, so identical configs dump to identical
// bytes.
using json = nlohmann::ordered_json;

inline json toolkit_info() {
  return json{{"name", toolkit_name}, {"version", toolkit_version}};
}

// Resolved run parameters; every report embeds a copy.
struct RunConfig {
  std::string command;
  int n = 0;
  int qmax = -1;  // -1: every degree
  double atol = 1e-12;
  double rtol = 1e-9;
  double h = 0.0;  // 0: one thousandth of the domain radius
  std::uint64_t seed = 20240818;
  std::string out_path;

  RankTolerance tolerance() const { return RankTolerance{atol, rtol}; }

  json to_json() const {
    return json{{"command", command}, {"n", n},       {"qmax", qmax},
                {"atol", atol},       {"rtol", rtol}, {"h", h},
                {"seed", seed},       {"out", out_path}};
  }
};

// Cell-count cap on N, overridable through the environment.
inline int resolved_cap() {
  const char* env = std::getenv("GRASSMANN_MU_CAP");
  if (env == nullptr || *env == '\0') return 12;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == nullptr || *end != '\0' || v < 3)
    throw ParseError("GRASSMANN_MU_CAP: expected an integer >= 3, got \"" +
                     std::string(env) + "\"");
  return static_cast<int>(v);
}

inline void check_cap(int n) {
  const int cap = resolved_cap();
  if (n > cap)
    throw ResourceLimitError(
        "n = " + std::to_string(n) + " exceeds the configured cap " +
        std::to_string(cap) + " (set GRASSMANN_MU_CAP to raise it)");
}

namespace detail {

inline json int_to_json(const intlattice::Int& v) {
  if (v.fits_slong_p()) return json(v.get_si());
  return json(v.get_str());
}

inline json int_vector_to_json(const std::vector<intlattice::Int>& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(int_to_json(x));
  return out;
}

inline json group_to_json(const homology::HomologyGroup& g) {
  return json{{"N", g.n},
              {"q", g.q},
              {"free_rank", g.free_rank},
              {"torsion", int_vector_to_json(g.torsion)}};
}

inline std::string group_to_string(const homology::HomologyGroup& g) {
  std::string s;
  if (g.free_rank == 1) s = "Z";
  else if (g.free_rank > 1) s = "Z^" + std::to_string(g.free_rank);
  for (const auto& d : g.torsion) {
    if (!s.empty()) s += " + ";
    s += "Z/" + d.get_str();
  }
  return s.empty() ? "0" : s;
}

// The three shared certificates: an exact chain complex, a verifiable Smith
// decomposition of every boundary map, and the Euler count.
inline json homology_certificates(int n, std::size_t rational_checked,
                                  bool rational_agrees) {
  const int top = schubert::grassmannian_dimension(n);
  bool boundary_squared_zero = true;
  bool snf_remultiplication = true;
  for (int q = 1; q <= top; ++q) {
    const intlattice::IntMatrix dq = schubert::boundary_matrix(n, q);
    if (q < top) {
      const intlattice::IntMatrix next = schubert::boundary_matrix(n, q + 1);
      if (!(dq * next).is_zero()) boundary_squared_zero = false;
    }
    const auto snf = intlattice::smith_normal_form(dq);
    if (!(snf.u * dq * snf.v == snf.s)) snf_remultiplication = false;
  }
  const homology::EulerReport euler = homology::euler_consistency(n);
  return json{{"boundary_squared_zero", boundary_squared_zero},
              {"snf_remultiplication", snf_remultiplication},
              {"euler_consistency", euler.consistent},
              {"rational_rank_agreement", rational_agrees},
              {"rational_ranks_checked", rational_checked},
              {"euler_cell_sum", euler.cell_sum},
              {"euler_betti_sum", euler.betti_sum}};
}

}  // namespace detail

// Per-degree homology groups with the shared certificates; degrees are
// computed concurrently and assembled in order.
inline json homology_report(RunConfig config) {
  if (config.n < 3)
    throw std::invalid_argument("homology_report: need n >= 3");
  check_cap(config.n);
  const int top = schubert::grassmannian_dimension(config.n);
  if (config.qmax < 0 || config.qmax > top) config.qmax = top;

  struct DegreeResult {
    homology::HomologyGroup group;
    std::size_t betti_rat = 0;
  };
  std::vector<std::future<DegreeResult>> futures;
  for (int q = 0; q <= config.qmax; ++q)
    futures.push_back(std::async(std::launch::async, [n = config.n, q] {
      return DegreeResult{homology::homology_group(n, q),
                          homology::betti_rational(n, q)};
    }));

  json groups = json::array();
  bool rational_agrees = true;
  for (auto& f : futures) {
    const DegreeResult r = f.get();
    if (r.group.free_rank != r.betti_rat) rational_agrees = false;
    groups.push_back(detail::group_to_json(r.group));
  }

  json report;
  report["toolkit"] = toolkit_info();
  report["config"] = config.to_json();
  report["groups"] = std::move(groups);
  report["certificates"] = detail::homology_certificates(
      config.n, static_cast<std::size_t>(config.qmax) + 1, rational_agrees);
  return report;
}

// Class coordinates of the distinguished 4-cycle in middle homology.
inline json generator_report(RunConfig config) {
  check_cap(config.n);
  const schubert::Chain s = schubert::s_cycle(config.n);
  const homology::CycleSpace space(config.n, 4);
  const bool is_cycle = homology::is_cycle(s);
  const homology::HomologyClass cls = space.class_of(s);
  const homology::HomologyGroup group = space.group();

  intlattice::Int content = 0;
  for (const auto& c : cls.free_coords) content = gcd(content, c);

  json report;
  report["toolkit"] = toolkit_info();
  report["config"] = config.to_json();
  report["group"] = detail::group_to_json(group);
  report["is_cycle"] = is_cycle;
  report["free_coordinates"] = detail::int_vector_to_json(cls.free_coords);
  report["torsion_coordinates"] =
      detail::int_vector_to_json(cls.torsion_coords);
  if (cls.free_coords.size() == 1)
    report["class_coordinate"] = detail::int_to_json(cls.free_coords[0]);
  report["coordinate_primitive"] = (content == 1);
  json certs = detail::homology_certificates(config.n, 0, true);
  certs.erase("rational_rank_agreement");
  certs.erase("rational_ranks_checked");
  certs["is_cycle"] = is_cycle;
  report["certificates"] = std::move(certs);
  return report;
}

// Intersections of the rank-drop variety with the cells of the 4-cycle,
// signed by the calibrated co-orientation.
inline json nu_report(RunConfig config) {
  check_cap(config.n);
  const schubert::Chain s = schubert::s_cycle(config.n);
  const frames::Coorientation co = frames::calibrated_coorientation();
  const RankTolerance tol = config.tolerance();
  const int grid_points = 11;

  json cells = json::array();
  for (const auto& [cell, coeff] : s.terms()) {
    const std::vector<frames::CellPoint> pts = frames::nu_intersect_cell(cell);
    json points = json::array();
    json signs = json::array();
    for (const auto& p : pts) {
      points.push_back(p.free_coords);
      signs.push_back(frames::intersection_sign_real(cell, p, co, tol));
    }
    const frames::GridScan scan = frames::nu_grid_scan(cell, grid_points);
    cells.push_back(json{{"cell", cell.to_string()},
                         {"coefficient", detail::int_to_json(coeff)},
                         {"points", std::move(points)},
                         {"signs", std::move(signs)},
                         {"grid_points_per_axis", grid_points},
                         {"grid_zero_nodes", scan.zero_nodes},
                         {"residual_min_off_point", scan.min_nonzero_residual}});
  }

  const frames::OrientationLedger ledger = frames::orientation_ledger();
  json report;
  report["toolkit"] = toolkit_info();
  report["config"] = config.to_json();
  report["coorientation"] = frames::to_string(co);
  report["cells"] = std::move(cells);
  report["complex_sign"] = ledger.complex_sign;
  report["p1_vs_c2"] = ledger.p1_vs_c2;
  report["nu_dot_S"] = ledger.nu_dot_s;
  report["mu_coefficient"] = ledger.mu_coefficient;
  report["certificates"] =
      json{{"ledger_signs_consistent",
            ledger.complex_sign * ledger.p1_vs_c2 == ledger.nu_dot_s},
           {"real_matches_ledger",
            frames::nu_dot_s_real(config.n, co, tol) == ledger.nu_dot_s}};
  return report;
}

namespace detail {

inline double require_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number");
  return j.get<double>();
}

inline Eigen::Vector4d require_vec4(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 4)
    throw ParseError(path + ": expected 4 numbers");
  Eigen::Vector4d v;
  for (int i = 0; i < 4; ++i)
    v(i) = require_number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

inline Eigen::Matrix4d require_mat4(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 4)
    throw ParseError(path + ": expected a 4x4 matrix");
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != 4)
      throw ParseError(row_path + ": expected 4 numbers");
    for (int c = 0; c < 4; ++c)
      m(r, c) = require_number(j[r][c], row_path + "[" + std::to_string(c) + "]");
  }
  return m;
}

}  // namespace detail

// Build a connection from a JSON descriptor such as
//   {"kind": "bpst", "center": [0,0,0,0], "lambda": 1}
//   {"kind": "linear", "c": [[[...4x4...]], ...], "base": [...]}
//   {"kind": "flat"}
// Parse errors carry the offending field path.
inline gauge::ConnectionSpec connection_from_descriptor(
    const json& j, const std::string& path = "connection") {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw ParseError(path + ".kind: expected a string");
  const std::string kind = j["kind"].get<std::string>();

  std::set<std::string> allowed{"kind", "radius"};
  if (kind == "flat") {
    allowed.insert("center");
  } else if (kind == "linear") {
    allowed.insert("c");
    allowed.insert("base");
  } else if (kind == "bpst") {
    allowed.insert("center");
    allowed.insert("lambda");
  } else {
    throw ParseError(path + ".kind: expected \"flat\", \"linear\" or \"bpst\", got \"" +
                     kind + "\"");
  }
  for (const auto& [key, value] : j.items())
    if (allowed.find(key) == allowed.end())
      throw ParseError(path + "." + key + ": unknown field for kind \"" +
                       kind + "\"");

  double radius = 1.0;
  if (j.contains("radius")) {
    radius = detail::require_number(j["radius"], path + ".radius");
    if (!(radius > 0)) throw ParseError(path + ".radius: expected > 0");
  }

  if (kind == "flat") {
    Eigen::Vector4d center = Eigen::Vector4d::Zero();
    if (j.contains("center"))
      center = detail::require_vec4(j["center"], path + ".center");
    return gauge::ConnectionSpec::flat_connection(center, radius);
  }
  if (kind == "linear") {
    if (!j.contains("c") || !j["c"].is_array() || j["c"].size() != 3)
      throw ParseError(path + ".c: expected 3 antisymmetric 4x4 matrices");
    std::array<Eigen::Matrix4d, 3> c;
    for (int a = 0; a < 3; ++a)
      c[a] = detail::require_mat4(j["c"][a],
                                  path + ".c[" + std::to_string(a) + "]");
    Eigen::Vector4d base = Eigen::Vector4d::Zero();
    if (j.contains("base"))
      base = detail::require_vec4(j["base"], path + ".base");
    return gauge::ConnectionSpec::linear_connection(c, base, radius);
  }
  if (!j.contains("lambda"))
    throw ParseError(path + ".lambda: expected a number");
  const double lambda = detail::require_number(j["lambda"], path + ".lambda");
  if (!(lambda > 0)) throw ParseError(path + ".lambda: expected > 0");
  if (!j.contains("center"))
    throw ParseError(path + ".center: expected 4 numbers");
  const Eigen::Vector4d center =
      detail::require_vec4(j["center"], path + ".center");
  return gauge::ConnectionSpec::bpst_instanton(center, lambda, radius);
}

inline json descriptor_echo(const gauge::ConnectionSpec& a) {
  json out;
  out["kind"] = gauge::to_string(a.kind);
  out["domain_center"] = std::vector<double>(a.domain_center.data(),
                                             a.domain_center.data() + 4);
  out["domain_radius"] = a.domain_radius;
  if (a.kind == gauge::ConnectionKind::bpst) out["lambda"] = a.bpst_lambda;
  return out;
}

// Frame ingestion from a JSON array of 3 rows of N numbers.
inline frames::FrameMatrix frame_from_json(const json& j,
                                           const std::string& path = "frame") {
  if (!j.is_array() || j.size() != 3)
    throw ParseError(path + ": expected 3 rows");
  const std::size_t n = j[0].is_array() ? j[0].size() : 0;
  if (n < 3) throw ParseError(path + "[0]: expected at least 3 numbers");
  Eigen::Matrix3Xd m(3, static_cast<int>(n));
  for (int r = 0; r < 3; ++r) {
    const std::string row_path = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != n)
      throw ParseError(row_path + ": expected " + std::to_string(n) +
                       " numbers");
    for (std::size_t c = 0; c < n; ++c)
      m(r, static_cast<int>(c)) =
          detail::require_number(j[r][c],
                                 row_path + "[" + std::to_string(c) + "]");
  }
  return frames::FrameMatrix(std::move(m));
}

// Reducibility of one connection at one point.
inline json curvature_report(const RunConfig& config, const json& descriptor,
                             const Eigen::Vector4d& point) {
  const gauge::ConnectionSpec conn = connection_from_descriptor(descriptor);
  const gauge::Reducibility red =
      gauge::reducibility(conn, point, config.tolerance(), config.h);
  const double radial = gauge::radial_gauge_residual(
      conn, conn.domain_center, 200, config.seed);

  json m_rows = json::array();
  for (int r = 0; r < 3; ++r)
    m_rows.push_back(std::vector<double>{red.matrix.m(r, 0), red.matrix.m(r, 1),
                                         red.matrix.m(r, 2)});

  json report;
  report["toolkit"] = toolkit_info();
  report["config"] = config.to_json();
  report["connection"] = descriptor_echo(conn);
  report["point"] = std::vector<double>(point.data(), point.data() + 4);
  report["M"] = std::move(m_rows);
  report["sigma"] = std::vector<double>{red.matrix.sigma(0),
                                        red.matrix.sigma(1),
                                        red.matrix.sigma(2)};
  report["in_nu_p"] = red.in_nu_p;
  report["f_plus_norm"] = red.matrix.f_plus_norm;
  report["radial_residual"] = radial;
  report["certificates"] =
      json{{"sigma_sorted", red.matrix.sigma(0) >= red.matrix.sigma(1) &&
                                red.matrix.sigma(1) >= red.matrix.sigma(2)},
           {"residual_is_sigma2", red.residual == red.matrix.sigma(1)}};
  return report;
}

// Reducibility over a JSON array of descriptors, each with an optional
// "point" (default: the domain center).
inline json scan_report(const RunConfig& config, const json& descriptors) {
  if (!descriptors.is_array())
    throw ParseError("scan: expected an array of connection descriptors");
  json rows = json::array();
  for (std::size_t i = 0; i < descriptors.size(); ++i) {
    const std::string path = "scan[" + std::to_string(i) + "]";
    json params = descriptors[i];
    if (!params.is_object()) throw ParseError(path + ": expected an object");
    Eigen::Vector4d point;
    bool have_point = false;
    if (params.contains("point")) {
      point = detail::require_vec4(params["point"], path + ".point");
      have_point = true;
      params.erase("point");
    }
    const gauge::ConnectionSpec conn = connection_from_descriptor(params, path);
    if (!have_point) point = conn.domain_center;
    const gauge::Reducibility red =
        gauge::reducibility(conn, point, config.tolerance(), config.h);
    rows.push_back(json{{"params", descriptors[i]},
                        {"sigma2", red.residual},
                        {"in_nu_p", red.in_nu_p}});
  }
  json report;
  report["toolkit"] = toolkit_info();
  report["config"] = config.to_json();
  report["rows"] = std::move(rows);
  report["certificates"] = json{{"all_rows_evaluated", true}};
  return report;
}

// A report exits cleanly only when every certificate it carries is true.
inline bool report_certificates_ok(const json& report) {
  if (!report.contains("certificates")) return true;
  for (const auto& [key, value] : report["certificates"].items())
    if (value.is_boolean() && !value.get<bool>()) return false;
  return true;
}

// One-paragraph summary for people; the JSON is the machine output.
inline std::string human_summary(const json& report) {
  std::string out;
  const std::string command =
      report.contains("config") ? report["config"].value("command", "") : "";
  if (command == "homology") {
    for (const auto& g : report["groups"]) {
      homology::HomologyGroup group;
      group.n = g["N"].get<int>();
      group.q = g["q"].get<int>();
      group.free_rank = g["free_rank"].get<std::size_t>();
      for (const auto& t : g["torsion"])
        group.torsion.push_back(intlattice::Int(t.get<long>()));
      out += "H_" + std::to_string(group.q) + "(G_" +
             std::to_string(group.n) + ") = " +
             detail::group_to_string(group) + "\n";
    }
  } else if (command == "generator") {
    out += "cycle: " + std::string(report["is_cycle"].get<bool>() ? "yes" : "no") +
           ", class coordinates " + report["free_coordinates"].dump() + "\n";
  } else if (command == "nu") {
    for (const auto& cell : report["cells"])
      out += cell["cell"].get<std::string>() + ": " +
             std::to_string(cell["points"].size()) + " intersection(s), signs " +
             cell["signs"].dump() + "\n";
    out += "nu.S = " + report["nu_dot_S"].dump() +
           ", mu coefficient = " + report["mu_coefficient"].dump() + "\n";
  } else if (command == "curvature") {
    out += "sigma = " + report["sigma"].dump() +
           ", in_nu_p = " + report["in_nu_p"].dump() +
           ", |F+| = " + report["f_plus_norm"].dump() + "\n";
  } else if (command == "scan") {
    out += std::to_string(report["rows"].size()) + " row(s)\n";
  } else if (command == "classify") {
    out += report["cell"].get<std::string>() + ", free coordinates " +
           report["free_coordinates"].dump() + "\n";
  }
  out += "certificates: ";
  out += report_certificates_ok(report) ? "ok" : "FAILED";
  out += "\n";
  return out;
}

}  // namespace grassmu::reports
