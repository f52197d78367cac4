#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "grassmu/errors.hpp"
#include "grassmu/frames.hpp"
#include "grassmu/reports.hpp"
#include "grassmu/schubert.hpp"

using grassmu::reports::json;
using grassmu::reports::RunConfig;

namespace {

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw grassmu::ParseError(path + ": cannot open");
  try {
    return json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw grassmu::ParseError(path + ": " + e.what());
  }
}

Eigen::Vector4d parse_point(const std::string& text) {
  Eigen::Vector4d p;
  std::stringstream ss(text);
  std::string field;
  int i = 0;
  while (std::getline(ss, field, ',')) {
    std::size_t used = 0;
    double value = 0;
    try {
      value = std::stod(field, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != field.size() || i >= 4)
      throw grassmu::ParseError("--point: expected x1,x2,x3,x4, got \"" +
                                text + "\"");
    p(i++) = value;
  }
  if (i != 4)
    throw grassmu::ParseError("--point: expected x1,x2,x3,x4, got \"" + text +
                              "\"");
  return p;
}

grassmu::frames::FrameMatrix load_frame(const std::string& path) {
  if (std::filesystem::path(path).extension() == ".json")
    return grassmu::reports::frame_from_json(load_json_file(path));
  std::ifstream in(path);
  if (!in) throw grassmu::ParseError(path + ": cannot open");
  return grassmu::frames::FrameMatrix::from_text(in);
}

// JSON to --out (or stdout when no path was given); summary for people on
// stdout otherwise.  Exit 0 only when the report's certificates all hold.
int emit(const json& report, const RunConfig& config) {
  if (config.out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream out(config.out_path);
    if (!out)
      throw grassmu::ParseError(config.out_path + ": cannot open for writing");
    out << report.dump(2) << "\n";
    std::cout << grassmu::reports::human_summary(report);
  }
  return grassmu::reports::report_certificates_ok(report) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact Schubert-cell homology of oriented 3-plane Grassmannians, the "
      "rank-drop 4-cycle pairing, and curvature reducibility"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "print help");

  RunConfig config;
  std::string connection_path;
  std::string frame_path;
  std::string point_text = "0,0,0,0";

  const auto add_common = [&config](CLI::App* cmd) {
    cmd->set_help_flag("--help", "print help");
    cmd->add_option("--atol", config.atol, "absolute rank tolerance");
    cmd->add_option("--rtol", config.rtol, "relative rank tolerance");
    cmd->add_option("--seed", config.seed, "sampler seed");
    cmd->add_option("--out", config.out_path, "write the JSON report here");
  };

  CLI::App* homology =
      app.add_subcommand("homology", "integral homology groups of G_N");
  homology->add_option("--n", config.n, "number of columns N")->required();
  homology->add_option("--qmax", config.qmax,
                       "highest degree to report (default: all)");
  add_common(homology);

  CLI::App* generator = app.add_subcommand(
      "generator", "middle-homology class of the distinguished 4-cycle");
  generator->add_option("--n", config.n, "number of columns N")->required();
  add_common(generator);

  CLI::App* nu = app.add_subcommand(
      "nu", "intersections of the rank-drop variety with the 4-cycle");
  nu->add_option("--n", config.n, "number of columns N")->required();
  add_common(nu);

  CLI::App* curvature =
      app.add_subcommand("curvature", "curvature reducibility at a point");
  curvature->add_option("--connection", connection_path,
                        "JSON connection descriptor file")
      ->required();
  curvature->add_option("--point", point_text, "evaluation point x1,x2,x3,x4");
  curvature->add_option("--h", config.h,
                        "difference step (default: radius/1000)");
  add_common(curvature);

  CLI::App* scan = app.add_subcommand(
      "scan", "reducibility over a JSON array of connection descriptors");
  scan->add_option("--connection", connection_path,
                   "JSON file holding an array of descriptors")
      ->required();
  scan->add_option("--h", config.h, "difference step (default: radius/1000)");
  add_common(scan);

  CLI::App* classify =
      app.add_subcommand("classify", "Schubert cell of a frame file");
  classify->add_option("--frame", frame_path,
                       "frame file: text (3 rows of N) or JSON (.json)")
      ->required();
  add_common(classify);

  CLI::App* export_cmd = app.add_subcommand(
      "export-boundary", "write boundary matrices and cell labels as text");
  export_cmd->set_help_flag("--help", "print help");
  export_cmd->add_option("--n", config.n, "number of columns N")->required();
  export_cmd->add_option("--out", config.out_path, "output directory")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(homology)) {
      config.command = "homology";
      return emit(grassmu::reports::homology_report(config), config);
    }
    if (app.got_subcommand(generator)) {
      config.command = "generator";
      return emit(grassmu::reports::generator_report(config), config);
    }
    if (app.got_subcommand(nu)) {
      config.command = "nu";
      return emit(grassmu::reports::nu_report(config), config);
    }
    if (app.got_subcommand(curvature)) {
      config.command = "curvature";
      const json descriptor = load_json_file(connection_path);
      const Eigen::Vector4d point = parse_point(point_text);
      return emit(grassmu::reports::curvature_report(config, descriptor, point),
                  config);
    }
    if (app.got_subcommand(scan)) {
      config.command = "scan";
      const json descriptors = load_json_file(connection_path);
      return emit(grassmu::reports::scan_report(config, descriptors), config);
    }
    if (app.got_subcommand(classify)) {
      config.command = "classify";
      const grassmu::frames::FrameMatrix frame = load_frame(frame_path);
      const grassmu::frames::CellPoint cp =
          grassmu::frames::classify_cell(frame, config.tolerance());
      json report;
      report["toolkit"] = grassmu::reports::toolkit_info();
      report["config"] = config.to_json();
      report["cell"] = cp.cell.to_string();
      report["dimension"] = cp.cell.dimension();
      report["free_coordinates"] = cp.free_coords;
      const grassmu::frames::NuMembership membership =
          grassmu::frames::nu_membership(frame, config.tolerance());
      report["in_nu"] = membership.member;
      report["nu_residual"] = membership.residual;
      // certificate: the canonical point re-embeds into the same cell
      const auto back = grassmu::frames::classify_cell(
          grassmu::frames::embed_cell_point(cp), config.tolerance());
      report["certificates"] = json{{"embed_round_trip", back.cell == cp.cell}};
      return emit(report, config);
    }
    // export-boundary
    config.command = "export-boundary";
    grassmu::schubert::export_boundary_matrices(config.n, config.out_path);
    std::cout << "wrote boundary_q*.txt and cells_q*.txt under "
              << config.out_path << "\n";
    return 0;
  } catch (const grassmu::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const grassmu::ResourceLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
