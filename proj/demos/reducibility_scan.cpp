// Sweeps instanton scale and evaluation point and prints the reducibility
// rows as JSON, the same shape the `scan` subcommand emits.

#include <iostream>

#include "grassmu/reports.hpp"

int main() {
  using grassmu::reports::json;

  json families = json::array();
  for (double lambda : {0.25, 0.5, 1.0, 2.0, 4.0})
    families.push_back(json{{"kind", "bpst"},
                            {"center", {0.0, 0.0, 0.0, 0.0}},
                            {"lambda", lambda}});
  for (double x : {0.0, 0.2, 0.4, 0.6, 0.8}) {
    json off = json{{"kind", "bpst"},
                    {"center", {0.0, 0.0, 0.0, 0.0}},
                    {"lambda", 1.0}};
    off["point"] = {x, 0.0, 0.0, 0.0};
    families.push_back(off);
  }
  families.push_back(json{{"kind", "flat"}});

  grassmu::reports::RunConfig config;
  config.command = "scan";
  const json report = grassmu::reports::scan_report(config, families);
  std::cout << report["rows"].dump(2) << "\n";
  return 0;
}
