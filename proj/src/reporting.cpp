#include "schlab/reporting.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "schlab/version.hpp"

namespace schlab {

using nlohmann::json;

json config_to_json(const RunConfig& c) {
  json j;
  j["problem"] = {
      {"n", c.problem.n},
      {"m", c.problem.m},
      {"T", c.problem.T},
      {"drift", c.problem.drift.describe()},
      {"diffusion", c.problem.diffusion.describe()},
      {"initial", c.problem.initial.describe()},
      {"seed", c.seed},
  };
  j["study"] = {
      {"levels", c.study.levels},
      {"reference", c.study.reference},
      {"samples", c.study.samples},
      {"moment_p", c.study.moment_p},
      {"eval_x", c.study.eval_x},
      {"time_gaps", c.study.time_gaps},
      {"space_gaps", c.study.space_gaps},
      {"hnorm_n", c.study.hnorm_n},
      {"hnorm_m", c.study.hnorm_m},
      {"hnorm_samples", c.study.hnorm_samples},
      {"rho", c.study.rho},
  };
  j["kernel"] = {
      {"levels", c.kernel.levels},
      {"horizon", c.kernel.horizon},
      {"x_points", c.kernel.x_points},
      {"tail_tol", c.kernel.quadrature.tail_tol},
      {"j_max", c.kernel.quadrature.j_max},
      {"time_nodes", c.kernel.quadrature.time_nodes},
      {"time_grading", c.kernel.quadrature.time_grading},
      {"space_nodes_per_cell", c.kernel.quadrature.space_nodes_per_cell},
  };
  j["output"] = {{"dir", c.output_dir}};
  return j;
}

json rate_report_to_json(const RateReport& r) {
  json levels = json::array();
  for (const auto& lv : r.levels) {
    levels.push_back({
        {"level", lv.level},
        {"error", lv.error},
        {"standard_error", lv.standard_error},
        {"samples", lv.samples},
        {"discards", lv.discards},
    });
  }
  return json{
      {"kind", study_kind_name(r.kind)},
      {"levels", levels},
      {"slope", r.slope},
      {"r2", r.r2},
      {"exact", r.exact},
      {"insufficient_samples", r.insufficient},
      {"self_check_passed", r.self_check_passed},
      {"total_discards", r.total_discards},
  };
}

json density_report_to_json(const DensityReport& r) {
  return json{
      {"kind", "density"},
      {"levels", r.levels},
      {"reference", r.reference},
      {"distances", r.distances},
      {"bandwidths", r.bandwidths},
      {"decreasing_ok", r.decreasing_ok},
      {"samples_per_level", r.samples_per_level},
  };
}

std::string rate_report_csv(const RateReport& r, const std::string& level_name) {
  std::ostringstream out;
  out.precision(17);
  out << level_name << ",error,standard_error,samples,discards\n";
  for (const auto& lv : r.levels)
    out << lv.level << "," << lv.error << "," << lv.standard_error << "," << lv.samples << ","
        << lv.discards << "\n";
  return out.str();
}

std::string density_report_csv(const DensityReport& r) {
  std::ostringstream out;
  out.precision(17);
  out << "level,l1_distance,bandwidth\n";
  for (std::size_t i = 0; i < r.levels.size(); ++i)
    out << r.levels[i] << "," << r.distances[i] << "," << r.bandwidths[i] << "\n";
  return out.str();
}

json make_artifact(Command command, const RunConfig& config) {
  json j;
  j["version"] = kVersion;
  j["command"] = command_name(command);
  j["config"] = config_to_json(config);
  return j;
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << contents;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace schlab
