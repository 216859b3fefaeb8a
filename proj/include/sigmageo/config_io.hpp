#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <string>

#include "sigmageo/analytic.hpp"
#include "sigmageo/metric_field.hpp"

#include <json.hpp>

namespace sigmageo {

// A space loaded from a JSON config: the parsed spec, the evaluator, and the
// metric field for kinds the geodesic machinery can drive.
struct LoadedSpace {
  SpaceSpec spec;
  std::shared_ptr<SigmaSpace> space;
  std::optional<MetricField> metric;
};

SpaceSpec space_spec_from_json(const nlohmann::json& doc, const std::string& base_dir = ".");
LoadedSpace load_space_config(const std::string& path);
std::optional<MetricField> metric_field_for(const SpaceSpec& spec);

// Sigma-table CSV: first line "n=<count>", then count rows of count values.
// Save/load round-trips are exact.
Eigen::MatrixXd load_distance_matrix(const std::string& path);
void save_distance_matrix(const std::string& path, const Eigen::MatrixXd& table);

// 17 significant digits: parses back to the identical double.
std::string format_real(double v);

}  // namespace sigmageo
