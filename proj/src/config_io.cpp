// JSON space configs and the sigma-table CSV format.

#include "sigmageo/config_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sigmageo/errors.hpp"

namespace sigmageo {

namespace {

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows, const std::string& what) {
  if (!rows.is_array() || rows.empty())
    throw ConfigError(what + " must be a nonempty array of rows");
  std::size_t n = rows.size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i];
    if (!row.is_array() || row.size() != n)
      throw ConfigError(what + " must be square (row " + std::to_string(i) + ")");
    for (std::size_t k = 0; k < n; ++k) {
      if (!row[k].is_number()) throw ConfigError(what + " entries must be numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k].get<double>();
    }
  }
  return m;
}

// Expression grids may be given as a full square or as upper-triangle rows
// (n, n-1, ..., 1 entries); the lower triangle is completed by symmetry.
std::vector<std::vector<std::string>> exprs_from_json(const nlohmann::json& rows, int dim) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
    throw ConfigError("riemannian_expr metric needs one row per dimension");
  std::vector<std::vector<std::string>> full(
      static_cast<std::size_t>(dim), std::vector<std::string>(static_cast<std::size_t>(dim)));
  bool upper = true;
  for (int i = 0; i < dim; ++i)
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != dim - i) upper = false;
  if (!upper)
    for (int i = 0; i < dim; ++i)
      if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != dim)
        throw ConfigError("metric expression rows must be full square or upper triangle");
  for (int i = 0; i < dim; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (!row[c].is_string()) throw ConfigError("metric expressions must be strings");
      int k = upper ? i + static_cast<int>(c) : static_cast<int>(c);
      full[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = row[c].get<std::string>();
      full[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = row[c].get<std::string>();
    }
  }
  if (!upper) {
    for (int i = 0; i < dim; ++i)
      for (int k = i + 1; k < dim; ++k)
        if (rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<std::string>() !=
            rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)].get<std::string>())
          throw ConfigError("metric expression grid must be symmetric");
  }
  return full;
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

SpaceSpec space_spec_from_json(const nlohmann::json& doc, const std::string& base_dir) {
  if (!doc.is_object()) throw ConfigError("space config must be a JSON object");
  if (!doc.contains("kind") || !doc["kind"].is_string())
    throw ConfigError("space config needs a string field 'kind'");
  std::string kind = doc["kind"].get<std::string>();

  SpaceSpec spec;
  auto need_dim = [&doc, &kind]() {
    if (!doc.contains("dim") || !doc["dim"].is_number_integer())
      throw ConfigError(kind + " space needs an integer field 'dim'");
    return doc["dim"].get<int>();
  };

  if (kind == "euclidean") {
    spec.kind = SpaceKind::Euclidean;
    spec.dim = need_dim();
  } else if (kind == "constant_metric") {
    spec.kind = SpaceKind::ConstantMetric;
    if (!doc.contains("g")) throw ConfigError("constant_metric space needs a matrix field 'g'");
    spec.metric = matrix_from_json(doc["g"], "metric matrix");
    spec.dim = static_cast<int>(spec.metric.rows());
  } else if (kind == "pseudo_euclidean") {
    spec.kind = SpaceKind::PseudoEuclidean;
    spec.dim = need_dim();
  } else if (kind == "sphere") {
    spec.kind = SpaceKind::Sphere;
    spec.dim = 2;
    spec.sphere_radius = doc.value("radius", 1.0);
    if (!(spec.sphere_radius > 0.0)) throw ConfigError("sphere radius must be positive");
  } else if (kind == "punctured_plane") {
    spec.kind = SpaceKind::PuncturedPlane;
    spec.dim = 2;
    spec.hole_radius = doc.value("hole_radius", 1.0);
    if (!(spec.hole_radius > 0.0)) throw ConfigError("hole radius must be positive");
  } else if (kind == "finite") {
    spec.kind = SpaceKind::Finite;
    if (doc.contains("file")) {
      std::filesystem::path p = doc["file"].get<std::string>();
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      spec.sigma_table = load_distance_matrix(p.string());
    } else if (doc.contains("table")) {
      spec.sigma_table = matrix_from_json(doc["table"], "sigma table");
    } else {
      throw ConfigError("finite space needs 'file' or 'table'");
    }
    spec.dim = 0;
  } else if (kind == "riemannian_expr") {
    spec.kind = SpaceKind::RiemannianExpr;
    spec.dim = need_dim();
    if (!doc.contains("g")) throw ConfigError("riemannian_expr space needs a field 'g'");
    spec.g_exprs = exprs_from_json(doc["g"], spec.dim);
  } else {
    throw ConfigError("unknown space kind '" + kind + "'");
  }
  return spec;
}

std::optional<MetricField> metric_field_for(const SpaceSpec& spec) {
  switch (spec.kind) {
    case SpaceKind::Euclidean:
      return flat_metric(Eigen::MatrixXd::Identity(spec.dim, spec.dim));
    case SpaceKind::ConstantMetric:
      return flat_metric(spec.metric);
    case SpaceKind::PseudoEuclidean: {
      Eigen::MatrixXd g = -Eigen::MatrixXd::Identity(spec.dim, spec.dim);
      g(0, 0) = 1.0;
      return flat_metric(g);
    }
    case SpaceKind::Sphere:
      return sphere_metric(spec.sphere_radius);
    case SpaceKind::PuncturedPlane:
      return punctured_metric(spec.hole_radius);
    case SpaceKind::RiemannianExpr: {
      std::vector<std::vector<Expr>> parsed;
      parsed.reserve(spec.g_exprs.size());
      for (const auto& row : spec.g_exprs) {
        std::vector<Expr> prow;
        prow.reserve(row.size());
        for (const auto& src : row) prow.push_back(Expr::parse(src, spec.dim));
        parsed.push_back(std::move(prow));
      }
      return expr_metric(spec.dim, std::move(parsed));
    }
    case SpaceKind::Finite:
      return std::nullopt;
  }
  return std::nullopt;
}

LoadedSpace load_space_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open space config '" + path + "'");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
  std::string base = std::filesystem::path(path).parent_path().string();
  if (base.empty()) base = ".";
  LoadedSpace loaded;
  loaded.spec = space_spec_from_json(doc, base);
  loaded.space = make_space(loaded.spec);
  loaded.metric = metric_field_for(loaded.spec);
  return loaded;
}

Eigen::MatrixXd load_distance_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sigma table '" + path + "'");
  std::string header;
  if (!std::getline(in, header) || header.rfind("n=", 0) != 0)
    throw ConfigError("sigma table must start with a line 'n=<count>'");
  int n = 0;
  try {
    n = std::stoi(header.substr(2));
  } catch (...) {
    throw ConfigError("malformed point count in '" + header + "'");
  }
  if (n < 1) throw ConfigError("sigma table needs at least one point");
  Eigen::MatrixXd table(n, n);
  for (int i = 0; i < n; ++i) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("sigma table truncated at row " + std::to_string(i));
    std::stringstream row(line);
    std::string cell;
    for (int k = 0; k < n; ++k) {
      if (!std::getline(row, cell, ','))
        throw ConfigError("sigma table row " + std::to_string(i) + " has too few values");
      try {
        table(i, k) = std::stod(cell);
      } catch (...) {
        throw ConfigError("malformed value '" + cell + "' in sigma table");
      }
    }
    if (std::getline(row, cell, ','))
      throw ConfigError("sigma table row " + std::to_string(i) + " has too many values");
  }
  return table;
}

void save_distance_matrix(const std::string& path, const Eigen::MatrixXd& table) {
  if (table.rows() != table.cols()) throw ConfigError("sigma table must be square");
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write sigma table '" + path + "'");
  out << "n=" << table.rows() << "\n";
  for (Eigen::Index i = 0; i < table.rows(); ++i) {
    for (Eigen::Index k = 0; k < table.cols(); ++k) {
      if (k) out << ",";
      out << format_real(table(i, k));
    }
    out << "\n";
  }
}

}  // namespace sigmageo
