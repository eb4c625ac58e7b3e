#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gamescape/common.hpp"
#include "gamescape/features.hpp"

namespace gamescape {

/// Fitted feature standardization and top-2 principal components over a game
/// collection, plus the training games' 2-D coordinates.
struct Landscape {
  std::vector<std::string> game_names;
  Eigen::VectorXd feature_mean;   // 12
  Eigen::VectorXd feature_scale;  // 12, population std (1 where degenerate)
  Eigen::MatrixXd components;     // 2 x 12, orthonormal rows
  Eigen::Vector2d explained_variance;
  Eigen::MatrixXd coords;  // N x 2
  bool standardized = true;
};

inline Eigen::Vector2d project(const Landscape& landscape, const Eigen::VectorXd& features) {
  if (features.size() != landscape.feature_mean.size()) {
    throw ValidationError("project: feature dimension mismatch");
  }
  const Eigen::VectorXd z =
      (features - landscape.feature_mean).cwiseQuotient(landscape.feature_scale);
  return landscape.components * z;
}

/// PCA over z-scored feature vectors (population std; zero-variance features
/// scaled by 1). Components are sign-fixed so the largest-|loading| entry is
/// positive. Accumulation runs over a lexicographically sorted copy of the
/// rows, so the fit is bit-identical under permutation of the input order.
inline Landscape fit_landscape(const std::vector<std::pair<std::string, Eigen::VectorXd>>& features,
                               bool standardize = true) {
  const auto count = features.size();
  if (count < 3) throw ValidationError("fit_landscape: need at least 3 games");
  const auto dim = features.front().second.size();
  for (const auto& [name, vector] : features) {
    if (vector.size() != dim) throw ValidationError("fit_landscape: inconsistent feature sizes");
  }

  std::vector<const Eigen::VectorXd*> sorted;
  sorted.reserve(count);
  for (const auto& entry : features) sorted.push_back(&entry.second);
  std::sort(sorted.begin(), sorted.end(), [dim](const Eigen::VectorXd* a, const Eigen::VectorXd* b) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      if ((*a)(i) != (*b)(i)) return (*a)(i) < (*b)(i);
    }
    return false;
  });

  Landscape landscape;
  landscape.standardized = standardize;
  landscape.feature_mean = Eigen::VectorXd::Zero(dim);
  for (const auto* row : sorted) landscape.feature_mean += *row;
  landscape.feature_mean /= static_cast<double>(count);

  Eigen::VectorXd variance = Eigen::VectorXd::Zero(dim);
  for (const auto* row : sorted) {
    variance += (*row - landscape.feature_mean).cwiseAbs2();
  }
  variance /= static_cast<double>(count);
  landscape.feature_scale = variance.cwiseSqrt();
  for (Eigen::Index i = 0; i < dim; ++i) {
    if (!standardize || landscape.feature_scale(i) == 0.0) landscape.feature_scale(i) = 1.0;
  }

  Eigen::MatrixXd covariance = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto* row : sorted) {
    const Eigen::VectorXd z = (*row - landscape.feature_mean).cwiseQuotient(landscape.feature_scale);
    covariance += z * z.transpose();
  }
  covariance /= static_cast<double>(count);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(covariance);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("fit_landscape: eigendecomposition failed");
  }
  landscape.components.resize(2, dim);
  for (int c = 0; c < 2; ++c) {
    Eigen::VectorXd loading = solver.eigenvectors().col(dim - 1 - c);
    Eigen::Index peak = 0;
    loading.cwiseAbs().maxCoeff(&peak);
    if (loading(peak) < 0) loading = -loading;
    landscape.components.row(c) = loading.transpose();
    landscape.explained_variance(c) = std::max(0.0, solver.eigenvalues()(dim - 1 - c));
  }

  landscape.game_names.reserve(count);
  landscape.coords.resize(static_cast<Eigen::Index>(count), 2);
  for (std::size_t g = 0; g < count; ++g) {
    landscape.game_names.push_back(features[g].first);
    landscape.coords.row(static_cast<Eigen::Index>(g)) = project(landscape, features[g].second).transpose();
  }
  return landscape;
}

inline Eigen::MatrixXd pairwise_distances(const Landscape& landscape) {
  const auto n = landscape.coords.rows();
  Eigen::MatrixXd distances = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (landscape.coords.row(i) - landscape.coords.row(j)).norm();
      distances(i, j) = d;
      distances(j, i) = d;
    }
  }
  return distances;
}

inline Eigen::Vector2d coord_of(const Landscape& landscape, const std::string& name) {
  for (std::size_t i = 0; i < landscape.game_names.size(); ++i) {
    if (landscape.game_names[i] == name) {
      return landscape.coords.row(static_cast<Eigen::Index>(i)).transpose();
    }
  }
  throw ValidationError("coord_of: unknown game '" + name + "'");
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::istringstream in(line);
  std::string cell;
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  return cells;
}

}  // namespace detail

inline std::string coords_to_csv(const Landscape& landscape) {
  std::ostringstream out;
  out << "name,pc1,pc2\n";
  for (std::size_t i = 0; i < landscape.game_names.size(); ++i) {
    char pc1[40], pc2[40];
    std::snprintf(pc1, sizeof(pc1), "%.17g", landscape.coords(static_cast<Eigen::Index>(i), 0));
    std::snprintf(pc2, sizeof(pc2), "%.17g", landscape.coords(static_cast<Eigen::Index>(i), 1));
    out << landscape.game_names[i] << ',' << pc1 << ',' << pc2 << '\n';
  }
  return out.str();
}

/// Loadings CSV carries everything needed to project out-of-sample games:
/// per-feature mean, scale, and the two component loadings, plus one final
/// row with the explained variances.
inline std::string loadings_to_csv(const Landscape& landscape) {
  std::ostringstream out;
  out << "feature,mean,scale,pc1,pc2\n";
  const auto& names = GraphFeatures::names();
  for (Eigen::Index i = 0; i < landscape.feature_mean.size(); ++i) {
    char mean[40], scale[40], pc1[40], pc2[40];
    std::snprintf(mean, sizeof(mean), "%.17g", landscape.feature_mean(i));
    std::snprintf(scale, sizeof(scale), "%.17g", landscape.feature_scale(i));
    std::snprintf(pc1, sizeof(pc1), "%.17g", landscape.components(0, i));
    std::snprintf(pc2, sizeof(pc2), "%.17g", landscape.components(1, i));
    out << names[static_cast<std::size_t>(i)] << ',' << mean << ',' << scale << ',' << pc1 << ','
        << pc2 << '\n';
  }
  char v1[40], v2[40];
  std::snprintf(v1, sizeof(v1), "%.17g", landscape.explained_variance(0));
  std::snprintf(v2, sizeof(v2), "%.17g", landscape.explained_variance(1));
  out << "explained_variance," << v1 << ',' << v2 << ",,\n";
  return out.str();
}

inline Landscape landscape_from_csv(const std::string& loadings_csv, const std::string& coords_csv) {
  Landscape landscape;
  std::istringstream loadings(loadings_csv);
  std::string line;
  if (!std::getline(loadings, line)) throw ValidationError("loadings csv: empty");
  std::vector<double> mean, scale, pc1, pc2;
  landscape.explained_variance.setZero();
  while (std::getline(loadings, line)) {
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.front() == "explained_variance") {
      landscape.explained_variance(0) = std::stod(cells[1]);
      landscape.explained_variance(1) = std::stod(cells[2]);
      continue;
    }
    if (cells.size() < 5) throw ValidationError("loadings csv: malformed row");
    mean.push_back(std::stod(cells[1]));
    scale.push_back(std::stod(cells[2]));
    pc1.push_back(std::stod(cells[3]));
    pc2.push_back(std::stod(cells[4]));
  }
  const auto dim = static_cast<Eigen::Index>(mean.size());
  landscape.feature_mean.resize(dim);
  landscape.feature_scale.resize(dim);
  landscape.components.resize(2, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    landscape.feature_mean(i) = mean[static_cast<std::size_t>(i)];
    landscape.feature_scale(i) = scale[static_cast<std::size_t>(i)];
    landscape.components(0, i) = pc1[static_cast<std::size_t>(i)];
    landscape.components(1, i) = pc2[static_cast<std::size_t>(i)];
  }

  std::istringstream coords(coords_csv);
  if (!std::getline(coords, line)) throw ValidationError("coords csv: empty");
  std::vector<std::array<double, 2>> rows;
  while (std::getline(coords, line)) {
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() < 3) throw ValidationError("coords csv: malformed row");
    landscape.game_names.push_back(cells[0]);
    rows.push_back({std::stod(cells[1]), std::stod(cells[2])});
  }
  landscape.coords.resize(static_cast<Eigen::Index>(rows.size()), 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    landscape.coords(static_cast<Eigen::Index>(i), 0) = rows[i][0];
    landscape.coords(static_cast<Eigen::Index>(i), 1) = rows[i][1];
  }
  return landscape;
}

/// Minimal self-contained SVG scatter of the landscape coordinates.
inline std::string landscape_to_svg(const Landscape& landscape) {
  const double width = 720, height = 540, margin = 60;
  double min_x = landscape.coords.col(0).minCoeff();
  double max_x = landscape.coords.col(0).maxCoeff();
  double min_y = landscape.coords.col(1).minCoeff();
  double max_y = landscape.coords.col(1).maxCoeff();
  if (max_x == min_x) max_x = min_x + 1;
  if (max_y == min_y) max_y = min_y + 1;
  const auto sx = [&](double x) { return margin + (x - min_x) / (max_x - min_x) * (width - 2 * margin); };
  const auto sy = [&](double y) { return height - margin - (y - min_y) / (max_y - min_y) * (height - 2 * margin); };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < landscape.game_names.size(); ++i) {
    const double x = sx(landscape.coords(static_cast<Eigen::Index>(i), 0));
    const double y = sy(landscape.coords(static_cast<Eigen::Index>(i), 1));
    out << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"4\" fill=\"#1f77b4\"/>\n";
    out << "<text x=\"" << x + 6 << "\" y=\"" << y + 4 << "\" font-size=\"9\" font-family=\"sans-serif\">"
        << landscape.game_names[i] << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace gamescape
