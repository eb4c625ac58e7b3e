#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "gamescape/cma_es.hpp"
#include "gamescape/common.hpp"
#include "gamescape/features.hpp"
#include "gamescape/landscape.hpp"
#include "gamescape/melo.hpp"

namespace gamescape {

struct GenerationTarget {
  Eigen::Vector2d coords;
  double weight = 1.0;
};

struct TrajectoryPoint {
  int iteration = 0;
  double pc1 = 0.0;
  double pc2 = 0.0;
  double objective = 0.0;
};

struct GenerationResult {
  MEloGenome genome;
  SymmetricMatrixGame game;
  std::vector<TrajectoryPoint> trajectory;  // best-so-far per iteration
  Eigen::Vector2d target;
  double initial_distance = 0.0;
  double final_distance = 0.0;
};

inline Eigen::Vector2d landscape_coords_of_genome(const MEloGenome& genome,
                                                  const Landscape& landscape,
                                                  const FeatureOptions& options) {
  return project(landscape, feature_vector(melo_payoffs(genome), options).as_vector());
}

/// Searches mElo parameters (rank `rank`, zero-initialized, i.e. a game with
/// constant payoffs) so the generated game's landscape coordinates reach the
/// weighted mixture of the target coordinates. CMA-ES minimizes the squared
/// coordinate distance.
inline GenerationResult generate_game(int size, const std::vector<GenerationTarget>& targets,
                                      const Landscape& landscape, CmaEsConfig config,
                                      int rank = 5,
                                      FeatureOptions options = FeatureOptions::single_population()) {
  if (size < 2) throw ValidationError("generate_game: size must be >= 2");
  if (targets.empty()) throw ValidationError("generate_game: empty target list");
  if (rank < 0) throw ValidationError("generate_game: rank must be >= 0");

  Eigen::Vector2d target = Eigen::Vector2d::Zero();
  double total_weight = 0.0;
  for (const auto& t : targets) {
    if (t.weight < 0) throw ValidationError("generate_game: weights must be nonnegative");
    target += t.weight * t.coords;
    total_weight += t.weight;
  }
  if (total_weight <= 0) throw ValidationError("generate_game: weights must not all be zero");
  target /= total_weight;

  const auto objective = [&](const Eigen::VectorXd& flat) {
    const auto genome = MEloGenome::unflatten(flat, size, rank);
    const Eigen::Vector2d coords = landscape_coords_of_genome(genome, landscape, options);
    return (coords - target).squaredNorm();
  };

  GenerationResult result;
  result.target = target;
  const MEloGenome start = MEloGenome::zeros(size, rank);
  result.initial_distance =
      (landscape_coords_of_genome(start, landscape, options) - target).norm();

  const auto record = [&](int iteration, const Eigen::VectorXd& best_x, double best_f) {
    const auto genome = MEloGenome::unflatten(best_x, size, rank);
    const Eigen::Vector2d coords = landscape_coords_of_genome(genome, landscape, options);
    result.trajectory.push_back({iteration, coords(0), coords(1), best_f});
  };
  const auto cma = cma_es_minimize(objective, start.flatten(), config, record);

  result.genome = MEloGenome::unflatten(cma.best_x, size, rank);
  result.game = melo_payoffs(result.genome, "generated_n" + std::to_string(size));
  result.final_distance = std::sqrt(cma.best_f);
  return result;
}

}  // namespace gamescape
