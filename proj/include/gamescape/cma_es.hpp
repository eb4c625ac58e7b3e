#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

#include "gamescape/common.hpp"

namespace gamescape {

struct CmaEsConfig {
  int population_size = 0;  // 0 selects 4 + floor(3 ln d)
  double initial_step = 0.5;
  int max_iterations = 20;
  std::uint64_t seed = 0;
};

struct CmaEsResult {
  Eigen::VectorXd best_x;
  double best_f = 0.0;
  std::vector<double> history;  // best objective so far, one entry per iteration
};

using CmaEsObserver = std::function<void(int iteration, const Eigen::VectorXd& best_x, double best_f)>;

/// (mu/mu_w, lambda)-CMA-ES with rank-based recombination weights, cumulative
/// step-size adaptation, and rank-1 plus rank-mu covariance updates.
/// Deterministic for a given seed; candidate ranking is a stable sort.
inline CmaEsResult cma_es_minimize(const std::function<double(const Eigen::VectorXd&)>& objective,
                                   const Eigen::VectorXd& x0, const CmaEsConfig& config,
                                   const CmaEsObserver& observer = nullptr) {
  const int dim = static_cast<int>(x0.size());
  if (dim < 1) throw ValidationError("cma_es_minimize: empty start point");
  if (!(config.initial_step > 0)) throw ValidationError("cma_es_minimize: initial_step must be positive");
  const int lambda = config.population_size > 0
                         ? config.population_size
                         : 4 + static_cast<int>(std::floor(3.0 * std::log(dim)));
  if (lambda < 2) throw ValidationError("cma_es_minimize: population size must be >= 2");
  const int mu = lambda / 2;

  Eigen::VectorXd weights(mu);
  for (int i = 0; i < mu; ++i) {
    weights(i) = std::log(mu + 0.5) - std::log(static_cast<double>(i) + 1.0);
  }
  weights /= weights.sum();
  const double mu_eff = 1.0 / weights.squaredNorm();

  const double n = dim;
  const double c_sigma = (mu_eff + 2.0) / (n + mu_eff + 5.0);
  const double d_sigma =
      1.0 + 2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (n + 1.0)) - 1.0) + c_sigma;
  const double c_c = (4.0 + mu_eff / n) / (n + 4.0 + 2.0 * mu_eff / n);
  const double c_1 = 2.0 / ((n + 1.3) * (n + 1.3) + mu_eff);
  const double c_mu = std::min(1.0 - c_1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) /
                                              ((n + 2.0) * (n + 2.0) + mu_eff));
  const double chi_n = std::sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n));

  Rng rng(config.seed);
  Eigen::VectorXd mean = x0;
  double sigma = config.initial_step;
  Eigen::MatrixXd covariance = Eigen::MatrixXd::Identity(dim, dim);
  Eigen::VectorXd path_sigma = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd path_c = Eigen::VectorXd::Zero(dim);

  CmaEsResult result;
  result.best_f = std::numeric_limits<double>::infinity();
  result.best_x = x0;

  std::vector<Eigen::VectorXd> raw(static_cast<std::size_t>(lambda));
  std::vector<Eigen::VectorXd> candidates(static_cast<std::size_t>(lambda));
  std::vector<double> scores(static_cast<std::size_t>(lambda));

  for (int iteration = 0; iteration < config.max_iterations; ++iteration) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eigen(covariance);
    if (eigen.info() != Eigen::Success) {
      throw NumericalError("cma_es_minimize: covariance eigendecomposition failed");
    }
    const Eigen::VectorXd scale = eigen.eigenvalues().cwiseMax(1e-20).cwiseSqrt();
    const Eigen::MatrixXd& basis = eigen.eigenvectors();
    const Eigen::MatrixXd transform = basis * scale.asDiagonal();
    const Eigen::MatrixXd inv_sqrt = basis * scale.cwiseInverse().asDiagonal() * basis.transpose();

    for (int k = 0; k < lambda; ++k) {
      Eigen::VectorXd z(dim);
      for (int i = 0; i < dim; ++i) z(i) = rng.normal();
      raw[static_cast<std::size_t>(k)] = transform * z;
      candidates[static_cast<std::size_t>(k)] = mean + sigma * raw[static_cast<std::size_t>(k)];
      const double value = objective(candidates[static_cast<std::size_t>(k)]);
      if (!std::isfinite(value)) {
        std::ostringstream oss;
        oss << "cma_es_minimize: non-finite objective at candidate " << k << " of iteration "
            << iteration;
        throw NumericalError(oss.str());
      }
      scores[static_cast<std::size_t>(k)] = value;
    }

    std::vector<int> order(static_cast<std::size_t>(lambda));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return scores[static_cast<std::size_t>(a)] < scores[static_cast<std::size_t>(b)];
    });

    if (scores[static_cast<std::size_t>(order[0])] < result.best_f) {
      result.best_f = scores[static_cast<std::size_t>(order[0])];
      result.best_x = candidates[static_cast<std::size_t>(order[0])];
    }
    result.history.push_back(result.best_f);
    if (observer) observer(iteration + 1, result.best_x, result.best_f);

    Eigen::VectorXd step = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < mu; ++i) {
      step += weights(i) * raw[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
    }
    mean += sigma * step;

    path_sigma = (1.0 - c_sigma) * path_sigma +
                 std::sqrt(c_sigma * (2.0 - c_sigma) * mu_eff) * (inv_sqrt * step);
    const double expected_window =
        1.4 + 2.0 / (n + 1.0);
    const double path_norm = path_sigma.norm();
    const double denominator =
        std::sqrt(1.0 - std::pow(1.0 - c_sigma, 2.0 * (iteration + 1)));
    const bool step_ok = path_norm / denominator / chi_n < expected_window;
    path_c = (1.0 - c_c) * path_c;
    if (step_ok) {
      path_c += std::sqrt(c_c * (2.0 - c_c) * mu_eff) * step;
    }

    Eigen::MatrixXd rank_mu = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < mu; ++i) {
      const auto& y = raw[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])];
      rank_mu += weights(i) * y * y.transpose();
    }
    const double missing_rank1 = step_ok ? 0.0 : c_1 * c_c * (2.0 - c_c);
    covariance = (1.0 - c_1 - c_mu + missing_rank1) * covariance +
                 c_1 * path_c * path_c.transpose() + c_mu * rank_mu;
    covariance = 0.5 * (covariance + covariance.transpose());

    sigma *= std::exp((c_sigma / d_sigma) * (path_norm / chi_n - 1.0));
  }
  return result;
}

}  // namespace gamescape
