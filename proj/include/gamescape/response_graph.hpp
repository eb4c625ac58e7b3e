#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "gamescape/common.hpp"
#include "gamescape/game.hpp"

namespace gamescape {

enum class AlphaRankMode { kFinite, kInfinite };
enum class PopulationModel { kSingle, kMulti };

/// Fitness comparison for a single-population deviation s -> sigma.
enum class SinglePopDelta {
  kMutantVsResident,   // M(sigma, s) - M(s, sigma)
  kMutantVsIncumbent,  // M(sigma, s) - M(s, s)
};

struct AlphaRankParams {
  AlphaRankMode mode = AlphaRankMode::kInfinite;
  double alpha = 0.2;
  int m = 50;
  double epsilon = 1e-10;
  PopulationModel population = PopulationModel::kMulti;
  SinglePopDelta delta = SinglePopDelta::kMutantVsResident;

  static AlphaRankParams infinite_single() {
    AlphaRankParams params;
    params.population = PopulationModel::kSingle;
    return params;
  }

  static AlphaRankParams infinite_multi() { return AlphaRankParams{}; }

  static AlphaRankParams finite_multi(double alpha, int m) {
    AlphaRankParams params;
    params.mode = AlphaRankMode::kFinite;
    params.alpha = alpha;
    params.m = m;
    return params;
  }

  void check() const {
    if (!(alpha > 0)) throw ValidationError("AlphaRankParams: alpha must be positive");
    if (m < 2) throw ValidationError("AlphaRankParams: population size m must be >= 2");
    if (!(epsilon > 0 && epsilon < 0.5)) {
      throw ValidationError("AlphaRankParams: epsilon must lie in (0, 0.5)");
    }
  }
};

/// Markov transition structure over pure strategy profiles (multi-population)
/// or strategies (single-population), plus the strict-improvement digraph.
struct ResponseGraph {
  std::vector<std::vector<int>> nodes;
  Eigen::MatrixXd transitions;   // row-stochastic E
  Eigen::MatrixXi improvement;   // 1 iff the deviating player strictly gains
  double eta = 0.0;
  PopulationModel population = PopulationModel::kMulti;
  std::vector<int> strategy_counts;

  int size() const { return static_cast<int>(transitions.rows()); }

  /// Largest possible improvement in/out degree for a node of this graph.
  int max_degree() const {
    int total = 0;
    for (int c : strategy_counts) total += c - 1;
    return total;
  }
};

struct AlphaRankDistribution {
  Eigen::VectorXd pi;
};

namespace detail {

inline double transition_weight(double delta, double eta, const AlphaRankParams& params) {
  if (params.mode == AlphaRankMode::kInfinite) {
    if (delta > 0) return eta * (1.0 - params.epsilon);
    if (delta < 0) return eta * params.epsilon;
    return eta / 2.0;
  }
  if (delta == 0) return eta / params.m;
  // expm1 keeps the ratio stable for small alpha * delta.
  return eta * std::expm1(-params.alpha * delta) / std::expm1(-params.alpha * params.m * delta);
}

}  // namespace detail

inline ResponseGraph build_response_graph_single(const SymmetricMatrixGame& game,
                                                 AlphaRankParams params) {
  params.check();
  const int n = game.size();
  if (n < 2) throw ValidationError("build_response_graph: need >= 2 strategies");
  ResponseGraph graph;
  graph.population = PopulationModel::kSingle;
  graph.strategy_counts = {n};
  graph.eta = 1.0 / (n - 1);
  graph.nodes.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) graph.nodes.push_back({i});

  graph.transitions = Eigen::MatrixXd::Zero(n, n);
  graph.improvement = Eigen::MatrixXi::Zero(n, n);
  for (int s = 0; s < n; ++s) {
    double outgoing = 0.0;
    for (int sigma = 0; sigma < n; ++sigma) {
      if (sigma == s) continue;
      const double delta = params.delta == SinglePopDelta::kMutantVsResident
                               ? game.matrix(sigma, s) - game.matrix(s, sigma)
                               : game.matrix(sigma, s) - game.matrix(s, s);
      const double weight = detail::transition_weight(delta, graph.eta, params);
      graph.transitions(s, sigma) = weight;
      graph.improvement(s, sigma) = delta > 0 ? 1 : 0;
      outgoing += weight;
    }
    graph.transitions(s, s) = 1.0 - outgoing;
  }
  return graph;
}

/// Response graph over all pure strategy profiles; transitions exist only
/// between unilateral deviations, self-transitions close each row to 1.
inline ResponseGraph build_response_graph(const PayoffTensor& game, AlphaRankParams params) {
  params.check();
  if (params.population == PopulationModel::kSingle) {
    if (!game.symmetric() || game.num_players() != 2) {
      throw ValidationError("build_response_graph: single-population mode needs a symmetric 2-player game");
    }
  } else {
    int deviations = 0;
    for (int c : game.strategy_counts()) deviations += c - 1;
    if (deviations == 0) {
      throw ValidationError("build_response_graph: every player has a single strategy; eta undefined");
    }
  }

  ResponseGraph graph;
  graph.population = params.population;

  if (params.population == PopulationModel::kSingle) {
    const auto sym = game.as_symmetric();
    return build_response_graph_single(sym, params);
  }

  const int num_players = game.num_players();
  const int num_nodes = game.num_profiles();
  graph.strategy_counts = game.strategy_counts();
  int deviations = 0;
  for (int c : graph.strategy_counts) deviations += c - 1;
  graph.eta = 1.0 / deviations;
  graph.nodes.reserve(static_cast<std::size_t>(num_nodes));
  for (int idx = 0; idx < num_nodes; ++idx) graph.nodes.push_back(game.profile_of(idx));

  graph.transitions = Eigen::MatrixXd::Zero(num_nodes, num_nodes);
  graph.improvement = Eigen::MatrixXi::Zero(num_nodes, num_nodes);
  for (int idx = 0; idx < num_nodes; ++idx) {
    auto profile = graph.nodes[static_cast<std::size_t>(idx)];
    double outgoing = 0.0;
    for (int k = 0; k < num_players; ++k) {
      const int original = profile[static_cast<std::size_t>(k)];
      const double stay = game.payoff(k, profile);
      for (int alt = 0; alt < graph.strategy_counts[static_cast<std::size_t>(k)]; ++alt) {
        if (alt == original) continue;
        profile[static_cast<std::size_t>(k)] = alt;
        const int target = game.profile_index(profile);
        const double delta = game.payoff(k, profile) - stay;
        const double weight = detail::transition_weight(delta, graph.eta, params);
        graph.transitions(idx, target) = weight;
        graph.improvement(idx, target) = delta > 0 ? 1 : 0;
        outgoing += weight;
      }
      profile[static_cast<std::size_t>(k)] = original;
    }
    graph.transitions(idx, idx) = 1.0 - outgoing;
  }
  return graph;
}

inline ResponseGraph build_response_graph(const SymmetricMatrixGame& game,
                                          AlphaRankParams params = AlphaRankParams::infinite_single()) {
  params.population = PopulationModel::kSingle;
  return build_response_graph_single(game, params);
}

inline const Eigen::MatrixXi& improvement_digraph(const ResponseGraph& graph) {
  return graph.improvement;
}

namespace detail {

inline Eigen::VectorXd power_iteration(const Eigen::MatrixXd& transitions, double tol,
                                       long max_iterations) {
  const auto n = transitions.rows();
  Eigen::VectorXd pi = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  const Eigen::MatrixXd transposed = transitions.transpose();
  for (long it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd next = transposed * pi;
    next /= next.sum();
    const double diff = (next - pi).cwiseAbs().sum();
    pi = std::move(next);
    if (diff <= tol) return pi;
  }
  throw NumericalError("stationary_distribution: power iteration did not converge");
}

}  // namespace detail

/// Stationary distribution of E (piᵀ E = piᵀ): direct linear solve for up to
/// 2000 nodes, power iteration beyond. The epsilon perturbation guarantees a
/// unique ergodic solution.
inline AlphaRankDistribution stationary_distribution(const ResponseGraph& graph) {
  const int n = graph.size();
  Eigen::VectorXd pi;
  if (n <= 2000) {
    Eigen::MatrixXd system = graph.transitions.transpose() - Eigen::MatrixXd::Identity(n, n);
    system.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    pi = system.partialPivLu().solve(rhs);
    for (int i = 0; i < n; ++i) {
      if (pi(i) < 0 && pi(i) > -1e-12) pi(i) = 0.0;
    }
    pi /= pi.sum();
    const double residual = ((graph.transitions.transpose() * pi) - pi).cwiseAbs().maxCoeff();
    if (!(residual <= 1e-10) || !pi.allFinite() || pi.minCoeff() < 0) {
      pi = detail::power_iteration(graph.transitions, 1e-13, 1000000);
    }
  } else {
    pi = detail::power_iteration(graph.transitions, 1e-13, 1000000);
  }
  const double residual = ((graph.transitions.transpose() * pi) - pi).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-10)) {
    throw NumericalError("stationary_distribution: residual above 1e-10");
  }
  return AlphaRankDistribution{std::move(pi)};
}

inline std::string node_label(const ResponseGraph& graph, int index) {
  const auto& profile = graph.nodes[static_cast<std::size_t>(index)];
  std::ostringstream oss;
  if (profile.size() == 1) {
    oss << 's' << profile[0];
  } else {
    oss << '(';
    for (std::size_t k = 0; k < profile.size(); ++k) oss << (k ? "," : "") << profile[k];
    oss << ')';
  }
  return oss.str();
}

/// DOT rendering: one node per profile with its stationary mass, improvement
/// edges weighted by the transition probability.
inline std::string to_dot(const ResponseGraph& graph, const AlphaRankDistribution& dist) {
  std::ostringstream out;
  out << "digraph response_graph {\n";
  const int n = graph.size();
  for (int i = 0; i < n; ++i) {
    char mass[32];
    std::snprintf(mass, sizeof(mass), "%.6f", dist.pi(i));
    out << "  n" << i << " [label=\"" << node_label(graph, i) << "\\npi=" << mass << "\"];\n";
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (graph.improvement(i, j)) {
        char weight[40];
        std::snprintf(weight, sizeof(weight), "%.17g", graph.transitions(i, j));
        out << "  n" << i << " -> n" << j << " [weight=\"" << weight << "\"];\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace gamescape
