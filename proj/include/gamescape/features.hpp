#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "gamescape/common.hpp"
#include "gamescape/game.hpp"
#include "gamescape/response_graph.hpp"

namespace gamescape {

/// Fixed 12-component descriptor of a response graph: normalized stationary
/// entropy, normalized 3-cycle count, then mean/median/std/skew/kurtosis of
/// the in- and out-degrees of the strict-improvement digraph.
struct GraphFeatures {
  double entropy = 0.0;
  double cycles3 = 0.0;
  double in_mean = 0.0, in_median = 0.0, in_std = 0.0, in_skew = 0.0, in_kurt = 0.0;
  double out_mean = 0.0, out_median = 0.0, out_std = 0.0, out_skew = 0.0, out_kurt = 0.0;

  static constexpr int kSize = 12;

  static const std::array<const char*, kSize>& names() {
    static const std::array<const char*, kSize> labels = {
        "entropy", "cycles3", "in_mean", "in_median", "in_std", "in_skew", "in_kurt",
        "out_mean", "out_median", "out_std", "out_skew", "out_kurt"};
    return labels;
  }

  Eigen::VectorXd as_vector() const {
    Eigen::VectorXd v(kSize);
    v << entropy, cycles3, in_mean, in_median, in_std, in_skew, in_kurt, out_mean, out_median,
        out_std, out_skew, out_kurt;
    return v;
  }
};

/// Shannon entropy of pi over the entropy of the uniform distribution of the
/// same size, with 0 log 0 = 0.
inline double alpharank_entropy_norm(const Eigen::VectorXd& pi) {
  const auto n = pi.size();
  if (n < 2) throw ValidationError("alpharank_entropy_norm: need >= 2 states");
  double h = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pi(i) > 0) h -= pi(i) * std::log(pi(i));
  }
  return h / std::log(static_cast<double>(n));
}

/// Directed 3-cycles, counted as trace(A^3) / 3 in exact integer arithmetic.
inline long long count_3cycles(const Eigen::MatrixXi& adjacency) {
  const auto n = adjacency.rows();
  long long trace = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!adjacency(i, j)) continue;
      for (Eigen::Index k = 0; k < n; ++k) {
        if (adjacency(j, k) && adjacency(k, i)) ++trace;
      }
    }
  }
  return trace / 3;
}

/// 3-cycle count over the count for the complete digraph, n(n-1)(n-2)/3.
/// Fewer than 3 nodes have no possible cycle and return 0.
inline double cycles3_norm(const Eigen::MatrixXi& adjacency) {
  const auto n = adjacency.rows();
  if (n < 3) return 0.0;
  const long long normalizer = static_cast<long long>(n) * (n - 1) * (n - 2) / 3;
  return static_cast<double>(count_3cycles(adjacency)) / static_cast<double>(normalizer);
}

namespace detail {

struct MomentStats {
  double mean, median, std, skew, kurt;
};

/// Population moments; skew and kurtosis (non-excess) are 0 when the values
/// are all equal.
inline MomentStats moments(std::vector<double> values, double mean) {
  MomentStats stats{};
  const auto n = values.size();
  stats.mean = mean;
  std::sort(values.begin(), values.end());
  stats.median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  stats.std = std::sqrt(m2);
  if (m2 > 0) {
    stats.skew = m3 / (stats.std * stats.std * stats.std);
    stats.kurt = m4 / (m2 * m2);
  } else {
    stats.skew = 0.0;
    stats.kurt = 0.0;
  }
  return stats;
}

}  // namespace detail

/// Normalized degree statistics of the improvement digraph: ten reals, in
/// then out, each direction as mean/median/std/skew/kurtosis. The means are
/// computed from the shared integer edge total so they agree exactly.
inline std::array<double, 10> degree_stats_norm(const Eigen::MatrixXi& adjacency, int max_degree,
                                                bool normalize = true) {
  const auto n = adjacency.rows();
  if (max_degree <= 0) throw ValidationError("degree_stats_norm: max_degree must be positive");
  std::vector<double> in_deg(static_cast<std::size_t>(n), 0.0);
  std::vector<double> out_deg(static_cast<std::size_t>(n), 0.0);
  long long edges = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (adjacency(i, j)) {
        out_deg[static_cast<std::size_t>(i)] += 1.0;
        in_deg[static_cast<std::size_t>(j)] += 1.0;
        ++edges;
      }
    }
  }
  const double scale = normalize ? static_cast<double>(max_degree) : 1.0;
  for (auto& d : in_deg) d /= scale;
  for (auto& d : out_deg) d /= scale;
  const double mean = static_cast<double>(edges) / (static_cast<double>(n) * scale);
  const auto in_stats = detail::moments(in_deg, mean);
  const auto out_stats = detail::moments(out_deg, mean);
  return {in_stats.mean, in_stats.median, in_stats.std,  in_stats.skew,  in_stats.kurt,
          out_stats.mean, out_stats.median, out_stats.std, out_stats.skew, out_stats.kurt};
}

struct FeatureOptions {
  AlphaRankParams params = AlphaRankParams::infinite_multi();
  bool normalize = true;

  static FeatureOptions single_population() {
    FeatureOptions options;
    options.params = AlphaRankParams::infinite_single();
    return options;
  }
};

inline GraphFeatures feature_vector(const ResponseGraph& graph, const AlphaRankDistribution& dist,
                                    bool normalize = true) {
  GraphFeatures features;
  if (normalize) {
    features.entropy = alpharank_entropy_norm(dist.pi);
    features.cycles3 = cycles3_norm(graph.improvement);
  } else {
    double h = 0.0;
    for (Eigen::Index i = 0; i < dist.pi.size(); ++i) {
      if (dist.pi(i) > 0) h -= dist.pi(i) * std::log(dist.pi(i));
    }
    features.entropy = h;
    features.cycles3 = static_cast<double>(count_3cycles(graph.improvement));
  }
  const auto stats = degree_stats_norm(graph.improvement, graph.max_degree(), normalize);
  features.in_mean = stats[0];
  features.in_median = stats[1];
  features.in_std = stats[2];
  features.in_skew = stats[3];
  features.in_kurt = stats[4];
  features.out_mean = stats[5];
  features.out_median = stats[6];
  features.out_std = stats[7];
  features.out_skew = stats[8];
  features.out_kurt = stats[9];
  return features;
}

inline GraphFeatures feature_vector(const PayoffTensor& game, const FeatureOptions& options = {}) {
  const auto graph = build_response_graph(game, options.params);
  const auto dist = stationary_distribution(graph);
  return feature_vector(graph, dist, options.normalize);
}

inline GraphFeatures feature_vector(const SymmetricMatrixGame& game,
                                    FeatureOptions options = FeatureOptions::single_population()) {
  options.params.population = PopulationModel::kSingle;
  const auto graph = build_response_graph(game, options.params);
  const auto dist = stationary_distribution(graph);
  return feature_vector(graph, dist, options.normalize);
}

/// Simple directed cycles by length (index = length, up to max_length),
/// depth-bounded DFS rooted at each node's minimal member. Intended for
/// graphs of at most a few dozen nodes.
inline std::vector<long long> cycle_histogram(const Eigen::MatrixXi& adjacency, int max_length = 6) {
  const auto n = adjacency.rows();
  if (n > 60) throw ValidationError("cycle_histogram: only supported for n <= 60");
  std::vector<long long> histogram(static_cast<std::size_t>(max_length) + 1, 0);
  std::vector<char> on_path(static_cast<std::size_t>(n), 0);
  // Only cycles whose minimal node is the root are counted, so each simple
  // cycle is found exactly once.
  const auto dfs = [&](auto&& self, int root, int node, int depth) -> void {
    on_path[static_cast<std::size_t>(node)] = 1;
    for (int next = root; next < static_cast<int>(n); ++next) {
      if (!adjacency(node, next)) continue;
      if (next == root) {
        if (depth >= 2) ++histogram[static_cast<std::size_t>(depth)];
      } else if (!on_path[static_cast<std::size_t>(next)] && depth < max_length) {
        self(self, root, next, depth + 1);
      }
    }
    on_path[static_cast<std::size_t>(node)] = 0;
  };
  for (int root = 0; root < n; ++root) dfs(dfs, root, root, 1);
  return histogram;
}

struct SpearmanResult {
  double rho = 0.0;
  double p_value = 1.0;
};

namespace detail {

inline std::vector<double> average_ranks(const std::vector<double>& values) {
  const auto n = values.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

/// Regularized incomplete beta function I_x(a, b) via the continued fraction
/// (Lentz's method).
inline double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_beta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log(1.0 - x);
  const auto fraction = [&](double aa, double bb, double xx) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 1e-15;
    constexpr double kTiny = 1e-300;
    double c = 1.0;
    double d = 1.0 - (aa + bb) * xx / (aa + 1.0);
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double result = d;
    for (int m = 1; m <= kMaxIter; ++m) {
      const double m2 = 2.0 * m;
      double numerator = m * (bb - m) * xx / ((aa + m2 - 1.0) * (aa + m2));
      d = 1.0 + numerator * d;
      if (std::fabs(d) < kTiny) d = kTiny;
      c = 1.0 + numerator / c;
      if (std::fabs(c) < kTiny) c = kTiny;
      d = 1.0 / d;
      result *= d * c;
      numerator = -(aa + m) * (aa + bb + m) * xx / ((aa + m2) * (aa + m2 + 1.0));
      d = 1.0 + numerator * d;
      if (std::fabs(d) < kTiny) d = kTiny;
      c = 1.0 + numerator / c;
      if (std::fabs(c) < kTiny) c = kTiny;
      d = 1.0 / d;
      const double delta = d * c;
      result *= delta;
      if (std::fabs(delta - 1.0) < kEps) break;
    }
    return result;
  };
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return std::exp(log_beta) * fraction(a, b, x) / a;
  }
  return 1.0 - std::exp(std::lgamma(a + b) - std::lgamma(b) - std::lgamma(a) +
                        b * std::log(1.0 - x) + a * std::log(x)) *
                   fraction(b, a, 1.0 - x) / b;
}

}  // namespace detail

/// Spearman rank correlation with average ranks for ties; two-sided p-value
/// from the t approximation with n-2 degrees of freedom.
inline SpearmanResult spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("spearman: length mismatch");
  const auto n = x.size();
  if (n < 3) throw ValidationError("spearman: need at least 3 observations");
  const auto rx = detail::average_ranks(x);
  const auto ry = detail::average_ranks(y);
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw ValidationError("spearman: zero rank variance");
  }
  SpearmanResult result;
  result.rho = sxy / std::sqrt(sxx * syy);
  const double df = static_cast<double>(n) - 2.0;
  const double rho2 = std::min(result.rho * result.rho, 1.0);
  if (rho2 >= 1.0) {
    result.p_value = 0.0;
  } else {
    const double t2 = rho2 * df / (1.0 - rho2);
    result.p_value = detail::incomplete_beta(df / 2.0, 0.5, df / (df + t2));
  }
  return result;
}

}  // namespace gamescape
