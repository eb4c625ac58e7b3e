#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <algorithm>
#include <limits>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "gamescape/common.hpp"
#include "gamescape/response_graph.hpp"

namespace gamescape {

/// Bibliometric symmetrization A Aᵀ + Aᵀ A: nodes with similar outgoing or
/// incoming relationships become adjacent.
inline Eigen::MatrixXd bibliometric_symmetrize(const Eigen::MatrixXd& adjacency) {
  if (adjacency.rows() != adjacency.cols()) {
    throw ValidationError("bibliometric_symmetrize: adjacency must be square");
  }
  return adjacency * adjacency.transpose() + adjacency.transpose() * adjacency;
}

struct SpectralEmbedding {
  Eigen::MatrixXd coordinates;  // n x d
  Eigen::VectorXd eigenvalues;  // all Laplacian eigenvalues, ascending
};

/// Unnormalized Laplacian embedding: L = D - A, coordinates are the
/// eigenvectors of the d smallest nonzero eigenvalues, each sign-fixed so its
/// largest-magnitude entry is positive.
inline SpectralEmbedding spectral_embed(const Eigen::MatrixXd& symmetric_adjacency, int dims) {
  const auto n = symmetric_adjacency.rows();
  if (dims < 1 || dims >= n) {
    throw ValidationError("spectral_embed: dims must satisfy 1 <= d <= n-1");
  }
  Eigen::MatrixXd laplacian = -symmetric_adjacency;
  for (Eigen::Index i = 0; i < n; ++i) {
    laplacian(i, i) = symmetric_adjacency.row(i).sum() - symmetric_adjacency(i, i);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("spectral_embed: eigendecomposition failed");
  }
  SpectralEmbedding embedding;
  embedding.eigenvalues = solver.eigenvalues();

  constexpr double kZeroTol = 1e-8;
  Eigen::Index first_nonzero = 0;
  while (first_nonzero < n && embedding.eigenvalues(first_nonzero) <= kZeroTol) ++first_nonzero;
  if (first_nonzero + dims > n) {
    // Degenerate graph (many components); fall back to the trailing spectrum.
    first_nonzero = n - dims;
  }
  embedding.coordinates.resize(n, dims);
  for (int d = 0; d < dims; ++d) {
    Eigen::VectorXd column = solver.eigenvectors().col(first_nonzero + d);
    Eigen::Index peak = 0;
    column.cwiseAbs().maxCoeff(&peak);
    if (column(peak) < 0) column = -column;
    embedding.coordinates.col(d) = column;
  }
  return embedding;
}

struct Clustering {
  std::vector<int> labels;
  int k = 0;
};

namespace detail {

struct MergeStep {
  int first = 0;
  int second = 0;
  double distance = 0.0;
};

/// Average-linkage agglomeration. Ties are broken by the lexicographically
/// smallest (min member index, max of the two cluster minima) pair.
class AverageLinkage {
 public:
  explicit AverageLinkage(const Eigen::MatrixXd& points) : n_(static_cast<int>(points.rows())) {
    dist_.resize(n_, std::vector<double>(static_cast<std::size_t>(n_), 0.0));
    for (int i = 0; i < n_; ++i) {
      for (int j = i + 1; j < n_; ++j) {
        const double d = (points.row(i) - points.row(j)).norm();
        dist_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = d;
        dist_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = d;
      }
    }
    members_.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) members_[static_cast<std::size_t>(i)] = {i};
    alive_.assign(static_cast<std::size_t>(n_), true);
    run();
  }

  /// Labels for a cut at k clusters, relabeled by ascending minimum member.
  Clustering cut(int k) const {
    if (k < 1 || k > n_) throw ValidationError("cluster: k must lie in [1, n]");
    std::vector<int> parent(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) parent[static_cast<std::size_t>(i)] = i;
    const auto find = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) {
        parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        x = parent[static_cast<std::size_t>(x)];
      }
      return x;
    };
    for (int step = 0; step < n_ - k; ++step) {
      const auto& merge = merges_[static_cast<std::size_t>(step)];
      const int a = find(merge.first);
      const int b = find(merge.second);
      parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
    std::vector<int> order;
    std::vector<int> roots(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      roots[static_cast<std::size_t>(i)] = find(i);
      if (roots[static_cast<std::size_t>(i)] == i) order.push_back(i);
    }
    std::sort(order.begin(), order.end());
    Clustering clustering;
    clustering.k = k;
    clustering.labels.resize(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      const auto it = std::lower_bound(order.begin(), order.end(), roots[static_cast<std::size_t>(i)]);
      clustering.labels[static_cast<std::size_t>(i)] = static_cast<int>(it - order.begin());
    }
    return clustering;
  }

  const std::vector<MergeStep>& merges() const { return merges_; }

 private:
  void run() {
    std::vector<int> size(static_cast<std::size_t>(n_), 1);
    std::vector<int> min_member(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) min_member[static_cast<std::size_t>(i)] = i;
    for (int step = 0; step + 1 < n_; ++step) {
      double best = std::numeric_limits<double>::infinity();
      int best_a = -1;
      int best_b = -1;
      auto best_key = std::make_pair(n_, n_);
      for (int a = 0; a < n_; ++a) {
        if (!alive_[static_cast<std::size_t>(a)]) continue;
        for (int b = a + 1; b < n_; ++b) {
          if (!alive_[static_cast<std::size_t>(b)]) continue;
          const double d = dist_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
          const auto key = std::minmax(min_member[static_cast<std::size_t>(a)],
                                       min_member[static_cast<std::size_t>(b)]);
          if (d < best || (d == best && key < best_key)) {
            best = d;
            best_a = a;
            best_b = b;
            best_key = key;
          }
        }
      }
      merges_.push_back({min_member[static_cast<std::size_t>(best_a)],
                         min_member[static_cast<std::size_t>(best_b)], best});
      // Lance-Williams update for average linkage; cluster best_a absorbs best_b.
      const double wa = size[static_cast<std::size_t>(best_a)];
      const double wb = size[static_cast<std::size_t>(best_b)];
      for (int c = 0; c < n_; ++c) {
        if (!alive_[static_cast<std::size_t>(c)] || c == best_a || c == best_b) continue;
        const double merged =
            (wa * dist_[static_cast<std::size_t>(best_a)][static_cast<std::size_t>(c)] +
             wb * dist_[static_cast<std::size_t>(best_b)][static_cast<std::size_t>(c)]) /
            (wa + wb);
        dist_[static_cast<std::size_t>(best_a)][static_cast<std::size_t>(c)] = merged;
        dist_[static_cast<std::size_t>(c)][static_cast<std::size_t>(best_a)] = merged;
      }
      size[static_cast<std::size_t>(best_a)] += size[static_cast<std::size_t>(best_b)];
      min_member[static_cast<std::size_t>(best_a)] =
          std::min(min_member[static_cast<std::size_t>(best_a)], min_member[static_cast<std::size_t>(best_b)]);
      alive_[static_cast<std::size_t>(best_b)] = false;
    }
  }

  int n_;
  std::vector<std::vector<double>> dist_;
  std::vector<std::vector<int>> members_;
  std::vector<bool> alive_;
  std::vector<MergeStep> merges_;
};

inline double within_cluster_distortion(const Eigen::MatrixXd& points, const Clustering& clustering) {
  const auto n = points.rows();
  const auto d = points.cols();
  Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(clustering.k, d);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(clustering.k);
  for (Eigen::Index i = 0; i < n; ++i) {
    centroids.row(clustering.labels[static_cast<std::size_t>(i)]) += points.row(i);
    counts(clustering.labels[static_cast<std::size_t>(i)]) += 1.0;
  }
  for (int c = 0; c < clustering.k; ++c) centroids.row(c) /= counts(c);
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    total += (points.row(i) - centroids.row(clustering.labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return total;
}

}  // namespace detail

inline Clustering agglomerative_cluster(const Eigen::MatrixXd& points, int k) {
  detail::AverageLinkage linkage(points);
  return linkage.cut(k);
}

/// Pham-Dimov-Nguyen f(K) selection over agglomerative cuts at K = 1..k_max:
/// f(1) = 1, f(K) = S_K / (alpha_K S_{K-1}), chosen K = argmin f among
/// f(K) < 0.85, else 1.
inline int select_cluster_count(const Eigen::MatrixXd& points, int k_max) {
  const auto n = static_cast<int>(points.rows());
  if (n < 2) return 1;
  k_max = std::min(k_max, n);
  const double dims = static_cast<double>(points.cols());

  detail::AverageLinkage linkage(points);
  std::vector<double> distortion(static_cast<std::size_t>(k_max) + 1, 0.0);
  for (int k = 1; k <= k_max; ++k) {
    distortion[static_cast<std::size_t>(k)] = detail::within_cluster_distortion(points, linkage.cut(k));
  }

  double weight = 1.0 - 3.0 / (4.0 * dims);  // alpha_2
  int best_k = 1;
  double best_f = std::numeric_limits<double>::infinity();
  for (int k = 2; k <= k_max; ++k) {
    if (k > 2) weight = weight + (1.0 - weight) / 6.0;
    const double prev = distortion[static_cast<std::size_t>(k) - 1];
    const double f = prev == 0.0 ? 1.0 : distortion[static_cast<std::size_t>(k)] / (weight * prev);
    if (f < 0.85 && f < best_f) {
      best_f = f;
      best_k = k;
    }
  }
  return best_k;
}

/// Clustered response graph with each cluster fused into one node; edge
/// weights are summed member-pair transition probabilities (both directions),
/// cluster mass is the summed stationary mass.
struct ContractedGraph {
  int k = 0;
  std::vector<std::vector<int>> members;
  Eigen::MatrixXd transitions;
  Eigen::MatrixXi improvement;
  Eigen::VectorXd pi;
};

inline ContractedGraph contract(const ResponseGraph& graph, const AlphaRankDistribution& dist,
                                const Clustering& clustering) {
  const int n = graph.size();
  if (static_cast<int>(clustering.labels.size()) != n) {
    throw ValidationError("contract: clustering does not partition the graph nodes");
  }
  ContractedGraph contracted;
  contracted.k = clustering.k;
  contracted.members.resize(static_cast<std::size_t>(clustering.k));
  contracted.transitions = Eigen::MatrixXd::Zero(clustering.k, clustering.k);
  contracted.improvement = Eigen::MatrixXi::Zero(clustering.k, clustering.k);
  contracted.pi = Eigen::VectorXd::Zero(clustering.k);
  for (int i = 0; i < n; ++i) {
    const int ci = clustering.labels[static_cast<std::size_t>(i)];
    contracted.members[static_cast<std::size_t>(ci)].push_back(i);
    contracted.pi(ci) += dist.pi(i);
    for (int j = 0; j < n; ++j) {
      const int cj = clustering.labels[static_cast<std::size_t>(j)];
      contracted.transitions(ci, cj) += graph.transitions(i, j);
      if (ci != cj && graph.improvement(i, j)) contracted.improvement(ci, cj) = 1;
    }
  }
  return contracted;
}

inline std::string to_dot(const ContractedGraph& contracted) {
  std::ostringstream out;
  out << "digraph contracted_response_graph {\n";
  for (int c = 0; c < contracted.k; ++c) {
    char mass[32];
    std::snprintf(mass, sizeof(mass), "%.6f", contracted.pi(c));
    out << "  c" << c << " [label=\"c" << c << "\\npi=" << mass
        << "\\nsize=" << contracted.members[static_cast<std::size_t>(c)].size() << "\"];\n";
  }
  for (int a = 0; a < contracted.k; ++a) {
    for (int b = 0; b < contracted.k; ++b) {
      if (a == b) continue;
      if (contracted.transitions(a, b) > 0) {
        char weight[40];
        std::snprintf(weight, sizeof(weight), "%.17g", contracted.transitions(a, b));
        out << "  c" << a << " -> c" << b << " [weight=\"" << weight << "\"";
        if (contracted.improvement(a, b)) out << ", style=bold";
        out << "];\n";
      }
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace gamescape
