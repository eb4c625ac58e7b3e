#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "gamescape/common.hpp"

namespace gamescape {

/// Two-player symmetric game stored as the row player's n x n payoff matrix.
/// Zero-sum symmetric games are antisymmetric in this representation.
struct SymmetricMatrixGame {
  std::string name;
  Eigen::MatrixXd matrix;

  int size() const { return static_cast<int>(matrix.rows()); }
};

/// K-player normal-form game; one dense payoff array per player, indexed by
/// pure strategy profile with the last player's strategy varying fastest.
class PayoffTensor {
 public:
  PayoffTensor() = default;

  PayoffTensor(std::string name, std::vector<int> strategy_counts,
               std::vector<std::vector<double>> payoffs, bool symmetric = false)
      : name_(std::move(name)),
        strategy_counts_(std::move(strategy_counts)),
        payoffs_(std::move(payoffs)),
        symmetric_(symmetric) {
    init_strides();
  }

  static PayoffTensor from_symmetric(const SymmetricMatrixGame& game) {
    const int n = game.size();
    std::vector<std::vector<double>> payoffs(2);
    payoffs[0].resize(static_cast<std::size_t>(n) * n);
    payoffs[1].resize(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        payoffs[0][static_cast<std::size_t>(i) * n + j] = game.matrix(i, j);
        payoffs[1][static_cast<std::size_t>(i) * n + j] = game.matrix(j, i);
      }
    }
    return PayoffTensor(game.name, {n, n}, std::move(payoffs), true);
  }

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  int num_players() const { return static_cast<int>(strategy_counts_.size()); }
  const std::vector<int>& strategy_counts() const { return strategy_counts_; }
  bool symmetric() const { return symmetric_; }
  void set_symmetric(bool value) { symmetric_ = value; }
  const std::vector<std::vector<double>>& raw_payoffs() const { return payoffs_; }
  std::vector<std::vector<double>>& raw_payoffs() { return payoffs_; }

  int num_profiles() const {
    int total = 1;
    for (int c : strategy_counts_) total *= c;
    return total;
  }

  int profile_index(const std::vector<int>& profile) const {
    int index = 0;
    for (std::size_t k = 0; k < profile.size(); ++k) {
      index += profile[k] * strides_[k];
    }
    return index;
  }

  std::vector<int> profile_of(int index) const {
    std::vector<int> profile(strategy_counts_.size());
    for (std::size_t k = 0; k < strategy_counts_.size(); ++k) {
      profile[k] = (index / strides_[k]) % strategy_counts_[k];
    }
    return profile;
  }

  double payoff(int player, const std::vector<int>& profile) const {
    return payoffs_[static_cast<std::size_t>(player)][static_cast<std::size_t>(profile_index(profile))];
  }

  double payoff_at(int player, int profile_index) const {
    return payoffs_[static_cast<std::size_t>(player)][static_cast<std::size_t>(profile_index)];
  }

  /// Row-player matrix of a symmetric two-player game.
  SymmetricMatrixGame as_symmetric() const {
    if (!symmetric_ || num_players() != 2) {
      throw ValidationError("as_symmetric: game is not flagged two-player symmetric");
    }
    const int n = strategy_counts_[0];
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m(i, j) = payoffs_[0][static_cast<std::size_t>(i) * n + j];
    }
    return SymmetricMatrixGame{name_, std::move(m)};
  }

 private:
  void init_strides() {
    strides_.assign(strategy_counts_.size(), 1);
    for (int k = static_cast<int>(strategy_counts_.size()) - 2; k >= 0; --k) {
      strides_[static_cast<std::size_t>(k)] =
          strides_[static_cast<std::size_t>(k) + 1] * strategy_counts_[static_cast<std::size_t>(k) + 1];
    }
  }

  std::string name_;
  std::vector<int> strategy_counts_;
  std::vector<std::vector<double>> payoffs_;
  bool symmetric_ = false;
  std::vector<int> strides_;
};

/// Reports every violated invariant; empty means the tensor is well formed.
inline std::vector<std::string> validate(const PayoffTensor& game) {
  std::vector<std::string> violations;
  const int num_players = game.num_players();
  if (num_players < 1) {
    violations.push_back("players: game must have at least one player");
    return violations;
  }
  for (int k = 0; k < num_players; ++k) {
    if (game.strategy_counts()[static_cast<std::size_t>(k)] < 1) {
      violations.push_back("strategy_counts: player " + std::to_string(k) + " has no strategies");
    }
  }
  if (!violations.empty()) return violations;

  const auto expected = static_cast<std::size_t>(game.num_profiles());
  for (int k = 0; k < num_players; ++k) {
    const auto& table = game.raw_payoffs()[static_cast<std::size_t>(k)];
    if (table.size() != expected) {
      violations.push_back("shape: player " + std::to_string(k) + " payoff array has " +
                           std::to_string(table.size()) + " entries, expected " +
                           std::to_string(expected));
      continue;
    }
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
      if (!std::isfinite(table[idx])) {
        std::ostringstream oss;
        oss << "finiteness: player " << k << " payoff at profile (";
        const auto profile = game.profile_of(static_cast<int>(idx));
        for (std::size_t p = 0; p < profile.size(); ++p) {
          oss << (p ? "," : "") << profile[p];
        }
        oss << ") is not finite";
        violations.push_back(oss.str());
      }
    }
  }
  if (game.symmetric()) {
    if (num_players != 2) {
      violations.push_back("symmetry: symmetric flag requires exactly two players");
    } else if (game.strategy_counts()[0] != game.strategy_counts()[1]) {
      violations.push_back("symmetry: symmetric flag requires equal strategy counts");
    } else {
      const int n = game.strategy_counts()[0];
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          const double m2 = game.payoff_at(1, i * n + j);
          const double m1t = game.payoff_at(0, j * n + i);
          if (m2 != m1t) {
            violations.push_back("symmetry: M2(" + std::to_string(i) + "," + std::to_string(j) +
                                 ") != M1(" + std::to_string(j) + "," + std::to_string(i) + ")");
          }
        }
      }
    }
  }
  return violations;
}

/// Antisymmetric standardization A = (M - Mᵀ) / max(2, max|M - Mᵀ|), so the
/// output lies in [-1, 1], games already in that form pass through exactly,
/// and the operation is idempotent.
inline SymmetricMatrixGame standardize_zero_sum(const Eigen::MatrixXd& matrix,
                                                const std::string& name = "") {
  if (matrix.rows() != matrix.cols()) {
    throw ValidationError("standardize_zero_sum: matrix must be square");
  }
  if (!matrix.allFinite()) {
    throw ValidationError("standardize_zero_sum: matrix must be finite");
  }
  Eigen::MatrixXd skew = matrix - matrix.transpose();
  const double scale = std::max(2.0, skew.cwiseAbs().maxCoeff());
  if (scale != 2.0) {
    skew /= scale;
  } else {
    skew *= 0.5;
  }
  return SymmetricMatrixGame{name, std::move(skew)};
}

/// Appends mixed strategies over seeded subsets of the base strategies.
/// Each mixture's support has ceil(support_fraction * n) base strategies and
/// Dirichlet(1,...,1) weights. Mixture payoffs are the bilinear extension.
inline SymmetricMatrixGame expand_with_mixtures(const SymmetricMatrixGame& game, int num_mixtures,
                                                double support_fraction, std::uint64_t seed) {
  if (num_mixtures < 0) throw ValidationError("expand_with_mixtures: num_mixtures < 0");
  if (!(support_fraction > 0.0 && support_fraction <= 1.0)) {
    throw ValidationError("expand_with_mixtures: support_fraction must lie in (0, 1]");
  }
  const int n = game.size();
  if (n < 2) throw ValidationError("expand_with_mixtures: base game needs >= 2 strategies");
  if (num_mixtures == 0) return game;

  Rng rng(seed);
  const int support = static_cast<int>(std::ceil(support_fraction * n));
  Eigen::MatrixXd mixtures = Eigen::MatrixXd::Zero(num_mixtures, n);
  for (int m = 0; m < num_mixtures; ++m) {
    const auto indices = rng.sample_without_replacement(n, support);
    const auto weights = rng.dirichlet_uniform(support);
    for (int s = 0; s < support; ++s) {
      mixtures(m, indices[static_cast<std::size_t>(s)]) = weights[static_cast<std::size_t>(s)];
    }
  }

  const int total = n + num_mixtures;
  Eigen::MatrixXd expanded = Eigen::MatrixXd::Zero(total, total);
  expanded.topLeftCorner(n, n) = game.matrix;
  const Eigen::MatrixXd vs_pure = mixtures * game.matrix;  // mixture rows vs pure columns
  for (int m = 0; m < num_mixtures; ++m) {
    for (int j = 0; j < n; ++j) {
      expanded(n + m, j) = vs_pure(m, j);
      expanded(j, n + m) = -vs_pure(m, j);
    }
    for (int other = 0; other < m; ++other) {
      const double payoff = mixtures.row(m) * game.matrix * mixtures.row(other).transpose();
      expanded(n + m, n + other) = payoff;
      expanded(n + other, n + m) = -payoff;
    }
    expanded(n + m, n + m) = 0.0;
  }
  return SymmetricMatrixGame{game.name + "_mix" + std::to_string(num_mixtures), std::move(expanded)};
}

/// Principal submatrix over a seeded uniform strategy subset of size
/// ceil(keep_fraction * n).
inline SymmetricMatrixGame subsample(const SymmetricMatrixGame& game, double keep_fraction,
                                     std::uint64_t seed) {
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
    throw ValidationError("subsample: keep_fraction must lie in (0, 1]");
  }
  const int n = game.size();
  const int keep = static_cast<int>(std::ceil(keep_fraction * n));
  if (keep < 2) throw ValidationError("subsample: resulting game would have fewer than 2 strategies");
  if (keep == n) return game;

  Rng rng(seed);
  const auto indices = rng.sample_without_replacement(n, keep);
  Eigen::MatrixXd sub(keep, keep);
  for (int i = 0; i < keep; ++i) {
    for (int j = 0; j < keep; ++j) {
      sub(i, j) = game.matrix(indices[static_cast<std::size_t>(i)], indices[static_cast<std::size_t>(j)]);
    }
  }
  return SymmetricMatrixGame{game.name + "_sub" + std::to_string(keep), std::move(sub)};
}

inline SymmetricMatrixGame permute_strategies(const SymmetricMatrixGame& game,
                                              const std::vector<int>& perm) {
  const int n = game.size();
  if (static_cast<int>(perm.size()) != n) {
    throw ValidationError("permute_strategies: permutation size mismatch");
  }
  Eigen::MatrixXd permuted(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      permuted(i, j) = game.matrix(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
  }
  return SymmetricMatrixGame{game.name, std::move(permuted)};
}

inline SymmetricMatrixGame permute_strategies(const SymmetricMatrixGame& game, std::uint64_t seed) {
  Rng rng(seed);
  return permute_strategies(game, rng.permutation(game.size()));
}

}  // namespace gamescape
