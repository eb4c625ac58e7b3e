#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "gamescape/common.hpp"
#include "gamescape/game.hpp"
#include "gamescape/melo.hpp"

namespace gamescape {

inline SymmetricMatrixGame rps() {
  Eigen::MatrixXd m(3, 3);
  m << 0, -1, 1,
       1, 0, -1,
       -1, 1, 0;
  return SymmetricMatrixGame{"rps", std::move(m)};
}

/// Rock-Paper-Scissors with the first strategy (Rock) duplicated.
inline SymmetricMatrixGame redundant_rps() {
  Eigen::MatrixXd m(4, 4);
  m << 0, 0, -1, 1,
       0, 0, -1, 1,
       1, 1, 0, -1,
       -1, -1, 1, 0;
  return SymmetricMatrixGame{"redundant_rps", std::move(m)};
}

/// All compositions of `tokens` into `regions` nonnegative parts, in
/// lexicographic order. Count is C(tokens+regions-1, regions-1).
inline std::vector<std::vector<int>> blotto_allocations(int tokens, int regions) {
  std::vector<std::vector<int>> all;
  std::vector<int> current(static_cast<std::size_t>(regions), 0);
  const auto recurse = [&](auto&& self, int region, int remaining) -> void {
    if (region + 1 == regions) {
      current[static_cast<std::size_t>(region)] = remaining;
      all.push_back(current);
      return;
    }
    for (int amount = 0; amount <= remaining; ++amount) {
      current[static_cast<std::size_t>(region)] = amount;
      self(self, region + 1, remaining - amount);
    }
  };
  recurse(recurse, 0, tokens);
  return all;
}

/// Colonel Blotto: per region, +1 / 0 / -1 for winning / drawing / losing.
inline SymmetricMatrixGame blotto(int tokens, int regions, int strategy_cap = 10000) {
  if (tokens < 1 || regions < 1) throw ValidationError("blotto: tokens and regions must be >= 1");
  const auto allocations = blotto_allocations(tokens, regions);
  const auto n = static_cast<int>(allocations.size());
  if (n > strategy_cap) {
    throw ValidationError("blotto: " + std::to_string(n) + " strategies exceed cap " +
                          std::to_string(strategy_cap));
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      int score = 0;
      for (int region = 0; region < regions; ++region) {
        const int a = allocations[static_cast<std::size_t>(i)][static_cast<std::size_t>(region)];
        const int b = allocations[static_cast<std::size_t>(j)][static_cast<std::size_t>(region)];
        score += (a > b) - (a < b);
      }
      m(i, j) = score;
      m(j, i) = -score;
    }
  }
  return SymmetricMatrixGame{"blotto_" + std::to_string(tokens) + "_" + std::to_string(regions),
                             std::move(m)};
}

/// Elo game: seeded N(0,1) ratings, win-probability payoffs rescaled to
/// 2 sigma(r_i - r_j) - 1, optional i.i.d. N(0, noise^2) per entry, then
/// skew-symmetrized as M - Mᵀ.
inline SymmetricMatrixGame elo_game(int n, double noise_sigma, std::uint64_t seed) {
  if (n < 2) throw ValidationError("elo_game: n must be >= 2");
  if (noise_sigma < 0) throw ValidationError("elo_game: noise_sigma must be >= 0");
  Rng rng(seed);
  Eigen::VectorXd ratings(n);
  for (int i = 0; i < n; ++i) ratings(i) = rng.normal();
  Eigen::MatrixXd noisy(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      noisy(i, j) = 2.0 * logistic(ratings(i) - ratings(j)) - 1.0;
    }
  }
  if (noise_sigma > 0) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) noisy(i, j) += rng.normal(0.0, noise_sigma);
    }
  }
  Eigen::MatrixXd m = noisy - noisy.transpose();
  std::string name = "elo_n" + std::to_string(n);
  if (noise_sigma > 0) {
    std::ostringstream oss;
    oss << "_noise" << noise_sigma;
    name += oss.str();
  }
  return SymmetricMatrixGame{name, std::move(m)};
}

inline double disc_payoff(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a(0) * -b(1) + a(1) * b(0);  // aᵀ [[0,-1],[1,0]] b
}

/// Disc game: points sampled uniformly in the unit disc (rejection from the
/// bounding square); payoff is the rotational form S_iᵀ [[0,-1],[1,0]] S_j.
inline SymmetricMatrixGame disc_game(int n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("disc_game: n must be >= 2");
  Rng rng(seed);
  std::vector<Eigen::Vector2d> points;
  points.reserve(static_cast<std::size_t>(n));
  while (static_cast<int>(points.size()) < n) {
    const double x = rng.uniform(-1.0, 1.0);
    const double y = rng.uniform(-1.0, 1.0);
    if (x * x + y * y <= 1.0) points.emplace_back(x, y);
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double value = disc_payoff(points[static_cast<std::size_t>(i)],
                                       points[static_cast<std::size_t>(j)]);
      m(i, j) = value;
      m(j, i) = -value;
    }
  }
  return SymmetricMatrixGame{"disc_n" + std::to_string(n), std::move(m)};
}

/// M(i,j) = 0.5 (W_ij - W_ji) + S_i - S_j with all parameters N(0,1).
inline SymmetricMatrixGame random_game_of_skill(int n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("random_game_of_skill: n must be >= 2");
  Rng rng(seed);
  Eigen::MatrixXd w(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w(i, j) = rng.normal();
  }
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s(i) = rng.normal();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double value = 0.5 * (w(i, j) - w(j, i)) + s(i) - s(j);
      m(i, j) = value;
      m(j, i) = -value;
    }
  }
  return SymmetricMatrixGame{"skill_n" + std::to_string(n), std::move(m)};
}

/// M(i,j) = W_ij - W_ji + S_i - S_j with W uniform on (0,1), S normal.
inline SymmetricMatrixGame normal_bernoulli(int n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("normal_bernoulli: n must be >= 2");
  Rng rng(seed);
  Eigen::MatrixXd w(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w(i, j) = rng.uniform01();
  }
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s(i) = rng.normal();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double value = w(i, j) - w(j, i) + s(i) - s(j);
      m(i, j) = value;
      m(j, i) = -value;
    }
  }
  return SymmetricMatrixGame{"normal_bernoulli_n" + std::to_string(n), std::move(m)};
}

/// Fully ordered +-1 game: +1 above the diagonal, -1 below. Strategy 0
/// dominates (every improvement edge points toward lower indices, and the
/// mean-payoff argmax is 0).
inline SymmetricMatrixGame transitive_game(int n) {
  if (n < 2) throw ValidationError("transitive_game: n must be >= 2");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i < j) m(i, j) = 1.0;
      if (i > j) m(i, j) = -1.0;
    }
  }
  return SymmetricMatrixGame{"transitive_n" + std::to_string(n), std::move(m)};
}

/// Rank-1 mElo ladder (strategies 0..n-2 fully ordered) plus one strategy
/// that beats the top half and loses to the bottom half, closing a cycle.
/// Rescaled so the largest magnitude entry is 1.
inline SymmetricMatrixGame motivating_cyclical(int n) {
  if (n < 3) throw ValidationError("motivating_cyclical: n must be >= 3");
  MEloGenome genome = MEloGenome::zeros(n, 1);
  for (int i = 0; i + 1 < n; ++i) {
    genome.c(i, 0) = i;
    genome.c(i, 1) = n - 2 - i;
  }
  genome.c(n - 1, 0) = -1.0;
  genome.c(n - 1, 1) = -1.0;
  auto game = melo_payoffs(genome, "cyclical_n" + std::to_string(n));
  const double peak = game.matrix.cwiseAbs().maxCoeff();
  if (peak > 0) game.matrix /= peak;
  return game;
}

/// Rank-3 mElo with all parameters i.i.d. N(0,1).
inline SymmetricMatrixGame motivating_random(int n, std::uint64_t seed) {
  if (n < 3) throw ValidationError("motivating_random: n must be >= 3");
  Rng rng(seed);
  MEloGenome genome = MEloGenome::zeros(n, 3);
  for (int i = 0; i < n; ++i) {
    genome.r(i) = rng.normal();
    for (int d = 0; d < 6; ++d) genome.c(i, d) = rng.normal();
  }
  return melo_payoffs(genome, "random_n" + std::to_string(n));
}

/// 11-20 money request game: each player asks for 11..20 units and receives
/// the request, plus a bonus of 20 for asking exactly one unit less than the
/// opponent. General-sum, symmetric.
inline PayoffTensor game_11_20() {
  const int n = 10;
  std::vector<std::vector<double>> payoffs(2, std::vector<double>(n * n, 0.0));
  for (int i = 0; i < n; ++i) {
    const int own = 11 + i;
    for (int j = 0; j < n; ++j) {
      const int other = 11 + j;
      payoffs[0][static_cast<std::size_t>(i) * n + j] = own + (own == other - 1 ? 20 : 0);
      payoffs[1][static_cast<std::size_t>(i) * n + j] = other + (other == own - 1 ? 20 : 0);
    }
  }
  return PayoffTensor("11_20", {n, n}, std::move(payoffs), true);
}

/// The 12 ordinal 2x2 payoff patterns (row player), each a permutation of
/// {1,2,3,4}.
struct BrunsPattern {
  const char* code;
  std::array<std::array<int, 2>, 2> row_payoffs;
};

inline const std::array<BrunsPattern, 12>& bruns_patterns() {
  static const std::array<BrunsPattern, 12> table = {{
      {"Ch", {{{2, 3}, {1, 4}}}},  // Chicken
      {"Ba", {{{3, 2}, {1, 4}}}},  // Battle
      {"Hr", {{{3, 1}, {2, 4}}}},  // Hero
      {"Cm", {{{2, 1}, {3, 4}}}},  // Compromise
      {"Dl", {{{1, 2}, {3, 4}}}},  // Deadlock
      {"Pd", {{{1, 3}, {2, 4}}}},  // Prisoner's dilemma
      {"Sh", {{{1, 4}, {2, 3}}}},  // Stag hunt
      {"As", {{{1, 4}, {3, 2}}}},  // Assurance
      {"Co", {{{2, 4}, {3, 1}}}},  // Coordination
      {"Pc", {{{3, 4}, {2, 1}}}},  // Peace
      {"Ha", {{{3, 4}, {1, 2}}}},  // Harmony
      {"Nc", {{{2, 4}, {1, 3}}}},  // Concord
  }};
  return table;
}

/// Column payoffs use the anti-diagonal transpose (i,j) -> (1-j, 1-i).
inline PayoffTensor bruns_game(const BrunsPattern& row, const BrunsPattern& col) {
  std::vector<std::vector<double>> payoffs(2, std::vector<double>(4, 0.0));
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      payoffs[0][static_cast<std::size_t>(i) * 2 + j] = row.row_payoffs[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      payoffs[1][static_cast<std::size_t>(i) * 2 + j] =
          col.row_payoffs[static_cast<std::size_t>(1 - j)][static_cast<std::size_t>(1 - i)];
    }
  }
  return PayoffTensor(std::string(row.code) + "_x_" + col.code, {2, 2}, std::move(payoffs), false);
}

/// All 144 ordered pattern pairs, row-major over the table order.
inline std::vector<PayoffTensor> bruns_2x2_suite() {
  std::vector<PayoffTensor> suite;
  suite.reserve(144);
  for (const auto& row : bruns_patterns()) {
    for (const auto& col : bruns_patterns()) {
      suite.push_back(bruns_game(row, col));
    }
  }
  return suite;
}

inline SymmetricMatrixGame melo_game(const MEloGenome& genome) { return melo_payoffs(genome); }

}  // namespace gamescape
