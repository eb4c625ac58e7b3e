#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "gamescape/common.hpp"
#include "gamescape/features.hpp"
#include "gamescape/game.hpp"

namespace gamescape {

namespace detail {

/// Dense two-phase simplex for max cᵀx subject to Ax <= b, x >= 0.
/// Pivot choices break ties on (value, variable id), so the solve is fully
/// deterministic. Returns -inf when infeasible, +inf when unbounded.
class Simplex {
 public:
  Simplex(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c)
      : m_(static_cast<int>(a.rows())), n_(static_cast<int>(a.cols())),
        nonbasic_(static_cast<std::size_t>(n_) + 1), basic_(static_cast<std::size_t>(m_)),
        tableau_(static_cast<std::size_t>(m_) + 2,
                 std::vector<double>(static_cast<std::size_t>(n_) + 2, 0.0)) {
    for (int i = 0; i < m_; ++i) {
      for (int j = 0; j < n_; ++j) tableau_[i][j] = a(i, j);
      basic_[i] = n_ + i;
      tableau_[i][n_] = -1.0;
      tableau_[i][n_ + 1] = b(i);
    }
    for (int j = 0; j < n_; ++j) {
      nonbasic_[j] = j;
      tableau_[m_][j] = -c(j);
    }
    nonbasic_[n_] = -1;
    tableau_[m_ + 1][n_] = 1.0;
  }

  double solve(Eigen::VectorXd& solution) {
    int r = 0;
    for (int i = 1; i < m_; ++i) {
      if (tableau_[i][n_ + 1] < tableau_[r][n_ + 1]) r = i;
    }
    if (tableau_[r][n_ + 1] < -kEps) {
      pivot(r, n_);
      if (!optimize(2) || tableau_[m_ + 1][n_ + 1] < -kEps) {
        return -std::numeric_limits<double>::infinity();
      }
      for (int i = 0; i < m_; ++i) {
        if (basic_[i] == -1) {
          int s = 0;
          for (int j = 1; j <= n_; ++j) {
            if (better(tableau_[i][j], nonbasic_[j], tableau_[i][s], nonbasic_[s])) s = j;
          }
          pivot(i, s);
        }
      }
    }
    const bool bounded = optimize(1);
    solution = Eigen::VectorXd::Zero(n_);
    for (int i = 0; i < m_; ++i) {
      if (basic_[i] < n_) solution(basic_[i]) = tableau_[i][n_ + 1];
    }
    return bounded ? tableau_[m_][n_ + 1] : std::numeric_limits<double>::infinity();
  }

 private:
  static constexpr double kEps = 1e-9;

  static bool better(double value, int id, double best_value, int best_id) {
    return value < best_value || (value == best_value && id < best_id);
  }

  void pivot(int r, int s) {
    auto& row = tableau_[static_cast<std::size_t>(r)];
    const double inv = 1.0 / row[static_cast<std::size_t>(s)];
    for (int i = 0; i < m_ + 2; ++i) {
      if (i == r || std::fabs(tableau_[i][s]) <= kEps) continue;
      auto& other = tableau_[static_cast<std::size_t>(i)];
      const double factor = other[static_cast<std::size_t>(s)] * inv;
      for (int j = 0; j < n_ + 2; ++j) other[j] -= row[j] * factor;
      other[static_cast<std::size_t>(s)] = row[static_cast<std::size_t>(s)] * factor;
    }
    for (int j = 0; j < n_ + 2; ++j) {
      if (j != s) row[static_cast<std::size_t>(j)] *= inv;
    }
    for (int i = 0; i < m_ + 2; ++i) {
      if (i != r) tableau_[i][s] *= -inv;
    }
    row[static_cast<std::size_t>(s)] = inv;
    std::swap(basic_[static_cast<std::size_t>(r)], nonbasic_[static_cast<std::size_t>(s)]);
  }

  bool optimize(int phase) {
    const int objective = m_ + phase - 1;
    for (;;) {
      int s = -1;
      for (int j = 0; j <= n_; ++j) {
        if (nonbasic_[j] == -phase) continue;
        if (s == -1 || better(tableau_[objective][j], nonbasic_[j], tableau_[objective][s],
                              nonbasic_[s])) {
          s = j;
        }
      }
      if (tableau_[objective][s] >= -kEps) return true;
      int r = -1;
      for (int i = 0; i < m_; ++i) {
        if (tableau_[i][s] <= kEps) continue;
        const double ratio = tableau_[i][n_ + 1] / tableau_[i][s];
        if (r == -1 || better(ratio, basic_[i], tableau_[r][n_ + 1] / tableau_[r][s], basic_[r])) {
          r = i;
        }
      }
      if (r == -1) return false;
      pivot(r, s);
    }
  }

  int m_, n_;
  std::vector<int> nonbasic_, basic_;
  std::vector<std::vector<double>> tableau_;
};

/// Minimizer's side of the shifted game: max 1ᵀz s.t. (M + shift) z <= 1.
/// Returns the minimizer's mixture and the shifted game value.
inline std::pair<Eigen::VectorXd, double> minimizer_strategy(const Eigen::MatrixXd& payoff,
                                                             double shift) {
  const auto rows = payoff.rows();
  const auto cols = payoff.cols();
  const Eigen::MatrixXd shifted = payoff + Eigen::MatrixXd::Constant(rows, cols, shift);
  Simplex lp(shifted, Eigen::VectorXd::Ones(rows), Eigen::VectorXd::Ones(cols));
  Eigen::VectorXd z;
  const double total = lp.solve(z);
  if (!std::isfinite(total) || total <= 0) {
    throw NumericalError("zero_sum_nash: linear program failed");
  }
  const double value = 1.0 / total;
  Eigen::VectorXd mixture = z * value;
  for (Eigen::Index i = 0; i < mixture.size(); ++i) {
    if (mixture(i) < 0) mixture(i) = 0;
  }
  mixture /= mixture.sum();
  return {std::move(mixture), value};
}

}  // namespace detail

struct NashSolution {
  Eigen::VectorXd row_strategy;
  Eigen::VectorXd col_strategy;
  double value = 0.0;
};

/// Largest gain any player can obtain by a pure deviation from (x, y).
inline double exploitability(const Eigen::MatrixXd& payoff, const Eigen::VectorXd& row_strategy,
                             const Eigen::VectorXd& col_strategy) {
  const double value = row_strategy.dot(payoff * col_strategy);
  const double row_gain = (payoff * col_strategy).maxCoeff() - value;
  const double col_gain = value - (row_strategy.transpose() * payoff).minCoeff();
  return std::max({row_gain, col_gain, 0.0});
}

/// Max-min linear programming solution of a two-player zero-sum matrix game
/// (payoffs for the row player). Deterministic simplex; both strategies are
/// recovered by solving each player's side of the positively shifted game.
inline NashSolution zero_sum_nash(const Eigen::MatrixXd& payoff) {
  if (payoff.size() == 0) throw ValidationError("zero_sum_nash: empty payoff matrix");
  if (!payoff.allFinite()) throw ValidationError("zero_sum_nash: payoffs must be finite");

  NashSolution solution;
  const double shift_col = 1.0 + std::max(0.0, -payoff.minCoeff());
  auto [col_strategy, shifted_value] = detail::minimizer_strategy(payoff, shift_col);
  const double value_from_col = shifted_value - shift_col;

  const Eigen::MatrixXd swapped = -payoff.transpose();
  const double shift_row = 1.0 + std::max(0.0, -swapped.minCoeff());
  auto [row_strategy, swapped_value] = detail::minimizer_strategy(swapped, shift_row);
  const double value_from_row = -(swapped_value - shift_row);

  if (std::fabs(value_from_col - value_from_row) > 1e-8) {
    throw NumericalError("zero_sum_nash: minimax identity violated");
  }
  solution.row_strategy = std::move(row_strategy);
  solution.col_strategy = std::move(col_strategy);
  solution.value = 0.5 * (value_from_col + value_from_row);
  if (exploitability(payoff, solution.row_strategy, solution.col_strategy) > 1e-7) {
    throw NumericalError("zero_sum_nash: exploitability above tolerance");
  }
  return solution;
}

/// Pure best response in the full game; ties break to the lowest index.
inline int best_response_row(const Eigen::MatrixXd& payoff, const Eigen::VectorXd& col_mixture) {
  const Eigen::VectorXd expected = payoff * col_mixture;
  int best = 0;
  for (Eigen::Index i = 1; i < expected.size(); ++i) {
    if (expected(i) > expected(best)) best = static_cast<int>(i);
  }
  return best;
}

inline int best_response_col(const Eigen::MatrixXd& payoff, const Eigen::VectorXd& row_mixture) {
  const Eigen::RowVectorXd expected = row_mixture.transpose() * payoff;
  int best = 0;
  for (Eigen::Index j = 1; j < expected.size(); ++j) {
    if (expected(j) < expected(best)) best = static_cast<int>(j);
  }
  return best;
}

struct DoubleOracleTrace {
  int iterations = 0;  // solve+best-response rounds run, final round included
  int expansions = 0;  // strategies added across both players
  std::vector<std::vector<int>> row_supports;  // restricted sets after each round
  std::vector<std::vector<int>> col_supports;
  NashSolution final_solution;  // padded to full size
  double final_exploitability = 0.0;
  std::uint64_t seed = 0;
};

/// Double Oracle on a symmetric zero-sum game. Both players start from the
/// same seeded strategy; each round solves the restricted game and adds both
/// full-game best responses. The loop stops after the first round that adds
/// nothing, and never on round 1 unless the restricted game already spans
/// the full game (the first round is initialization progress).
inline DoubleOracleTrace double_oracle(const SymmetricMatrixGame& game, std::uint64_t seed) {
  const int n = game.size();
  Rng rng(seed);
  const int start = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));

  DoubleOracleTrace trace;
  trace.seed = seed;
  std::vector<int> rows{start};
  std::vector<int> cols{start};

  NashSolution restricted;
  for (;;) {
    ++trace.iterations;
    const bool spanned = static_cast<int>(rows.size()) == n && static_cast<int>(cols.size()) == n;

    Eigen::MatrixXd sub(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < cols.size(); ++j) {
        sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            game.matrix(rows[i], cols[j]);
      }
    }
    restricted = zero_sum_nash(sub);

    Eigen::VectorXd col_full = Eigen::VectorXd::Zero(n);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      col_full(cols[j]) += restricted.col_strategy(static_cast<Eigen::Index>(j));
    }
    Eigen::VectorXd row_full = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      row_full(rows[i]) += restricted.row_strategy(static_cast<Eigen::Index>(i));
    }

    const int row_response = best_response_row(game.matrix, col_full);
    const int col_response = best_response_col(game.matrix, row_full);
    bool added = false;
    if (std::find(rows.begin(), rows.end(), row_response) == rows.end()) {
      rows.insert(std::upper_bound(rows.begin(), rows.end(), row_response), row_response);
      ++trace.expansions;
      added = true;
    }
    if (std::find(cols.begin(), cols.end(), col_response) == cols.end()) {
      cols.insert(std::upper_bound(cols.begin(), cols.end(), col_response), col_response);
      ++trace.expansions;
      added = true;
    }
    trace.row_supports.push_back(rows);
    trace.col_supports.push_back(cols);
    if (!added && (trace.iterations > 1 || spanned)) break;
  }

  // The terminal round solved the final restricted sets; pad to full size.
  const auto& final_rows = trace.row_supports.back();
  const auto& final_cols = trace.col_supports.back();
  trace.final_solution.row_strategy = Eigen::VectorXd::Zero(n);
  trace.final_solution.col_strategy = Eigen::VectorXd::Zero(n);
  for (std::size_t i = 0; i < final_rows.size(); ++i) {
    trace.final_solution.row_strategy(final_rows[i]) =
        restricted.row_strategy(static_cast<Eigen::Index>(i));
  }
  for (std::size_t j = 0; j < final_cols.size(); ++j) {
    trace.final_solution.col_strategy(final_cols[j]) =
        restricted.col_strategy(static_cast<Eigen::Index>(j));
  }
  trace.final_solution.value = restricted.value;
  trace.final_exploitability =
      exploitability(game.matrix, trace.final_solution.row_strategy, trace.final_solution.col_strategy);
  return trace;
}

struct GameComplexity {
  std::string name;
  std::vector<double> per_trial;  // normalized iteration counts
  double mean_iterations = 0.0;
  double std_iterations = 0.0;
  GraphFeatures features;
};

struct ComplexityReport {
  std::vector<GameComplexity> rows;
  bool has_correlations = false;
  SpearmanResult entropy_corr;
  SpearmanResult cycles3_corr;
  SpearmanResult in_degree_corr;
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (a + 1) + 0xbf58476d1ce4e5b9ull * (b + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  x ^= x >> 31;
  return x;
}

}  // namespace detail

/// Per game: `trials` seeded Double Oracle runs with iteration counts
/// normalized by strategy count, plus the normalized feature vector; then
/// Spearman correlations of entropy / 3-cycles / mean in-degree against the
/// mean normalized iterations.
inline ComplexityReport complexity_experiment(const std::vector<SymmetricMatrixGame>& games,
                                              int trials, std::uint64_t seed,
                                              bool normalize_iters = true,
                                              bool normalize_features = true) {
  if (trials < 1) throw ValidationError("complexity_experiment: trials must be >= 1");
  ComplexityReport report;
  report.rows.reserve(games.size());
  for (std::size_t g = 0; g < games.size(); ++g) {
    const auto& game = games[g];
    GameComplexity row;
    row.name = game.name;
    FeatureOptions options = FeatureOptions::single_population();
    options.normalize = normalize_features;
    row.features = feature_vector(game, options);
    row.per_trial.reserve(static_cast<std::size_t>(trials));
    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
      const auto trace = double_oracle(game, detail::mix_seed(seed, g, static_cast<std::uint64_t>(t)));
      const double iters = normalize_iters
                               ? static_cast<double>(trace.iterations) / game.size()
                               : static_cast<double>(trace.iterations);
      row.per_trial.push_back(iters);
      sum += iters;
    }
    row.mean_iterations = sum / trials;
    double variance = 0.0;
    for (double v : row.per_trial) variance += (v - row.mean_iterations) * (v - row.mean_iterations);
    row.std_iterations = std::sqrt(variance / trials);
    report.rows.push_back(std::move(row));
  }

  if (games.size() >= 3) {
    std::vector<double> iters, entropy, cycles, in_mean;
    for (const auto& row : report.rows) {
      iters.push_back(row.mean_iterations);
      entropy.push_back(row.features.entropy);
      cycles.push_back(row.features.cycles3);
      in_mean.push_back(row.features.in_mean);
    }
    report.entropy_corr = spearman(entropy, iters);
    report.cycles3_corr = spearman(cycles, iters);
    report.in_degree_corr = spearman(in_mean, iters);
    report.has_correlations = true;
  }
  return report;
}

}  // namespace gamescape
