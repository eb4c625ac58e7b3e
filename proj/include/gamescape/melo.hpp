#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "gamescape/common.hpp"
#include "gamescape/game.hpp"

namespace gamescape {

/// Multidimensional Elo parameterization: a transitive rating r_i per
/// strategy plus a 2k-dimensional intransitive vector c_i. Flattened layout
/// is strategy-major: (r_0, c_0[0..2k-1], r_1, c_1[...], ...), length n(1+2k).
struct MEloGenome {
  int n = 0;
  int k = 0;
  Eigen::VectorXd r;  // n
  Eigen::MatrixXd c;  // n x 2k

  static MEloGenome zeros(int n, int k) {
    MEloGenome genome;
    genome.n = n;
    genome.k = k;
    genome.r = Eigen::VectorXd::Zero(n);
    genome.c = Eigen::MatrixXd::Zero(n, 2 * k);
    return genome;
  }

  static int flat_size(int n, int k) { return n * (1 + 2 * k); }

  Eigen::VectorXd flatten() const {
    Eigen::VectorXd flat(flat_size(n, k));
    int pos = 0;
    for (int i = 0; i < n; ++i) {
      flat(pos++) = r(i);
      for (int d = 0; d < 2 * k; ++d) flat(pos++) = c(i, d);
    }
    return flat;
  }

  static MEloGenome unflatten(const Eigen::VectorXd& flat, int n, int k) {
    if (flat.size() != flat_size(n, k)) {
      throw ValidationError("MEloGenome::unflatten: length mismatch");
    }
    MEloGenome genome = zeros(n, k);
    int pos = 0;
    for (int i = 0; i < n; ++i) {
      genome.r(i) = flat(pos++);
      for (int d = 0; d < 2 * k; ++d) genome.c(i, d) = flat(pos++);
    }
    return genome;
  }
};

/// Pairing c_iᵀ Ω c_j with Ω = Σ_b (e_{2b-1} e_{2b}ᵀ - e_{2b} e_{2b-1}ᵀ).
inline double melo_intransitive(const Eigen::MatrixXd& c, int i, int j) {
  double total = 0.0;
  for (int b = 0; b + 1 < c.cols(); b += 2) {
    total += c(i, b) * c(j, b + 1) - c(i, b + 1) * c(j, b);
  }
  return total;
}

/// Payoff matrix 2 sigma(r_i - r_j + c_iᵀ Ω c_j) - 1, i.e. tanh of half the
/// logit. The lower triangle mirrors the upper so antisymmetry is exact.
inline SymmetricMatrixGame melo_payoffs(const MEloGenome& genome, const std::string& name = "melo") {
  const int n = genome.n;
  Eigen::MatrixXd payoff = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double logit = genome.r(i) - genome.r(j) + melo_intransitive(genome.c, i, j);
      const double value = std::tanh(0.5 * logit);
      payoff(i, j) = value;
      payoff(j, i) = -value;
    }
  }
  return SymmetricMatrixGame{name, std::move(payoff)};
}

}  // namespace gamescape
