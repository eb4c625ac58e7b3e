#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gamescape/game.hpp"

namespace gamescape {

namespace detail {

/// 17 significant digits: enough to round-trip any double exactly.
inline std::string format_real(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

inline void write_payoff_array(std::ostream& out, const PayoffTensor& game, int player, int axis,
                               std::vector<int>& profile) {
  const auto& counts = game.strategy_counts();
  out << '[';
  for (int s = 0; s < counts[static_cast<std::size_t>(axis)]; ++s) {
    if (s) out << ',';
    profile[static_cast<std::size_t>(axis)] = s;
    if (axis + 1 == game.num_players()) {
      out << format_real(game.payoff(player, profile));
    } else {
      write_payoff_array(out, game, player, axis + 1, profile);
    }
  }
  out << ']';
}

inline void read_payoff_array(const nlohmann::json& node, const PayoffTensor& shape, int player,
                              int axis, std::vector<int>& profile, std::vector<double>& flat) {
  const auto& counts = shape.strategy_counts();
  if (!node.is_array() ||
      static_cast<int>(node.size()) != counts[static_cast<std::size_t>(axis)]) {
    throw ValidationError("game json: payoff array shape does not match strategy_counts");
  }
  for (int s = 0; s < counts[static_cast<std::size_t>(axis)]; ++s) {
    profile[static_cast<std::size_t>(axis)] = s;
    const auto& child = node[static_cast<std::size_t>(s)];
    if (axis + 1 == shape.num_players()) {
      if (!child.is_number()) {
        throw ValidationError("game json: payoff entries must be finite numbers");
      }
      flat[static_cast<std::size_t>(shape.profile_index(profile))] = child.get<double>();
    } else {
      read_payoff_array(child, shape, player, axis + 1, profile, flat);
    }
  }
}

}  // namespace detail

/// Serializes a game to the toolkit's JSON schema. Payoff reals are written
/// with 17 significant digits; write-then-read is the identity on all fields.
inline std::string game_to_json(const PayoffTensor& game) {
  const auto violations = validate(game);
  if (!violations.empty()) {
    throw ValidationError("write_game: invalid game: " + violations.front());
  }
  std::ostringstream out;
  out << "{\n  \"name\": " << nlohmann::json(game.name()).dump() << ",\n";
  out << "  \"players\": " << game.num_players() << ",\n";
  out << "  \"strategy_counts\": [";
  for (int k = 0; k < game.num_players(); ++k) {
    out << (k ? "," : "") << game.strategy_counts()[static_cast<std::size_t>(k)];
  }
  out << "],\n  \"symmetric\": " << (game.symmetric() ? "true" : "false") << ",\n";
  out << "  \"payoffs\": [";
  std::vector<int> profile(static_cast<std::size_t>(game.num_players()), 0);
  for (int k = 0; k < game.num_players(); ++k) {
    if (k) out << ',';
    out << "\n    ";
    detail::write_payoff_array(out, game, k, 0, profile);
  }
  out << "\n  ]\n}\n";
  return out.str();
}

inline PayoffTensor game_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("game json: parse failure: ") + e.what());
  }
  for (const char* key : {"name", "players", "strategy_counts", "symmetric", "payoffs"}) {
    if (!doc.contains(key)) throw ValidationError(std::string("game json: missing key ") + key);
  }
  const int num_players = doc["players"].get<int>();
  std::vector<int> counts = doc["strategy_counts"].get<std::vector<int>>();
  if (num_players < 1 || static_cast<int>(counts.size()) != num_players) {
    throw ValidationError("game json: players and strategy_counts disagree");
  }
  std::vector<std::vector<double>> payoffs(static_cast<std::size_t>(num_players));
  PayoffTensor shape(doc["name"].get<std::string>(), counts, {}, false);
  const auto total = static_cast<std::size_t>(shape.num_profiles());
  if (!doc["payoffs"].is_array() || static_cast<int>(doc["payoffs"].size()) != num_players) {
    throw ValidationError("game json: payoffs must hold one array per player");
  }
  std::vector<int> profile(static_cast<std::size_t>(num_players), 0);
  for (int k = 0; k < num_players; ++k) {
    payoffs[static_cast<std::size_t>(k)].assign(total, 0.0);
    detail::read_payoff_array(doc["payoffs"][static_cast<std::size_t>(k)], shape, k, 0, profile,
                              payoffs[static_cast<std::size_t>(k)]);
  }
  PayoffTensor game(doc["name"].get<std::string>(), std::move(counts), std::move(payoffs),
                    doc["symmetric"].get<bool>());
  const auto violations = validate(game);
  if (!violations.empty()) {
    throw ValidationError("game json: " + violations.front());
  }
  return game;
}

/// Two-player symmetric CSV: first row/column are strategy labels, cell (i,j)
/// is the row player's payoff M1(i,j).
inline std::string game_to_csv(const SymmetricMatrixGame& game) {
  std::ostringstream out;
  const int n = game.size();
  out << "strategy";
  for (int j = 0; j < n; ++j) out << ",s" << j;
  out << '\n';
  for (int i = 0; i < n; ++i) {
    out << 's' << i;
    for (int j = 0; j < n; ++j) out << ',' << detail::format_real(game.matrix(i, j));
    out << '\n';
  }
  return out.str();
}

inline PayoffTensor game_from_csv(const std::string& text, const std::string& name) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("game csv: empty document");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');  // row label
    std::vector<double> row;
    while (std::getline(cells, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ValidationError("game csv: non-numeric payoff cell '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  const auto n = rows.size();
  if (n < 1) throw ValidationError("game csv: no payoff rows");
  Eigen::MatrixXd matrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw ValidationError("game csv: payoff table must be square");
    for (std::size_t j = 0; j < n; ++j) {
      matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  auto game = PayoffTensor::from_symmetric(SymmetricMatrixGame{name, std::move(matrix)});
  const auto violations = validate(game);
  if (!violations.empty()) throw ValidationError("game csv: " + violations.front());
  return game;
}

inline void write_game(const PayoffTensor& game, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("write_game: cannot open " + path.string());
  if (path.extension() == ".csv") {
    out << game_to_csv(game.as_symmetric());
  } else {
    out << game_to_json(game);
  }
}

inline PayoffTensor read_game(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("read_game: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (path.extension() == ".csv") {
    return game_from_csv(buffer.str(), path.stem().string());
  }
  return game_from_json(buffer.str());
}

}  // namespace gamescape
