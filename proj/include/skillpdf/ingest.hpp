// Copyright 2026 The skillpdf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "skillpdf/error.hpp"
#include "skillpdf/model.hpp"

namespace skillpdf {

enum class Outcome { AWins, BWins, Draw };

struct MatchRecord {
  std::string player_a;
  std::string player_b;
  Outcome outcome;
  std::uint32_t weight = 1;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!s.empty() && space(s.front())) s.remove_prefix(1);
  while (!s.empty() && space(s.back())) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace detail

/// Reads CSV match records with header `player_a,player_b,outcome[,weight]`.
/// Outcomes are A, B or D (case-insensitive); weight defaults to 1.
/// Identifiers are trimmed and compared exactly. Blank lines are skipped.
inline std::vector<MatchRecord> parse_matches(std::istream& in) {
  std::vector<MatchRecord> records;
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    if (detail::trim(view).empty()) continue;
    const auto fields = detail::split_fields(view);

    if (columns == 0) {
      std::vector<std::string> names;
      for (auto f : fields) names.push_back(detail::lower(f));
      const bool base = names.size() >= 3 && names[0] == "player_a" &&
                        names[1] == "player_b" && names[2] == "outcome";
      if (!base || names.size() > 4 || (names.size() == 4 && names[3] != "weight")) {
        throw ParseError(line_no, "expected header player_a,player_b,outcome[,weight]");
      }
      columns = names.size();
      continue;
    }

    if (fields.size() != columns) {
      throw ParseError(line_no, "expected " + std::to_string(columns) + " fields, got " +
                                    std::to_string(fields.size()));
    }
    MatchRecord record;
    record.player_a = std::string(fields[0]);
    record.player_b = std::string(fields[1]);
    if (record.player_a.empty() || record.player_b.empty()) {
      throw ParseError(line_no, "empty player identifier");
    }
    if (record.player_a == record.player_b) {
      throw ParseError(line_no, "player '" + record.player_a + "' cannot play itself");
    }
    const std::string token = detail::lower(fields[2]);
    if (token == "a") {
      record.outcome = Outcome::AWins;
    } else if (token == "b") {
      record.outcome = Outcome::BWins;
    } else if (token == "d") {
      record.outcome = Outcome::Draw;
    } else {
      throw ParseError(line_no, "unknown outcome '" + std::string(fields[2]) + "'");
    }
    if (columns == 4 && !fields[3].empty()) {
      const auto w = fields[3];
      if (w.size() > 9 || !std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw ParseError(line_no, "weight must be a positive integer");
      }
      record.weight = static_cast<std::uint32_t>(std::stoul(std::string(w)));
      if (record.weight == 0) throw ParseError(line_no, "weight must be a positive integer");
    }
    records.push_back(std::move(record));
  }
  if (columns == 0) throw ParseError(line_no, "missing header");
  return records;
}

/// Decisive results per ordered pair. wins(i, j) counts games j won against
/// i; both orientations exist once the pair has a decisive game.
struct PairwiseCounts {
  std::vector<std::string> players;  // first-appearance order
  std::map<std::pair<std::size_t, std::size_t>, std::uint64_t> table;

  std::uint64_t wins(std::size_t i, std::size_t j) const {
    const auto it = table.find({i, j});
    return it == table.end() ? 0 : it->second;
  }
};

/// Drops draws and sums weights of decisive games per ordered pair.
inline PairwiseCounts aggregate(const std::vector<MatchRecord>& records) {
  PairwiseCounts counts;
  std::unordered_map<std::string, std::size_t> index;
  auto id = [&](const std::string& name) {
    const auto [it, inserted] = index.try_emplace(name, counts.players.size());
    if (inserted) counts.players.push_back(name);
    return it->second;
  };
  for (const auto& r : records) {
    const std::size_t a = id(r.player_a);
    const std::size_t b = id(r.player_b);
    if (r.outcome == Outcome::Draw) continue;
    const std::size_t winner = r.outcome == Outcome::AWins ? a : b;
    const std::size_t loser = r.outcome == Outcome::AWins ? b : a;
    counts.table[{loser, winner}] += r.weight;
    counts.table.try_emplace({winner, loser}, 0);
  }
  return counts;
}

/// Laplace smoothing of decisive results: every observed game counts
/// `game_multiplier` times and each player of an observed pair gets
/// `pseudo_wins` extra wins. Pairs without a decisive game stay unobserved.
/// The result is treated as fully observed (p = 1).
inline ObservationMatrix laplace_smooth(const PairwiseCounts& counts,
                                        std::uint32_t game_multiplier = 20,
                                        std::uint32_t pseudo_wins = 1) {
  if (game_multiplier < 1) throw InvalidArgument("game multiplier must be at least 1");
  std::vector<bool> active(counts.players.size(), false);
  std::vector<Edge> edges;
  std::vector<std::uint32_t> wins;
  std::vector<std::uint32_t> games;
  constexpr std::uint64_t kLimit = std::numeric_limits<std::uint32_t>::max();

  for (const auto& [pair, count] : counts.table) {
    const auto [i, j] = pair;
    if (i >= j) continue;
    const std::uint64_t forward = count;  // j over i
    const std::uint64_t backward = counts.wins(j, i);
    if (forward + backward == 0) continue;
    const std::uint64_t smoothed = game_multiplier * forward + pseudo_wins;
    const std::uint64_t total = game_multiplier * (forward + backward) + 2ULL * pseudo_wins;
    if (total > kLimit) throw InvalidArgument("game count overflow after smoothing");
    edges.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)});
    wins.push_back(static_cast<std::uint32_t>(smoothed));
    games.push_back(static_cast<std::uint32_t>(total));
    active[i] = active[j] = true;
  }
  if (std::count(active.begin(), active.end(), true) < 2) {
    throw InsufficientDataError("fewer than two players have a decisive game");
  }
  ComparisonGraph graph(counts.players.size(), std::move(edges), 1.0);
  return ObservationMatrix(std::move(graph), std::move(wins), std::move(games));
}

// Median games per observed pair, the k used for bandwidth selection when
// pairs played different numbers of games.
inline double median_games_per_edge(const ObservationMatrix& obs) {
  std::vector<std::uint32_t> g(obs.games().begin(), obs.games().end());
  if (g.empty()) throw InvalidArgument("no observed pairs");
  std::sort(g.begin(), g.end());
  const std::size_t mid = g.size() / 2;
  return g.size() % 2 ? g[mid] : 0.5 * (static_cast<double>(g[mid - 1]) + g[mid]);
}

}  // namespace skillpdf
