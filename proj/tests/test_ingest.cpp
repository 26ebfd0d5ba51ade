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

#include <gtest/gtest.h>

#include <sstream>

#include "skillpdf/ingest.hpp"

namespace skillpdf {
namespace {

std::vector<MatchRecord> parse(const std::string& body) {
  std::istringstream in(body);
  return parse_matches(in);
}

std::size_t error_line(const std::string& body) {
  try {
    parse(body);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

TEST(ParseMatches, Outcomes) {
  const auto r = parse("player_a,player_b,outcome\nx,y,A\nx,y,D\nx,y,b\n");
  ASSERT_EQ(r.size(), 3u);
  EXPECT_EQ(r[0].player_a, "x");
  EXPECT_EQ(r[0].player_b, "y");
  EXPECT_EQ(r[0].outcome, Outcome::AWins);
  EXPECT_EQ(r[1].outcome, Outcome::Draw);
  EXPECT_EQ(r[2].outcome, Outcome::BWins);
  EXPECT_EQ(r[0].weight, 1u);
}

TEST(ParseMatches, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("player_a,player_b,outcome\nx,y,A\nx,x,A\n"), 3u);
  EXPECT_EQ(error_line("player_a,player_b,outcome\nx,y,W\n"), 2u);
  EXPECT_EQ(error_line("player_a,player_b,outcome\nx,y\n"), 2u);
  EXPECT_EQ(error_line("player_a,player_b,outcome\n,y,A\n"), 2u);
  EXPECT_EQ(error_line("a,b,c\nx,y,A\n"), 1u);
  EXPECT_EQ(error_line("player_a,player_b,outcome,weight\nx,y,A,0\n"), 2u);
  EXPECT_EQ(error_line("player_a,player_b,outcome,weight\nx,y,A,-2\n"), 2u);
  EXPECT_THROW(parse(""), ParseError);
}

TEST(ParseMatches, TrimsButPreservesCase) {
  const auto r = parse("\xEF\xBB\xBFPlayer_A,player_b,Outcome\n\n  Ann , bob ,a\n");
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].player_a, "Ann");
  EXPECT_EQ(r[0].player_b, "bob");
  EXPECT_THROW(parse("player_a,player_b,outcome\nAnn, Ann ,A\n"), ParseError);
  // Identifiers differing in case are distinct players.
  EXPECT_NO_THROW(parse("player_a,player_b,outcome\nAnn,ann,A\n"));
}

TEST(ParseMatches, Weights) {
  const auto r = parse("player_a,player_b,outcome,weight\nx,y,A,3\nx,y,B,\n");
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].weight, 3u);
  EXPECT_EQ(r[1].weight, 1u);
  const PairwiseCounts c = aggregate(r);
  EXPECT_EQ(c.wins(1, 0), 3u);  // x over y
  EXPECT_EQ(c.wins(0, 1), 1u);
}

TEST(Aggregate, DrawsContributeNothing) {
  const PairwiseCounts c = aggregate(parse("player_a,player_b,outcome\nx,y,A\ny,x,A\nx,y,D\n"));
  ASSERT_EQ(c.players, (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(c.wins(1, 0), 1u);  // games x won against y
  EXPECT_EQ(c.wins(0, 1), 1u);
}

TEST(Aggregate, AllDrawsKeepRoster) {
  const PairwiseCounts c = aggregate(parse("player_a,player_b,outcome\nx,y,D\ny,z,d\n"));
  EXPECT_EQ(c.players.size(), 3u);
  EXPECT_TRUE(c.table.empty());
  EXPECT_THROW(laplace_smooth(c), InsufficientDataError);
}

TEST(LaplaceSmooth, SingleGameIsExactlyTwentyOneOverTwentyTwo) {
  const ObservationMatrix obs = laplace_smooth(aggregate(parse("player_a,player_b,outcome\nx,y,A\n")));
  ASSERT_EQ(obs.edge_count(), 1u);
  const WinRecord xy = obs.record(1, 0);  // games x won against y
  EXPECT_EQ(xy.wins, 21u);
  EXPECT_EQ(xy.games, 22u);
  EXPECT_EQ(obs.win_fraction(1, 0), 21.0 / 22.0);
  EXPECT_EQ(obs.record(0, 1).wins, 1u);
}

TEST(LaplaceSmooth, SplitIsExactlyHalf) {
  const ObservationMatrix obs =
      laplace_smooth(aggregate(parse("player_a,player_b,outcome\nx,y,A\nx,y,B\n")));
  EXPECT_EQ(obs.record(0, 1).wins, 21u);
  EXPECT_EQ(obs.record(0, 1).games, 42u);
  EXPECT_EQ(obs.win_fraction(0, 1), 0.5);
  EXPECT_EQ(obs.win_fraction(1, 0), 0.5);
}

TEST(LaplaceSmooth, DisabledIsIdentity) {
  const ObservationMatrix obs = laplace_smooth(
      aggregate(parse("player_a,player_b,outcome\nx,y,A\nx,y,A\nx,y,B\n")), 1, 0);
  EXPECT_EQ(obs.win_fraction(1, 0), 2.0 / 3.0);
}

TEST(LaplaceSmooth, UnplayedPairsStayUnobserved) {
  const ObservationMatrix obs =
      laplace_smooth(aggregate(parse("player_a,player_b,outcome\na,b,A\nb,c,A\nc,d,D\n")));
  EXPECT_EQ(obs.n(), 4u);
  EXPECT_EQ(obs.edge_count(), 2u);
  EXPECT_FALSE(obs.graph().find(0, 2).has_value());
}

TEST(MedianGames, EvenAndOdd) {
  const ObservationMatrix odd(ComparisonGraph(3, {{0, 1}, {0, 2}, {1, 2}}), {1, 1, 1}, {2, 9, 4});
  EXPECT_EQ(median_games_per_edge(odd), 4.0);
  const ObservationMatrix even(ComparisonGraph(3, {{0, 1}, {0, 2}}), {1, 1}, {2, 5});
  EXPECT_EQ(median_games_per_edge(even), 3.5);
}

}  // namespace
}  // namespace skillpdf
