#include "multivision/core.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "generators.hpp"

namespace multivision {
namespace {

const GameConfig kMultivision{2};

Position pos_over(std::vector<std::uint64_t> primes, std::vector<ExponentVec> piles) {
  return Position::from_exponents(PrimeWindow::make(std::move(primes)), std::move(piles));
}

ExponentVec ev(std::initializer_list<long> values) {
  ExponentVec out;
  for (long v : values) out.emplace_back(v);
  return out;
}

MovePart part(std::size_t pile, std::uint64_t s, std::map<std::size_t, Exponent> inc = {}) {
  return MovePart{pile, s, std::move(inc)};
}

std::string violation_of(const Position& pos, const Move& mv, std::uint64_t k) {
  auto v = validate_move(pos, mv, GameConfig{k});
  return v ? std::string(violation_code_name(v->code)) : "ok";
}

TEST(NewGame, ReindexesOverWindow) {
  auto pos = new_game({{{2, 1}}, {{3, 1}}}, kMultivision);
  EXPECT_EQ(pos.window.primes(), (std::vector<std::uint64_t>{2, 3}));
  EXPECT_EQ(pos.piles, (std::vector<ExponentVec>{ev({1, 0}), ev({0, 1})}));
}

TEST(NewGame, SinglePile) {
  auto pos = new_game({{{2, 2}, {3, 1}}}, kMultivision);
  EXPECT_EQ(pos.window.primes(), (std::vector<std::uint64_t>{2, 3}));
  EXPECT_EQ(pos.piles, (std::vector<ExponentVec>{ev({2, 1})}));
}

TEST(NewGame, WindowIncludesIntermediatePrimes) {
  auto pos = new_game({{{2, 1}, {5, 1}}}, kMultivision);
  EXPECT_EQ(pos.window.primes(), (std::vector<std::uint64_t>{2, 3, 5}));
  EXPECT_EQ(pos.piles, (std::vector<ExponentVec>{ev({1, 0, 1})}));
}

TEST(NewGame, WindowStartsAtSmallestPrimeDividingM) {
  auto pos = new_game({{{7, 2}}, {{11, 1}, {3, 0}}}, kMultivision);
  EXPECT_EQ(pos.window.primes(), (std::vector<std::uint64_t>{7, 11}));
}

TEST(NewGame, AllOnesIsTerminalWithEmptyWindow) {
  auto pos = new_game({{}, {{5, 0}}}, kMultivision);
  EXPECT_TRUE(pos.window.empty());
  EXPECT_EQ(pos.pile_count(), 2u);
  EXPECT_TRUE(is_terminal(pos));
}

TEST(NewGame, Errors) {
  auto code = [](const std::vector<FactoredNatural>& piles, std::uint64_t k = 2) {
    try {
      new_game(piles, GameConfig{k});
    } catch (const GameError& e) {
      return e.code();
    }
    return std::string("ok");
  };
  EXPECT_EQ(code({{{4, 1}}}), "non-prime-base");
  EXPECT_EQ(code({{{1, 1}}}), "non-prime-base");
  EXPECT_EQ(code({{{2, -1}}}), "negative-exponent");
  EXPECT_EQ(code({}), "empty-pile-list");
  EXPECT_EQ(code({{{2, 1}, {2, 3}}}), "duplicate-base");
  EXPECT_EQ(code({{{2, 1}}}, 1), "bad-config");
  EXPECT_EQ(code({{{2, 1}, {1000000007, 1}}}), "window-too-large");
}

TEST(TotalExponents, SumsPiles) {
  EXPECT_EQ(total_exponents(pos_over({2, 3}, {ev({1, 0}), ev({0, 1})})), ev({1, 1}));
  EXPECT_EQ(total_exponents(pos_over({2, 3}, {ev({0, 0}), ev({0, 0})})), ev({0, 0}));
}

TEST(TotalExponents, ExampleOneDeskAnalog) {
  // Piles p^p, p^{2p}, p^{3p} over {2,3,5}: totals 6p.
  auto pos = pos_over({2, 3, 5}, {ev({2, 3, 5}), ev({4, 6, 10}), ev({6, 9, 15})});
  EXPECT_EQ(total_exponents(pos), ev({12, 18, 30}));
}

TEST(IsTerminal, Examples) {
  EXPECT_TRUE(is_terminal(pos_over({2, 3}, {ev({0, 0}), ev({0, 0})})));
  EXPECT_FALSE(is_terminal(pos_over({2, 3}, {ev({0, 1})})));
  EXPECT_FALSE(is_terminal(pos_over({2, 3}, {ev({2, 1}), ev({0, 0})})));
}

TEST(ValidateMove, SpecExamples) {
  EXPECT_EQ(violation_of(pos_over({2, 3}, {ev({1, 0})}), Move{0, {part(0, 1, {{1, 5}})}}, 2), "ok");
  EXPECT_EQ(violation_of(pos_over({2, 3}, {ev({0, 1})}), Move{0, {part(0, 1)}}, 2),
            "insufficient-exponent");
  EXPECT_EQ(violation_of(pos_over({2, 3}, {ev({2, 0}), ev({1, 0})}),
                         Move{0, {part(0, 1), part(1, 1)}}, 3),
            "ok");
}

TEST(ValidateMove, ReasonCodes) {
  const auto pos = pos_over({2, 3, 5}, {ev({3, 1, 0}), ev({1, 0, 0})});
  EXPECT_EQ(violation_of(pos, Move{3, {part(0, 1)}}, 2), "bad-prime-index");
  EXPECT_EQ(violation_of(pos, Move{0, {part(2, 1)}}, 2), "bad-pile-index");
  EXPECT_EQ(violation_of(pos, Move{0, {}}, 2), "s-out-of-range");
  EXPECT_EQ(violation_of(pos, Move{0, {part(0, 0)}}, 3), "s-out-of-range");
  EXPECT_EQ(violation_of(pos, Move{0, {part(0, 2)}}, 2), "s-out-of-range");
  EXPECT_EQ(violation_of(pos, Move{0, {part(0, 1), part(1, 1)}}, 2), "s-out-of-range");
  EXPECT_EQ(violation_of(pos, Move{0, {part(0, 2), part(1, 1)}}, 3), "s-out-of-range");
  EXPECT_EQ(violation_of(pos, Move{0, {part(0, 1), part(0, 1)}}, 3), "duplicate-pile");
  EXPECT_EQ(violation_of(pos, Move{1, {part(0, 1, {{1, 1}})}}, 2), "increment-not-after-h");
  EXPECT_EQ(violation_of(pos, Move{1, {part(0, 1, {{0, 1}})}}, 2), "increment-not-after-h");
  EXPECT_EQ(violation_of(pos, Move{0, {part(0, 1, {{3, 1}})}}, 2), "increment-not-after-h");
  EXPECT_EQ(violation_of(pos, Move{0, {part(0, 1, {{1, 0}})}}, 2), "non-positive-increment");
  EXPECT_EQ(violation_of(pos, Move{0, {part(1, 2)}}, 3), "insufficient-exponent");
  EXPECT_EQ(violation_of(pos, Move{2, {part(0, 1)}}, 2), "insufficient-exponent");
}

TEST(ValidateMove, K2ForcesSingleUnitMove) {
  const auto pos = pos_over({2, 3}, {ev({5, 5}), ev({5, 5})});
  EXPECT_EQ(violation_of(pos, Move{0, {part(0, 1)}}, 2), "ok");
  EXPECT_NE(violation_of(pos, Move{0, {part(0, 2)}}, 2), "ok");
  EXPECT_NE(violation_of(pos, Move{0, {part(0, 1), part(1, 1)}}, 2), "ok");
}

TEST(ApplyMove, SpecExamples) {
  EXPECT_EQ(apply_move(pos_over({2, 3}, {ev({1, 0})}), Move{0, {part(0, 1, {{1, 2}})}}, kMultivision)
                .piles,
            (std::vector<ExponentVec>{ev({0, 2})}));
  EXPECT_EQ(apply_move(pos_over({2, 3}, {ev({2, 1})}), Move{1, {part(0, 1)}}, kMultivision).piles,
            (std::vector<ExponentVec>{ev({2, 0})}));
  EXPECT_EQ(apply_move(pos_over({2, 3, 5}, {ev({1, 1, 0})}),
                       Move{0, {part(0, 1, {{1, 1}, {2, 3}})}}, kMultivision)
                .piles,
            (std::vector<ExponentVec>{ev({0, 2, 3})}));
}

TEST(ApplyMove, LeavesInputUntouchedAndRejectsIllegal) {
  const auto pos = pos_over({2, 3}, {ev({1, 0})});
  const auto copy = pos;
  apply_move(pos, Move{0, {part(0, 1, {{1, 9}})}}, kMultivision);
  EXPECT_EQ(pos, copy);
  try {
    apply_move(pos, Move{1, {part(0, 1)}}, kMultivision);
    FAIL() << "expected a violation";
  } catch (const GameError& e) {
    EXPECT_EQ(e.code(), "insufficient-exponent");
  }
}

TEST(ApplyMove, MultiPartKMove) {
  const auto pos = pos_over({2, 3}, {ev({2, 0}), ev({1, 0})});
  const auto next = apply_move(pos, Move{0, {part(0, 1, {{1, 4}}), part(1, 1)}}, GameConfig{3});
  EXPECT_EQ(next.piles, (std::vector<ExponentVec>{ev({1, 4}), ev({0, 0})}));
}

TEST(EnumerateMoves, TerminalHasNone) {
  EXPECT_TRUE(enumerate_moves_capped(pos_over({2, 3}, {ev({0, 0})}), kMultivision, 0).empty());
  EXPECT_TRUE(enumerate_moves_capped(pos_over({2, 3}, {ev({0, 0})}), kMultivision, 5).empty());
  EXPECT_TRUE(enumerate_moves_capped(new_game({{}}, kMultivision), GameConfig{4}, 3).empty());
}

TEST(EnumerateMoves, TopPrimeHasNoIncrements) {
  auto moves = enumerate_moves_capped(pos_over({2, 3}, {ev({0, 1})}), kMultivision, 1);
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_EQ(moves[0], (Move{1, {part(0, 1)}}));
}

TEST(EnumerateMoves, OrderedIncrements) {
  auto moves = enumerate_moves_capped(pos_over({2, 3}, {ev({1, 0})}), kMultivision, 1);
  ASSERT_EQ(moves.size(), 2u);
  EXPECT_EQ(moves[0], (Move{0, {part(0, 1)}}));
  EXPECT_EQ(moves[1], (Move{0, {part(0, 1, {{1, 1}})}}));
}

// Independent generator for K = 2: every (h, pile, increment tuple) filtered
// through validate_move.
std::vector<Move> brute_force_k2(const Position& pos, std::uint64_t cap) {
  std::vector<Move> out;
  const std::size_t w = pos.window.size();
  for (std::size_t h = 0; h < w; ++h) {
    for (std::size_t pile = 0; pile < pos.pile_count(); ++pile) {
      std::size_t combos = 1;
      for (std::size_t q = h + 1; q < w; ++q) combos *= cap + 1;
      for (std::size_t c = 0; c < combos; ++c) {
        Move mv{h, {part(pile, 1)}};
        std::size_t rest = c;
        for (std::size_t q = w; q-- > h + 1;) {
          if (rest % (cap + 1)) mv.parts[0].increments[q] = rest % (cap + 1);
          rest /= cap + 1;
        }
        if (!validate_move(pos, mv, kMultivision)) out.push_back(mv);
      }
    }
  }
  return out;
}

TEST(EnumerateMoves, MatchesBruteForceForK2) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto pos = testing::random_position(rng, 4, 3, 2);
    for (std::uint64_t cap : {0, 1, 2}) {
      auto got = enumerate_moves_capped(pos, kMultivision, cap);
      auto want = brute_force_k2(pos, cap);
      auto less = [](const Move& a, const Move& b) {
        return std::tie(a.prime_index, a.parts[0].pile, a.parts[0].increments) <
               std::tie(b.prime_index, b.parts[0].pile, b.parts[0].increments);
      };
      std::sort(want.begin(), want.end(), less);
      EXPECT_TRUE(std::is_sorted(got.begin(), got.end(),
                                 [](const Move& a, const Move& b) { return a.prime_index < b.prime_index; }));
      std::sort(got.begin(), got.end(), less);
      EXPECT_EQ(got, want);
    }
  }
}

TEST(EnumerateMoves, KMoveSplitsAcrossPiles) {
  // K = 3 from piles 2^1, 2^1: s = 1 on either pile, or s = 2 split 1 + 1.
  const auto moves = enumerate_moves_capped(pos_over({2}, {ev({1}), ev({1})}), GameConfig{3}, 2);
  ASSERT_EQ(moves.size(), 3u);
  EXPECT_EQ(moves[0], (Move{0, {part(1, 1)}}));
  EXPECT_EQ(moves[1], (Move{0, {part(0, 1)}}));
  EXPECT_EQ(moves[2], (Move{0, {part(0, 1), part(1, 1)}}));
}

TEST(LexLess, Examples) {
  EXPECT_TRUE(lex_less(LexKey{ev({0, 9})}, LexKey{ev({1, 0})}));
  EXPECT_FALSE(lex_less(LexKey{ev({1, 1})}, LexKey{ev({1, 1})}));
  EXPECT_FALSE(lex_less(LexKey{ev({1, 0})}, LexKey{ev({0, 9})}));
  EXPECT_THROW(lex_less(LexKey{ev({1})}, LexKey{ev({1, 0})}), std::invalid_argument);
}

// Property: every legal move strictly lowers the key, touches exactly the
// entries it names, and enumeration is monotone in the cap.
TEST(CoreProperties, DescentDeltaAndCapMonotonicity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::uint64_t k = 2 + trial % 3;
    const GameConfig config{k};
    const auto pos = testing::random_position(rng, 3, 3, 3);
    const auto key = lex_key(pos);
    const auto small = enumerate_moves_capped(pos, config, 1);
    const auto large = enumerate_moves_capped(pos, config, 2);
    for (const auto& mv : small) {
      EXPECT_NE(std::find(large.begin(), large.end(), mv), large.end());
    }
    for (const auto& mv : large) {
      ASSERT_FALSE(validate_move(pos, mv, config));
      const auto next = apply_move(pos, mv, config);
      EXPECT_TRUE(lex_less(lex_key(next), key));
      for (std::size_t i = 0; i < pos.pile_count(); ++i) {
        for (std::size_t q = 0; q < pos.window.size(); ++q) {
          Exponent expected = pos.piles[i][q];
          for (const auto& p : mv.parts) {
            if (p.pile != i) continue;
            if (q == mv.prime_index) expected -= p.divide;
            if (auto it = p.increments.find(q); it != p.increments.end()) expected += it->second;
          }
          EXPECT_EQ(next.piles[i][q], expected);
        }
      }
    }
  }
}

TEST(CoreProperties, SinglePrimeWindowIsPureDecrement) {
  const auto pos = new_game({{{13, 3}}}, kMultivision);
  ASSERT_EQ(pos.window.size(), 1u);
  const auto moves = enumerate_moves_capped(pos, kMultivision, 5);
  ASSERT_EQ(moves.size(), 1u);
  EXPECT_TRUE(moves[0].parts[0].increments.empty());
}

}  // namespace
}  // namespace multivision
