#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "multivision/exponent.hpp"

namespace multivision {

// Domain failure carrying a stable machine-readable reason code
// ("non-prime-base", "insufficient-exponent", ...).
class GameError : public std::runtime_error {
 public:
  GameError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

// Ascending run of consecutive primes p_j < ... < p_{j+k}, fixed for the
// lifetime of a game. An empty window is the sentinel for M = 1.
class PrimeWindow {
 public:
  PrimeWindow() = default;

  // Validates primality and strict increase. Consecutiveness is not required
  // here so that hand-built windows (tests, oracle grids) stay possible.
  static PrimeWindow make(std::vector<std::uint64_t> primes);

  const std::vector<std::uint64_t>& primes() const noexcept { return primes_; }
  std::size_t size() const noexcept { return primes_.size(); }
  bool empty() const noexcept { return primes_.empty(); }
  std::uint64_t operator[](std::size_t i) const { return primes_.at(i); }

  // Index of p_{j+k}. Undefined for the empty window.
  std::size_t top_index() const noexcept { return primes_.size() - 1; }

  std::optional<std::size_t> index_of(std::uint64_t prime) const;

  friend bool operator==(const PrimeWindow&, const PrimeWindow&) = default;

 private:
  std::vector<std::uint64_t> primes_;
};

struct GameConfig {
  // K of K-multivision; 2 is plain multivision.
  std::uint64_t power = 2;
};

void validate_config(const GameConfig& config);

// m piles, each an exponent vector aligned with the window.
struct Position {
  PrimeWindow window;
  std::vector<ExponentVec> piles;

  // Checks shape and nonnegativity; throws GameError("bad-position").
  static Position from_exponents(PrimeWindow window,
                                 std::vector<ExponentVec> piles);

  std::size_t pile_count() const noexcept { return piles.size(); }
  const Exponent& at(std::size_t pile, std::size_t index) const {
    return piles.at(pile).at(index);
  }

  friend bool operator==(const Position&, const Position&) = default;
};

struct PrimePower {
  std::uint64_t prime = 0;
  Exponent exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// A natural given by its factorization; canonical form has strictly
// increasing primes and no zero exponents. The empty list is 1.
using FactoredNatural = std::vector<PrimePower>;

// One divided pile of a (K-)move: exponent of the chosen prime drops by
// `divide`, and each listed later prime gains its increment. Zero increments
// are omitted so that equal moves compare equal.
struct MovePart {
  std::size_t pile = 0;
  std::uint64_t divide = 1;
  std::map<std::size_t, Exponent> increments;

  friend bool operator==(const MovePart&, const MovePart&) = default;
};

struct Move {
  std::size_t prime_index = 0;
  std::vector<MovePart> parts;

  // s = sum of the parts' divisions.
  std::uint64_t total_division() const;

  friend bool operator==(const Move&, const Move&) = default;
};

// Exponents of M_u, smallest prime first. Ordered lexicographically.
struct LexKey {
  ExponentVec exponents;

  friend bool operator==(const LexKey&, const LexKey&) = default;
};

enum class ViolationCode {
  kBadPrimeIndex,
  kBadPileIndex,
  kInsufficientExponent,
  kSOutOfRange,
  kDuplicatePile,
  kIncrementNotAfterH,
  kNonPositiveIncrement,
};

std::string_view violation_code_name(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string detail;
};

// Builds the game from pile factorizations. The window spans every prime from
// the smallest to the largest prime with positive total exponent; M = 1 gives
// the empty window and a terminal position.
Position new_game(const std::vector<FactoredNatural>& piles,
                  const GameConfig& config);

ExponentVec total_exponents(const Position& pos);

bool is_terminal(const Position& pos);

LexKey lex_key(const Position& pos);

// a strictly precedes b. Throws std::invalid_argument on a length mismatch.
bool lex_less(const LexKey& a, const LexKey& b);

std::optional<Violation> validate_move(const Position& pos, const Move& mv,
                                       const GameConfig& config);

// Returns the follower; throws GameError with the violation code name if the
// move is illegal.
Position apply_move(const Position& pos, const Move& mv,
                    const GameConfig& config);

// Every legal move whose increments are all <= cap, ordered by prime index,
// then division total, then division split over ascending piles, then
// increments lexicographically.
std::vector<Move> enumerate_moves_capped(const Position& pos,
                                         const GameConfig& config,
                                         std::uint64_t cap);

}  // namespace multivision
