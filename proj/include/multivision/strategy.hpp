#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "multivision/core.hpp"

namespace multivision {

// Exponents reduced mod K: one vector per pile plus their sum for M_u.
struct ResidueState {
  std::uint64_t modulus = 2;
  std::vector<std::vector<std::uint64_t>> per_pile;
  std::vector<std::uint64_t> total;

  // Folds a legal move into the residues without touching the full matrix.
  // The result always equals residues(apply_move(pos, mv), K).
  void apply(const Move& mv);

  friend bool operator==(const ResidueState&, const ResidueState&) = default;
};

enum class Classification { kP, kN };

char classification_letter(Classification c);

ResidueState residues(const Position& pos, std::uint64_t modulus);

// P iff M_u is a K-th power, i.e. every total exponent is divisible by K.
Classification classify(const Position& pos, std::uint64_t modulus);

// Move to a K-th-power position, or nullopt from a P-position. Divides the
// leftmost nonzero residue s at its prime, greedily over ascending piles, and
// puts the least residue-correcting increments on the first divided pile.
// Throws GameError("called-on-terminal").
std::optional<Move> winning_move(const Position& pos, std::uint64_t modulus);

// True while M_u has a prime factor below the top window prime.
bool can_delay(const Position& pos);

// Decrements the largest below-top index with positive total exponent (lowest
// owning pile) and raises the top prime by r, so at least r more moves follow.
// Throws GameError("cannot-delay").
Move delay_move(const Position& pos, const Exponent& r);

// winning_move with the top increment pumped by K * ceil(r / K); identical to
// winning_move when the winning prime is already the top one.
Move winning_delay_move(const Position& pos, std::uint64_t modulus, const Exponent& r);

// Smallest legal step: divide the lowest pile owning the leftmost positive
// prime once, no increments. What the engine plays when nothing better exists.
// Throws GameError("called-on-terminal").
Move minimal_move(const Position& pos);

}  // namespace multivision
