#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "multivision/core.hpp"
#include "multivision/strategy.hpp"

namespace multivision {

// Pile matrix used as a memo key. With pile canonicalization on, rows are
// sorted, since permuting piles does not change who wins.
using PileMatrix = std::vector<ExponentVec>;
using OracleLabels = std::map<PileMatrix, Classification>;

struct SolverOptions {
  bool canonicalize_piles = true;
  // Hard ceiling on memo size; exceeding it throws std::runtime_error.
  std::size_t max_positions = 20'000'000;
};

// Backward induction over the increment-capped game: terminal is P, a
// position is N iff some capped follower is P. Labels every position reachable
// from the starts it is given. Never consults classify().
class CappedSolver {
 public:
  CappedSolver(PrimeWindow window, GameConfig config, std::uint64_t cap,
               SolverOptions options = {});

  Classification solve(const Position& start);

  std::optional<Classification> lookup(const Position& pos) const;

  const OracleLabels& labels() const noexcept { return labels_; }
  const PrimeWindow& window() const noexcept { return window_; }

  PileMatrix key(const Position& pos) const;

 private:
  PrimeWindow window_;
  GameConfig config_;
  std::uint64_t cap_;
  SolverOptions options_;
  OracleLabels labels_;
};

// Labels of everything reachable from start, keyed by canonical pile matrix.
OracleLabels solve_capped(const Position& start, std::uint64_t modulus, std::uint64_t cap);

struct OracleGrid {
  std::vector<std::uint64_t> primes;
  std::size_t max_piles = 1;
  std::uint64_t max_exponent = 0;
  std::uint64_t power = 2;
  std::uint64_t cap = 1;

  friend bool operator==(const OracleGrid&, const OracleGrid&) = default;
};

struct OracleMismatch {
  Position position;
  Classification oracle;
  Classification closed_form;

  friend bool operator==(const OracleMismatch&, const OracleMismatch&) = default;
};

struct OracleReport {
  OracleGrid grid;
  std::uint64_t positions_labeled = 0;
  std::vector<OracleMismatch> mismatches;
  std::chrono::microseconds elapsed{0};

  bool holds() const noexcept { return mismatches.empty(); }

  friend bool operator==(const OracleReport&, const OracleReport&) = default;
};

// Solves every start with 1..max_piles piles and entries in [0, max_exponent]
// and compares each oracle label against the K-th-power test.
OracleReport verify_characterization(const OracleGrid& grid, SolverOptions options = {});

// The three desk-scale grids: {2,3} x 2 piles x exp<=2 (K=2), {2,3,5} x 1
// pile x exp<=2 (K=2), {2,3} x 2 piles x exp<=3 (K=3, cap 2).
std::vector<OracleGrid> default_oracle_grids();

}  // namespace multivision
