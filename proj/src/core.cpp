#include "multivision/core.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "multivision/primes.hpp"

namespace multivision {
namespace {

// Upper bound on window length accepted by new_game; guards against inputs
// like {2:1, 1000000007:1} that would span tens of millions of primes.
constexpr std::size_t kMaxWindowPrimes = std::size_t{1} << 20;

Violation violation(ViolationCode code, std::string detail) {
  return Violation{code, std::move(detail)};
}

}  // namespace

PrimeWindow PrimeWindow::make(std::vector<std::uint64_t> primes) {
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (!is_prime(primes[i])) {
      throw GameError("non-prime-base",
                      std::to_string(primes[i]) + " is not prime");
    }
    if (i > 0 && primes[i] <= primes[i - 1]) {
      throw GameError("bad-window", "window primes must be strictly increasing");
    }
  }
  PrimeWindow w;
  w.primes_ = std::move(primes);
  return w;
}

std::optional<std::size_t> PrimeWindow::index_of(std::uint64_t prime) const {
  auto it = std::lower_bound(primes_.begin(), primes_.end(), prime);
  if (it == primes_.end() || *it != prime) return std::nullopt;
  return static_cast<std::size_t>(it - primes_.begin());
}

void validate_config(const GameConfig& config) {
  if (config.power < 2) {
    throw GameError("bad-config", "K must be at least 2, got " +
                                      std::to_string(config.power));
  }
}

Position Position::from_exponents(PrimeWindow window,
                                  std::vector<ExponentVec> piles) {
  if (piles.empty()) throw GameError("empty-pile-list", "a game needs at least one pile");
  for (std::size_t i = 0; i < piles.size(); ++i) {
    if (piles[i].size() != window.size()) {
      throw GameError("bad-position", "pile " + std::to_string(i) +
                                          " length does not match window");
    }
    for (const auto& e : piles[i]) {
      if (e < 0) throw GameError("negative-exponent", "exponents must be nonnegative");
    }
  }
  return Position{std::move(window), std::move(piles)};
}

std::uint64_t Move::total_division() const {
  std::uint64_t s = 0;
  for (const auto& part : parts) s += part.divide;
  return s;
}

std::string_view violation_code_name(ViolationCode code) {
  switch (code) {
    case ViolationCode::kBadPrimeIndex: return "bad-prime-index";
    case ViolationCode::kBadPileIndex: return "bad-pile-index";
    case ViolationCode::kInsufficientExponent: return "insufficient-exponent";
    case ViolationCode::kSOutOfRange: return "s-out-of-range";
    case ViolationCode::kDuplicatePile: return "duplicate-pile";
    case ViolationCode::kIncrementNotAfterH: return "increment-not-after-h";
    case ViolationCode::kNonPositiveIncrement: return "non-positive-increment";
  }
  return "unknown";
}

Position new_game(const std::vector<FactoredNatural>& piles,
                  const GameConfig& config) {
  validate_config(config);
  if (piles.empty()) throw GameError("empty-pile-list", "a game needs at least one pile");

  std::map<std::uint64_t, Exponent> totals;
  for (const auto& pile : piles) {
    std::set<std::uint64_t> seen;
    for (const auto& [prime, exponent] : pile) {
      if (!is_prime(prime)) {
        throw GameError("non-prime-base", std::to_string(prime) + " is not prime");
      }
      if (exponent < 0) {
        throw GameError("negative-exponent", "exponent of " + std::to_string(prime) +
                                                 " is negative");
      }
      if (!seen.insert(prime).second) {
        throw GameError("duplicate-base", std::to_string(prime) +
                                              " listed twice in one pile");
      }
      if (exponent > 0) totals[prime] += exponent;
    }
  }

  PrimeWindow window;
  if (!totals.empty()) {
    std::vector<std::uint64_t> primes;
    try {
      primes = primes_between(totals.begin()->first, totals.rbegin()->first,
                              kMaxWindowPrimes);
    } catch (const std::length_error& e) {
      throw GameError("window-too-large", e.what());
    }
    window = PrimeWindow::make(std::move(primes));
  }

  std::vector<ExponentVec> rows;
  rows.reserve(piles.size());
  for (const auto& pile : piles) {
    ExponentVec row(window.size());
    for (const auto& [prime, exponent] : pile) {
      if (exponent == 0) continue;
      row[*window.index_of(prime)] = exponent;
    }
    rows.push_back(std::move(row));
  }
  return Position{std::move(window), std::move(rows)};
}

ExponentVec total_exponents(const Position& pos) {
  ExponentVec totals(pos.window.size());
  for (const auto& pile : pos.piles) {
    for (std::size_t i = 0; i < pile.size(); ++i) totals[i] += pile[i];
  }
  return totals;
}

bool is_terminal(const Position& pos) {
  return std::all_of(pos.piles.begin(), pos.piles.end(), [](const ExponentVec& pile) {
    return std::all_of(pile.begin(), pile.end(), [](const Exponent& e) { return e == 0; });
  });
}

LexKey lex_key(const Position& pos) { return LexKey{total_exponents(pos)}; }

bool lex_less(const LexKey& a, const LexKey& b) {
  if (a.exponents.size() != b.exponents.size()) {
    throw std::invalid_argument("lexicographic keys of different length");
  }
  for (std::size_t i = 0; i < a.exponents.size(); ++i) {
    if (a.exponents[i] != b.exponents[i]) return a.exponents[i] < b.exponents[i];
  }
  return false;
}

std::optional<Violation> validate_move(const Position& pos, const Move& mv,
                                       const GameConfig& config) {
  validate_config(config);
  const std::size_t h = mv.prime_index;
  if (h >= pos.window.size()) {
    return violation(ViolationCode::kBadPrimeIndex,
                     "prime index " + std::to_string(h) + " outside window of " +
                         std::to_string(pos.window.size()));
  }
  if (mv.parts.empty()) {
    return violation(ViolationCode::kSOutOfRange, "move divides nothing (s = 0)");
  }

  std::set<std::size_t> piles_seen;
  std::uint64_t s = 0;
  for (const auto& part : mv.parts) {
    if (part.pile >= pos.pile_count()) {
      return violation(ViolationCode::kBadPileIndex,
                       "pile " + std::to_string(part.pile) + " does not exist");
    }
    if (!piles_seen.insert(part.pile).second) {
      return violation(ViolationCode::kDuplicatePile,
                       "pile " + std::to_string(part.pile) + " selected twice");
    }
    if (part.divide == 0 || part.divide >= config.power) {
      return violation(ViolationCode::kSOutOfRange,
                       "each part must divide by p^s_i with 1 <= s_i < K");
    }
    s += part.divide;
    if (s >= config.power) {
      return violation(ViolationCode::kSOutOfRange,
                       "total division s must satisfy 1 <= s < K = " +
                           std::to_string(config.power));
    }
    for (const auto& [q, t] : part.increments) {
      if (q <= h || q >= pos.window.size()) {
        return violation(ViolationCode::kIncrementNotAfterH,
                         "increment at index " + std::to_string(q) +
                             " is not after prime index " + std::to_string(h));
      }
      if (t <= 0) {
        return violation(ViolationCode::kNonPositiveIncrement,
                         "increments must be positive; omit zero increments");
      }
    }
    if (pos.piles[part.pile][h] < part.divide) {
      std::ostringstream os;
      os << "pile " << part.pile << " has exponent " << pos.piles[part.pile][h]
         << " at prime " << pos.window[h] << ", cannot divide by "
         << pos.window[h] << "^" << part.divide;
      return violation(ViolationCode::kInsufficientExponent, os.str());
    }
  }
  return std::nullopt;
}

Position apply_move(const Position& pos, const Move& mv, const GameConfig& config) {
  if (auto v = validate_move(pos, mv, config)) {
    throw GameError(std::string(violation_code_name(v->code)), v->detail);
  }
  Position next = pos;
  for (const auto& part : mv.parts) {
    auto& row = next.piles[part.pile];
    row[mv.prime_index] -= part.divide;
    for (const auto& [q, t] : part.increments) row[q] += t;
  }
  return next;
}

namespace {

// Splits s over piles in ascending pile order, each share bounded by the
// pile's exponent at h. Emits split vectors in lexicographic order.
void enumerate_splits(const Position& pos, std::size_t h, std::size_t pile,
                      std::uint64_t remaining, std::vector<std::uint64_t>& split,
                      std::vector<std::vector<std::uint64_t>>& out) {
  if (pile == pos.pile_count()) {
    if (remaining == 0) out.push_back(split);
    return;
  }
  const Exponent& available = pos.piles[pile][h];
  std::uint64_t limit = remaining;
  if (available < limit) limit = available.convert_to<std::uint64_t>();
  for (std::uint64_t share = 0; share <= limit; ++share) {
    split[pile] = share;
    enumerate_splits(pos, h, pile + 1, remaining - share, split, out);
  }
  split[pile] = 0;
}

}  // namespace

std::vector<Move> enumerate_moves_capped(const Position& pos, const GameConfig& config,
                                         std::uint64_t cap) {
  validate_config(config);
  std::vector<Move> moves;
  const std::size_t width = pos.window.size();
  for (std::size_t h = 0; h < width; ++h) {
    const std::size_t later = width - h - 1;
    for (std::uint64_t s = 1; s < config.power; ++s) {
      std::vector<std::vector<std::uint64_t>> splits;
      std::vector<std::uint64_t> split(pos.pile_count(), 0);
      enumerate_splits(pos, h, 0, s, split, splits);
      for (const auto& sp : splits) {
        Move base{h, {}};
        for (std::size_t i = 0; i < sp.size(); ++i) {
          if (sp[i] > 0) base.parts.push_back(MovePart{i, sp[i], {}});
        }
        // Odometer over (part, later prime) digits, first digit slowest.
        const std::size_t digits = later * base.parts.size();
        std::vector<std::uint64_t> odo(digits, 0);
        while (true) {
          Move mv = base;
          for (std::size_t d = 0; d < digits; ++d) {
            if (odo[d] == 0) continue;
            mv.parts[d / later].increments[h + 1 + d % later] = odo[d];
          }
          moves.push_back(std::move(mv));
          std::size_t d = digits;
          while (d > 0 && odo[d - 1] == cap) odo[--d] = 0;
          if (d == 0) break;
          ++odo[d - 1];
        }
      }
    }
  }
  return moves;
}

}  // namespace multivision
