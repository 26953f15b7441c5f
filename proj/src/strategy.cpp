#include "multivision/strategy.hpp"

#include <algorithm>

namespace multivision {

char classification_letter(Classification c) { return c == Classification::kP ? 'P' : 'N'; }

ResidueState residues(const Position& pos, std::uint64_t modulus) {
  validate_config(GameConfig{modulus});
  ResidueState state;
  state.modulus = modulus;
  state.total.assign(pos.window.size(), 0);
  state.per_pile.reserve(pos.pile_count());
  for (const auto& pile : pos.piles) {
    std::vector<std::uint64_t> row(pile.size());
    for (std::size_t i = 0; i < pile.size(); ++i) {
      row[i] = mod_k(pile[i], modulus);
      state.total[i] = (state.total[i] + row[i]) % modulus;
    }
    state.per_pile.push_back(std::move(row));
  }
  return state;
}

void ResidueState::apply(const Move& mv) {
  const std::uint64_t h = mv.prime_index;
  for (const auto& part : mv.parts) {
    auto& row = per_pile.at(part.pile);
    const std::uint64_t down = part.divide % modulus;
    row[h] = (row[h] + modulus - down) % modulus;
    total[h] = (total[h] + modulus - down) % modulus;
    for (const auto& [q, t] : part.increments) {
      const std::uint64_t up = mod_k(t, modulus);
      row[q] = (row[q] + up) % modulus;
      total[q] = (total[q] + up) % modulus;
    }
  }
}

Classification classify(const Position& pos, std::uint64_t modulus) {
  const auto state = residues(pos, modulus);
  const bool power = std::all_of(state.total.begin(), state.total.end(),
                                 [](std::uint64_t r) { return r == 0; });
  return power ? Classification::kP : Classification::kN;
}

std::optional<Move> winning_move(const Position& pos, std::uint64_t modulus) {
  if (is_terminal(pos)) throw GameError("called-on-terminal", "the game is already over");
  const auto state = residues(pos, modulus);
  const auto it = std::find_if(state.total.begin(), state.total.end(),
                               [](std::uint64_t r) { return r != 0; });
  if (it == state.total.end()) return std::nullopt;

  const std::size_t h = static_cast<std::size_t>(it - state.total.begin());
  // The total exponent at h is congruent to s and positive, hence >= s.
  std::uint64_t remaining = *it;
  Move mv{h, {}};
  for (std::size_t pile = 0; pile < pos.pile_count() && remaining > 0; ++pile) {
    const Exponent& have = pos.piles[pile][h];
    if (have == 0) continue;
    const std::uint64_t take =
        have < remaining ? have.convert_to<std::uint64_t>() : remaining;
    mv.parts.push_back(MovePart{pile, take, {}});
    remaining -= take;
  }
  auto& first = mv.parts.front().increments;
  for (std::size_t q = h + 1; q < state.total.size(); ++q) {
    const std::uint64_t fix = (modulus - state.total[q]) % modulus;
    if (fix != 0) first[q] = fix;
  }
  return mv;
}

bool can_delay(const Position& pos) {
  if (pos.window.size() < 2) return false;
  const auto totals = total_exponents(pos);
  return std::any_of(totals.begin(), totals.end() - 1,
                     [](const Exponent& e) { return e > 0; });
}

Move delay_move(const Position& pos, const Exponent& r) {
  if (r < 1) throw GameError("bad-delay", "delay length r must be positive");
  if (!can_delay(pos)) {
    throw GameError("cannot-delay", "M_u has no prime factor below the top window prime");
  }
  const auto totals = total_exponents(pos);
  const std::size_t top = pos.window.top_index();
  std::size_t i = top;
  while (totals[i - 1] == 0) --i;
  --i;
  std::size_t owner = 0;
  while (pos.piles[owner][i] == 0) ++owner;
  return Move{i, {MovePart{owner, 1, {{top, r}}}}};
}

Move winning_delay_move(const Position& pos, std::uint64_t modulus, const Exponent& r) {
  if (r < 1) throw GameError("bad-delay", "delay length r must be positive");
  auto mv = winning_move(pos, modulus);
  if (!mv) throw GameError("called-on-P-position", "no winning move from a P-position");
  const std::size_t top = pos.window.top_index();
  if (mv->prime_index == top) return *mv;
  const Exponent pump = modulus * ((r + modulus - 1) / modulus);
  mv->parts.front().increments[top] += pump;
  return *mv;
}

Move minimal_move(const Position& pos) {
  for (std::size_t h = 0; h < pos.window.size(); ++h) {
    for (std::size_t pile = 0; pile < pos.pile_count(); ++pile) {
      if (pos.piles[pile][h] > 0) return Move{h, {MovePart{pile, 1, {}}}};
    }
  }
  throw GameError("called-on-terminal", "the game is already over");
}

}  // namespace multivision
