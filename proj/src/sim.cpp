#include "multivision/sim.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "multivision/strategy.hpp"

namespace multivision {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t agent_seed(const AgentSpec& spec) {
  if (auto* a = std::get_if<RandomCappedAgent>(&spec)) return a->seed;
  if (auto* a = std::get_if<DelayerAgent>(&spec)) return a->seed;
  return 0;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw GameError("bad-agent", "bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return v;
}

Move top_decrement(const Position& pos) {
  for (std::size_t h = pos.window.size(); h-- > 0;) {
    for (std::size_t pile = 0; pile < pos.pile_count(); ++pile) {
      if (pos.piles[pile][h] > 0) return Move{h, {MovePart{pile, 1, {}}}};
    }
  }
  throw GameError("called-on-terminal", "the game is already over");
}

}  // namespace

std::string_view player_name(Player p) { return p == Player::kI ? "I" : "II"; }

Player other_player(Player p) { return p == Player::kI ? Player::kII : Player::kI; }

std::string describe_agent(const AgentSpec& spec) {
  std::ostringstream os;
  std::visit(
      [&](const auto& a) {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, OptimalAgent>) {
          os << "optimal";
        } else if constexpr (std::is_same_v<T, RandomCappedAgent>) {
          os << "random_capped(cap=" << a.cap << ", seed=" << a.seed << ")";
        } else if constexpr (std::is_same_v<T, DelayerAgent>) {
          os << "delayer(r=" << a.r << ", cap=" << a.cap << ", seed=" << a.seed << ")";
        } else if constexpr (std::is_same_v<T, ScriptedAgent>) {
          os << "scripted(" << a.moves.size() << " moves)";
        } else {
          os << "top_decrementer";
        }
      },
      spec);
  return os.str();
}

AgentSpec parse_agent(std::string_view text, std::uint64_t seed) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto colon = text.find(':', start);
    fields.push_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  const auto name = fields[0];
  if (name == "optimal" && fields.size() == 1) return OptimalAgent{};
  if (name == "top" && fields.size() == 1) return TopDecrementerAgent{};
  if (name == "random" && fields.size() <= 2) {
    return RandomCappedAgent{fields.size() > 1 ? parse_u64(fields[1], "cap") : 1, seed};
  }
  if (name == "delayer" && fields.size() <= 3) {
    DelayerAgent d{50, 1, seed};
    if (fields.size() > 1) {
      if (!parse_decimal(fields[1], d.r) || d.r < 1) {
        throw GameError("bad-agent", "delay r must be a positive integer");
      }
    }
    if (fields.size() > 2) d.cap = parse_u64(fields[2], "cap");
    return d;
  }
  throw GameError("bad-agent", "unknown agent '" + std::string(text) +
                                   "' (optimal | random[:cap] | delayer[:r[:cap]] | top)");
}

Agent::Agent(AgentSpec spec, std::uint64_t game_seed)
    : spec_(std::move(spec)), rng_(splitmix64(agent_seed(spec_) ^ splitmix64(game_seed))) {}

Move Agent::random_capped(const Position& pos, const GameConfig& config, std::uint64_t cap) {
  auto moves = enumerate_moves_capped(pos, config, cap);
  if (moves.empty()) throw GameError("called-on-terminal", "the game is already over");
  std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
  return std::move(moves[pick(rng_)]);
}

Move Agent::choose(const Position& pos, const GameConfig& config) {
  return std::visit(
      [&](const auto& a) -> Move {
        using T = std::decay_t<decltype(a)>;
        if constexpr (std::is_same_v<T, OptimalAgent>) {
          if (auto mv = winning_move(pos, config.power)) return *mv;
          return minimal_move(pos);
        } else if constexpr (std::is_same_v<T, RandomCappedAgent>) {
          return random_capped(pos, config, a.cap);
        } else if constexpr (std::is_same_v<T, DelayerAgent>) {
          if (can_delay(pos)) return delay_move(pos, a.r);
          return random_capped(pos, config, a.cap);
        } else if constexpr (std::is_same_v<T, ScriptedAgent>) {
          if (scripted_next_ == a.moves.size()) {
            throw GameError("script-exhausted", "scripted agent ran out of moves");
          }
          return a.moves[scripted_next_++];
        } else {
          return top_decrement(pos);
        }
      },
      spec_);
}

Position final_position(const Transcript& t) {
  Position pos = t.start;
  const GameConfig config{t.power};
  for (const auto& entry : t.moves) pos = apply_move(pos, entry.move, config);
  return pos;
}

Transcript play_game(const Position& start, std::uint64_t power, const AgentSpec& agent_i,
                     const AgentSpec& agent_ii, std::uint64_t max_moves, std::uint64_t seed) {
  if (max_moves < 1) throw GameError("bad-config", "max_moves must be at least 1");
  const GameConfig config{power};
  validate_config(config);

  Agent first(agent_i, seed);
  Agent second(agent_ii, seed ^ 0x5bd1e995ULL);
  Transcript t{start, power, {}, std::nullopt, false};
  Position pos = start;
  Player mover = Player::kI;
  while (!is_terminal(pos)) {
    if (t.moves.size() == max_moves) {
      t.truncated = true;
      return t;
    }
    Agent& agent = mover == Player::kI ? first : second;
    Move mv = agent.choose(pos, config);
    if (auto v = validate_move(pos, mv, config)) {
      throw GameError("agent-returned-illegal-move",
                      "agent " + std::string(player_name(mover)) + " (" +
                          describe_agent(agent.spec()) + "): " +
                          std::string(violation_code_name(v->code)) + ": " + v->detail);
    }
    pos = apply_move(pos, mv, config);
    t.moves.push_back(TranscriptEntry{mover, std::move(mv), lex_key(pos)});
    mover = other_player(mover);
  }
  if (!t.moves.empty()) t.winner = t.moves.back().mover;
  return t;
}

void BatchSummary::merge(const BatchSummary& other) {
  games += other.games;
  wins_i += other.wins_i;
  wins_ii += other.wins_ii;
  truncations += other.truncations;
  total_length += other.total_length;
  max_length = std::max(max_length, other.max_length);
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

void BatchSummary::record(const Transcript& t) {
  ++games;
  if (t.winner == Player::kI) ++wins_i;
  if (t.winner == Player::kII) ++wins_ii;
  if (t.truncated) ++truncations;
  total_length += t.length();
  max_length = std::max<std::uint64_t>(max_length, t.length());
}

std::vector<std::string> check_transcript(const Transcript& t, const AgentSpec& agent_i,
                                          const AgentSpec& agent_ii) {
  std::vector<std::string> out;
  const GameConfig config{t.power};
  Position pos = t.start;
  LexKey key = lex_key(pos);
  const auto start_class = classify(t.start, t.power);
  std::optional<std::size_t> first_delay_ply;
  Exponent delay_r = 0;

  for (std::size_t ply = 0; ply < t.moves.size(); ++ply) {
    const auto& entry = t.moves[ply];
    const Player expected_mover = ply % 2 == 0 ? Player::kI : Player::kII;
    if (entry.mover != expected_mover) {
      out.push_back("ply " + std::to_string(ply) + ": movers do not alternate");
    }
    const AgentSpec& spec = entry.mover == Player::kI ? agent_i : agent_ii;
    if (auto* d = std::get_if<DelayerAgent>(&spec); d && !first_delay_ply && can_delay(pos)) {
      first_delay_ply = ply;
      delay_r = d->r;
    }
    if (auto v = validate_move(pos, entry.move, config)) {
      out.push_back("ply " + std::to_string(ply) + ": illegal move: " + v->detail);
      return out;
    }
    pos = apply_move(pos, entry.move, config);
    if (lex_key(pos) != entry.key_after) {
      out.push_back("ply " + std::to_string(ply) + ": recorded key differs from replay");
    }
    if (!lex_less(entry.key_after, key)) {
      out.push_back("ply " + std::to_string(ply) + ": key did not strictly decrease");
    }
    key = entry.key_after;
  }

  if (t.winner) {
    if (!is_terminal(pos)) out.push_back("winner recorded but final position is not terminal");
    if (t.moves.empty() || t.moves.back().mover != *t.winner) {
      out.push_back("winner is not the last mover");
    }
    if (std::holds_alternative<OptimalAgent>(agent_ii) && start_class == Classification::kP &&
        *t.winner != Player::kII) {
      out.push_back("optimal II lost from a P start");
    }
    if (std::holds_alternative<OptimalAgent>(agent_i) && start_class == Classification::kN &&
        *t.winner != Player::kI) {
      out.push_back("optimal I lost from an N start");
    }
    if (first_delay_ply) {
      // Each move lowers the top exponent by at most K-1.
      const Exponent need = (delay_r + t.power - 2) / (t.power - 1);
      const Exponent after = t.moves.size() - *first_delay_ply - 1;
      if (after < need) {
        out.push_back("delay at ply " + std::to_string(*first_delay_ply) + " was followed by only " +
                      after.str() + " moves, expected >= " + need.str());
      }
    }
  } else if (!t.truncated && !t.moves.empty()) {
    out.push_back("play ended without winner or truncation");
  }
  return out;
}

BatchSummary run_batch(const BatchConfig& config) {
  BatchSummary summary;
  for (const auto& start : config.starts) {
    for (const auto& [agent_i, agent_ii] : config.pairings) {
      for (std::uint64_t seed : config.seeds) {
        const auto t = play_game(start, config.power, agent_i, agent_ii, config.max_moves, seed);
        summary.record(t);
        for (auto& v : check_transcript(t, agent_i, agent_ii)) {
          summary.violations.push_back(describe_agent(agent_i) + " vs " +
                                       describe_agent(agent_ii) + " seed " +
                                       std::to_string(seed) + ": " + v);
        }
      }
    }
  }
  return summary;
}

}  // namespace multivision
