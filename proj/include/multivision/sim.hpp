#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "multivision/core.hpp"

namespace multivision {

enum class Player { kI, kII };

std::string_view player_name(Player p);
Player other_player(Player p);

struct OptimalAgent {
  friend bool operator==(const OptimalAgent&, const OptimalAgent&) = default;
};
struct RandomCappedAgent {
  std::uint64_t cap = 1;
  std::uint64_t seed = 0;
  friend bool operator==(const RandomCappedAgent&, const RandomCappedAgent&) = default;
};
struct DelayerAgent {
  Exponent r = 1;
  std::uint64_t cap = 1;
  std::uint64_t seed = 0;
  friend bool operator==(const DelayerAgent&, const DelayerAgent&) = default;
};
struct TopDecrementerAgent {
  friend bool operator==(const TopDecrementerAgent&, const TopDecrementerAgent&) = default;
};
// Plays the listed moves in order, legal or not; used to replay or to probe
// the harness.
struct ScriptedAgent {
  std::vector<Move> moves;
  friend bool operator==(const ScriptedAgent&, const ScriptedAgent&) = default;
};

// Optimal plays the winning move and, from a P-position, the minimal move.
// Delayer stalls with delay_move(r) while possible, else moves at random.
using AgentSpec = std::variant<OptimalAgent, RandomCappedAgent, DelayerAgent,
                               TopDecrementerAgent, ScriptedAgent>;

std::string describe_agent(const AgentSpec& spec);

// Parses "optimal", "random[:cap]", "delayer[:r[:cap]]", "top".
AgentSpec parse_agent(std::string_view text, std::uint64_t seed);

class Agent {
 public:
  Agent(AgentSpec spec, std::uint64_t game_seed);

  Move choose(const Position& pos, const GameConfig& config);
  const AgentSpec& spec() const noexcept { return spec_; }

 private:
  Move random_capped(const Position& pos, const GameConfig& config, std::uint64_t cap);

  AgentSpec spec_;
  std::mt19937_64 rng_;
  std::size_t scripted_next_ = 0;
};

struct TranscriptEntry {
  Player mover = Player::kI;
  Move move;
  LexKey key_after;

  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

struct Transcript {
  Position start;
  std::uint64_t power = 2;
  std::vector<TranscriptEntry> moves;
  std::optional<Player> winner;
  bool truncated = false;

  std::size_t length() const noexcept { return moves.size(); }

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

// Replays the transcript from its start. Throws GameError on an illegal entry.
Position final_position(const Transcript& t);

// Alternating play starting with agent_i. Stops at a terminal position
// (winner = last mover) or after max_moves (truncated, no winner). Throws
// GameError("agent-returned-illegal-move") naming the offending agent.
Transcript play_game(const Position& start, std::uint64_t power, const AgentSpec& agent_i,
                     const AgentSpec& agent_ii, std::uint64_t max_moves, std::uint64_t seed);

struct BatchConfig {
  std::vector<Position> starts;
  std::vector<std::pair<AgentSpec, AgentSpec>> pairings;
  std::vector<std::uint64_t> seeds;
  std::uint64_t power = 2;
  std::uint64_t max_moves = 10'000;
};

struct BatchSummary {
  std::uint64_t games = 0;
  std::uint64_t wins_i = 0;
  std::uint64_t wins_ii = 0;
  std::uint64_t truncations = 0;
  std::uint64_t total_length = 0;
  std::uint64_t max_length = 0;
  std::vector<std::string> violations;

  double mean_length() const noexcept {
    return games == 0 ? 0.0 : static_cast<double>(total_length) / static_cast<double>(games);
  }

  void merge(const BatchSummary& other);
  void record(const Transcript& t);

  friend bool operator==(const BatchSummary&, const BatchSummary&) = default;
};

// Invariant violations of one finished play, as human-readable lines.
std::vector<std::string> check_transcript(const Transcript& t, const AgentSpec& agent_i,
                                          const AgentSpec& agent_ii);

BatchSummary run_batch(const BatchConfig& config);

}  // namespace multivision
