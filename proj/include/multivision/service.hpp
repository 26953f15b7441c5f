#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "multivision/codec.hpp"
#include "multivision/sim.hpp"
#include "multivision/strategy.hpp"

namespace httplib {
class Server;
}

namespace multivision {

struct GameSession {
  std::string id;
  std::uint64_t power = 2;
  Position position;
  Transcript history;  // start + every applied move
  Player whose_turn = Player::kI;
  std::optional<Player> engine_side;
  std::chrono::system_clock::time_point created;
  std::chrono::system_clock::time_point updated;
};

struct HintView {
  Classification classification = Classification::kP;
  std::optional<Move> move;
  bool can_delay = false;
};

struct EngineReply {
  GameSession session;
  Move move;
};

// HTTP status chosen for a GameError code raised by the service.
int status_for_error(const std::string& code);

// In-memory game sessions. Requests on different sessions run concurrently;
// requests on one session are serialized. A failed request never mutates.
class GameService {
 public:
  // Delay length the engine uses to stall from a lost position when the
  // request does not name one.
  static constexpr std::uint64_t kDefaultStallR = 10;

  // With a snapshot directory, every mutation appends the session to
  // <dir>/<id>.jsonl.
  explicit GameService(std::optional<std::filesystem::path> snapshot_dir = std::nullopt);

  GameSession create_game(const std::vector<FactoredNatural>& piles, std::uint64_t power,
                          std::optional<Player> engine_side);
  GameSession get(const std::string& id) const;
  GameSession submit_move(const std::string& id, const Move& mv);
  EngineReply engine_reply(const std::string& id, const std::optional<Exponent>& delay_r);
  HintView hint(const std::string& id) const;

  // Reloads every session found in the snapshot directory; returns the count.
  std::size_t recover();

  std::size_t size() const;

 private:
  struct Slot {
    mutable std::mutex mutex;
    GameSession session;
  };

  std::shared_ptr<Slot> find(const std::string& id) const;
  void snapshot(const GameSession& s) const;

  std::optional<std::filesystem::path> snapshot_dir_;
  mutable std::shared_mutex map_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
};

// Wire payloads.
Json session_view_json(const GameSession& s);
Json hint_json(const GameSession& s, const HintView& h);

// Routes: POST /games, GET /games/{id}, POST /games/{id}/moves,
// POST /games/{id}/engine-move, GET /games/{id}/hint.
void mount_routes(httplib::Server& server, GameService& service);

}  // namespace multivision
