#include "multivision/service.hpp"

#include <cassert>
#include <fstream>
#include <random>
#include <sstream>

namespace multivision {
namespace {

using Clock = std::chrono::system_clock;

std::string random_id() {
  std::random_device rd;
  std::ostringstream os;
  os << std::hex;
  for (int i = 0; i < 4; ++i) {
    const std::uint32_t word = rd();
    for (int b = 0; b < 8; ++b) os << ((word >> (28 - 4 * b)) & 0xF);
  }
  return os.str();
}

std::string millis(Clock::time_point t) {
  return std::to_string(
      std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count());
}

Clock::time_point from_millis(const Json& j, std::string_view name) {
  return Clock::time_point(std::chrono::milliseconds(
      static_cast<std::chrono::milliseconds::rep>(u64_from_json(j, name))));
}

Json side_json(const std::optional<Player>& p) {
  return p ? Json(std::string(player_name(*p))) : Json("none");
}

std::optional<Player> side_from_json(const Json& j) {
  if (j == "I") return Player::kI;
  if (j == "II") return Player::kII;
  if (j == "none") return std::nullopt;
  throw GameError("malformed-document", "engine_side must be \"I\", \"II\" or \"none\"");
}

void apply_to_session(GameSession& s, const Move& mv) {
  const GameConfig config{s.power};
  Position next = apply_move(s.position, mv, config);
  LexKey key = lex_key(next);
  s.history.moves.push_back(TranscriptEntry{s.whose_turn, mv, std::move(key)});
  s.position = std::move(next);
  if (is_terminal(s.position)) s.history.winner = s.whose_turn;
  s.whose_turn = other_player(s.whose_turn);
  s.updated = Clock::now();
#ifndef NDEBUG
  assert(final_position(s.history) == s.position);
#endif
}

Json snapshot_json(const GameSession& s) {
  Json moves = Json::array();
  for (const auto& e : s.history.moves) moves.push_back(move_to_json(e.move));
  return Json{{"id", s.id},
              {"K", std::to_string(s.power)},
              {"engine_side", side_json(s.engine_side)},
              {"start", position_to_json(s.history.start)},
              {"moves", std::move(moves)},
              {"created", millis(s.created)},
              {"updated", millis(s.updated)}};
}

}  // namespace

int status_for_error(const std::string& code) {
  if (code == "unknown-game") return 404;
  if (code == "not-your-turn" || code == "not-engine-turn" || code == "game-over") return 409;
  if (code == "malformed-document" || code == "bad-integer" || code == "unknown-version") return 400;
  return 422;
}

GameService::GameService(std::optional<std::filesystem::path> snapshot_dir)
    : snapshot_dir_(std::move(snapshot_dir)) {
  if (snapshot_dir_) std::filesystem::create_directories(*snapshot_dir_);
}

std::shared_ptr<GameService::Slot> GameService::find(const std::string& id) const {
  std::shared_lock lock(map_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw GameError("unknown-game", "no game with id '" + id + "'");
  return it->second;
}

std::size_t GameService::size() const {
  std::shared_lock lock(map_mutex_);
  return sessions_.size();
}

void GameService::snapshot(const GameSession& s) const {
  if (!snapshot_dir_) return;
  std::ofstream out(*snapshot_dir_ / (s.id + ".jsonl"), std::ios::app);
  out << make_envelope("session_snapshot", snapshot_json(s)).dump() << '\n';
}

GameSession GameService::create_game(const std::vector<FactoredNatural>& piles,
                                     std::uint64_t power, std::optional<Player> engine_side) {
  auto slot = std::make_shared<Slot>();
  GameSession& s = slot->session;
  s.power = power;
  s.position = new_game(piles, GameConfig{power});
  s.history = Transcript{s.position, power, {}, std::nullopt, false};
  s.engine_side = engine_side;
  s.created = s.updated = Clock::now();
  {
    std::unique_lock lock(map_mutex_);
    do {
      s.id = random_id();
    } while (sessions_.count(s.id));
    sessions_.emplace(s.id, slot);
  }
  snapshot(s);
  return s;
}

GameSession GameService::get(const std::string& id) const {
  auto slot = find(id);
  std::lock_guard lock(slot->mutex);
  return slot->session;
}

GameSession GameService::submit_move(const std::string& id, const Move& mv) {
  auto slot = find(id);
  std::lock_guard lock(slot->mutex);
  GameSession& s = slot->session;
  if (is_terminal(s.position)) throw GameError("game-over", "the game is over");
  if (s.engine_side == s.whose_turn) {
    throw GameError("not-your-turn", "it is the engine's turn");
  }
  GameSession next = s;
  apply_to_session(next, mv);
  s = std::move(next);
  snapshot(s);
  return s;
}

EngineReply GameService::engine_reply(const std::string& id,
                                      const std::optional<Exponent>& delay_r) {
  if (delay_r && *delay_r < 1) throw GameError("bad-delay", "delay_r must be positive");
  auto slot = find(id);
  std::lock_guard lock(slot->mutex);
  GameSession& s = slot->session;
  if (is_terminal(s.position)) throw GameError("game-over", "the game is over");
  if (s.engine_side && s.engine_side != s.whose_turn) {
    throw GameError("not-engine-turn", "it is not the engine's turn");
  }

  Move mv;
  if (classify(s.position, s.power) == Classification::kN) {
    mv = delay_r ? winning_delay_move(s.position, s.power, *delay_r)
                 : *winning_move(s.position, s.power);
  } else if (can_delay(s.position)) {
    mv = delay_move(s.position, delay_r.value_or(Exponent(kDefaultStallR)));
  } else {
    mv = minimal_move(s.position);
  }
  GameSession next = s;
  apply_to_session(next, mv);
  s = std::move(next);
  snapshot(s);
  return EngineReply{s, std::move(mv)};
}

HintView GameService::hint(const std::string& id) const {
  const GameSession s = get(id);
  HintView h;
  h.classification = classify(s.position, s.power);
  h.can_delay = can_delay(s.position);
  if (!is_terminal(s.position)) h.move = winning_move(s.position, s.power);
  return h;
}

std::size_t GameService::recover() {
  if (!snapshot_dir_) return 0;
  std::size_t loaded = 0;
  for (const auto& entry : std::filesystem::directory_iterator(*snapshot_dir_)) {
    if (entry.path().extension() != ".jsonl") continue;
    std::ifstream in(entry.path());
    std::string line, last;
    while (std::getline(in, line)) {
      if (!line.empty()) last = line;
    }
    if (last.empty()) continue;
    auto [kind, payload] = open_envelope(last);
    if (kind != "session_snapshot") continue;

    auto slot = std::make_shared<Slot>();
    GameSession& s = slot->session;
    s.id = payload.at("id").get<std::string>();
    s.power = u64_from_json(payload, "K");
    s.engine_side = side_from_json(payload.at("engine_side"));
    s.position = position_from_json(payload.at("start"));
    s.history = Transcript{s.position, s.power, {}, std::nullopt, false};
    for (const auto& m : payload.at("moves")) apply_to_session(s, move_from_json(m));
    s.created = from_millis(payload, "created");
    s.updated = from_millis(payload, "updated");

    std::unique_lock lock(map_mutex_);
    sessions_[s.id] = slot;
    ++loaded;
  }
  return loaded;
}

Json session_view_json(const GameSession& s) {
  const auto state = residues(s.position, s.power);
  Json residue_row = Json::array();
  for (auto r : state.total) residue_row.push_back(std::to_string(r));
  Json totals = Json::array();
  for (const auto& t : total_exponents(s.position)) totals.push_back(integer_json(t));

  Json moves = Json::array();
  Position replay = s.history.start;
  for (const auto& e : s.history.moves) {
    moves.push_back(Json{{"mover", std::string(player_name(e.mover))},
                         {"move", move_to_json(e.move)},
                         {"text", format_move_text(replay, e.move)},
                         {"key", key_to_json(e.key_after)}});
    replay = apply_move(replay, e.move, GameConfig{s.power});
  }

  const bool terminal = is_terminal(s.position);
  return Json{{"id", s.id},
              {"K", std::to_string(s.power)},
              {"start", position_to_json(s.history.start)},
              {"position", position_to_json(s.position)},
              {"totals", std::move(totals)},
              {"residues", std::move(residue_row)},
              {"classification", std::string(1, classification_letter(classify(s.position, s.power)))},
              {"is_terminal", terminal},
              {"can_delay", can_delay(s.position)},
              {"lex_key", key_to_json(lex_key(s.position))},
              {"whose_turn", std::string(player_name(s.whose_turn))},
              {"engine_side", side_json(s.engine_side)},
              {"winner", s.history.winner ? Json(std::string(player_name(*s.history.winner)))
                                          : Json(nullptr)},
              {"moves", std::move(moves)},
              {"created", millis(s.created)},
              {"updated", millis(s.updated)}};
}

Json hint_json(const GameSession& s, const HintView& h) {
  return Json{{"classification", std::string(1, classification_letter(h.classification))},
              {"move", h.move ? move_to_json(*h.move) : Json(nullptr)},
              {"text", h.move ? Json(format_move_text(s.position, *h.move)) : Json(nullptr)},
              {"can_delay", h.can_delay}};
}

}  // namespace multivision
