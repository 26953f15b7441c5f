#include "multivision/service.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

#include <thread>

namespace multivision {
namespace {

std::vector<FactoredNatural> piles_of(std::string_view text) { return parse_position_text(text); }

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const GameError& e) {
    return e.code();
  }
  return "no error";
}

Move single(std::size_t h, std::size_t pile, std::map<std::size_t, Exponent> inc = {}) {
  return Move{h, {MovePart{pile, 1, std::move(inc)}}};
}

TEST(GameService, CreateExamples) {
  GameService service;
  const auto n = service.create_game(piles_of("2^1\n3^1"), 2, Player::kII);
  EXPECT_EQ(classify(n.position, 2), Classification::kN);
  EXPECT_EQ(n.whose_turn, Player::kI);
  EXPECT_EQ(n.id.size(), 32u);
  const auto view = session_view_json(n);
  EXPECT_EQ(view["classification"], "N");
  EXPECT_EQ(view["can_delay"], true);

  const auto one = service.create_game({{}}, 2, Player::kII);
  EXPECT_TRUE(is_terminal(one.position));
  EXPECT_EQ(session_view_json(one)["classification"], "P");
  EXPECT_EQ(session_view_json(one)["is_terminal"], true);

  EXPECT_EQ(error_code([&] { service.create_game({{{4, 1}}}, 2, Player::kII); }), "non-prime-base");
  EXPECT_EQ(error_code([&] { service.create_game(piles_of("2^1"), 1, Player::kII); }), "bad-config");
  EXPECT_EQ(service.size(), 2u);
  EXPECT_NE(n.id, one.id);
}

TEST(GameService, SubmitMove) {
  GameService service;
  const auto s = service.create_game(piles_of("2^1 * 3^1"), 2, Player::kII);
  const auto after = service.submit_move(s.id, single(0, 0, {{1, Exponent(1)}}));
  EXPECT_EQ(after.whose_turn, Player::kII);
  EXPECT_EQ(after.history.length(), 1u);
  EXPECT_EQ(after.position.piles, (std::vector<ExponentVec>{{0, 2}}));
  EXPECT_EQ(error_code([&] { service.submit_move(s.id, single(1, 0)); }), "not-your-turn");
  EXPECT_EQ(error_code([&] { service.submit_move("feed", single(1, 0)); }), "unknown-game");
}

TEST(GameService, IllegalMoveLeavesSessionUnchanged) {
  GameService service;
  const auto s = service.create_game(piles_of("2^1\n3^1"), 2, std::nullopt);
  const auto before = session_view_json(service.get(s.id));
  EXPECT_EQ(error_code([&] { service.submit_move(s.id, single(0, 1)); }), "insufficient-exponent");
  EXPECT_EQ(error_code([&] { service.submit_move(s.id, Move{0, {MovePart{0, 2, {}}}}); }),
            "s-out-of-range");
  EXPECT_EQ(error_code([&] { service.submit_move(s.id, single(5, 0)); }), "bad-prime-index");
  EXPECT_EQ(session_view_json(service.get(s.id)), before);
}

TEST(GameService, GameOver) {
  GameService service;
  const auto s = service.create_game(piles_of("3^1"), 2, std::nullopt);
  const auto done = service.submit_move(s.id, single(0, 0));
  EXPECT_TRUE(is_terminal(done.position));
  ASSERT_TRUE(done.history.winner);
  EXPECT_EQ(*done.history.winner, Player::kI);
  EXPECT_EQ(session_view_json(done)["winner"], "I");
  EXPECT_EQ(error_code([&] { service.submit_move(s.id, single(0, 0)); }), "game-over");
  EXPECT_EQ(error_code([&] { service.engine_reply(s.id, std::nullopt); }), "game-over");
}

TEST(GameService, EngineWinsFromSix) {
  GameService service;
  const auto s = service.create_game(piles_of("2^1 * 3^1"), 2, Player::kI);
  EXPECT_EQ(error_code([&] { service.submit_move(s.id, single(0, 0)); }), "not-your-turn");
  const auto reply = service.engine_reply(s.id, std::nullopt);
  EXPECT_EQ(reply.move, single(0, 0, {{1, Exponent(1)}}));
  EXPECT_EQ(reply.session.position.piles, (std::vector<ExponentVec>{{0, 2}}));
  EXPECT_EQ(classify(reply.session.position, 2), Classification::kP);
  EXPECT_EQ(error_code([&] { service.engine_reply(s.id, std::nullopt); }), "not-engine-turn");
}

TEST(GameService, EngineStallsFromP) {
  GameService service;
  const auto s = service.create_game(piles_of("2^2"), 2, Player::kI);
  ASSERT_TRUE(can_delay(s.position) == false);
  // Window {2}: nothing to delay with, so the engine falls back to the minimal move.
  EXPECT_EQ(service.engine_reply(s.id, std::nullopt).move, single(0, 0));

  const auto t = service.create_game(piles_of("2^2 * 3^2"), 2, Player::kI);
  const auto reply = service.engine_reply(t.id, Exponent(7));
  EXPECT_EQ(reply.move, single(0, 0, {{1, Exponent(7)}}));
  EXPECT_EQ(reply.session.position.piles, (std::vector<ExponentVec>{{1, 9}}));

  const auto u = service.create_game(piles_of("2^2 * 3^2"), 2, Player::kI);
  EXPECT_EQ(service.engine_reply(u.id, std::nullopt).move,
            single(0, 0, {{1, Exponent(GameService::kDefaultStallR)}}));
  EXPECT_EQ(error_code([&] { service.engine_reply(u.id, Exponent(0)); }), "bad-delay");
}

TEST(GameService, EngineFromNAlwaysReachesP) {
  GameService service;
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    std::vector<FactoredNatural> piles(2);
    for (auto& p : piles) {
      for (std::uint64_t q : {2, 3, 5}) p.push_back(PrimePower{q, rng() % 4});
      std::erase_if(p, [](const PrimePower& f) { return f.exponent == 0; });
    }
    const auto s = service.create_game(piles, 3, std::nullopt);
    if (classify(s.position, 3) != Classification::kN) continue;
    const std::optional<Exponent> r = i % 2 ? std::optional<Exponent>(Exponent(20)) : std::nullopt;
    EXPECT_EQ(classify(service.engine_reply(s.id, r).session.position, 3), Classification::kP);
  }
}

TEST(GameService, HintIsPure) {
  GameService service;
  const auto n = service.create_game(piles_of("2^1 * 3^1"), 2, Player::kII);
  const auto h1 = service.hint(n.id);
  EXPECT_EQ(h1.classification, Classification::kN);
  ASSERT_TRUE(h1.move);
  EXPECT_EQ(*h1.move, single(0, 0, {{1, Exponent(1)}}));
  const auto j1 = hint_json(n, h1);
  EXPECT_EQ(j1["text"], "pile 1: /2 *3^1");
  for (int i = 0; i < 3; ++i) EXPECT_EQ(hint_json(n, service.hint(n.id)), j1);
  EXPECT_EQ(session_view_json(service.get(n.id)), session_view_json(n));

  const auto p = service.create_game(piles_of("2^2"), 2, Player::kII);
  const auto hp = service.hint(p.id);
  EXPECT_EQ(hp.classification, Classification::kP);
  EXPECT_FALSE(hp.move);
  EXPECT_EQ(hint_json(p, hp)["move"], nullptr);
  EXPECT_EQ(error_code([&] { service.hint("abc"); }), "unknown-game");
}

TEST(GameService, SameSessionRequestsSerialize) {
  GameService service;
  const auto s = service.create_game(piles_of("2^3 * 3^2 * 5^1\n2^1 * 5^2"), 2, std::nullopt);
  std::vector<std::thread> threads;
  std::atomic<int> played{0};
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&] {
      for (int i = 0; i < 40; ++i) {
        try {
          service.engine_reply(s.id, std::nullopt);
          ++played;
        } catch (const GameError& e) {
          EXPECT_EQ(e.code(), "game-over");
        }
      }
    });
  }
  for (auto& th : threads) th.join();
  const auto final = service.get(s.id);
  EXPECT_EQ(final.history.length(), static_cast<std::size_t>(played.load()));
  EXPECT_EQ(final_position(final.history), final.position);
  EXPECT_TRUE(is_terminal(final.position));
  EXPECT_TRUE(check_transcript(final.history, OptimalAgent{}, OptimalAgent{}).empty());
}

TEST(GameService, SnapshotRecovery) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("multivision-snap-" + std::to_string(std::random_device{}()));
  std::string id;
  Json before;
  {
    GameService service(dir);
    const auto s = service.create_game(piles_of("2^2 * 3^1\n5^3"), 3, Player::kII);
    id = s.id;
    service.submit_move(id, single(0, 0, {{2, Exponent("123456789012345678901234567890")}}));
    service.engine_reply(id, std::nullopt);
    before = session_view_json(service.get(id));
  }
  GameService restored(dir);
  EXPECT_EQ(restored.recover(), 1u);
  EXPECT_EQ(session_view_json(restored.get(id)), before);
  std::filesystem::remove_all(dir);
}

TEST(StatusForError, Mapping) {
  EXPECT_EQ(status_for_error("unknown-game"), 404);
  EXPECT_EQ(status_for_error("not-your-turn"), 409);
  EXPECT_EQ(status_for_error("game-over"), 409);
  EXPECT_EQ(status_for_error("malformed-document"), 400);
  EXPECT_EQ(status_for_error("insufficient-exponent"), 422);
}

class HttpRoutes : public ::testing::Test {
 protected:
  void SetUp() override {
    mount_routes(server_, service_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  httplib::Client client() { return httplib::Client("127.0.0.1", port_); }

  static std::pair<std::string, Json> open(const httplib::Result& res) {
    EXPECT_TRUE(res);
    return open_envelope(res->body);
  }

  GameService service_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST_F(HttpRoutes, PlayThroughEndpoints) {
  auto c = client();
  const auto create = make_envelope(
      "create_game", Json{{"piles", Json::array({factored_to_json({{2, 1}, {3, 1}})})},
                          {"K", "2"},
                          {"engine_side", "II"}});
  auto res = c.Post("/games", create.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 201);
  auto [kind, view] = open(res);
  EXPECT_EQ(kind, "session");
  EXPECT_EQ(view["classification"], "N");
  EXPECT_EQ(view["whose_turn"], "I");
  const std::string id = view["id"];

  res = c.Get("/games/" + id + "/hint");
  auto [hk, hint] = open(res);
  EXPECT_EQ(hk, "hint");
  EXPECT_EQ(hint["text"], "pile 1: /2 *3^1");

  // A losing move for I: 6 -> 3.
  const auto mv = make_envelope("move", move_to_json(single(0, 0)));
  res = c.Post("/games/" + id + "/moves", mv.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(open(res).second["whose_turn"], "II");

  res = c.Post("/games/" + id + "/moves", mv.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 409);
  auto [ek, err] = open(res);
  EXPECT_EQ(ek, "error");
  EXPECT_EQ(err["code"], "not-your-turn");

  res = c.Post("/games/" + id + "/engine-move", "", "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  auto [rk, reply] = open(res);
  EXPECT_EQ(rk, "engine_reply");
  EXPECT_EQ(reply["text"], "pile 1: /3");
  EXPECT_EQ(reply["session"]["winner"], "II");
  EXPECT_EQ(reply["session"]["is_terminal"], true);

  res = c.Get("/games/" + id);
  EXPECT_EQ(open(res).second, reply["session"]);
}

TEST_F(HttpRoutes, TextCreateAndDelayOption) {
  auto c = client();
  const auto create = make_envelope("create_game", Json{{"text", "2^2 * 3^2"}, {"engine_side", "I"}});
  auto res = c.Post("/games", create.dump(), "application/json");
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 201);
  const std::string id = open(res).second["id"];
  const auto opts = make_envelope("engine_options", Json{{"delay_r", "25"}});
  res = c.Post("/games/" + id + "/engine-move", opts.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(open(res).second["text"], "pile 1: /2 *3^25");
}

TEST_F(HttpRoutes, Errors) {
  auto c = client();
  auto status_and_code = [&](const httplib::Result& res) {
    EXPECT_TRUE(res);
    return std::make_pair(res->status, open_envelope(res->body).second["code"].get<std::string>());
  };
  EXPECT_EQ(status_and_code(c.Get("/games/0123")), std::make_pair(404, std::string("unknown-game")));
  EXPECT_EQ(status_and_code(c.Post("/games", "{\"version\":", "application/json")),
            std::make_pair(400, std::string("malformed-document")));
  EXPECT_EQ(status_and_code(c.Post("/games", R"({"version":"9","kind":"create_game","payload":{}})",
                                   "application/json")),
            std::make_pair(400, std::string("unknown-version")));
  EXPECT_EQ(status_and_code(c.Post(
                "/games", make_envelope("create_game", Json{{"text", "4^1"}}).dump(),
                "application/json")),
            std::make_pair(422, std::string("non-prime-base")));
  EXPECT_EQ(status_and_code(c.Post(
                "/games",
                make_envelope("create_game", Json{{"piles", Json::array({Json::array({Json{
                                                                {"prime", "2"}, {"exponent", 3}}})})}})
                    .dump(),
                "application/json")),
            std::make_pair(400, std::string("bad-integer")));

  const auto s = service_.create_game(piles_of("2^1\n3^1"), 2, std::nullopt);
  const auto bad = make_envelope("move", move_to_json(single(0, 1)));
  EXPECT_EQ(status_and_code(c.Post("/games/" + s.id + "/moves", bad.dump(), "application/json")),
            std::make_pair(422, std::string("insufficient-exponent")));
  EXPECT_EQ(service_.get(s.id).history.length(), 0u);
}

}  // namespace
}  // namespace multivision
