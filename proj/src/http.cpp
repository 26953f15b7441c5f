#include <httplib.h>

#include "multivision/service.hpp"

namespace multivision {
namespace {

constexpr const char* kContentType = "application/json";

void send(httplib::Response& res, int status, std::string_view kind, Json payload) {
  res.status = status;
  res.set_content(make_envelope(kind, std::move(payload)).dump(), kContentType);
}

void send_error(httplib::Response& res, const std::string& code, const std::string& reason) {
  send(res, status_for_error(code), "error", Json{{"code", code}, {"reason", reason}});
}

// Runs a handler, turning domain and JSON failures into error documents.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const GameError& e) {
    send_error(res, e.code(), e.what());
  } catch (const Json::exception& e) {
    send_error(res, "malformed-document", e.what());
  }
}

Json request_payload(const httplib::Request& req, std::string_view expected_kind,
                     bool allow_empty) {
  if (req.body.empty()) {
    if (allow_empty) return Json::object();
    throw GameError("malformed-document", "request body is empty");
  }
  auto [kind, payload] = open_envelope(req.body);
  if (kind != expected_kind) {
    throw GameError("malformed-document",
                    "expected a '" + std::string(expected_kind) + "' document, got '" + kind + "'");
  }
  return payload;
}

std::optional<Player> engine_side_from(const Json& payload) {
  if (!payload.contains("engine_side")) return Player::kII;
  const Json& v = payload.at("engine_side");
  if (v == "I") return Player::kI;
  if (v == "II") return Player::kII;
  if (v == "none") return std::nullopt;
  throw GameError("malformed-document", "engine_side must be \"I\", \"II\" or \"none\"");
}

}  // namespace

void mount_routes(httplib::Server& server, GameService& service) {
  server.Post("/games", [&service](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const Json payload = request_payload(req, "create_game", false);
      std::vector<FactoredNatural> piles;
      if (payload.contains("text")) {
        if (!payload.at("text").is_string()) {
          throw GameError("malformed-document", "field 'text' must be a string");
        }
        piles = parse_position_text(payload.at("text").get<std::string>());
      } else {
        if (!payload.contains("piles") || !payload.at("piles").is_array()) {
          throw GameError("malformed-document", "missing array field 'piles'");
        }
        for (const auto& p : payload.at("piles")) piles.push_back(factored_from_json(p));
      }
      const std::uint64_t power = payload.contains("K") ? u64_from_json(payload, "K") : 2;
      const auto session = service.create_game(piles, power, engine_side_from(payload));
      send(res, 201, "session", session_view_json(session));
    });
  });

  server.Get(R"(/games/([0-9a-f]+))", [&service](const httplib::Request& req,
                                                  httplib::Response& res) {
    guarded(res, [&] { send(res, 200, "session", session_view_json(service.get(req.matches[1]))); });
  });

  server.Post(R"(/games/([0-9a-f]+)/moves)", [&service](const httplib::Request& req,
                                                         httplib::Response& res) {
    guarded(res, [&] {
      const Move mv = move_from_json(request_payload(req, "move", false));
      send(res, 200, "session", session_view_json(service.submit_move(req.matches[1], mv)));
    });
  });

  server.Post(R"(/games/([0-9a-f]+)/engine-move)", [&service](const httplib::Request& req,
                                                               httplib::Response& res) {
    guarded(res, [&] {
      const Json options = request_payload(req, "engine_options", true);
      std::optional<Exponent> delay_r;
      if (options.contains("delay_r") && !options.at("delay_r").is_null()) {
        delay_r = integer_from_json(options.at("delay_r"), "delay_r");
      }
      const auto reply = service.engine_reply(req.matches[1], delay_r);
      // Move text only needs the window, which never changes.
      send(res, 200, "engine_reply",
           Json{{"session", session_view_json(reply.session)},
                {"move", move_to_json(reply.move)},
                {"text", format_move_text(reply.session.position, reply.move)}});
    });
  });

  server.Get(R"(/games/([0-9a-f]+)/hint)", [&service](const httplib::Request& req,
                                                       httplib::Response& res) {
    guarded(res, [&] {
      const std::string id = req.matches[1];
      const auto h = service.hint(id);
      send(res, 200, "hint", hint_json(service.get(id), h));
    });
  });
}

}  // namespace multivision
