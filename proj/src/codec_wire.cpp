#include <algorithm>

#include "multivision/codec.hpp"

namespace multivision {
namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw GameError("malformed-document", what);
}

const Json& field(const Json& j, std::string_view name) {
  if (!j.is_object()) malformed("expected an object holding '" + std::string(name) + "'");
  auto it = j.find(std::string(name));
  if (it == j.end()) malformed("missing field '" + std::string(name) + "'");
  return *it;
}

const Json& array_field(const Json& j, std::string_view name) {
  const Json& a = field(j, name);
  if (!a.is_array()) malformed("field '" + std::string(name) + "' must be an array");
  return a;
}

Classification classification_from_json(const Json& j, std::string_view name) {
  const Json& v = field(j, name);
  if (v == "P") return Classification::kP;
  if (v == "N") return Classification::kN;
  malformed("field '" + std::string(name) + "' must be \"P\" or \"N\"");
}

Json player_json(Player p) { return std::string(player_name(p)); }

Player player_from_json(const Json& j, std::string_view name) {
  if (j == "I") return Player::kI;
  if (j == "II") return Player::kII;
  malformed("field '" + std::string(name) + "' must be \"I\" or \"II\"");
}

Json u64_json(std::uint64_t v) { return std::to_string(v); }

Json transcript_to_json(const Transcript& t) {
  Json moves = Json::array();
  for (const auto& e : t.moves) {
    moves.push_back(Json{{"mover", player_json(e.mover)},
                         {"move", move_to_json(e.move)},
                         {"key", key_to_json(e.key_after)}});
  }
  return Json{{"start", position_to_json(t.start)},
              {"K", u64_json(t.power)},
              {"moves", std::move(moves)},
              {"winner", t.winner ? player_json(*t.winner) : Json(nullptr)},
              {"truncated", t.truncated},
              {"length", u64_json(t.length())}};
}

Transcript transcript_from_json(const Json& j) {
  Transcript t;
  t.start = position_from_json(field(j, "start"));
  t.power = u64_from_json(j, "K");
  for (const auto& e : array_field(j, "moves")) {
    TranscriptEntry entry;
    entry.mover = player_from_json(field(e, "mover"), "mover");
    entry.move = move_from_json(field(e, "move"));
    for (const auto& x : array_field(e, "key")) {
      entry.key_after.exponents.push_back(integer_from_json(x, "key"));
    }
    t.moves.push_back(std::move(entry));
  }
  const Json& winner = field(j, "winner");
  if (!winner.is_null()) t.winner = player_from_json(winner, "winner");
  const Json& truncated = field(j, "truncated");
  if (!truncated.is_boolean()) malformed("field 'truncated' must be a boolean");
  t.truncated = truncated.get<bool>();
  if (u64_from_json(j, "length") != t.moves.size()) malformed("length disagrees with moves");
  return t;
}

Json grid_to_json(const OracleGrid& g) {
  Json primes = Json::array();
  for (auto p : g.primes) primes.push_back(u64_json(p));
  return Json{{"primes", std::move(primes)},
              {"max_piles", u64_json(g.max_piles)},
              {"max_exponent", u64_json(g.max_exponent)},
              {"K", u64_json(g.power)},
              {"cap", u64_json(g.cap)}};
}

OracleGrid grid_from_json(const Json& j) {
  OracleGrid g;
  for (const auto& p : array_field(j, "primes")) g.primes.push_back(u64_from_json(p, "primes"));
  g.max_piles = u64_from_json(j, "max_piles");
  g.max_exponent = u64_from_json(j, "max_exponent");
  g.power = u64_from_json(j, "K");
  g.cap = u64_from_json(j, "cap");
  return g;
}

Json report_to_json(const OracleReport& r) {
  Json mismatches = Json::array();
  for (const auto& m : r.mismatches) {
    mismatches.push_back(Json{{"position", position_to_json(m.position)},
                              {"oracle", std::string(1, classification_letter(m.oracle))},
                              {"closed_form", std::string(1, classification_letter(m.closed_form))}});
  }
  return Json{{"grid", grid_to_json(r.grid)},
              {"positions_labeled", u64_json(r.positions_labeled)},
              {"mismatches", std::move(mismatches)},
              {"elapsed_us", std::to_string(r.elapsed.count())}};
}

OracleReport report_from_json(const Json& j) {
  OracleReport r;
  r.grid = grid_from_json(field(j, "grid"));
  r.positions_labeled = u64_from_json(j, "positions_labeled");
  for (const auto& m : array_field(j, "mismatches")) {
    r.mismatches.push_back(OracleMismatch{position_from_json(field(m, "position")),
                                          classification_from_json(m, "oracle"),
                                          classification_from_json(m, "closed_form")});
  }
  r.elapsed = std::chrono::microseconds(
      static_cast<std::chrono::microseconds::rep>(u64_from_json(j, "elapsed_us")));
  return r;
}

Json summary_to_json(const BatchSummary& s) {
  Json violations = Json::array();
  for (const auto& v : s.violations) violations.push_back(v);
  return Json{{"games", u64_json(s.games)},
              {"wins_I", u64_json(s.wins_i)},
              {"wins_II", u64_json(s.wins_ii)},
              {"truncations", u64_json(s.truncations)},
              {"total_length", u64_json(s.total_length)},
              {"max_length", u64_json(s.max_length)},
              {"violations", std::move(violations)}};
}

BatchSummary summary_from_json(const Json& j) {
  BatchSummary s;
  s.games = u64_from_json(j, "games");
  s.wins_i = u64_from_json(j, "wins_I");
  s.wins_ii = u64_from_json(j, "wins_II");
  s.truncations = u64_from_json(j, "truncations");
  s.total_length = u64_from_json(j, "total_length");
  s.max_length = u64_from_json(j, "max_length");
  for (const auto& v : array_field(j, "violations")) {
    if (!v.is_string()) malformed("violations must be strings");
    s.violations.push_back(v.get<std::string>());
  }
  return s;
}

}  // namespace

Json integer_json(const Exponent& v) { return to_decimal(v); }

Exponent integer_from_json(const Json& j, std::string_view name) {
  if (!j.is_string()) {
    throw GameError("bad-integer", "field '" + std::string(name) + "' must be a decimal string");
  }
  const auto& s = j.get_ref<const std::string&>();
  Exponent v;
  if (!parse_decimal(s, v)) {
    throw GameError("bad-integer", "field '" + std::string(name) + "' is not a decimal integer");
  }
  return v;
}

std::uint64_t u64_from_json(const Json& j, std::string_view name) {
  const Json& v = j.is_object() ? field(j, name) : j;
  Exponent x = integer_from_json(v, name);
  if (x < 0 || x > std::numeric_limits<std::uint64_t>::max()) {
    throw GameError("bad-integer", "field '" + std::string(name) + "' out of range");
  }
  return x.convert_to<std::uint64_t>();
}

Json position_to_json(const Position& pos) {
  Json primes = Json::array();
  for (auto p : pos.window.primes()) primes.push_back(u64_json(p));
  Json piles = Json::array();
  for (const auto& pile : pos.piles) {
    Json row = Json::array();
    for (const auto& e : pile) row.push_back(integer_json(e));
    piles.push_back(std::move(row));
  }
  return Json{{"primes", std::move(primes)}, {"piles", std::move(piles)}};
}

Position position_from_json(const Json& j) {
  std::vector<std::uint64_t> primes;
  for (const auto& p : array_field(j, "primes")) primes.push_back(u64_from_json(p, "primes"));
  std::vector<ExponentVec> piles;
  for (const auto& row : array_field(j, "piles")) {
    if (!row.is_array()) malformed("each pile must be an array");
    ExponentVec v;
    for (const auto& e : row) v.push_back(integer_from_json(e, "piles"));
    piles.push_back(std::move(v));
  }
  return Position::from_exponents(PrimeWindow::make(std::move(primes)), std::move(piles));
}

Json move_to_json(const Move& mv) {
  Json parts = Json::array();
  for (const auto& part : mv.parts) {
    Json inc = Json::object();
    for (const auto& [q, t] : part.increments) inc[std::to_string(q)] = integer_json(t);
    parts.push_back(Json{{"pile", u64_json(part.pile)},
                         {"s", u64_json(part.divide)},
                         {"inc", std::move(inc)}});
  }
  return Json{{"h", u64_json(mv.prime_index)}, {"parts", std::move(parts)}};
}

Move move_from_json(const Json& j) {
  Move mv;
  mv.prime_index = u64_from_json(j, "h");
  for (const auto& p : array_field(j, "parts")) {
    MovePart part;
    part.pile = u64_from_json(p, "pile");
    part.divide = u64_from_json(p, "s");
    const Json& inc = field(p, "inc");
    if (!inc.is_object()) malformed("field 'inc' must be an object");
    for (const auto& [key, value] : inc.items()) {
      Exponent q;
      if (!parse_decimal(key, q) || q < 0 || q > std::numeric_limits<std::uint32_t>::max()) {
        throw GameError("bad-integer", "increment key '" + key + "' is not a prime index");
      }
      part.increments[q.convert_to<std::size_t>()] = integer_from_json(value, "inc");
    }
    mv.parts.push_back(std::move(part));
  }
  return mv;
}

Json key_to_json(const LexKey& key) {
  Json out = Json::array();
  for (const auto& e : key.exponents) out.push_back(integer_json(e));
  return out;
}

Json factored_to_json(const FactoredNatural& n) {
  Json out = Json::array();
  for (const auto& [p, e] : n) out.push_back(Json{{"prime", u64_json(p)}, {"exponent", integer_json(e)}});
  return out;
}

FactoredNatural factored_from_json(const Json& j) {
  if (!j.is_array()) malformed("a factorization must be an array");
  FactoredNatural out;
  for (const auto& f : j) {
    out.push_back(PrimePower{u64_from_json(f, "prime"), integer_from_json(field(f, "exponent"), "exponent")});
  }
  return out;
}

Json make_envelope(std::string_view kind, Json payload) {
  return Json{{"version", std::to_string(kWireVersion)},
              {"kind", std::string(kind)},
              {"payload", std::move(payload)}};
}

std::pair<std::string, Json> open_envelope(std::string_view bytes) {
  Json doc = Json::parse(bytes.begin(), bytes.end(), nullptr, false);
  if (doc.is_discarded()) malformed("not a JSON document");
  const Json& version = field(doc, "version");
  if (!version.is_string() || version.get<std::string>() != std::to_string(kWireVersion)) {
    throw GameError("unknown-version", "unsupported wire version " + version.dump());
  }
  const Json& kind = field(doc, "kind");
  if (!kind.is_string()) malformed("field 'kind' must be a string");
  return {kind.get<std::string>(), field(doc, "payload")};
}

std::string encode_wire(const WireValue& value) {
  Json doc = std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Position>) return make_envelope("position", position_to_json(v));
        if constexpr (std::is_same_v<T, Move>) return make_envelope("move", move_to_json(v));
        if constexpr (std::is_same_v<T, Transcript>) return make_envelope("transcript", transcript_to_json(v));
        if constexpr (std::is_same_v<T, OracleReport>) return make_envelope("oracle_report", report_to_json(v));
        if constexpr (std::is_same_v<T, BatchSummary>) return make_envelope("batch_summary", summary_to_json(v));
      },
      value);
  return doc.dump();
}

WireValue decode_wire(std::string_view bytes) {
  auto [kind, payload] = open_envelope(bytes);
  try {
    if (kind == "position") return position_from_json(payload);
    if (kind == "move") return move_from_json(payload);
    if (kind == "transcript") return transcript_from_json(payload);
    if (kind == "oracle_report") return report_from_json(payload);
    if (kind == "batch_summary") return summary_from_json(payload);
  } catch (const Json::exception& e) {
    malformed(e.what());
  }
  malformed("unknown kind '" + kind + "'");
}

}  // namespace multivision
