#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "multivision/core.hpp"
#include "multivision/oracle.hpp"
#include "multivision/sim.hpp"

namespace multivision {

// ---------------------------------------------------------------------------
// Text format
//
//   position := pile (NEWLINE pile)*
//   pile     := "1" | factor ("*" factor)*
//   factor   := prime "^" exponent
//
// Spaces and tabs are allowed around every token. Blank lines are skipped.
// Errors are GameError with codes "syntax-error", "non-prime-base",
// "negative-exponent", "duplicate-base" or "empty-pile-list"; messages carry
// "line L, column C".
// ---------------------------------------------------------------------------

std::vector<FactoredNatural> parse_position_text(std::string_view text);

// Canonical text; zero exponents omitted, an all-zero pile prints "1".
std::string format_position_text(const Position& pos);

std::string format_factored(const FactoredNatural& n);

// Factors n by trial division with divisors up to limit. Throws
// GameError("incomplete-factorization") when a cofactor above limit remains.
FactoredNatural factorize_small(std::uint64_t n, std::uint64_t limit);

// Human move syntax, piles 1-based:
//   pile 1: /2 *3^1 *5^4          single part, s = 1
//   pile 2: /3^2                  single part, s = 2 (K >= 3)
//   [pile 1: /2 *3^1; pile 2: /2] multi-part K-move
// All parts must divide by the same prime.
std::string format_move_text(const Position& pos, const Move& mv);
Move parse_move_text(const Position& pos, std::string_view text);

// ---------------------------------------------------------------------------
// Wire format: a JSON document {version, kind, payload}. Every integer is a
// decimal string. Output is byte-deterministic for a given value.
// ---------------------------------------------------------------------------

inline constexpr int kWireVersion = 1;

using Json = nlohmann::ordered_json;
using WireValue = std::variant<Position, Move, Transcript, OracleReport, BatchSummary>;

std::string encode_wire(const WireValue& value);

// Throws GameError with "malformed-document", "bad-integer" or
// "unknown-version" (or a core validation code for an invalid position).
WireValue decode_wire(std::string_view bytes);

template <typename T>
T decode_wire_as(std::string_view bytes) {
  auto value = decode_wire(bytes);
  if (auto* v = std::get_if<T>(&value)) return std::move(*v);
  throw GameError("malformed-document", "document holds a different kind");
}

// Building blocks shared with the service.
Json make_envelope(std::string_view kind, Json payload);
// Returns {kind, payload} after checking the version tag.
std::pair<std::string, Json> open_envelope(std::string_view bytes);

Json integer_json(const Exponent& v);
Exponent integer_from_json(const Json& j, std::string_view field);
std::uint64_t u64_from_json(const Json& j, std::string_view field);

Json position_to_json(const Position& pos);
Position position_from_json(const Json& j);
Json move_to_json(const Move& mv);
Move move_from_json(const Json& j);
Json key_to_json(const LexKey& key);
Json factored_to_json(const FactoredNatural& n);
FactoredNatural factored_from_json(const Json& j);

}  // namespace multivision
