#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace multivision {

// Prime exponents grow without bound during play, so every exponent is an
// arbitrary-precision integer. Pile sizes themselves are never materialized.
using Exponent = boost::multiprecision::cpp_int;

using ExponentVec = std::vector<Exponent>;

// Parses an optionally signed decimal integer. Returns false on anything else
// (empty text, stray characters, leading '+').
bool parse_decimal(std::string_view text, Exponent& out);

std::string to_decimal(const Exponent& value);

// Least nonnegative residue of value modulo k (k >= 1).
std::uint64_t mod_k(const Exponent& value, std::uint64_t k);

}  // namespace multivision
