#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace multivision {

// Deterministic Miller-Rabin; exact for every 64-bit input.
bool is_prime(std::uint64_t n);

// Smallest prime strictly greater than n. Throws std::overflow_error past the
// largest 64-bit prime.
std::uint64_t next_prime(std::uint64_t n);

// All primes in [lo, hi], ascending. Throws std::length_error if more than
// max_count primes would be produced.
std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi,
                                          std::size_t max_count);

std::vector<std::uint64_t> first_primes(std::size_t count);

}  // namespace multivision
