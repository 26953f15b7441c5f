#include "multivision/primes.hpp"

#include <limits>
#include <stdexcept>

namespace multivision {
namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // These witnesses are sufficient for n < 3.3e24.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t next_prime(std::uint64_t n) {
  constexpr std::uint64_t kLargest = 18446744073709551557ULL;
  if (n >= kLargest) throw std::overflow_error("no 64-bit prime above " + std::to_string(n));
  if (n < 2) return 2;
  std::uint64_t c = (n % 2 == 0) ? n + 1 : n + 2;
  while (!is_prime(c)) c += 2;
  return c;
}

std::vector<std::uint64_t> primes_between(std::uint64_t lo, std::uint64_t hi,
                                          std::size_t max_count) {
  std::vector<std::uint64_t> out;
  if (lo > hi) return out;
  std::uint64_t p = is_prime(lo) ? lo : next_prime(lo);
  while (p <= hi) {
    if (out.size() == max_count) {
      throw std::length_error("more than " + std::to_string(max_count) +
                              " primes in [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]");
    }
    out.push_back(p);
    if (p == hi) break;
    p = next_prime(p);
  }
  return out;
}

std::vector<std::uint64_t> first_primes(std::size_t count) {
  std::vector<std::uint64_t> out;
  out.reserve(count);
  std::uint64_t p = 2;
  while (out.size() < count) {
    out.push_back(p);
    p = next_prime(p);
  }
  return out;
}

}  // namespace multivision
