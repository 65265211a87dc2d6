#pragma once

#include <cstdint>
#include <vector>

namespace zaremba {

std::int64_t gcd64(std::int64_t a, std::int64_t b);

// Deterministic for all 64-bit inputs.
bool is_prime(std::uint64_t n);

bool is_square_free(std::uint64_t n);

std::vector<std::uint32_t> primes_up_to(std::uint32_t n);

// a * b mod m without overflow; inputs already reduced.
inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

// Inverse of a modulo m; throws std::domain_error when gcd(a, m) != 1.
std::int64_t modinv(std::int64_t a, std::int64_t m);

// Reduce into [0, m).
inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

// Largest t >= 0 with t*t <= n.
std::uint64_t isqrt(std::uint64_t n);

}  // namespace zaremba
