#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace powres::modmath {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// Moduli are capped at 2^62 so every product fits a 128-bit intermediate.
inline constexpr u64 kModulusLimit = u64{1} << 62;

struct PrimePower {
  u64 prime;
  unsigned exponent;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

using Factorization = std::vector<PrimePower>;

/// A verified prime modulus together with the factorization of p - 1 and
/// the least primitive root. Immutable once built; share freely.
struct PrimeContext {
  u64 p;
  Factorization factors;  // of p - 1, ascending
  u64 g;
};

inline u64 mulmod(u64 a, u64 b, u64 p) {
  return static_cast<u64>(static_cast<u128>(a) * b % p);
}

/// a^e mod p by square-and-multiply. powmod(0, 0, p) == 1: the empty
/// product convention applies to every base.
u64 powmod(u64 a, u64 e, u64 p);

/// Deterministic Miller-Rabin; exact for every 64-bit input.
bool is_prime(u64 m);

/// Prime factorization sorted by prime. Trial division up to 10^6, then
/// Pollard rho (Brent) with a fixed seed sequence, so results never vary
/// between runs. factorize(1) is empty.
Factorization factorize(u64 m);

u64 multiplicative_order(u64 a, const PrimeContext& ctx);

/// Validates p (TooSmall below 5, TooLarge at or above 2^62, NotPrime) and
/// searches g = 2, 3, ... for the first primitive root.
PrimeContext build_prime_context(u64 p);

/// Odd divisors of m, ascending.
std::vector<u64> odd_divisors(u64 m);

/// Primes in [lo, hi] by a segmented sieve.
std::vector<u64> primes_in_range(u64 lo, u64 hi);

}  // namespace powres::modmath
