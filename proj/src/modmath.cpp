#include "powres/modmath.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "powres/error.hpp"

namespace powres {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::TooSmall: return "TooSmall";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::BadN: return "BadN";
    case ErrorCode::BadResidue: return "BadResidue";
    case ErrorCode::NotResidue: return "NotResidue";
    case ErrorCode::ScaleLimit: return "ScaleLimit";
    case ErrorCode::NotEnumerated: return "NotEnumerated";
    case ErrorCode::TrivialSubgroup: return "TrivialSubgroup";
    case ErrorCode::BadRadius: return "BadRadius";
    case ErrorCode::ZeroFrequency: return "ZeroFrequency";
    case ErrorCode::EmptyRange: return "EmptyRange";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace powres

namespace powres::modmath {

namespace {

constexpr u64 kTrialLimit = 1'000'000;

// Full 64-bit range variant; is_prime and rho accept anything below 2^64.
u64 powmod_any(u64 a, u64 e, u64 m) {
  u64 result = 1 % m;
  a %= m;
  while (e > 0) {
    if (e & 1) result = mulmod(result, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return result;
}

bool miller_rabin_witness(u64 n, u64 a, u64 d, unsigned s) {
  u64 x = powmod_any(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (unsigned r = 1; r < s; ++r) {
    x = mulmod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

u64 pollard_brent(u64 n, u64 seed) {
  if (n % 2 == 0) return 2;
  u64 c = seed;
  u64 y = seed + 1;
  const u64 block = 128;
  u64 g = 1, r = 1, q = 1, x = 0, ys = 0;
  auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
  do {
    x = y;
    for (u64 i = 0; i < r; ++i) y = f(y);
    u64 k = 0;
    do {
      ys = y;
      for (u64 i = 0; i < std::min(block, r - k); ++i) {
        y = f(y);
        q = mulmod(q, x > y ? x - y : y - x, n);
      }
      g = std::gcd(q, n);
      k += block;
    } while (k < r && g == 1);
    r <<= 1;
  } while (g == 1);
  if (g == n) {
    // Batched gcd collapsed; replay one step at a time from the checkpoint.
    do {
      ys = f(ys);
      g = std::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

void factor_large(u64 n, std::map<u64, unsigned>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  for (u64 seed = 1;; ++seed) {
    u64 d = pollard_brent(n, seed);
    if (d != n && d != 1) {
      factor_large(d, out);
      factor_large(n / d, out);
      return;
    }
  }
}

}  // namespace

u64 powmod(u64 a, u64 e, u64 p) { return powmod_any(a, e, p); }

bool is_prime(u64 m) {
  if (m < 2) return false;
  for (u64 q : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (m % q == 0) return m == q;
  }
  u64 d = m - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve bases are sufficient for every n < 3.3 * 10^24.
  for (u64 a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (miller_rabin_witness(m, a, d, s)) return false;
  }
  return true;
}

Factorization factorize(u64 m) {
  Factorization result;
  if (m <= 1) return result;
  for (u64 q = 2; q <= kTrialLimit && q * q <= m; q += (q == 2 ? 1 : 2)) {
    if (m % q != 0) continue;
    unsigned e = 0;
    while (m % q == 0) {
      m /= q;
      ++e;
    }
    result.push_back({q, e});
  }
  if (m > 1) {
    std::map<u64, unsigned> large;
    factor_large(m, large);
    for (auto [q, e] : large) result.push_back({q, e});
  }
  return result;
}

u64 multiplicative_order(u64 a, const PrimeContext& ctx) {
  u64 order = ctx.p - 1;
  for (const auto& [q, e] : ctx.factors) {
    for (unsigned i = 0; i < e; ++i) {
      if (powmod(a, order / q, ctx.p) != 1) break;
      order /= q;
    }
  }
  return order;
}

PrimeContext build_prime_context(u64 p) {
  if (p < 5) {
    throw Error(ErrorCode::TooSmall, "p must be at least 5");
  }
  if (p >= kModulusLimit) {
    throw Error(ErrorCode::TooLarge, "p must be below 2^62");
  }
  if (!is_prime(p)) {
    throw Error(ErrorCode::NotPrime, "p is not prime");
  }
  PrimeContext ctx{p, factorize(p - 1), 0};
  for (u64 g = 2; g < p; ++g) {
    bool primitive = std::all_of(
        ctx.factors.begin(), ctx.factors.end(),
        [&](const PrimePower& f) { return powmod(g, (p - 1) / f.prime, p) != 1; });
    if (primitive) {
      ctx.g = g;
      return ctx;
    }
  }
  // Unreachable for prime p: F_p^* is cyclic.
  throw Error(ErrorCode::NotPrime, "no primitive root found");
}

std::vector<u64> odd_divisors(u64 m) {
  while (m > 0 && m % 2 == 0) m /= 2;
  std::vector<u64> divs{1};
  for (const auto& [q, e] : factorize(m)) {
    const std::size_t base = divs.size();
    u64 power = 1;
    for (unsigned i = 0; i < e; ++i) {
      power *= q;
      for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * power);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

std::vector<u64> primes_in_range(u64 lo, u64 hi) {
  std::vector<u64> result;
  if (hi < 2 || lo > hi) return result;
  lo = std::max<u64>(lo, 2);
  const u64 root = static_cast<u64>(std::sqrt(static_cast<double>(hi))) + 1;
  std::vector<bool> small(root + 1, true);
  std::vector<u64> base;
  for (u64 i = 2; i <= root; ++i) {
    if (!small[i]) continue;
    base.push_back(i);
    for (u64 j = i * i; j <= root; j += i) small[j] = false;
  }
  constexpr u64 kSegment = u64{1} << 20;
  for (u64 start = lo; start <= hi; start += kSegment) {
    const u64 end = std::min(hi, start + kSegment - 1);
    std::vector<bool> seg(end - start + 1, true);
    for (u64 q : base) {
      if (q * q > end) break;
      u64 first = std::max(q * q, (start + q - 1) / q * q);
      for (u64 j = first; j <= end; j += q) seg[j - start] = false;
    }
    for (u64 i = 0; i < seg.size(); ++i) {
      if (seg[i]) result.push_back(start + i);
    }
    if (end == hi) break;
  }
  return result;
}

}  // namespace powres::modmath
