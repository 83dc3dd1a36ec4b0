#include "powres/residues.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "powres/error.hpp"

namespace powres::residues {

using modmath::mulmod;
using modmath::powmod;

namespace {

constexpr std::uint32_t kNoIndex = std::numeric_limits<std::uint32_t>::max();
constexpr u64 kDenseIndexLimit = u64{1} << 22;
constexpr u64 kBruteForceLimit = 100'000;

std::optional<u64> env_u64(const char* name) {
  const char* raw = std::getenv(name);
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0') return std::nullopt;
  return static_cast<u64>(v);
}

void check_enumerable(u64 count, const Limits& limits) {
  if (count > limits.enumeration_cap) {
    throw Error(ErrorCode::ScaleLimit,
                "subgroup order " + std::to_string(count) +
                    " exceeds the enumeration cap " +
                    std::to_string(limits.enumeration_cap));
  }
}

}  // namespace

Limits Limits::from_env() {
  Limits limits;
  if (auto v = env_u64("POWRES_ENUM_CAP")) limits.enumeration_cap = *v;
  if (auto v = env_u64("POWRES_BSGS_CAP")) limits.bsgs_cap = *v;
  return limits;
}

bool KResult::within_bounds() const {
  const Rational kr(static_cast<i128>(k));
  return lower <= kr && kr < upper_exclusive;
}

void validate_odd_divisor(u64 p, u64 n) {
  if (n < 1) throw Error(ErrorCode::BadN, "n must be positive");
  if (n % 2 == 0) throw Error(ErrorCode::BadN, "n must be odd");
  if ((p - 1) % n != 0) throw Error(ErrorCode::BadN, "n must divide p - 1");
}

SubgroupSpec subgroup_of_order(const PrimeContext& ctx, u64 d,
                               const Limits& limits) {
  if (d < 1 || (ctx.p - 1) % d != 0) {
    throw Error(ErrorCode::BadN, "subgroup order must divide p - 1");
  }
  SubgroupSpec spec{ctx.p, d, powmod(ctx.g, (ctx.p - 1) / d, ctx.p), ctx.g,
                    std::nullopt};
  if (d <= limits.enumeration_cap) {
    std::vector<u64> elems(d);
    u64 cur = 1;
    for (u64 j = 0; j < d; ++j) {
      elems[j] = cur;
      cur = mulmod(cur, spec.generator, ctx.p);
    }
    spec.elements = std::move(elems);
  }
  return spec;
}

SubgroupSpec roots_of_unity_subgroup(const PrimeContext& ctx, u64 n,
                                     const Limits& limits) {
  validate_odd_divisor(ctx.p, n);
  return subgroup_of_order(ctx, n, limits);
}

SubgroupSpec power_residue_subgroup(const PrimeContext& ctx, u64 n,
                                    const Limits& limits) {
  validate_odd_divisor(ctx.p, n);
  // g^((p-1)/d) with d = (p-1)/n is exactly g^n.
  return subgroup_of_order(ctx, (ctx.p - 1) / n, limits);
}

bool is_nth_residue(const PrimeContext& ctx, u64 n, u64 m) {
  validate_odd_divisor(ctx.p, n);
  if (m == 0 || m >= ctx.p) {
    throw Error(ErrorCode::BadResidue, "m must satisfy 1 <= m < p");
  }
  return powmod(m, (ctx.p - 1) / n, ctx.p) == 1;
}

u64 discrete_log(const PrimeContext& ctx, u64 m, const Limits& limits) {
  if (ctx.p >= limits.bsgs_cap) {
    throw Error(ErrorCode::ScaleLimit,
                "p exceeds the discrete-log cap " +
                    std::to_string(limits.bsgs_cap));
  }
  if (m == 0 || m >= ctx.p) {
    throw Error(ErrorCode::BadResidue, "m must satisfy 1 <= m < p");
  }
  const u64 group = ctx.p - 1;
  const u64 step = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(group))));
  std::unordered_map<u64, u64> baby;
  baby.reserve(step * 2);
  u64 cur = 1;
  for (u64 j = 0; j < step; ++j) {
    baby.emplace(cur, j);
    cur = mulmod(cur, ctx.g, ctx.p);
  }
  // giant = g^(-step) = g^(group - step mod group)
  const u64 giant = powmod(ctx.g, (group - step % group) % group, ctx.p);
  u64 gamma = m;
  for (u64 i = 0; i <= step; ++i) {
    if (auto it = baby.find(gamma); it != baby.end()) {
      return (i * step + it->second) % group;
    }
    gamma = mulmod(gamma, giant, ctx.p);
  }
  // g generates F_p^*, so every m has a logarithm.
  throw Error(ErrorCode::BadResidue, "discrete logarithm not found");
}

RootSet nth_root_solutions(const PrimeContext& ctx, u64 n, u64 m,
                           const Limits& limits) {
  if (!is_nth_residue(ctx, n, m)) {
    throw Error(ErrorCode::NotResidue,
                std::to_string(m) + " is not an n-th power residue mod p");
  }
  const u64 t = discrete_log(ctx, m, limits);
  RootSet out;
  out.x0 = powmod(ctx.g, t / n, ctx.p);
  const u64 unity = powmod(ctx.g, (ctx.p - 1) / n, ctx.p);
  out.roots.reserve(n);
  u64 cur = out.x0;
  for (u64 j = 0; j < n; ++j) {
    out.roots.push_back(cur);
    cur = mulmod(cur, unity, ctx.p);
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

CoverState::CoverState(const SubgroupSpec& residue_group)
    : size_(residue_group.order) {
  if (!residue_group.enumerated()) {
    throw Error(ErrorCode::NotEnumerated, "residue subgroup not enumerated");
  }
  const auto& elems = *residue_group.elements;
  if (residue_group.p <= kDenseIndexLimit) {
    dense_.assign(residue_group.p, kNoIndex);
    for (std::size_t i = 0; i < elems.size(); ++i) {
      dense_[elems[i]] = static_cast<std::uint32_t>(i);
    }
  } else {
    sparse_.reserve(elems.size());
    for (std::size_t i = 0; i < elems.size(); ++i) {
      sparse_.emplace(elems[i], static_cast<std::uint32_t>(i));
    }
  }
  bits_.assign((size_ + 63) / 64, 0);
}

std::optional<std::uint32_t> CoverState::index_of(u64 r) const {
  if (!dense_.empty()) {
    if (r >= dense_.size() || dense_[r] == kNoIndex) return std::nullopt;
    return dense_[r];
  }
  if (auto it = sparse_.find(r); it != sparse_.end()) return it->second;
  return std::nullopt;
}

bool CoverState::mark(u64 r) {
  const auto idx = index_of(r);
  if (!idx) {
    throw Error(ErrorCode::NotResidue, "marked value is not a power residue");
  }
  std::uint64_t& word = bits_[*idx / 64];
  const std::uint64_t bit = std::uint64_t{1} << (*idx % 64);
  if (word & bit) return false;
  word |= bit;
  ++covered_count_;
  return true;
}

bool CoverState::contains(u64 r) const {
  const auto idx = index_of(r);
  return idx && (bits_[*idx / 64] >> (*idx % 64)) & 1;
}

u64 CoverState::popcount() const {
  u64 total = 0;
  for (auto w : bits_) total += static_cast<u64>(std::popcount(w));
  return total;
}

KResult compute_k(const PrimeContext& ctx, u64 n, const Limits& limits) {
  validate_odd_divisor(ctx.p, n);
  const u64 p = ctx.p;
  check_enumerable((p - 1) / n, limits);
  CoverState state(power_residue_subgroup(ctx, n, limits));
  const auto bounds = chowla_london_bounds(p, n);
  // n odd gives (-x)^n = -(x^n), so each x covers r and p - r.
  for (u64 x = 1; x <= (p - 1) / 2; ++x) {
    const u64 r = powmod(x, n, p);
    state.x_current = r;
    state.mark(r);
    state.mark(p - r);
    if (state.complete()) {
      return KResult{p, n, x, bounds.lower, bounds.upper_exclusive};
    }
  }
  // x = 1..(p-1)/2 together with negatives runs over all of F_p^*.
  throw Error(ErrorCode::NotResidue, "coverage did not complete");
}

u64 brute_force_k(const PrimeContext& ctx, u64 n) {
  validate_odd_divisor(ctx.p, n);
  const u64 p = ctx.p;
  if (p >= kBruteForceLimit) {
    throw Error(ErrorCode::ScaleLimit, "brute-force oracle requires p < 10^5");
  }
  std::vector<bool> target(p, false);
  u64 target_size = 0;
  for (u64 x = 1; x < p; ++x) {
    const u64 r = powmod(x, n, p);
    if (!target[r]) {
      target[r] = true;
      ++target_size;
    }
  }
  for (u64 k = 1;; ++k) {
    std::vector<bool> seen(p, false);
    u64 count = 0;
    for (u64 x = 1; x <= k; ++x) {
      for (u64 v : {x, p - x}) {
        const u64 r = powmod(v, n, p);
        if (!seen[r]) {
          seen[r] = true;
          ++count;
        }
      }
    }
    if (count == target_size) return k;
  }
}

Bounds chowla_london_bounds(u64 p, u64 n) {
  validate_odd_divisor(p, n);
  const i128 pp = static_cast<i128>(p);
  const i128 nn = static_cast<i128>(n);
  // (1/2 - 1/(2n)) p = (n - 1) p / (2n)
  return Bounds{Rational(pp - 1, 2 * nn), Rational((nn - 1) * pp, 2 * nn)};
}

}  // namespace powres::residues
