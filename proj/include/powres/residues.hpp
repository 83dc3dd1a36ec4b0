#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "powres/modmath.hpp"
#include "powres/rational.hpp"

namespace powres::residues {

using modmath::PrimeContext;
using modmath::u64;

/// Scale caps. Overridable through POWRES_ENUM_CAP and POWRES_BSGS_CAP.
struct Limits {
  u64 enumeration_cap = u64{1} << 22;  // max elements enumerated per subgroup
  u64 bsgs_cap = u64{1} << 40;         // nth_root_solutions requires p < cap

  static Limits from_env();
};

/// Cyclic subgroup of F_p^* of order d, generated by g^((p-1)/d).
/// When present, elements[j] == generator^j.
struct SubgroupSpec {
  u64 p;
  u64 order;
  u64 generator;
  u64 primitive_root;
  std::optional<std::vector<u64>> elements;

  bool enumerated() const { return elements.has_value(); }
};

struct KResult {
  u64 p;
  u64 n;
  u64 k;
  Rational lower;
  Rational upper_exclusive;

  /// lower <= k < upper_exclusive, exactly.
  bool within_bounds() const;
};

struct RootSet {
  u64 x0;                  // g^(t/n) where m = g^t
  std::vector<u64> roots;  // ascending
};

// Rejects even n, n < 1 and n not dividing p - 1 with BadN.
void validate_odd_divisor(u64 p, u64 n);

/// Subgroup of any order d | p - 1 (odd or even).
SubgroupSpec subgroup_of_order(const PrimeContext& ctx, u64 d,
                               const Limits& limits = {});

/// H: the n-th roots of unity, order n.
SubgroupSpec roots_of_unity_subgroup(const PrimeContext& ctx, u64 n,
                                     const Limits& limits = {});

/// R: non-zero n-th power residues, order (p-1)/n, generator g^n.
SubgroupSpec power_residue_subgroup(const PrimeContext& ctx, u64 n,
                                    const Limits& limits = {});

bool is_nth_residue(const PrimeContext& ctx, u64 n, u64 m);

/// Baby-step giant-step: t in [0, p-1) with g^t == m. Requires p < bsgs_cap.
u64 discrete_log(const PrimeContext& ctx, u64 m, const Limits& limits = {});

/// All n solutions of x^n == m (mod p), as x0 * h for h in H.
RootSet nth_root_solutions(const PrimeContext& ctx, u64 n, u64 m,
                           const Limits& limits = {});

/// Residue -> position in the power-residue subgroup, plus the coverage
/// bitmap. Confined to one worker.
class CoverState {
 public:
  explicit CoverState(const SubgroupSpec& residue_group);

  /// Marks r; returns true if it was newly covered.
  bool mark(u64 r);
  bool contains(u64 r) const;
  std::optional<std::uint32_t> index_of(u64 r) const;

  u64 covered_count() const { return covered_count_; }
  u64 size() const { return size_; }
  bool complete() const { return covered_count_ == size_; }
  u64 popcount() const;

  u64 x_current = 0;

 private:
  u64 size_;
  u64 covered_count_ = 0;
  // Dense table for small p, hash map otherwise.
  std::vector<std::uint32_t> dense_;
  std::unordered_map<u64, std::uint32_t> sparse_;
  std::vector<std::uint64_t> bits_;
};

/// Least k with {x^n : 1 <= |x| <= k} = all n-th power residues.
KResult compute_k(const PrimeContext& ctx, u64 n, const Limits& limits = {});

/// Definitional oracle: rebuilds the covered set from scratch for every
/// candidate k. Only for p < 10^5.
u64 brute_force_k(const PrimeContext& ctx, u64 n);

struct Bounds {
  Rational lower;            // (p - 1) / (2n)
  Rational upper_exclusive;  // (1/2 - 1/(2n)) p; zero when n == 1
};

Bounds chowla_london_bounds(u64 p, u64 n);

}  // namespace powres::residues
