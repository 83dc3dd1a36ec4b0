#pragma once

#include <complex>
#include <cstddef>
#include <utility>
#include <vector>

#include "powres/residues.hpp"

namespace powres::expsums {

using modmath::PrimeContext;
using modmath::u64;
using residues::Limits;
using residues::SubgroupSpec;

using ComplexVal = std::complex<double>;

/// e(num / p) = exp(2 pi i num / p); num is reduced mod p before scaling.
ComplexVal phase(u64 num, u64 p);

/// Pairwise summation of term(0) + ... + term(count - 1).
template <typename T, typename F>
T tree_sum(std::size_t begin, std::size_t end, const F& term) {
  constexpr std::size_t kLeaf = 32;
  if (end - begin <= kLeaf) {
    T acc{};
    for (std::size_t i = begin; i < end; ++i) acc += term(i);
    return acc;
  }
  const std::size_t mid = begin + (end - begin) / 2;
  return tree_sum<T>(begin, mid, term) + tree_sum<T>(mid, end, term);
}

struct ExpSumProfile {
  u64 p;
  u64 subgroup_order;
  // One entry per coset a H, representative a = g^i, i = 0 .. (p-1)/d - 1.
  std::vector<std::pair<u64, ComplexVal>> coset_values;
  double max_magnitude;
  u64 argmax_a;
  // |sum_{a=0}^{p-1} |S(a)|^2 - p d|, a = 0 included.
  double parseval_residual;
};

struct DecompositionResult {
  u64 m;
  u64 radius;
  u64 exact_count;
  double main_term;
  double error_term;
  double reconstruction;
  double imag_residue;  // |Im| of the error expansion before projection
};

struct HarmonicCheck {
  double lhs;
  double rhs;
  bool ok;
};

/// S(a) = sum_{h in H} e(a h / p).
ComplexVal subgroup_expsum(const SubgroupSpec& h, u64 a);

ExpSumProfile expsum_profile(const SubgroupSpec& h);

/// -ln(max|S| / |H|) / (3 ln p); TrivialSubgroup when |H| == 1.
double empirical_delta(const ExpSumProfile& profile);

/// D(r, K) = sum_{1 <= |x| <= K} e(-r x / p), via the Dirichlet kernel.
ComplexVal interval_expsum(u64 p, u64 r, u64 radius);

/// min(2K, 1 / (2 ||r/p||) + 1).
double interval_bound(u64 p, u64 r, u64 radius);

HarmonicCheck harmonic_bound_check(u64 p);

u64 count_solutions_in_interval(const PrimeContext& ctx, u64 n, u64 m,
                                u64 radius, const Limits& limits = {});

DecompositionResult orthogonality_decomposition(const PrimeContext& ctx,
                                                u64 n, u64 m, u64 radius,
                                                const Limits& limits = {});

}  // namespace powres::expsums
