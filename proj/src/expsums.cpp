#include "powres/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "powres/error.hpp"

namespace powres::expsums {

using modmath::mulmod;
using modmath::powmod;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_enumerated(const SubgroupSpec& h) {
  if (!h.enumerated()) {
    throw Error(ErrorCode::NotEnumerated,
                "subgroup of order " + std::to_string(h.order) +
                    " is not enumerated");
  }
}

void check_radius(u64 p, u64 radius) {
  if (radius < 1 || radius > (p - 1) / 2) {
    throw Error(ErrorCode::BadRadius, "K must satisfy 1 <= K <= (p-1)/2");
  }
}

// ||r/p|| scaled by p: min(r, p - r) for r reduced mod p.
u64 distance_numerator(u64 p, u64 r) {
  r %= p;
  return std::min(r, p - r);
}

}  // namespace

ComplexVal phase(u64 num, u64 p) {
  num %= p;
  // Use the representative in (-p/2, p/2] so the angle stays in [-pi, pi].
  const double signed_num = num > p / 2 ? -static_cast<double>(p - num)
                                        : static_cast<double>(num);
  const double angle = kTwoPi * signed_num / static_cast<double>(p);
  return {std::cos(angle), std::sin(angle)};
}

ComplexVal subgroup_expsum(const SubgroupSpec& h, u64 a) {
  require_enumerated(h);
  const auto& elems = *h.elements;
  a %= h.p;
  return tree_sum<ComplexVal>(0, elems.size(), [&](std::size_t i) {
    return phase(mulmod(a, elems[i], h.p), h.p);
  });
}

ExpSumProfile expsum_profile(const SubgroupSpec& h) {
  require_enumerated(h);
  const u64 p = h.p;
  const u64 d = h.order;
  const u64 cosets = (p - 1) / d;
  ExpSumProfile prof{p, d, {}, 0.0, 1, 0.0};
  prof.coset_values.reserve(cosets);
  u64 rep = 1;
  for (u64 i = 0; i < cosets; ++i) {
    const ComplexVal s = subgroup_expsum(h, rep);
    prof.coset_values.emplace_back(rep, s);
    if (std::abs(s) > prof.max_magnitude) {
      prof.max_magnitude = std::abs(s);
      prof.argmax_a = rep;
    }
    rep = mulmod(rep, h.primitive_root, p);
  }
  const double dd = static_cast<double>(d);
  const double coset_energy = tree_sum<double>(0, cosets, [&](std::size_t i) {
    return std::norm(prof.coset_values[i].second);
  });
  const double total = dd * dd + dd * coset_energy;
  prof.parseval_residual = std::abs(total - static_cast<double>(p) * dd);
  return prof;
}

double empirical_delta(const ExpSumProfile& profile) {
  if (profile.subgroup_order < 2) {
    throw Error(ErrorCode::TrivialSubgroup,
                "empirical delta needs a subgroup of order >= 2");
  }
  const double ratio =
      profile.max_magnitude / static_cast<double>(profile.subgroup_order);
  const double delta =
      -std::log(ratio) / (3.0 * std::log(static_cast<double>(profile.p)));
  return std::max(0.0, delta);
}

ComplexVal interval_expsum(u64 p, u64 r, u64 radius) {
  check_radius(p, radius);
  r %= p;
  if (r == 0) return {2.0 * static_cast<double>(radius), 0.0};
  // D is real and D(r) = D(p - r); fold onto the smaller representative.
  const u64 rr = distance_numerator(p, r);
  const u64 wrapped = static_cast<u64>(
      static_cast<modmath::u128>(2 * radius + 1) * rr % (2 * static_cast<modmath::u128>(p)));
  const double pd = static_cast<double>(p);
  const double num = std::sin(std::numbers::pi * static_cast<double>(wrapped) / pd);
  const double den = std::sin(std::numbers::pi * static_cast<double>(rr) / pd);
  return {num / den - 1.0, 0.0};
}

double interval_bound(u64 p, u64 r, u64 radius) {
  if (r % p == 0) {
    throw Error(ErrorCode::ZeroFrequency, "bound undefined at r == 0 mod p");
  }
  const double dist =
      static_cast<double>(distance_numerator(p, r)) / static_cast<double>(p);
  return std::min(2.0 * static_cast<double>(radius), 1.0 / (2.0 * dist) + 1.0);
}

HarmonicCheck harmonic_bound_check(u64 p) {
  const double pd = static_cast<double>(p);
  const double lhs = tree_sum<double>(1, p, [&](std::size_t r) {
    return pd / static_cast<double>(distance_numerator(p, r));
  });
  const double rhs =
      2.0 * pd * (1.0 + std::log(static_cast<double>((p - 1) / 2)));
  return {lhs, rhs, lhs <= rhs};
}

u64 count_solutions_in_interval(const PrimeContext& ctx, u64 n, u64 m,
                                u64 radius, const Limits& limits) {
  check_radius(ctx.p, radius);
  const auto roots = residues::nth_root_solutions(ctx, n, m, limits);
  return static_cast<u64>(std::count_if(
      roots.roots.begin(), roots.roots.end(),
      [&](u64 s) { return s <= radius || ctx.p - s <= radius; }));
}

DecompositionResult orthogonality_decomposition(const PrimeContext& ctx,
                                                u64 n, u64 m, u64 radius,
                                                const Limits& limits) {
  const u64 p = ctx.p;
  check_radius(p, radius);
  const auto roots = residues::nth_root_solutions(ctx, n, m, limits);
  const u64 exact = static_cast<u64>(std::count_if(
      roots.roots.begin(), roots.roots.end(),
      [&](u64 s) { return s <= radius || p - s <= radius; }));

  if (p > limits.enumeration_cap) {
    throw Error(ErrorCode::ScaleLimit,
                "decomposition tabulates S(a) for all a and needs p <= the "
                "enumeration cap");
  }
  const auto h = residues::roots_of_unity_subgroup(ctx, n, limits);
  const auto prof = expsum_profile(h);

  // S is constant on cosets of H: walk a = g^i and reuse coset value i mod c.
  const u64 cosets = prof.coset_values.size();
  std::vector<ComplexVal> s_all(p);
  s_all[0] = {static_cast<double>(n), 0.0};
  u64 a = 1;
  for (u64 i = 0; i < p - 1; ++i) {
    s_all[a] = prof.coset_values[i % cosets].second;
    a = mulmod(a, ctx.g, p);
  }

  const ComplexVal err = tree_sum<ComplexVal>(1, p, [&](std::size_t r) {
    return s_all[mulmod(r, roots.x0, p)] * interval_expsum(p, r, radius).real();
  }) / static_cast<double>(p);

  DecompositionResult out;
  out.m = m;
  out.radius = radius;
  out.exact_count = exact;
  out.main_term = static_cast<double>(n) / static_cast<double>(p) * 2.0 *
                  static_cast<double>(radius);
  out.error_term = err.real();
  out.reconstruction = out.main_term + out.error_term;
  out.imag_residue = std::abs(err.imag());
  return out;
}

}  // namespace powres::expsums
