// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "powres/expsums.hpp"
#include "powres/modmath.hpp"
#include "powres/residues.hpp"
#include "powres/sweep.hpp"

using namespace powres;
using modmath::u64;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::vector<u64> brute_roots(u64 p, u64 n, u64 m) {
  std::vector<u64> out;
  for (u64 x = 1; x < p; ++x)
    if (modmath::powmod(x, n, p) == m) out.push_back(x);
  return out;
}

long double direct_interval_sum(u64 p, u64 r, u64 radius) {
  long double re = 0;
  for (u64 x = 1; x <= radius; ++x) {
    for (u64 v : {x, p - x}) {
      const long double ang = -2.0L * std::numbers::pi_v<long double> *
                              static_cast<long double>(modmath::mulmod(r, v, p)) /
                              static_cast<long double>(p);
      re += std::cos(ang);
    }
  }
  return re;
}

// 1. Chowla-London sandwich, p <= 10^4, odd n >= 3.
Verdict sandwich() {
  std::size_t cases = 0, bad = 0;
  for (u64 p : modmath::primes_in_range(5, 10'000)) {
    const auto ctx = modmath::build_prime_context(p);
    for (u64 n : modmath::odd_divisors(p - 1)) {
      if (n < 3) continue;
      ++cases;
      if (!residues::compute_k(ctx, n).within_bounds()) ++bad;
    }
  }
  return {bad == 0, std::to_string(cases) + " cases, " + std::to_string(bad) + " violations"};
}

// 2. compute_k == brute_force_k, p < 2000, all odd n (n = 1 included).
Verdict oracle_equivalence() {
  std::size_t cases = 0, bad = 0;
  for (u64 p : modmath::primes_in_range(5, 1999)) {
    const auto ctx = modmath::build_prime_context(p);
    for (u64 n : modmath::odd_divisors(p - 1)) {
      ++cases;
      const u64 k = residues::compute_k(ctx, n).k;
      if (k != residues::brute_force_k(ctx, n)) ++bad;
      if (n == 1 && k != (p - 1) / 2) ++bad;
    }
  }
  return {bad == 0, std::to_string(cases) + " cases, " + std::to_string(bad) + " mismatches"};
}

// 3. n solutions per residue, 200 random triples with p < 10^4.
Verdict lemma_one(std::mt19937_64& rng) {
  const auto primes = modmath::primes_in_range(5, 9999);
  std::size_t bad = 0;
  for (int t = 0; t < 200; ++t) {
    const u64 p = primes[rng() % primes.size()];
    const auto ctx = modmath::build_prime_context(p);
    const auto divs = modmath::odd_divisors(p - 1);
    const u64 n = divs[rng() % divs.size()];
    const u64 m = modmath::powmod(1 + rng() % (p - 1), n, p);
    const auto got = residues::nth_root_solutions(ctx, n, m);
    bool ok = got.roots.size() == n;
    for (u64 x : got.roots) ok = ok && modmath::powmod(x, n, p) == m;
    ok = ok && got.roots == brute_roots(p, n, m);
    bad += !ok;
  }
  return {bad == 0, "200 triples, " + std::to_string(bad) + " mismatches"};
}

// 4. Parseval over {101, 1009, 5003}, all odd n | p - 1.
Verdict parseval() {
  double worst = 0;
  std::size_t cases = 0;
  for (u64 p : {101ull, 1009ull, 5003ull}) {
    const auto ctx = modmath::build_prime_context(p);
    for (u64 n : modmath::odd_divisors(p - 1)) {
      const auto prof = expsums::expsum_profile(residues::roots_of_unity_subgroup(ctx, n));
      worst = std::max(worst, prof.parseval_residual / (static_cast<double>(p) * n));
      ++cases;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu subgroups, worst relative error %.3e", cases, worst);
  return {worst < 1e-8, buf};
}

// 5. Dirichlet closed form vs direct summation, and the ||r/p|| envelope.
Verdict dirichlet() {
  long double worst = 0;
  std::size_t envelope_bad = 0;
  for (u64 p : {97ull, 499ull, 997ull}) {
    const u64 mid = static_cast<u64>(std::floor(std::pow(static_cast<double>(p), 0.7)));
    for (u64 radius : {u64{1}, mid, (p - 1) / 2}) {
      for (u64 r = 0; r < p; ++r) {
        const auto closed = expsums::interval_expsum(p, r, radius);
        const long double diff =
            std::abs(std::complex<long double>(closed) -
                     std::complex<long double>(direct_interval_sum(p, r, radius), 0));
        worst = std::max(worst, diff);
        if (r >= 1 && std::abs(closed) > expsums::interval_bound(p, r, radius)) ++envelope_bad;
      }
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "max |closed - direct| = %.3Le, %zu envelope violations",
                worst, envelope_bad);
  return {worst < 1e-9L && envelope_bad == 0, buf};
}

// 6. Orthogonality reconstruction, 100 sampled cases with p <= 10^4.
Verdict reconstruction(std::mt19937_64& rng) {
  const auto primes = modmath::primes_in_range(5, 10'000);
  double worst = 0;
  std::size_t count_bad = 0;
  for (int t = 0; t < 100; ++t) {
    const u64 p = primes[rng() % primes.size()];
    const auto ctx = modmath::build_prime_context(p);
    const auto divs = modmath::odd_divisors(p - 1);
    const u64 n = divs[rng() % divs.size()];
    const u64 m = modmath::powmod(1 + rng() % (p - 1), n, p);
    const u64 radius = 1 + rng() % ((p - 1) / 2);
    const auto d = expsums::orthogonality_decomposition(ctx, n, m, radius);
    u64 brute = 0;
    for (u64 x : brute_roots(p, n, m)) brute += (x <= radius || p - x <= radius);
    count_bad += brute != d.exact_count;
    worst = std::max(worst, std::abs(d.reconstruction - static_cast<double>(d.exact_count)));
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "100 cases, worst residual %.3e, %zu count mismatches",
                worst, count_bad);
  return {worst < 1e-4 && count_bad == 0, buf};
}

// 7. max|S|/|H| < 1 for every subgroup with 2 <= |H| <= p - 2.
Verdict sub_triviality() {
  std::vector<u64> primes = modmath::primes_in_range(5, 300);
  for (u64 p : {101ull, 1009ull, 5003ull}) primes.push_back(p);
  std::size_t cases = 0, bad = 0;
  double worst = 0;
  for (u64 p : primes) {
    const auto ctx = modmath::build_prime_context(p);
    for (u64 d = 2; d <= p - 2; ++d) {
      if ((p - 1) % d != 0) continue;
      const auto prof = expsums::expsum_profile(residues::subgroup_of_order(ctx, d));
      const double ratio = prof.max_magnitude / static_cast<double>(d);
      worst = std::max(worst, ratio);
      ++cases;
      bad += !(ratio < 1.0);
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu subgroups, largest ratio %.9f", cases, worst);
  return {bad == 0, buf};
}

// 8. Slope of ln k vs ln p, largest odd divisor with n > p^(1/3).
Verdict theorem_trend() {
  sweep::SweepConfig c;
  c.p_min = 1000;
  c.p_max = 100'000;
  c.n_min = 3;
  c.epsilon = 1.0 / 3.0;
  c.policy = sweep::NPolicy::LargestOddDivisor;
  c.workers = 8;
  const auto recs = sweep::run_sweep(c);
  const auto fit = sweep::fit_exponent(recs);
  char buf[128];
  std::snprintf(buf, sizeof buf, "%zu points, slope %.4f, intercept %.4f, r^2 %.4f",
                fit.n_points, fit.slope, fit.intercept, fit.r_squared);
  return {fit.slope < 1.0, buf};
}

// 9. Byte-identical output across worker counts.
Verdict determinism() {
  const auto dir = std::filesystem::temp_directory_path();
  auto run = [&](unsigned workers, sweep::Format fmt, const std::string& name) {
    sweep::SweepConfig c;
    c.p_min = 5;
    c.p_max = 3000;
    c.n_min = 1;
    c.with_expsums = true;
    c.workers = workers;
    const auto path = dir / name;
    sweep::write_records(sweep::run_sweep(c), path, fmt);
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    std::filesystem::remove(path);
    return s.str();
  };
  const bool csv = run(1, sweep::Format::Csv, "powres_acc_1.csv") ==
                   run(8, sweep::Format::Csv, "powres_acc_8.csv");
  const bool jsonl = run(1, sweep::Format::Jsonl, "powres_acc_1.jsonl") ==
                     run(3, sweep::Format::Jsonl, "powres_acc_3.jsonl");
  return {csv && jsonl, std::string("csv ") + (csv ? "identical" : "DIFFERS") +
                            ", jsonl " + (jsonl ? "identical" : "DIFFERS")};
}

// 10. Harmonic majorization for all primes <= 10^4.
Verdict harmonic() {
  std::size_t cases = 0, bad = 0;
  double tightest = 0;
  for (u64 p : modmath::primes_in_range(5, 10'000)) {
    const auto h = expsums::harmonic_bound_check(p);
    ++cases;
    bad += !h.ok;
    tightest = std::max(tightest, h.lhs / h.rhs);
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu primes, max lhs/rhs %.4f", cases, tightest);
  return {bad == 0, buf};
}

}  // namespace

int main() {
  std::mt19937_64 rng(0x5eed);
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"1  Chowla-London sandwich (p <= 1e4)", sandwich},
      {"2  compute_k == brute_force_k (p < 2000)", oracle_equivalence},
      {"3  n-th root solution sets (200 triples)", [&] { return lemma_one(rng); }},
      {"4  Parseval identity (p in {101,1009,5003})", parseval},
      {"5  Dirichlet closed form and envelope", dirichlet},
      {"6  Orthogonality reconstruction (100 cases)", [&] { return reconstruction(rng); }},
      {"7  Sub-trivial subgroup sums", sub_triviality},
      {"8  Growth exponent of k below 1", theorem_trend},
      {"9  Sweep determinism across workers", determinism},
      {"10 Harmonic bound (p <= 1e4)", harmonic},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %-46s %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", name.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
    failures += !v.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
