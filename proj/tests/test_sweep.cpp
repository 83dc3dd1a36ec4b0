#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "powres/error.hpp"
#include "powres/sweep.hpp"

using namespace powres::sweep;
using powres::Error;
using powres::ErrorCode;
using powres::Rational;

namespace {

template <typename F>
ErrorCode error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::IoError;
}

SweepConfig range(u64 lo, u64 hi) {
  SweepConfig c;
  c.p_min = lo;
  c.p_max = hi;
  return c;
}

SweepRecord synthetic(u64 p, u64 k) {
  SweepRecord r;
  r.p = p;
  r.n = 3;
  r.k = k;
  r.log_p = std::log(static_cast<double>(p));
  r.log_k = std::log(static_cast<double>(k));
  return r;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("powres_test_" + name);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("enumerate_cases examples") {
  CHECK(enumerate_cases(range(13, 13)) == std::vector<SweepCase>{{13, 3}});
  CHECK(enumerate_cases(range(7, 7)) == std::vector<SweepCase>{{7, 3}});
  auto c = range(7, 7);
  c.epsilon = 0.99;
  CHECK(enumerate_cases(c).empty());
  CHECK(error_of([] { enumerate_cases(range(8, 10)); }) == ErrorCode::EmptyRange);
  CHECK(error_of([] { enumerate_cases(range(20, 10)); }) == ErrorCode::EmptyRange);
  CHECK(error_of([] { enumerate_cases(range(3, 10)); }) == ErrorCode::InvalidConfig);
}

TEST_CASE("enumerate_cases policies and ordering") {
  auto c = range(5, 200);
  c.n_min = 1;
  c.epsilon = 0.0;
  const auto all = enumerate_cases(c);
  CHECK(std::is_sorted(all.begin(), all.end()));
  for (const auto& [p, n] : all) {
    CHECK(n % 2 == 1);
    CHECK((p - 1) % n == 0);
    CHECK(n > 1);
  }
  c.policy = NPolicy::LargestOddDivisor;
  c.n_min = 3;
  const auto largest = enumerate_cases(c);
  CHECK(std::find(largest.begin(), largest.end(), SweepCase{61, 15}) != largest.end());
  CHECK(std::find(largest.begin(), largest.end(), SweepCase{17, 1}) == largest.end());
  c.policy = NPolicy::FixedN;
  c.fixed_n = 5;
  for (const auto& [p, n] : enumerate_cases(c)) {
    CHECK(n == 5);
    CHECK((p - 1) % 5 == 0);
  }
  c.epsilon = 1.0 / 3.0;
  c.policy = NPolicy::AllOddDivisors;
  for (const auto& [p, n] : enumerate_cases(c)) {
    CHECK(static_cast<double>(n) * n * n > static_cast<double>(p));
  }
}

TEST_CASE("run_sweep single cases") {
  auto recs = run_sweep(range(13, 13));
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].k == 2);
  CHECK(recs[0].normalized == 1.0);
  CHECK(recs[0].lower == Rational(2));
  CHECK(recs[0].upper_exclusive == Rational(13, 3));
  recs = run_sweep(range(7, 7));
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].k == 1);
  CHECK(recs[0].normalized == 1.0);
}

TEST_CASE("run_sweep records respect the lower bound and expsum fields") {
  auto c = range(5, 400);
  c.with_expsums = true;
  for (const auto& r : run_sweep(c)) {
    REQUIRE_FALSE(r.skipped());
    REQUIRE(r.normalized >= 1.0);
    REQUIRE(r.max_expsum_ratio.has_value());
    REQUIRE(*r.max_expsum_ratio < 1.0);
    REQUIRE(r.delta_emp.has_value());
    REQUIRE(std::isfinite(*r.delta_emp));
  }
}

TEST_CASE("cap failures become skipped records") {
  auto c = range(5, 100);
  c.limits.enumeration_cap = 8;
  const auto recs = run_sweep(c);
  std::size_t skipped = 0;
  for (const auto& r : recs) {
    if (r.skipped()) {
      ++skipped;
      CHECK((r.p - 1) / r.n > 8);
    }
  }
  CHECK(skipped > 0);
  const auto csv = format_records(recs, Format::Csv);
  const auto jsonl = format_records(recs, Format::Jsonl);
  CHECK(parse_records(csv, Format::Csv).size() == recs.size() - skipped);
  CHECK(parse_records(jsonl, Format::Jsonl) == recs);
  CHECK(jsonl.find("skip_reason") != std::string::npos);
}

TEST_CASE("worker count does not change output") {
  auto c = range(5, 500);
  c.with_expsums = true;
  c.workers = 1;
  const auto a = run_sweep(c);
  c.workers = 8;
  const auto b = run_sweep(c);
  CHECK(format_records(a, Format::Csv) == format_records(b, Format::Csv));
  CHECK(format_records(a, Format::Jsonl) == format_records(b, Format::Jsonl));
}

TEST_CASE("fit_exponent") {
  std::vector<SweepRecord> exact;
  for (u64 p : {101, 211, 1009, 5003}) exact.push_back(synthetic(p, p));
  auto fit = fit_exponent(exact);
  CHECK(fit.slope == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.n_points == 4);

  std::vector<SweepRecord> root;
  for (u64 p : powres::modmath::primes_in_range(1000, 100'000)) {
    root.push_back(synthetic(p, static_cast<u64>(std::sqrt(static_cast<double>(p)))));
  }
  fit = fit_exponent(root);
  CHECK(std::abs(fit.slope - 0.5) < 0.05);
  CHECK(fit.r_squared >= 0.0);
  CHECK(fit.r_squared <= 1.0);

  CHECK(error_of([] { fit_exponent({synthetic(13, 2)}); }) == ErrorCode::InsufficientData);
  CHECK(error_of([] { fit_exponent({synthetic(13, 2), synthetic(13, 3)}); }) ==
        ErrorCode::InsufficientData);
}

TEST_CASE("write_records formats") {
  const auto empty = temp_file("empty.csv");
  write_records({}, empty, Format::Csv);
  CHECK(slurp(empty) == std::string(kCsvHeader) + "\n");

  const auto one = temp_file("one.csv");
  const auto recs = run_sweep(range(13, 13));
  write_records(recs, one, Format::Csv);
  CHECK(slurp(one) == std::string(kCsvHeader) + "\n13,3,2,2,1,13,3,1,,,0\n");
  CHECK(read_records(one, Format::Csv) == recs);

  const auto jl = temp_file("one.jsonl");
  write_records(recs, jl, Format::Jsonl);
  CHECK(slurp(jl) ==
        "{\"p\":13,\"n\":3,\"k\":2,\"lower_num\":2,\"lower_den\":1,"
        "\"upper_num\":13,\"upper_den\":3,\"normalized\":1.0,"
        "\"max_expsum_ratio\":null,\"delta_emp\":null,\"elapsed_ms\":0}\n");
  CHECK(read_records(jl, Format::Jsonl) == recs);

  CHECK(error_of([&] {
          write_records(recs, "/nonexistent-dir/x.csv", Format::Csv);
        }) == ErrorCode::IoError);
  std::filesystem::remove(empty);
  std::filesystem::remove(one);
  std::filesystem::remove(jl);
}

TEST_CASE("serialization round-trips a sweep with expsums") {
  auto c = range(5, 300);
  c.with_expsums = true;
  c.n_min = 1;
  c.record_timing = true;
  const auto recs = run_sweep(c);
  CHECK(parse_records(format_records(recs, Format::Csv), Format::Csv) == recs);
  CHECK(parse_records(format_records(recs, Format::Jsonl), Format::Jsonl) == recs);
}
