#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "powres/rational.hpp"
#include "powres/residues.hpp"

namespace powres::sweep {

using modmath::u64;

enum class NPolicy { AllOddDivisors, LargestOddDivisor, FixedN };
enum class Format { Csv, Jsonl };

std::optional<NPolicy> parse_policy(const std::string& s);
std::string to_string(NPolicy policy);

struct SweepConfig {
  u64 p_min = 5;
  u64 p_max = 5;
  u64 n_min = 3;
  double epsilon = 0.0;  // keep cases with n > p^epsilon
  NPolicy policy = NPolicy::AllOddDivisors;
  u64 fixed_n = 0;       // used by NPolicy::FixedN
  bool with_expsums = false;
  unsigned workers = 1;
  // Wall-clock timing breaks byte-identical output, so it is opt-in;
  // elapsed_ms is 0 otherwise.
  bool record_timing = false;
  residues::Limits limits{};
};

struct SweepCase {
  u64 p;
  u64 n;
  friend auto operator<=>(const SweepCase&, const SweepCase&) = default;
};

struct SweepRecord {
  u64 p = 0;
  u64 n = 0;
  u64 k = 0;
  Rational lower;
  Rational upper_exclusive;
  double normalized = 0.0;  // k * 2n / (p - 1)
  double log_p = 0.0;
  double log_k = 0.0;
  std::optional<double> max_expsum_ratio;
  std::optional<double> delta_emp;
  std::int64_t elapsed_ms = 0;
  std::optional<std::string> skip_reason;

  bool skipped() const { return skip_reason.has_value(); }
  friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

struct FitResult {
  double slope;
  double intercept;
  double r_squared;
  std::size_t n_points;
};

void validate(const SweepConfig& config);

/// Primes in [p_min, p_max] with their admissible odd n, sorted by (p, n).
std::vector<SweepCase> enumerate_cases(const SweepConfig& config);

/// Computes one record; cap failures become skipped records.
SweepRecord run_case(const SweepCase& c, const SweepConfig& config);

/// Runs every case on a pool of config.workers threads. Output order is
/// (p, n) regardless of completion order.
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

/// OLS of log k on log p over non-skipped records.
FitResult fit_exponent(const std::vector<SweepRecord>& records);

inline constexpr const char* kCsvHeader =
    "p,n,k,lower_num,lower_den,upper_num,upper_den,normalized,"
    "max_expsum_ratio,delta_emp,elapsed_ms";

std::string format_records(const std::vector<SweepRecord>& records,
                           Format format);
std::vector<SweepRecord> parse_records(const std::string& text, Format format);

void write_records(const std::vector<SweepRecord>& records,
                   const std::filesystem::path& path, Format format);
std::vector<SweepRecord> read_records(const std::filesystem::path& path,
                                      Format format);

}  // namespace powres::sweep
