#include "powres/sweep.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "powres/error.hpp"
#include "powres/expsums.hpp"

namespace powres::sweep {

namespace {

using json = nlohmann::ordered_json;

constexpr u64 kSweepPrimeLimit = u64{1} << 32;

void finalize_logs(SweepRecord& rec) {
  rec.log_p = std::log(static_cast<double>(rec.p));
  rec.log_k = rec.k > 0 ? std::log(static_cast<double>(rec.k)) : 0.0;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse_number(std::string_view s) {
  T v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::IoError, "malformed number '" + std::string(s) + "'");
  }
  return v;
}

std::int64_t narrow(i128 v) {
  // p < 2^32 in a sweep keeps every bound component inside int64.
  return static_cast<std::int64_t>(v);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

json to_json(const SweepRecord& r) {
  json j;
  j["p"] = r.p;
  j["n"] = r.n;
  j["k"] = r.skipped() ? json(nullptr) : json(r.k);
  j["lower_num"] = narrow(r.lower.num());
  j["lower_den"] = narrow(r.lower.den());
  j["upper_num"] = narrow(r.upper_exclusive.num());
  j["upper_den"] = narrow(r.upper_exclusive.den());
  j["normalized"] = r.skipped() ? json(nullptr) : json(r.normalized);
  j["max_expsum_ratio"] =
      r.max_expsum_ratio ? json(*r.max_expsum_ratio) : json(nullptr);
  j["delta_emp"] = r.delta_emp ? json(*r.delta_emp) : json(nullptr);
  j["elapsed_ms"] = r.elapsed_ms;
  if (r.skip_reason) j["skip_reason"] = *r.skip_reason;
  return j;
}

SweepRecord from_json(const json& j) {
  SweepRecord r;
  r.p = j.at("p").get<u64>();
  r.n = j.at("n").get<u64>();
  r.k = j.at("k").is_null() ? 0 : j.at("k").get<u64>();
  r.lower = Rational(j.at("lower_num").get<std::int64_t>(),
                     j.at("lower_den").get<std::int64_t>());
  r.upper_exclusive = Rational(j.at("upper_num").get<std::int64_t>(),
                               j.at("upper_den").get<std::int64_t>());
  r.normalized = j.at("normalized").is_null() ? 0.0
                                              : j.at("normalized").get<double>();
  if (!j.at("max_expsum_ratio").is_null()) {
    r.max_expsum_ratio = j.at("max_expsum_ratio").get<double>();
  }
  if (!j.at("delta_emp").is_null()) r.delta_emp = j.at("delta_emp").get<double>();
  r.elapsed_ms = j.at("elapsed_ms").get<std::int64_t>();
  if (j.contains("skip_reason")) {
    r.skip_reason = j.at("skip_reason").get<std::string>();
  }
  finalize_logs(r);
  return r;
}

}  // namespace

std::optional<NPolicy> parse_policy(const std::string& s) {
  if (s == "all_odd_divisors") return NPolicy::AllOddDivisors;
  if (s == "largest_odd_divisor") return NPolicy::LargestOddDivisor;
  if (s == "fixed_n") return NPolicy::FixedN;
  return std::nullopt;
}

std::string to_string(NPolicy policy) {
  switch (policy) {
    case NPolicy::AllOddDivisors: return "all_odd_divisors";
    case NPolicy::LargestOddDivisor: return "largest_odd_divisor";
    case NPolicy::FixedN: return "fixed_n";
  }
  return "unknown";
}

void validate(const SweepConfig& config) {
  if (config.p_min < 5) {
    throw Error(ErrorCode::InvalidConfig, "p_min must be at least 5");
  }
  if (config.p_max >= kSweepPrimeLimit) {
    throw Error(ErrorCode::InvalidConfig, "p_max must be below 2^32");
  }
  if (!(config.epsilon >= 0.0 && config.epsilon < 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "epsilon must lie in [0, 1)");
  }
  if (config.workers < 1) {
    throw Error(ErrorCode::InvalidConfig, "workers must be at least 1");
  }
  if (config.policy == NPolicy::FixedN &&
      (config.fixed_n < 1 || config.fixed_n % 2 == 0)) {
    throw Error(ErrorCode::InvalidConfig, "fixed n must be odd and positive");
  }
  if (config.p_min > config.p_max) {
    throw Error(ErrorCode::EmptyRange, "p_min exceeds p_max");
  }
}

std::vector<SweepCase> enumerate_cases(const SweepConfig& config) {
  validate(config);
  const auto primes = modmath::primes_in_range(config.p_min, config.p_max);
  if (primes.empty()) {
    throw Error(ErrorCode::EmptyRange, "no primes in the requested range");
  }
  std::vector<SweepCase> cases;
  for (u64 p : primes) {
    std::vector<u64> candidates;
    switch (config.policy) {
      case NPolicy::AllOddDivisors:
        candidates = modmath::odd_divisors(p - 1);
        break;
      case NPolicy::LargestOddDivisor: {
        u64 odd = p - 1;
        while (odd % 2 == 0) odd /= 2;
        candidates = {odd};
        break;
      }
      case NPolicy::FixedN:
        if ((p - 1) % config.fixed_n == 0) candidates = {config.fixed_n};
        break;
    }
    const double threshold = std::pow(static_cast<double>(p), config.epsilon);
    for (u64 n : candidates) {
      if (n >= config.n_min && static_cast<double>(n) > threshold) {
        cases.push_back({p, n});
      }
    }
  }
  return cases;
}

SweepRecord run_case(const SweepCase& c, const SweepConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const auto ctx = modmath::build_prime_context(c.p);
  const auto bounds = residues::chowla_london_bounds(c.p, c.n);

  SweepRecord rec;
  rec.p = c.p;
  rec.n = c.n;
  rec.lower = bounds.lower;
  rec.upper_exclusive = bounds.upper_exclusive;
  try {
    const auto kr = residues::compute_k(ctx, c.n, config.limits);
    rec.k = kr.k;
    if (c.n >= 3 && !kr.within_bounds()) {
      throw std::logic_error("bound violation at p=" + std::to_string(c.p) +
                             " n=" + std::to_string(c.n));
    }
    rec.normalized = static_cast<double>(2 * kr.k * c.n) /
                     static_cast<double>(c.p - 1);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ScaleLimit &&
        e.code() != ErrorCode::NotEnumerated) {
      throw;
    }
    rec.skip_reason = e.what();
  }
  if (config.with_expsums && !rec.skipped() && c.n >= 2) {
    const auto h = residues::roots_of_unity_subgroup(ctx, c.n, config.limits);
    if (h.enumerated()) {
      const auto prof = expsums::expsum_profile(h);
      rec.max_expsum_ratio = prof.max_magnitude / static_cast<double>(c.n);
      rec.delta_emp = expsums::empirical_delta(prof);
    }
  }
  finalize_logs(rec);
  if (config.record_timing) {
    rec.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - start)
                         .count();
  }
  return rec;
}

std::vector<SweepRecord> run_sweep(const SweepConfig& config) {
  const auto cases = enumerate_cases(config);
  std::vector<SweepRecord> results(cases.size());
  std::atomic<std::size_t> next{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cases.size()) return;
      try {
        results[i] = run_case(cases[i], config);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(cases.size());
        return;
      }
    }
  };

  const unsigned count = std::min<std::size_t>(config.workers, std::max<std::size_t>(cases.size(), 1));
  {
    std::vector<std::jthread> pool;
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

FitResult fit_exponent(const std::vector<SweepRecord>& records) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : records) {
    if (!r.skipped() && r.k >= 1) pts.emplace_back(r.log_p, r.log_k);
  }
  if (pts.size() < 2) {
    throw Error(ErrorCode::InsufficientData, "fit needs at least two records");
  }
  const double count = static_cast<double>(pts.size());
  double mx = 0, my = 0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= count;
  my /= count;
  double sxx = 0, sxy = 0, syy = 0;
  for (auto [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx <= 0.0) {
    throw Error(ErrorCode::InsufficientData, "log p has zero variance");
  }
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.n_points = pts.size();
  if (syy <= 0.0) {
    fit.r_squared = 1.0;
  } else {
    fit.r_squared = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  }
  return fit;
}

std::string format_records(const std::vector<SweepRecord>& records,
                           Format format) {
  std::ostringstream out;
  if (format == Format::Csv) {
    out << kCsvHeader << '\n';
    for (const auto& r : records) {
      // Skipped cases have no k; they appear only in JSONL.
      if (r.skipped()) continue;
      out << r.p << ',' << r.n << ',' << r.k << ','
          << powres::to_string(r.lower.num()) << ',' << powres::to_string(r.lower.den()) << ','
          << powres::to_string(r.upper_exclusive.num()) << ','
          << powres::to_string(r.upper_exclusive.den()) << ','
          << format_double(r.normalized) << ','
          << (r.max_expsum_ratio ? format_double(*r.max_expsum_ratio) : "")
          << ',' << (r.delta_emp ? format_double(*r.delta_emp) : "") << ','
          << r.elapsed_ms << '\n';
    }
  } else {
    for (const auto& r : records) out << to_json(r).dump() << '\n';
  }
  return out.str();
}

std::vector<SweepRecord> parse_records(const std::string& text, Format format) {
  std::vector<SweepRecord> out;
  std::istringstream in(text);
  std::string line;
  if (format == Format::Csv) {
    if (!std::getline(in, line) || line != kCsvHeader) {
      throw Error(ErrorCode::IoError, "missing or unexpected CSV header");
    }
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto f = split(line, ',');
      if (f.size() != 11) {
        throw Error(ErrorCode::IoError, "CSV row has wrong column count");
      }
      SweepRecord r;
      r.p = parse_number<u64>(f[0]);
      r.n = parse_number<u64>(f[1]);
      r.k = parse_number<u64>(f[2]);
      r.lower = Rational(parse_number<std::int64_t>(f[3]),
                         parse_number<std::int64_t>(f[4]));
      r.upper_exclusive = Rational(parse_number<std::int64_t>(f[5]),
                                   parse_number<std::int64_t>(f[6]));
      r.normalized = parse_number<double>(f[7]);
      if (!f[8].empty()) r.max_expsum_ratio = parse_number<double>(f[8]);
      if (!f[9].empty()) r.delta_emp = parse_number<double>(f[9]);
      r.elapsed_ms = parse_number<std::int64_t>(f[10]);
      finalize_logs(r);
      out.push_back(std::move(r));
    }
  } else {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        out.push_back(from_json(json::parse(line)));
      } catch (const json::exception& e) {
        throw Error(ErrorCode::IoError, std::string("bad JSONL row: ") + e.what());
      }
    }
  }
  return out;
}

void write_records(const std::vector<SweepRecord>& records,
                   const std::filesystem::path& path, Format format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  out << format_records(records, format);
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

std::vector<SweepRecord> read_records(const std::filesystem::path& path,
                                      Format format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_records(buf.str(), format);
}

}  // namespace powres::sweep
