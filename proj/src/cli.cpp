#include "powres/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <json.hpp>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "powres/expsums.hpp"
#include "powres/modmath.hpp"
#include "powres/residues.hpp"
#include "powres/sweep.hpp"

namespace powres::cli {

namespace {

using json = nlohmann::ordered_json;
using modmath::u64;

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string join(const std::vector<u64>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(v[i]);
  }
  return s + "}";
}

json rational_json(const Rational& r) {
  return {{"num", to_string(r.num())}, {"den", to_string(r.den())},
          {"text", to_string(r)}};
}


int cmd_compute(u64 p, u64 n, bool as_json, std::ostream& out) {
  const auto ctx = modmath::build_prime_context(p);
  const auto res = residues::compute_k(ctx, n, residues::Limits::from_env());
  const bool checked = n >= 3;
  const bool pass = !checked || res.within_bounds();
  const std::string verdict = !checked ? "SKIPPED" : pass ? "PASS" : "FAIL";
  if (as_json) {
    json j{{"p", p},
           {"n", n},
           {"k", res.k},
           {"lower", rational_json(res.lower)},
           {"upper_exclusive", rational_json(res.upper_exclusive)},
           {"check", verdict}};
    out << j.dump() << '\n';
  } else {
    out << "p = " << p << ", n = " << n << '\n'
        << "k = " << res.k << '\n'
        << "bounds: [" << to_string(res.lower) << ", "
        << to_string(res.upper_exclusive) << ")\n"
        << "chowla-london: " << verdict;
    if (!checked) out << " (upper bound is vacuous for n = 1)";
    out << '\n';
  }
  return pass ? kExitOk : kExitDomain;
}

int cmd_roots(u64 p, u64 n, u64 m, bool as_json, std::ostream& out) {
  const auto ctx = modmath::build_prime_context(p);
  const auto limits = residues::Limits::from_env();
  const auto roots = residues::nth_root_solutions(ctx, n, m, limits);
  const u64 h_gen = modmath::powmod(ctx.g, (p - 1) / n, p);
  if (as_json) {
    json j{{"p", p},   {"n", n},   {"m", m},
           {"g", ctx.g}, {"h_generator", h_gen}, {"x0", roots.x0},
           {"roots", roots.roots}};
    out << j.dump() << '\n';
  } else {
    out << "roots: " << join(roots.roots) << '\n'
        << "x0 = " << roots.x0 << '\n'
        << "g = " << ctx.g << '\n'
        << "H generator = " << h_gen << '\n';
  }
  return kExitOk;
}

int cmd_expsum(u64 p, u64 d, bool profile_mode, bool as_json,
               std::ostream& out) {
  const auto ctx = modmath::build_prime_context(p);
  const auto h = residues::subgroup_of_order(ctx, d, residues::Limits::from_env());
  const auto prof = expsums::expsum_profile(h);
  const double ratio = prof.max_magnitude / static_cast<double>(d);
  std::optional<double> delta;
  if (d >= 2) delta = expsums::empirical_delta(prof);
  if (as_json) {
    json j{{"p", p},
           {"order", d},
           {"max_magnitude", prof.max_magnitude},
           {"argmax_a", prof.argmax_a},
           {"ratio", ratio},
           {"delta_emp", delta ? json(*delta) : json(nullptr)},
           {"parseval_residual", prof.parseval_residual}};
    if (profile_mode) {
      json cosets = json::array();
      for (const auto& [a, s] : prof.coset_values) {
        cosets.push_back({{"a", a}, {"re", s.real()}, {"im", s.imag()},
                          {"magnitude", std::abs(s)}});
      }
      j["cosets"] = std::move(cosets);
    }
    out << j.dump() << '\n';
  } else {
    out << "p = " << p << ", |H| = " << d << '\n'
        << "max|S| = " << fmt(prof.max_magnitude) << " (a = " << prof.argmax_a
        << ")\n"
        << "max|S|/|H| = " << fmt(ratio) << '\n'
        << "delta_emp = " << (delta ? fmt(*delta) : "n/a") << '\n'
        << "parseval residual = " << fmt(prof.parseval_residual) << '\n';
    if (profile_mode) {
      out << "coset_rep,re,im,magnitude\n";
      for (const auto& [a, s] : prof.coset_values) {
        out << a << ',' << fmt(s.real()) << ',' << fmt(s.imag()) << ','
            << fmt(std::abs(s)) << '\n';
      }
    }
  }
  return kExitOk;
}

int cmd_decompose(u64 p, u64 n, u64 m, u64 radius, bool as_json,
                  std::ostream& out) {
  const auto ctx = modmath::build_prime_context(p);
  const auto d = expsums::orthogonality_decomposition(
      ctx, n, m, radius, residues::Limits::from_env());
  const double residual =
      std::abs(d.reconstruction - static_cast<double>(d.exact_count));
  if (as_json) {
    json j{{"p", p},
           {"n", n},
           {"m", m},
           {"K", radius},
           {"exact_count", d.exact_count},
           {"main_term", d.main_term},
           {"error_term", d.error_term},
           {"reconstruction", d.reconstruction},
           {"residual", residual}};
    out << j.dump() << '\n';
  } else {
    out << "exact_count = " << d.exact_count << '\n'
        << "main_term = " << fmt(d.main_term) << '\n'
        << "error_term = " << fmt(d.error_term) << '\n'
        << "reconstruction = " << fmt(d.reconstruction) << '\n'
        << "residual = " << fmt(residual) << '\n';
  }
  return kExitOk;
}

int cmd_sweep(const sweep::SweepConfig& config, const std::string& out_path,
              sweep::Format format, bool as_json, std::ostream& out) {
  const auto records = sweep::run_sweep(config);
  if (!out_path.empty()) sweep::write_records(records, out_path, format);

  std::size_t skipped = 0;
  double min_norm = std::numeric_limits<double>::infinity();
  double max_norm = -std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    if (r.skipped()) {
      ++skipped;
      continue;
    }
    min_norm = std::min(min_norm, r.normalized);
    max_norm = std::max(max_norm, r.normalized);
  }
  std::optional<sweep::FitResult> fit;
  try {
    fit = sweep::fit_exponent(records);
  } catch (const Error&) {
    // Too few points for a slope; reported as absent.
  }
  const bool have_norm = records.size() > skipped;
  if (as_json) {
    json j{{"cases", records.size()},
           {"skipped", skipped},
           {"slope", fit ? json(fit->slope) : json(nullptr)},
           {"intercept", fit ? json(fit->intercept) : json(nullptr)},
           {"r_squared", fit ? json(fit->r_squared) : json(nullptr)},
           {"min_normalized", have_norm ? json(min_norm) : json(nullptr)},
           {"max_normalized", have_norm ? json(max_norm) : json(nullptr)}};
    if (!out_path.empty()) j["out"] = out_path;
    out << j.dump() << '\n';
  } else {
    out << "cases: " << records.size() << '\n'
        << "skipped: " << skipped << '\n'
        << "slope: " << (fit ? fmt(fit->slope) : "n/a") << '\n'
        << "r_squared: " << (fit ? fmt(fit->r_squared) : "n/a") << '\n'
        << "normalized: ["
        << (have_norm ? fmt(min_norm) : "n/a") << ", "
        << (have_norm ? fmt(max_norm) : "n/a") << "]\n";
    if (!out_path.empty()) out << "written: " << out_path << '\n';
  }
  return kExitOk;
}

int cmd_verify(u64 p_max, unsigned workers, bool as_json, std::ostream& out) {
  if (p_max < 5) {
    throw Error(ErrorCode::EmptyRange, "empty range: no primes in [5, p-max]");
  }
  sweep::SweepConfig config;
  config.p_min = 5;
  config.p_max = p_max;
  config.n_min = 3;
  config.workers = workers;
  config.limits = residues::Limits::from_env();
  const auto records = sweep::run_sweep(config);
  // run_sweep already refuses to emit a record outside the bounds; check
  // again here so the command stands on its own.
  std::vector<const sweep::SweepRecord*> bad;
  std::size_t skipped = 0;
  for (const auto& r : records) {
    if (r.skipped()) {
      ++skipped;
      continue;
    }
    const Rational k(static_cast<i128>(r.k));
    if (!(r.lower <= k && k < r.upper_exclusive)) bad.push_back(&r);
  }
  if (as_json) {
    json viol = json::array();
    for (const auto* r : bad) viol.push_back({{"p", r->p}, {"n", r->n}, {"k", r->k}});
    json j{{"cases", records.size()}, {"skipped", skipped},
           {"violations", std::move(viol)}, {"pass", bad.empty()}};
    out << j.dump() << '\n';
  } else if (bad.empty()) {
    out << "all " << records.size() - skipped << " cases pass";
    if (skipped) out << " (" << skipped << " skipped)";
    out << '\n';
  } else {
    for (const auto* r : bad) {
      out << "violation: p = " << r->p << ", n = " << r->n << ", k = " << r->k
          << ", bounds [" << to_string(r->lower) << ", "
          << to_string(r->upper_exclusive) << ")\n";
    }
  }
  return bad.empty() ? kExitOk : kExitDomain;
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ScaleLimit:
    case ErrorCode::TooLarge:
    case ErrorCode::NotEnumerated:
      return kExitScale;
    case ErrorCode::EmptyRange:
    case ErrorCode::InvalidConfig:
      return kExitUsage;
    default:
      return kExitDomain;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Covering numbers of n-th power residues modulo a prime"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Emit machine-readable JSON");

  u64 p = 0, n = 0, m = 0, radius = 0;

  auto* compute = app.add_subcommand("compute", "k(p, n) with its bounds");
  compute->add_option("p", p)->required();
  compute->add_option("n", n)->required();
  compute->add_flag("--json", as_json);

  auto* roots = app.add_subcommand("roots", "All solutions of x^n = m (mod p)");
  roots->add_option("p", p)->required();
  roots->add_option("n", n)->required();
  roots->add_option("m", m)->required();
  roots->add_flag("--json", as_json);

  bool max_only = false, profile = false;
  auto* expsum = app.add_subcommand(
      "expsum", "Exponential sums over the subgroup of order n");
  expsum->add_option("p", p)->required();
  expsum->add_option("n", n, "Subgroup order (any divisor of p - 1)")->required();
  auto* max_flag = expsum->add_flag("--max-only", max_only);
  expsum->add_flag("--profile", profile)->excludes(max_flag);
  expsum->add_flag("--json", as_json);

  auto* decompose = app.add_subcommand(
      "decompose", "Orthogonality decomposition of the interval root count");
  decompose->add_option("p", p)->required();
  decompose->add_option("n", n)->required();
  decompose->add_option("m", m)->required();
  decompose->add_option("K", radius)->required();
  decompose->add_flag("--json", as_json);

  sweep::SweepConfig config;
  std::string policy = "all_odd_divisors";
  std::string out_path;
  std::string format_name = "csv";
  auto* sweep_cmd = app.add_subcommand("sweep", "Batch k(p, n) over a prime range");
  sweep_cmd->add_option("--p-min", config.p_min)->required();
  sweep_cmd->add_option("--p-max", config.p_max)->required();
  sweep_cmd->add_option("--n-min", config.n_min)->capture_default_str();
  sweep_cmd->add_option("--epsilon", config.epsilon)->capture_default_str();
  sweep_cmd->add_option("--policy", policy)
      ->check(CLI::IsMember({"all_odd_divisors", "largest_odd_divisor", "fixed_n"}))
      ->capture_default_str();
  sweep_cmd->add_option("--fixed-n", config.fixed_n);
  sweep_cmd->add_option("--out", out_path);
  sweep_cmd->add_option("--format", format_name)
      ->check(CLI::IsMember({"csv", "jsonl"}))
      ->capture_default_str();
  sweep_cmd->add_option("--workers", config.workers)->capture_default_str();
  sweep_cmd->add_flag("--with-expsums", config.with_expsums);
  sweep_cmd->add_flag("--timing", config.record_timing,
                      "Record wall-clock elapsed_ms (output no longer reproducible)");
  sweep_cmd->add_flag("--json", as_json);

  u64 verify_p_max = 0;
  unsigned verify_workers = 1;
  auto* verify = app.add_subcommand("verify", "Check the Chowla-London bounds");
  verify->add_option("--p-max", verify_p_max)->required();
  verify->add_option("--workers", verify_workers)->capture_default_str();
  verify->add_flag("--json", as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (compute->parsed()) return cmd_compute(p, n, as_json, out);
    if (roots->parsed()) return cmd_roots(p, n, m, as_json, out);
    if (expsum->parsed()) return cmd_expsum(p, n, profile, as_json, out);
    if (decompose->parsed()) return cmd_decompose(p, n, m, radius, as_json, out);
    if (sweep_cmd->parsed()) {
      config.policy = *sweep::parse_policy(policy);
      config.limits = residues::Limits::from_env();
      const auto format =
          format_name == "jsonl" ? sweep::Format::Jsonl : sweep::Format::Csv;
      return cmd_sweep(config, out_path, format, as_json, out);
    }
    if (verify->parsed()) return cmd_verify(verify_p_max, verify_workers, as_json, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << " [" << to_string(e.code()) << "]\n";
    return exit_code_for(e.code());
  }
  return kExitUsage;
}

}  // namespace powres::cli
