#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace powres {

using i128 = __int128;

/// Exact non-negative-denominator rational kept in lowest terms. Wide
/// enough for (n - 1) p / 2 with p < 2^62.
class Rational {
 public:
  Rational() = default;
  Rational(i128 num, i128 den = 1);

  i128 num() const { return num_; }
  i128 den() const { return den_; }
  double to_double() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

 private:
  i128 num_ = 0;
  i128 den_ = 1;
};

std::string to_string(i128 v);
/// "a" for integers, "a/b" otherwise.
std::string to_string(const Rational& r);

}  // namespace powres
