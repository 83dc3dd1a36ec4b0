#include "powres/rational.hpp"

#include <algorithm>
#include <stdexcept>

namespace powres {

namespace {

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace

Rational::Rational(i128 num, i128 den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const i128 g = gcd128(num, den);
  num_ = g == 0 ? 0 : num / g;
  den_ = g == 0 ? 1 : den / g;
}

double Rational::to_double() const {
  return static_cast<double>(num_) / static_cast<double>(den_);
}

// Cross-multiplication needs up to ~2^190 for the widest bounds we build,
// so compare by integer part first and then by the remainders.
std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  auto floor_div = [](i128 n, i128 d) {
    i128 q = n / d;
    if ((n % d != 0) && (n < 0)) --q;
    return q;
  };
  i128 an = a.num_, ad = a.den_, bn = b.num_, bd = b.den_;
  for (;;) {
    const i128 qa = floor_div(an, ad);
    const i128 qb = floor_div(bn, bd);
    if (qa != qb) return qa <=> qb;
    an -= qa * ad;
    bn -= qb * bd;
    // Both fractional parts now lie in [0, 1).
    if (an == 0 || bn == 0) return an <=> bn;
    // an/ad < bn/bd  <=>  bd/bn < ad/an
    const i128 next_an = bd, next_ad = bn, next_bn = ad, next_bd = an;
    an = next_an;
    ad = next_ad;
    bn = next_bn;
    bd = next_bd;
  }
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                            : static_cast<unsigned __int128>(v);
  std::string s;
  while (u > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

std::string to_string(const Rational& r) {
  if (r.den() == 1) return to_string(r.num());
  return to_string(r.num()) + "/" + to_string(r.den());
}

}  // namespace powres
