#pragma once

// Exact rational arithmetic plumbing shared by every module.
//
// We deliberately sit on top of GMP (mpq_class / mpz_class): the interval
// measures and Chung-Erdos sums below produce denominators with hundreds of
// digits, far beyond any fixed-width type.  Hot counting loops never touch
// these types; they extract 64-bit numerator/denominator pairs up front.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace popcorn {

using rational = mpq_class;
using bigint = mpz_class;

// p/q in lowest terms (mpq_class does not canonicalize two-arg constructions
// on its own, so route everything through here).
inline rational make_rational(const bigint& num, const bigint& den) {
  if (den == 0) throw std::domain_error("rational: zero denominator");
  rational r(num, den);
  r.canonicalize();
  return r;
}

inline rational make_rational(long num, long den) {
  return make_rational(bigint(num), bigint(den));
}

inline bigint rat_num(const rational& x) { return x.get_num(); }
inline bigint rat_den(const rational& x) { return x.get_den(); }

inline bigint rat_floor(const rational& x) {
  bigint q;
  mpz_fdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

inline bigint rat_ceil(const rational& x) {
  bigint q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return q;
}

inline double to_double(const rational& x) { return x.get_d(); }

inline bool fits_u64(const bigint& x) {
  return x >= 0 && mpz_sizeinbase(x.get_mpz_t(), 2) <= 64;
}

inline std::uint64_t to_u64(const bigint& x) {
  if (!fits_u64(x)) throw std::overflow_error("value does not fit in 64 bits");
  std::uint64_t lo = mpz_get_ui(x.get_mpz_t());
  if (mpz_sizeinbase(x.get_mpz_t(), 2) > 8 * sizeof(unsigned long)) {
    // 32-bit ulong platforms would need a second limb; we only target LP64.
    throw std::overflow_error("unsupported platform word size");
  }
  return lo;
}

// Strict "p" or "p/q" with decimal digits only; no signs, decimals, exponents.
inline rational parse_rational(const std::string& text) {
  const auto bad = [&] {
    throw std::invalid_argument("expected a rational like 3/4, got '" + text + "'");
  };
  if (text.empty()) bad();
  std::string::size_type slash = text.find('/');
  const std::string num_part = text.substr(0, slash);
  const std::string den_part =
      slash == std::string::npos ? "1" : text.substr(slash + 1);
  if (num_part.empty() || den_part.empty()) bad();
  for (char c : num_part)
    if (c < '0' || c > '9') bad();
  for (char c : den_part)
    if (c < '0' || c > '9') bad();
  bigint num(num_part), den(den_part);
  if (den == 0) bad();
  return make_rational(num, den);
}

inline std::string to_string(const rational& x) {
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

}  // namespace popcorn
