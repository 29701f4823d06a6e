#pragma once

// Integer and totient kernels: linear sieve, coprime residues, the floor-based
// strip indices L_delta(k), and the totient growth diagnostic.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "popcorn/rational.hpp"

namespace popcorn {

// Raised when a strip index is requested past the last strip (k*delta > 1).
struct EmptyStripError : std::domain_error {
  using std::domain_error::domain_error;
};

inline constexpr std::uint32_t kTotientLimitCap = 100'000'000;

// Euler's totient for every n <= limit via a linear sieve, along with the
// smallest-prime-factor table the counting kernels reuse for coprime marking.
// phi(1) = 1 so that sum_{d|n} phi(d) = n holds verbatim.
class TotientTable {
 public:
  explicit TotientTable(std::uint32_t limit) : limit_(limit) {
    if (limit < 1) throw std::out_of_range("totient sieve needs limit >= 1");
    if (limit > kTotientLimitCap)
      throw std::length_error("totient sieve limit exceeds configured cap");
    phi_.assign(limit + 1, 0);
    spf_.assign(limit + 1, 0);
    phi_[1] = 1;
    spf_[1] = 1;
    std::vector<std::uint32_t> primes;
    primes.reserve(limit > 16 ? limit / 8 : 8);
    for (std::uint32_t n = 2; n <= limit; ++n) {
      if (spf_[n] == 0) {
        spf_[n] = n;
        phi_[n] = n - 1;
        primes.push_back(n);
      }
      for (std::uint32_t p : primes) {
        if (p > spf_[n]) break;
        const std::uint64_t np = static_cast<std::uint64_t>(n) * p;
        if (np > limit) break;
        spf_[np] = p;
        phi_[np] = (p == spf_[n]) ? phi_[n] * p : phi_[n] * (p - 1);
      }
    }
  }

  std::uint32_t limit() const { return limit_; }

  std::uint64_t phi(std::uint32_t n) const {
    if (n < 1 || n > limit_) throw std::out_of_range("totient: n out of range");
    return phi_[n];
  }

  bool is_prime(std::uint32_t n) const {
    return n >= 2 && n <= limit_ && spf_[n] == n;
  }

  // Distinct prime factors of n (at most 9 below 2^32); returns the count.
  int distinct_primes(std::uint32_t n, std::uint32_t out[9]) const {
    int cnt = 0;
    while (n > 1) {
      const std::uint32_t p = spf_[n];
      out[cnt++] = p;
      while (n % p == 0) n /= p;
    }
    return cnt;
  }

  // Exact sum of phi(q) for 2 <= q <= hi; used by enumeration cost guards.
  std::uint64_t phi_sum(std::uint32_t hi) const {
    if (hi > limit_) throw std::out_of_range("phi_sum beyond sieve limit");
    std::uint64_t s = 0;
    for (std::uint32_t q = 2; q <= hi; ++q) s += phi_[q];
    return s;
  }

 private:
  std::uint32_t limit_;
  std::vector<std::uint64_t> phi_;
  std::vector<std::uint32_t> spf_;
};

// Residues 1 <= m < l with gcd(m, l) = 1, ascending.  Plain gcd scan: this is
// never on a hot path, and l is capped so the scan stays O(l log l).
inline std::vector<std::uint32_t> coprime_residues(std::uint32_t l) {
  if (l < 2) throw std::out_of_range("coprime_residues needs l >= 2");
  if (l > 1'000'000)
    throw std::length_error("coprime_residues capped at l <= 10^6");
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 1; m < l; ++m)
    if (std::gcd(m, l) == 1) out.push_back(m);
  return out;
}

// L_delta(k) = floor(1/(k*delta)): the largest denominator level whose height
// 1/q still reaches the k-th height-delta strip.
inline std::uint64_t strip_index_L(std::uint64_t k, const rational& delta) {
  if (k < 1) throw std::out_of_range("strip index needs k >= 1");
  if (delta <= 0 || delta >= 1)
    throw std::domain_error("strip index needs 0 < delta < 1");
  const bigint num = rat_num(delta) * bigint(static_cast<unsigned long>(k));
  const bigint den = rat_den(delta);
  if (num > den)
    throw EmptyStripError("k*delta > 1: no strip at this index");
  bigint q;
  mpz_fdiv_q(q.get_mpz_t(), den.get_mpz_t(), num.get_mpz_t());
  return to_u64(q);
}

// L'_{delta,n}(k) = floor(1/(k*(n+1)*delta)): separating lines of the
// collapsed strips at window parameter n.
inline std::uint64_t collapsed_index_Lp(std::uint64_t k, std::uint32_t n,
                                        const rational& delta) {
  if (k < 1 || n < 1)
    throw std::out_of_range("collapsed index needs k >= 1, n >= 1");
  if (delta <= 0 || delta >= 1)
    throw std::domain_error("collapsed index needs 0 < delta < 1");
  const bigint num = rat_num(delta) * bigint(static_cast<unsigned long>(k)) *
                     bigint(n + 1ul);
  const bigint den = rat_den(delta);
  if (num > den)
    throw EmptyStripError("k*(n+1)*delta > 1: no collapsed strip here");
  bigint q;
  mpz_fdiv_q(q.get_mpz_t(), den.get_mpz_t(), num.get_mpz_t());
  return to_u64(q);
}

struct TotientBoundReport {
  double min_value = 0.0;   // min of phi(n) * log(log n) / n over the range
  std::uint32_t argmin = 0;
};

// Empirical floor of phi(n)*loglog(n)/n on [lo, hi].  The counting paths stay
// exact; this one diagnostic is evaluated in floating point on purpose.
inline TotientBoundReport verify_totient_bound(std::uint32_t lo,
                                               std::uint32_t hi) {
  if (lo < 3) throw std::out_of_range("loglog needs n >= 3");
  if (lo >= hi) throw std::out_of_range("totient bound needs lo < hi");
  TotientTable table(hi);
  TotientBoundReport rep;
  rep.min_value = std::numeric_limits<double>::infinity();
  for (std::uint32_t n = lo; n <= hi; ++n) {
    const double v =
        static_cast<double>(table.phi(n)) * std::log(std::log(n)) / n;
    if (v < rep.min_value) {
      rep.min_value = v;
      rep.argmin = n;
    }
  }
  return rep;
}

// (floor(a)^2 - ceil(b)^2) / (a^2 - b^2) for rationals a > b > 1, a - b >= 3.
// Lands in [1/3, 1]: floor(a) >= a-1, ceil(b) <= b+1, and the width >= 3
// bounds the loss.  Exposed so the property suite can sample it exactly.
inline rational square_estimate_ratio(const rational& a, const rational& b) {
  if (!(b > 1)) throw std::domain_error("square estimate needs b > 1");
  if (!(a - b >= 3)) throw std::domain_error("square estimate needs a-b >= 3");
  const bigint fa = rat_floor(a);
  const bigint cb = rat_ceil(b);
  const rational num(fa * fa - cb * cb);
  const rational den = a * a - b * b;
  return rational(num / den);
}

}  // namespace popcorn
