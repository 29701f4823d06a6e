#pragma once

// The popcorn (Thomae) function and the two layer structures of its graph:
// the horizontal view (all reduced fractions of a fixed denominator level q,
// at height 1/q) and the collapsed view (points of the graph on the line
// y = x/l with x between 1/(n+1) and 1/n).

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "popcorn/numtheory.hpp"
#include "popcorn/rational.hpp"

namespace popcorn {

// A point of the full popcorn set: either (p/q, 1/q) with 1 <= p < q reduced,
// or a base-segment point (x, 0).
struct PopcornPoint {
  rational x;
  rational y;
};

// f(x) = 1/q when x = p/q reduced with 1 <= p < q, else 0 (covers 0 and 1).
inline rational popcorn_value(const rational& x) {
  if (x < 0 || x > 1) throw std::domain_error("popcorn_value needs x in [0,1]");
  const bigint& p = rat_num(x);  // mpq_class keeps x canonical
  const bigint& q = rat_den(x);
  if (p >= 1 && p < q) return make_rational(bigint(1), q);
  return rational(0);
}

// Emit every reduced (m, q) with q_min <= q <= q_max, 1 <= m < q, level by
// level, m ascending within a level.  This is the oracle-grade enumerator:
// simple gcd scan, deliberately independent of the sieve-based counting
// kernels so the two can cross-check each other.
template <typename Sink>
inline void enumerate_levels(std::uint32_t q_min, std::uint32_t q_max,
                             Sink&& sink) {
  for (std::uint32_t q = std::max(q_min, 2u); q <= q_max; ++q)
    for (std::uint32_t m = 1; m < q; ++m)
      if (std::gcd(m, q) == 1) sink(q, m);
}

inline std::uint64_t count_levels(std::uint32_t q_max) {
  std::uint64_t n = 0;
  enumerate_levels(2, q_max, [&](std::uint32_t, std::uint32_t) { ++n; });
  return n;
}

inline std::vector<PopcornPoint> level_points(std::uint32_t q_min,
                                              std::uint32_t q_max) {
  std::vector<PopcornPoint> pts;
  enumerate_levels(q_min, q_max, [&](std::uint32_t q, std::uint32_t m) {
    pts.push_back(PopcornPoint{make_rational(m, q), make_rational(1, q)});
  });
  return pts;
}

// The k-th horizontal strip of height delta holds exactly the levels q with
// k*delta <= 1/q < (k+1)*delta, i.e. q in (L_delta(k+1), L_delta(k)].
struct StripSpec {
  std::uint64_t k = 0;
  rational delta;
  std::uint64_t level_lo = 0;  // exclusive
  std::uint64_t level_hi = 0;  // inclusive; lo == hi means an empty strip
};

inline StripSpec strip_spec(std::uint64_t k, const rational& delta) {
  if (k < 1) throw std::out_of_range("strip_spec needs k >= 1");
  StripSpec s;
  s.k = k;
  s.delta = delta;
  s.level_hi = strip_index_L(k, delta);
  // When (k+1)*delta exceeds 1 this is the top strip: every level down to 1
  // has height below (k+1)*delta, so the range is bounded below by 0.
  try {
    s.level_lo = strip_index_L(k + 1, delta);
  } catch (const EmptyStripError&) {
    s.level_lo = 0;
  }
  return s;
}

// Points of the graph on the line y = x/l inside 1/(n+1) < x < 1/n:
// (l/(ln+i), 1/(ln+i)) for i coprime to l.  Already reduced, because
// gcd(l, ln+i) = gcd(l, i) = 1.  Listed with x descending (i ascending).
struct CollapsedLine {
  std::uint32_t l = 2;
  std::uint32_t n = 1;
};

inline std::vector<PopcornPoint> collapsed_line_points(const CollapsedLine& s) {
  if (s.l < 2) throw std::out_of_range("collapsed line needs l >= 2");
  if (s.n < 1) throw std::out_of_range("collapsed line needs n >= 1");
  std::vector<PopcornPoint> pts;
  for (std::uint32_t i : coprime_residues(s.l)) {
    const bigint q = bigint(s.l) * s.n + i;
    pts.push_back(
        PopcornPoint{make_rational(bigint(s.l), q), make_rational(bigint(1), q)});
  }
  return pts;
}

}  // namespace popcorn
