#pragma once

// Exact interval-union arithmetic on [0,1]: the Diophantine neighborhoods
// E_n (around reduced fractions m/n) and F_l (around the collapsed-line
// points l/(ln+i)), their Lebesgue measures, intersections, and the
// Chung-Erdos second-moment lower bound.
//
// Everything here is closed-interval, arbitrary-precision rational.  A shared
// endpoint counts as overlap and merges; measure is unaffected and the
// normalized form stays canonical.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "popcorn/numtheory.hpp"
#include "popcorn/rational.hpp"

namespace popcorn {

struct MalformedIntervalError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PositiveEventError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Interval {
  rational lo;
  rational hi;
};

// Sorted, pairwise strictly-disjoint (hi_i < lo_{i+1}) closed intervals in
// [0,1].  Degenerate point intervals are kept unless merged into a longer
// part.  Construct through normalize().
class IntervalUnion {
 public:
  IntervalUnion() = default;

  static IntervalUnion normalize(std::vector<Interval> parts) {
    for (const Interval& iv : parts) {
      if (iv.lo > iv.hi)
        throw MalformedIntervalError("interval with lo > hi");
    }
    std::vector<Interval> clipped;
    clipped.reserve(parts.size());
    const rational zero(0), one(1);
    for (Interval& iv : parts) {
      if (iv.hi < zero || iv.lo > one) continue;  // entirely outside [0,1]
      if (iv.lo < zero) iv.lo = zero;
      if (iv.hi > one) iv.hi = one;
      clipped.push_back(std::move(iv));
    }
    std::sort(clipped.begin(), clipped.end(),
              [](const Interval& a, const Interval& b) {
                if (a.lo != b.lo) return a.lo < b.lo;
                return a.hi < b.hi;
              });
    IntervalUnion u;
    for (Interval& iv : clipped) {
      if (!u.parts_.empty() && iv.lo <= u.parts_.back().hi) {
        if (iv.hi > u.parts_.back().hi) u.parts_.back().hi = std::move(iv.hi);
      } else {
        u.parts_.push_back(std::move(iv));
      }
    }
    return u;
  }

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }

  rational measure() const {
    rational total(0);
    for (const Interval& iv : parts_) total += iv.hi - iv.lo;
    return total;
  }

  // Set intersection by a two-pointer sweep over the sorted parts.
  friend IntervalUnion intersect(const IntervalUnion& a,
                                 const IntervalUnion& b) {
    IntervalUnion out;
    std::size_t i = 0, j = 0;
    while (i < a.parts_.size() && j < b.parts_.size()) {
      const Interval& x = a.parts_[i];
      const Interval& y = b.parts_[j];
      const rational lo = std::max(x.lo, y.lo);
      const rational hi = std::min(x.hi, y.hi);
      if (lo <= hi) out.parts_.push_back(Interval{lo, hi});
      if (x.hi < y.hi)
        ++i;
      else
        ++j;
    }
    return out;
  }

 private:
  std::vector<Interval> parts_;
};

// E_n: delta-neighborhoods [m/n - delta, m/n + delta] of the reduced
// fractions m/n (1 <= m <= n-1, gcd(m,n) = 1), clipped to [0,1] and merged.
// Before merging there are exactly phi(n) intervals.
inline IntervalUnion build_E_n(std::uint32_t n, const rational& delta) {
  if (n < 2) throw std::out_of_range("E_n needs n >= 2");
  if (delta <= 0 || delta >= 1)
    throw std::domain_error("E_n needs 0 < delta < 1");
  std::vector<Interval> parts;
  for (std::uint32_t m : coprime_residues(n)) {
    const rational center = make_rational(m, n);
    parts.push_back(Interval{center - delta, center + delta});
  }
  return IntervalUnion::normalize(std::move(parts));
}

// F_l at window parameter n: delta-neighborhoods of the collapsed-line
// x-projections l/(ln+i) over i coprime to l, 1 <= i <= l-1.
inline IntervalUnion build_F_l(std::uint32_t l, std::uint32_t n,
                               const rational& delta) {
  if (l < 2) throw std::out_of_range("F_l needs l >= 2");
  if (n < 1) throw std::out_of_range("F_l needs n >= 1");
  if (delta <= 0 || delta >= 1)
    throw std::domain_error("F_l needs 0 < delta < 1");
  std::vector<Interval> parts;
  for (std::uint32_t i : coprime_residues(l)) {
    const rational center =
        make_rational(bigint(l), bigint(l) * n + i);
    parts.push_back(Interval{center - delta, center + delta});
  }
  return IntervalUnion::normalize(std::move(parts));
}

// Chung-Erdos: P(union A_i) >= (sum mu(A_i))^2 / (sum_{i,j} mu(A_i ∩ A_j)),
// diagonal terms included.  Exact rational; every event must have positive
// measure for the bound to make sense.
inline rational chung_erdos_bound(const std::vector<IntervalUnion>& events) {
  if (events.empty())
    throw PositiveEventError("chung_erdos needs at least one event");
  rational first_moment(0);
  rational second_moment(0);
  std::vector<rational> measures;
  measures.reserve(events.size());
  for (const IntervalUnion& e : events) {
    rational mu = e.measure();
    if (mu <= 0)
      throw PositiveEventError("chung_erdos needs positive-measure events");
    first_moment += mu;
    second_moment += mu;  // diagonal term mu(A_i ∩ A_i)
    measures.push_back(std::move(mu));
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    for (std::size_t j = i + 1; j < events.size(); ++j) {
      const rational mu = intersect(events[i], events[j]).measure();
      second_moment += 2 * mu;
    }
  }
  return rational(first_moment * first_moment / second_moment);
}

}  // namespace popcorn
