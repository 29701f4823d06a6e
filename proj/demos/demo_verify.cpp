// Exercise the certified-inequality scans at demonstration sizes: the
// Duffin-Schaeffer overlap bound, the strip gap lemma, and one certified
// strip cover lower bound compared against the exact grid count.

#include <cstdio>

#include "popcorn/analysis.hpp"
#include "popcorn/covering.hpp"

using namespace popcorn;

int main() {
  const WorstRatioReport ds = verify_duffin_schaeffer(60, make_rational(1, 1000));
  std::printf("duffin-schaeffer n<=60, delta=1/1000: worst ratio %s (%.6f) at "
              "(%llu,%llu), %llu intersecting pairs\n",
              to_string(ds.worst).c_str(), to_double(ds.worst),
              static_cast<unsigned long long>(ds.a),
              static_cast<unsigned long long>(ds.b),
              static_cast<unsigned long long>(ds.intersecting_pairs));

  const StripLemmaReport lemma = verify_strip_lemma(make_rational(1, 100), 3);
  std::printf("strip gap lemma delta=1/100, k<=3: %s\n",
              lemma.pass ? "holds" : "violated");

  const rational delta = make_rational(1, 64);
  const StripLowerBound lb = lower_bound_strip(2, delta);
  const CoverReport grid = grid_count_strip(2, delta);
  std::printf("strip k=2, delta=1/64: certified lower bound %.4f, exact grid "
              "count %llu\n",
              to_double(lb.value), static_cast<unsigned long long>(grid.count));
  return 0;
}
