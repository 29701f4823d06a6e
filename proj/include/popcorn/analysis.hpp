#pragma once

// Estimators and certified inequality checks on top of the counting kernels.
//
// Everything that feeds a verdict is exact: interval measures, Chung-Erdos
// quotients, strip gaps, worst ratios.  Doubles appear only where a slope is
// fitted from exact counts, and the fit inputs are logs of exact integers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "popcorn/covering.hpp"
#include "popcorn/intervals.hpp"
#include "popcorn/numtheory.hpp"
#include "popcorn/popcorn_set.hpp"
#include "popcorn/rational.hpp"

namespace popcorn {

// ---------------------------------------------------------------------------
// Log-log regression
// ---------------------------------------------------------------------------

struct ScalingSample {
  rational mesh;
  std::uint64_t count = 0;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  std::vector<double> residuals;
  std::vector<double> two_point_slopes;  // slope between consecutive samples
  bool narrow_range_warning = false;     // mesh span under three decades
};

namespace detail {

// Unweighted least squares of y on x.  Points must already be in their
// canonical order; the sums then do not depend on how the caller produced
// them, which keeps fitted values bit-stable.
inline FitResult fit_loglog(const std::vector<double>& xs,
                            const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / static_cast<double>(n);
  const double my = sy / static_cast<double>(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) throw std::invalid_argument("degenerate abscissae in fit");
  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0;
  fit.residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    fit.residuals[i] = ys[i] - (fit.intercept + fit.slope * xs[i]);
    rss += fit.residuals[i] * fit.residuals[i];
  }
  fit.slope_stderr =
      n > 2 ? std::sqrt(rss / static_cast<double>(n - 2) / sxx) : 0.0;
  fit.two_point_slopes.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    fit.two_point_slopes.push_back((ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]));
  return fit;
}

}  // namespace detail

// Fit log(count) against log(1/mesh).  Needs at least three samples with
// strictly decreasing meshes and positive counts.  The warning flag trips
// when the mesh range spans less than three decades: slopes fitted on short
// ranges carry visible log log bias, and the flag keeps that honest without
// failing anything.
inline FitResult fit_box_dimension(const std::vector<ScalingSample>& samples) {
  if (samples.size() < 3)
    throw std::invalid_argument("box-dimension fit needs at least 3 samples");
  std::vector<double> xs, ys;
  xs.reserve(samples.size());
  ys.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].mesh <= 0)
      throw std::invalid_argument("mesh values must be positive");
    if (i > 0 && !(samples[i].mesh < samples[i - 1].mesh))
      throw std::invalid_argument("mesh values must be strictly decreasing");
    if (samples[i].count == 0)
      throw std::invalid_argument("counts must be positive");
    xs.push_back(-std::log(to_double(samples[i].mesh)));
    ys.push_back(std::log(static_cast<double>(samples[i].count)));
  }
  FitResult fit = detail::fit_loglog(xs, ys);
  fit.narrow_range_warning =
      samples.front().mesh < rational(1000) * samples.back().mesh;
  return fit;
}

// ---------------------------------------------------------------------------
// Assouad spectrum
// ---------------------------------------------------------------------------

// Closed form: (4/3 - theta)/(1 - theta) for theta < 2/3, constant 2 beyond.
inline rational theoretical_spectrum(const rational& theta) {
  if (theta <= 0 || theta >= 1)
    throw std::domain_error("spectrum parameter must lie in (0,1)");
  if (theta < make_rational(2, 3))
    return (make_rational(4, 3) - theta) / (rational(1) - theta);
  return rational(2);
}

struct SpectrumPoint {
  std::uint64_t n = 0;
  rational R;              // window side 1/(n(n+1))
  rational r;              // realized mesh, numerator 1
  std::uint64_t count = 0;
};

struct SpectrumEstimate {
  rational theta;
  std::vector<SpectrumPoint> points;  // ascending n
  double fitted_s = 0.0;
  bool fit_valid = false;  // needs at least two points
  rational theoretical;
};

struct SpectrumConfig {
  std::uint64_t budget = 1'000'000'000;  // cumulative visit estimate cap
  unsigned workers = 1;
};

namespace detail {

// Mesh denominator for the window at n: R^(1/theta) realized exactly when
// 1/theta is an integer, otherwise as 1/round((n(n+1))^(1/theta)).
inline std::uint64_t spectrum_mesh_den(std::uint64_t n, const rational& theta) {
  if (theta <= 0 || theta >= 1)
    throw std::domain_error("spectrum parameter must lie in (0,1)");
  if (n < 1 || n > 1'000'000)
    throw std::out_of_range("spectrum window index out of range");
  const bigint M = bigint(static_cast<unsigned long>(n)) *
                   static_cast<unsigned long>(n + 1);
  const rational inv_theta = rational(1) / theta;
  bigint D;
  if (rat_den(inv_theta) == 1) {
    mpz_pow_ui(D.get_mpz_t(), M.get_mpz_t(),
               static_cast<unsigned long>(to_u64(rat_num(inv_theta))));
  } else {
    const long double e = static_cast<long double>(to_double(inv_theta));
    const long double d = powl(static_cast<long double>(M.get_d()), e);
    if (!(d < 9.0e18L))
      throw CostGuardError("spectrum mesh denominator overflows", n);
    D = bigint(static_cast<unsigned long>(llroundl(d)));
  }
  if (mpz_sizeinbase(D.get_mpz_t(), 2) > 62)
    throw CostGuardError("spectrum mesh denominator overflows", n);
  return to_u64(D);
}

// Expected coprime candidates inside window n: (3/pi^2) * D^2 / M.
inline long double spectrum_visit_estimate(std::uint64_t n,
                                           std::uint64_t mesh_den) {
  const long double c = 0.30396355092701331433L;  // 3/pi^2
  const long double M = static_cast<long double>(n) * (n + 1);
  return c * static_cast<long double>(mesh_den) *
         static_cast<long double>(mesh_den) / M;
}

}  // namespace detail

// Largest n_hi in [n_min, n_max] keeping the cumulative visit estimate within
// budget; n_min - 1 when even the first window is too expensive.
inline std::uint64_t spectrum_admissible_hi(const rational& theta,
                                            std::uint64_t n_min,
                                            std::uint64_t n_max,
                                            std::uint64_t budget =
                                                SpectrumConfig{}.budget) {
  if (n_min < 1 || n_min > n_max)
    throw std::out_of_range("spectrum range must satisfy 1 <= n_min <= n_max");
  long double cumulative = 0;
  for (std::uint64_t n = n_min; n <= n_max; ++n) {
    std::uint64_t den;
    try {
      den = detail::spectrum_mesh_den(n, theta);
    } catch (const CostGuardError&) {
      return n - 1;
    }
    cumulative += detail::spectrum_visit_estimate(n, den);
    if (cumulative > static_cast<long double>(budget)) return n - 1;
  }
  return n_max;
}

// Count the window C_n = [1/(n+1), 1/n) x [0, R_n) at mesh R_n^(1/theta) for
// each n in the range and fit log(count) on (1/theta - 1) * log(1/R_n).
inline SpectrumEstimate estimate_spectrum(const rational& theta,
                                          std::uint64_t n_min,
                                          std::uint64_t n_max,
                                          const SpectrumConfig& cfg = {}) {
  if (n_min < 1 || n_min > n_max)
    throw std::out_of_range("spectrum range must satisfy 1 <= n_min <= n_max");
  SpectrumEstimate est;
  est.theta = theta;
  est.theoretical = theoretical_spectrum(theta);

  long double cumulative = 0;
  for (std::uint64_t n = n_min; n <= n_max; ++n) {
    const std::uint64_t den = detail::spectrum_mesh_den(n, theta);
    cumulative += detail::spectrum_visit_estimate(n, den);
    if (cumulative > static_cast<long double>(cfg.budget))
      throw CostGuardError("spectrum sweep exceeds the visit budget", n);

    SpectrumPoint pt;
    pt.n = n;
    pt.R = make_rational(bigint(1), bigint(static_cast<unsigned long>(n)) *
                                        static_cast<unsigned long>(n + 1));
    pt.r = make_rational(1, den);
    WindowRegion win;
    win.x0 = make_rational(1, n + 1);
    win.y0 = rational(0);
    win.side = pt.R;
    CountConfig ccfg;
    ccfg.workers = cfg.workers;
    ccfg.budget = std::numeric_limits<std::uint64_t>::max();
    try {
      pt.count = grid_count_window(win, pt.r, ccfg).count;
    } catch (const CostGuardError& e) {
      throw CostGuardError(std::string("spectrum window aborted: ") + e.what(),
                           n);
    }
    est.points.push_back(std::move(pt));
  }

  std::sort(est.points.begin(), est.points.end(),
            [](const SpectrumPoint& a, const SpectrumPoint& b) {
              return a.n < b.n;
            });
  if (est.points.size() >= 2) {
    const double inv_theta_m1 = to_double(rational(1) / theta - 1);
    std::vector<double> xs, ys;
    xs.reserve(est.points.size());
    ys.reserve(est.points.size());
    for (const SpectrumPoint& pt : est.points) {
      xs.push_back(inv_theta_m1 * -std::log(to_double(pt.R)));
      ys.push_back(std::log(static_cast<double>(pt.count)));
    }
    est.fitted_s = detail::fit_loglog(xs, ys).slope;
    est.fit_valid = true;
  }
  return est;
}

// Refit an existing point set (used by the determinism property: the result
// cannot depend on the order the samples arrive in, because they are sorted
// by n before the sums are formed).
inline double fit_spectrum(std::vector<SpectrumPoint> points,
                           const rational& theta) {
  if (points.size() < 2)
    throw std::invalid_argument("spectrum fit needs at least 2 points");
  std::sort(points.begin(), points.end(),
            [](const SpectrumPoint& a, const SpectrumPoint& b) {
              return a.n < b.n;
            });
  const double inv_theta_m1 = to_double(rational(1) / theta - 1);
  std::vector<double> xs, ys;
  for (const SpectrumPoint& pt : points) {
    xs.push_back(inv_theta_m1 * -std::log(to_double(pt.R)));
    ys.push_back(std::log(static_cast<double>(pt.count)));
  }
  return detail::fit_loglog(xs, ys).slope;
}

// ---------------------------------------------------------------------------
// Chung-Erdos strip lower bound
// ---------------------------------------------------------------------------

struct StripLowerBound {
  rational value;          // certified lower bound for the strip cover count
  bool empty_strip = false;
};

// chung_erdos_bound({E_q : q in the strip's level range}) / (4*delta).
// Each point of the strip lies in the 2*delta-neighborhood of the union's
// x-projection, and a 2*delta interval meets at most ceil(2*delta/delta)+1
// columns, so the quotient certifies a cover lower bound.
inline StripLowerBound lower_bound_strip(std::uint64_t k,
                                         const rational& delta) {
  if (k < 1) throw std::out_of_range("strip lower bound needs k >= 1");
  StripLowerBound out;
  StripSpec spec;
  try {
    spec = strip_spec(k, delta);
  } catch (const EmptyStripError&) {
    out.value = rational(0);
    out.empty_strip = true;
    return out;
  }
  const std::uint64_t q_lo = std::max<std::uint64_t>(spec.level_lo + 1, 2);
  if (spec.level_hi < q_lo) {
    out.value = rational(0);
    out.empty_strip = true;
    return out;
  }
  std::uint64_t visits = 0;
  std::vector<IntervalUnion> events;
  events.reserve(spec.level_hi - q_lo + 1);
  for (std::uint64_t q = q_lo; q <= spec.level_hi; ++q) {
    visits += q;  // interval-count bound; exact phi not needed for the guard
    if (visits > kOracleVisitCap)
      throw CostGuardError("strip lower bound exceeds the interval budget", q);
    events.push_back(build_E_n(q, delta));
  }
  out.value = chung_erdos_bound(events) / (4 * delta);
  return out;
}

// Admissible strip range [ceil(delta^(-1/3)), floor(delta^(-0.45))] used by
// the aggregated bound.  The 1e-9 nudges keep exact integer powers (for
// example 4096^(1/3) = 16) from landing on the wrong side of ceil/floor.
inline std::pair<std::uint64_t, std::uint64_t> admissible_strip_range(
    const rational& delta) {
  if (delta <= 0 || delta >= 1)
    throw std::domain_error("strip range needs 0 < delta < 1");
  const long double inv = static_cast<long double>(to_double(rational(1) / delta));
  const long double lo = ceill(powl(inv, 1.0L / 3.0L) - 1e-9L);
  const long double hi = floorl(powl(inv, 0.45L) + 1e-9L);
  return {static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi)};
}

// Sum of the certified strip lower bounds over the admissible k-range.
inline rational aggregated_lower_bound(const rational& delta) {
  const auto [k_lo, k_hi] = admissible_strip_range(delta);
  rational total(0);
  for (std::uint64_t k = k_lo; k <= k_hi; ++k) {
    const StripLowerBound b = lower_bound_strip(k, delta);
    if (!b.empty_strip) total += b.value;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Certified inequality scans
// ---------------------------------------------------------------------------

struct WorstRatioReport {
  rational worst;                       // max ratio seen (0 when none overlap)
  std::uint64_t a = 0, b = 0;           // indices achieving the max
  std::uint64_t intersecting_pairs = 0; // pairs with nonempty intersection
};

// max over 2 <= n < m <= n_max of measure(E_n cap E_m) / (4 n m delta^2),
// the Duffin-Schaeffer overlap constant with psi(n) = n*delta.
inline WorstRatioReport verify_duffin_schaeffer(std::uint64_t n_max,
                                                const rational& delta) {
  if (n_max < 3) throw std::out_of_range("overlap scan needs n_max >= 3");
  if (delta <= 0 || delta >= 1)
    throw std::domain_error("overlap scan needs 0 < delta < 1");
  std::vector<IntervalUnion> events;
  events.reserve(n_max - 1);
  for (std::uint64_t n = 2; n <= n_max; ++n)
    events.push_back(build_E_n(n, delta));
  WorstRatioReport rep;
  rep.worst = rational(0);
  const rational d2 = delta * delta;
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    for (std::uint64_t m = n + 1; m <= n_max; ++m) {
      const IntervalUnion inter =
          intersect(events[n - 2], events[m - 2]);
      if (inter.empty()) continue;
      ++rep.intersecting_pairs;
      const rational ratio =
          inter.measure() /
          (4 * rational(bigint(static_cast<unsigned long>(n)) *
                        static_cast<unsigned long>(m)) *
           d2);
      if (ratio > rep.worst) {
        rep.worst = ratio;
        rep.a = n;
        rep.b = m;
      }
    }
  }
  return rep;
}

// max over 2 <= l < l' <= l_max of
// measure(F_l cap F_l') / (8 l l' delta^2 (n+1)^2), the local analogue on the
// collapsed lines.
inline WorstRatioReport verify_local_ds(std::uint64_t l_max, std::uint64_t n,
                                        const rational& delta) {
  if (l_max < 3) throw std::out_of_range("local overlap scan needs l_max >= 3");
  if (n < 1) throw std::out_of_range("local overlap scan needs n >= 1");
  if (delta <= 0 || delta >= 1)
    throw std::domain_error("local overlap scan needs 0 < delta < 1");
  std::vector<IntervalUnion> events;
  events.reserve(l_max - 1);
  for (std::uint64_t l = 2; l <= l_max; ++l)
    events.push_back(build_F_l(l, n, delta));
  WorstRatioReport rep;
  rep.worst = rational(0);
  const rational scale =
      8 * delta * delta *
      rational(bigint(static_cast<unsigned long>(n + 1)) *
               static_cast<unsigned long>(n + 1));
  for (std::uint64_t l = 2; l <= l_max; ++l) {
    for (std::uint64_t lp = l + 1; lp <= l_max; ++lp) {
      const IntervalUnion inter =
          intersect(events[l - 2], events[lp - 2]);
      if (inter.empty()) continue;
      ++rep.intersecting_pairs;
      const rational ratio =
          inter.measure() /
          (scale * rational(bigint(static_cast<unsigned long>(l)) *
                            static_cast<unsigned long>(lp)));
      if (ratio > rep.worst) {
        rep.worst = ratio;
        rep.a = l;
        rep.b = lp;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Strip gap lemma
// ---------------------------------------------------------------------------

struct StripLemmaReport {
  bool pass = true;
  std::uint64_t checked_k_max = 0;
  std::uint64_t violations = 0;
  std::uint64_t first_violation_k = 0;  // 0 when pass
  bigint first_violation_gap;           // L(k) - L(k+1) at the first violation
  rational first_violation_lower;       // 1/(2 k^2 delta)
  rational first_violation_upper;       // 1/(k^2 delta)
};

// Exact check of 1/(2 k^2 delta) <= L(k) - L(k+1) <= 1/(k^2 delta) for every
// 1 <= k <= k_max.  The admissible k_max is floor(delta^(-1/2+eps)); beyond
// it the statement is not claimed.
inline StripLemmaReport verify_strip_lemma(const rational& delta,
                                           std::uint64_t k_max,
                                           double eps = 0.05) {
  if (delta <= 0 || delta >= 1)
    throw std::domain_error("strip lemma needs 0 < delta < 1");
  if (k_max < 1) throw std::out_of_range("strip lemma needs k_max >= 1");
  if (!(eps > 0) || eps >= 0.5)
    throw std::domain_error("strip lemma exponent eps must lie in (0, 1/2)");
  {
    const long double inv =
        static_cast<long double>(to_double(rational(1) / delta));
    const long double cap = floorl(powl(inv, 0.5L - static_cast<long double>(eps)) + 1e-9L);
    if (static_cast<long double>(k_max) > cap)
      throw std::out_of_range(
          "strip lemma k_max beyond the admissible delta^(-1/2+eps) range");
  }
  StripLemmaReport rep;
  rep.checked_k_max = k_max;
  const bigint num = rat_num(delta);
  const bigint den = rat_den(delta);
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    bigint Lk, Lk1;
    {
      const bigint a = num * static_cast<unsigned long>(k);
      mpz_fdiv_q(Lk.get_mpz_t(), den.get_mpz_t(), a.get_mpz_t());
      const bigint b = num * static_cast<unsigned long>(k + 1);
      mpz_fdiv_q(Lk1.get_mpz_t(), den.get_mpz_t(), b.get_mpz_t());
    }
    const bigint gap = Lk - Lk1;
    const bigint k2(bigint(static_cast<unsigned long>(k)) *
                    static_cast<unsigned long>(k));
    const rational upper = rational(1) / (rational(k2) * delta);
    const rational lower = upper / 2;
    if (rational(gap) < lower || rational(gap) > upper) {
      ++rep.violations;
      if (rep.pass) {
        rep.pass = false;
        rep.first_violation_k = k;
        rep.first_violation_gap = gap;
        rep.first_violation_lower = lower;
        rep.first_violation_upper = upper;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Mesh presets
// ---------------------------------------------------------------------------

// Geometric preset: 2^-k.
inline rational delta_preset_pow2(std::uint64_t k) {
  if (k < 1 || k > 62) throw std::out_of_range("pow2 preset needs 1 <= k <= 62");
  return make_rational(1, std::uint64_t(1) << k);
}

// Proof-sequence preset: (1/(n(n+1)))^6, whose square and cube roots are
// integral.  Offered for n <= 3 only; n = 4 puts floor(1/delta) past the
// enumeration guard at any realistic budget.
inline rational delta_preset_tri_sixth(std::uint64_t n) {
  if (n < 1 || n > 3)
    throw std::out_of_range("tri-sixth preset offered for 1 <= n <= 3 only");
  const bigint M = bigint(static_cast<unsigned long>(n)) *
                   static_cast<unsigned long>(n + 1);
  bigint D;
  mpz_pow_ui(D.get_mpz_t(), M.get_mpz_t(), 6);
  return make_rational(bigint(1), D);
}

}  // namespace popcorn
