#pragma once

// Exact grid-cover counting for the full popcorn set and its restrictions.
//
// Counting model (the grid proxy): cells are half-open squares
// [i*mesh, (i+1)*mesh) x [j*mesh, (j+1)*mesh) anchored at the region corner,
// with the final row/column clipped so the region is exactly tiled; a point
// on a cell edge belongs to the cell on its right/top, and the closed outer
// boundary is absorbed by the last cell.  Grid counts dominate the optimal
// cover count and differ from it by at most a bounded factor, which shifts
// log-log intercepts but never slopes.
//
// Truncation is exact, not approximate: a point in row j >= 1 has 1/q >= mesh,
// so enumerating levels q <= floor(1/mesh) misses only row-0 points, and row 0
// is covered entirely by the base segment.  Windows with y0 > 0 instead bound
// the level range by the window's own y-extent, which is finite and exact.
//
// Hot loops run on 64-bit integers (with unsigned __int128 initialization):
// a mesh floor of 2^-30 and denominator-width guards make every intermediate
// provably overflow-free.  Exact rationals appear only at setup.

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <limits>
#include <memory>
#include <set>
#include <stdexcept>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "popcorn/numtheory.hpp"
#include "popcorn/popcorn_set.hpp"
#include "popcorn/rational.hpp"

namespace popcorn {

struct MeshTooCoarseError : std::domain_error {
  using std::domain_error::domain_error;
};

struct ScaleOrderError : std::domain_error {
  using std::domain_error::domain_error;
};

struct CostGuardError : std::runtime_error {
  CostGuardError(const std::string& what, std::uint64_t offending_param)
      : std::runtime_error(what), offending(offending_param) {}
  std::uint64_t offending;
};

struct OracleTooLargeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Method { strip_fast, brute_oracle };

inline const char* method_name(Method m) {
  return m == Method::strip_fast ? "strip-fast" : "brute-oracle";
}

struct FullSquare {};
struct StripRegion {
  std::uint64_t k = 0;
};
struct WindowRegion {  // [x0, x0+side) x [y0, y0+side)
  rational x0;
  rational y0;
  rational side;
};
using Region = std::variant<FullSquare, StripRegion, WindowRegion>;

struct CoverReport {
  Region region;
  rational mesh;
  std::uint64_t count = 0;
  Method method = Method::strip_fast;
  std::uint64_t q_max = 0;  // truncation actually used
};

struct CountConfig {
  unsigned workers = 0;                  // 0 = use available parallelism
  std::uint64_t budget = 2'000'000'000;  // max coprime point visits
  bool graph_mode = false;  // graph instead of full set: identical counts
};

inline constexpr std::uint64_t kOracleVisitCap = 20'000'000;

namespace detail {

struct MeshU64 {
  std::uint64_t num = 1;
  std::uint64_t den = 1;
};

// Extract mesh = num/den with the overflow guards the integer kernels need.
inline MeshU64 mesh_u64(const rational& mesh) {
  if (mesh <= 0) throw std::domain_error("mesh must be positive");
  const bigint num = rat_num(mesh);
  const bigint den = rat_den(mesh);
  if (mpz_sizeinbase(den.get_mpz_t(), 2) > 62 ||
      mpz_sizeinbase(num.get_mpz_t(), 2) > 62)
    throw std::domain_error("mesh numerator/denominator beyond 62-bit guard");
  MeshU64 m{to_u64(num), to_u64(den)};
  // floor(1/mesh) <= 2^30 keeps every column/row product inside 64 bits
  if (m.den / m.num > (1ull << 30))
    throw std::domain_error("mesh below the 2^-30 floor");
  return m;
}

inline std::uint64_t ceil_div_u64(std::uint64_t a, std::uint64_t b) {
  return a / b + (a % b != 0);
}

// Reusable bit row with popcount.
class BitRow {
 public:
  explicit BitRow(std::uint64_t bits)
      : bits_(bits), words_((bits + 63) / 64, 0) {}
  void reset() { std::memset(words_.data(), 0, words_.size() * 8); }
  void set(std::uint64_t i) { words_[i >> 6] |= 1ull << (i & 63); }
  std::uint64_t popcount() const {
    std::uint64_t n = 0;
    for (std::uint64_t w : words_) n += static_cast<std::uint64_t>(__builtin_popcountll(w));
    return n;
  }
  std::uint64_t bits() const { return bits_; }

 private:
  std::uint64_t bits_;
  std::vector<std::uint64_t> words_;
};

// Epoch-stamped scratch for enumerating the residues of a level that are
// coprime to it, inside a subrange [lo, hi] of [1, q-1].  Crossing off the
// multiples of each distinct prime of q costs sum(len/p) + len per level and
// never clears the buffer.
class CoprimeScratch {
 public:
  explicit CoprimeScratch(std::uint64_t max_len)
      : stamp_(max_len, 0), epoch_(0) {}

  // f(m) is called for each coprime m in [lo, hi], ascending.
  template <typename F>
  void for_each_coprime(const TotientTable& table, std::uint64_t q,
                        std::uint64_t lo, std::uint64_t hi, F&& f) {
    if (lo > hi) return;
    const std::uint64_t len = hi - lo + 1;
    if (++epoch_ == 0) {  // stamp wrap: refresh the buffer once per 2^32 uses
      std::fill(stamp_.begin(), stamp_.end(), 0u);
      epoch_ = 1;
    }
    std::uint32_t primes[9];
    const int np = table.distinct_primes(static_cast<std::uint32_t>(q), primes);
    for (int i = 0; i < np; ++i) {
      const std::uint64_t p = primes[i];
      for (std::uint64_t v = ((lo + p - 1) / p) * p; v <= hi; v += p)
        stamp_[v - lo] = epoch_;
    }
    for (std::uint64_t off = 0; off < len; ++off)
      if (stamp_[off] != epoch_) f(lo + off);
  }

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_;
};

// March col(m) = floor(m * den / (q * num)) incrementally over consecutive m.
// Requires q * num <= den (true for every enumerated level q <= floor(1/mesh)).
struct ColumnMarch {
  std::uint64_t col, rem, dcol, drem, mod;
  ColumnMarch(std::uint64_t den, std::uint64_t q, std::uint64_t num,
              std::uint64_t m0) {
    mod = q * num;
    dcol = den / mod;
    drem = den % mod;
    const unsigned __int128 t = static_cast<unsigned __int128>(m0) * den;
    col = static_cast<std::uint64_t>(t / mod);
    rem = static_cast<std::uint64_t>(t % mod);
  }
  void advance() {
    col += dcol;
    rem += drem;
    if (rem >= mod) {
      ++col;
      rem -= mod;
    }
  }
};

template <typename Fn>  // Fn(worker_index) -> uint64_t
inline std::uint64_t run_workers(unsigned workers, Fn&& fn) {
  if (workers <= 1) return fn(0u);
  std::vector<std::uint64_t> partial(workers, 0);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&, w] { partial[w] = fn(w); });
  for (std::thread& t : pool) t.join();
  std::uint64_t total = 0;
  for (std::uint64_t p : partial) total += p;
  return total;
}

inline unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

// Count distinct occupied columns over the levels (level_lo, level_hi] of one
// grid row.  Shared by the global counter and the per-strip counter.
inline std::uint64_t count_row_columns(const TotientTable& table,
                                       const MeshU64& mesh,
                                       std::uint64_t level_lo,
                                       std::uint64_t level_hi, BitRow& bits,
                                       CoprimeScratch& scratch) {
  bits.reset();
  std::uint64_t q = std::max<std::uint64_t>(level_lo + 1, 2);
  for (; q <= level_hi; ++q) {
    ColumnMarch march(mesh.den, q, mesh.num, 1);
    std::uint64_t next_m = 1;
    scratch.for_each_coprime(table, q, 1, q - 1, [&](std::uint64_t m) {
      while (next_m < m) {
        march.advance();
        ++next_m;
      }
      bits.set(march.col);
    });
  }
  return bits.popcount();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Full-set count: base row (ceil(1/mesh) cells) plus, for every grid row
// j >= 1, the distinct columns hit by the levels q with row(q) = j.
// ---------------------------------------------------------------------------
inline CoverReport grid_count_full_set(const rational& delta,
                                       const CountConfig& cfg = {}) {
  if (delta > make_rational(1, 2))
    throw MeshTooCoarseError("mesh above 1/2: row structure degenerates");
  const detail::MeshU64 mesh = detail::mesh_u64(delta);
  const std::uint64_t q_max = mesh.den / mesh.num;  // floor(1/delta) >= 2
  const std::uint64_t ncols = detail::ceil_div_u64(mesh.den, mesh.num);
  // conservative pre-guard (sum of phi up to Q is at least Q^2/4), then exact
  const unsigned __int128 visit_floor =
      static_cast<unsigned __int128>(q_max) * q_max / 4;
  if (visit_floor > cfg.budget)
    throw CostGuardError("full-set enumeration exceeds the visit budget",
                         q_max);
  TotientTable table(static_cast<std::uint32_t>(q_max));
  const std::uint64_t visits = table.phi_sum(static_cast<std::uint32_t>(q_max));
  if (visits > cfg.budget)
    throw CostGuardError("full-set enumeration exceeds the visit budget",
                         q_max);

  const std::uint64_t max_row = mesh.den / (2 * mesh.num);  // row of level 2
  const unsigned workers = detail::resolve_workers(cfg.workers);
  const std::uint64_t above_base =
      detail::run_workers(workers, [&](unsigned w) {
        detail::BitRow bits(ncols);
        detail::CoprimeScratch scratch(q_max);
        std::uint64_t subtotal = 0;
        for (std::uint64_t j = 1 + w; j <= max_row; j += workers) {
          const std::uint64_t hi = mesh.den / (j * mesh.num);
          const std::uint64_t lo = mesh.den / ((j + 1) * mesh.num);
          if (hi < 2 || lo >= hi) continue;
          subtotal +=
              detail::count_row_columns(table, mesh, lo, hi, bits, scratch);
        }
        return subtotal;
      });

  CoverReport rep;
  rep.region = FullSquare{};
  rep.mesh = delta;
  rep.count = ncols + above_base;
  rep.method = Method::strip_fast;
  rep.q_max = q_max;
  return rep;
}

// ---------------------------------------------------------------------------
// Per-strip count: occupied cells of the row band [k*mesh, (k+1)*mesh).
// Strip 0 is the base row in full-set mode: ceil(1/mesh) cells.
// ---------------------------------------------------------------------------
inline CoverReport grid_count_strip(std::uint64_t k, const rational& delta,
                                    const CountConfig& cfg = {}) {
  const detail::MeshU64 mesh = detail::mesh_u64(delta);
  if (delta >= 1) throw std::domain_error("strip count needs mesh < 1");
  CoverReport rep;
  rep.region = StripRegion{k};
  rep.mesh = delta;
  rep.method = Method::strip_fast;
  if (k == 0) {
    rep.count = detail::ceil_div_u64(mesh.den, mesh.num);
    rep.q_max = mesh.den / mesh.num;
    return rep;
  }
  StripSpec spec;
  try {
    spec = strip_spec(k, delta);
  } catch (const EmptyStripError&) {
    rep.count = 0;  // row band above every level: empty, not an error
    rep.q_max = 0;
    return rep;
  }
  rep.q_max = spec.level_hi;
  if (spec.level_hi < 2 || spec.level_lo >= spec.level_hi) {
    rep.count = 0;
    return rep;
  }
  const unsigned __int128 visit_floor =
      (static_cast<unsigned __int128>(spec.level_hi) * spec.level_hi -
       static_cast<unsigned __int128>(spec.level_lo) * spec.level_lo) /
      4;
  if (visit_floor > cfg.budget)
    throw CostGuardError("strip enumeration exceeds the visit budget",
                         spec.level_hi);
  TotientTable table(static_cast<std::uint32_t>(spec.level_hi));
  std::uint64_t visits = 0;
  for (std::uint64_t q = std::max<std::uint64_t>(spec.level_lo + 1, 2);
       q <= spec.level_hi; ++q)
    visits += table.phi(static_cast<std::uint32_t>(q));
  if (visits > cfg.budget)
    throw CostGuardError("strip enumeration exceeds the visit budget",
                         spec.level_hi);
  const std::uint64_t ncols = detail::ceil_div_u64(mesh.den, mesh.num);
  detail::BitRow bits(ncols);
  detail::CoprimeScratch scratch(spec.level_hi);
  rep.count = detail::count_row_columns(table, mesh, spec.level_lo,
                                        spec.level_hi, bits, scratch);
  return rep;
}

// ---------------------------------------------------------------------------
// Window count: cells of mesh r, anchored at the window corner (x0, y0),
// meeting the set inside [x0, x0+R) x [y0, y0+R).  Base-segment cells are
// included exactly when y0 = 0.  Levels are bounded by floor(1/r) when y0 = 0
// (rows >= 1 exact, row 0 covered by the base) and by the window's own
// y-extent when y0 > 0, so the count is exact in both regimes.
// ---------------------------------------------------------------------------
inline CoverReport grid_count_window(const WindowRegion& win, const rational& r,
                                     const CountConfig& cfg = {}) {
  const rational R = win.side;
  if (R <= 0) throw std::domain_error("window side must be positive");
  if (win.x0 < 0 || win.x0 + R > 1 || win.y0 < 0)
    throw std::domain_error("window must satisfy 0 <= x0 <= x0+R <= 1, y0 >= 0");
  if (r <= 0) throw std::domain_error("window mesh must be positive");
  if (r >= R) throw ScaleOrderError("window mesh must be finer than the side");

  const detail::MeshU64 mesh = detail::mesh_u64(r);
  const bigint x0n = rat_num(win.x0), x0d = rat_den(win.x0);
  if (mpz_sizeinbase(x0d.get_mpz_t(), 2) > 31 ||
      mesh.den > (1ull << 31) || mesh.num > (1ull << 31))
    throw std::domain_error("window corner/mesh beyond the 31-bit guard");

  const std::uint64_t ncols = to_u64(rat_ceil(R / r));
  const std::uint64_t nrows = ncols;  // square window

  // level range from the y-extent
  std::uint64_t q_min = to_u64(rat_floor(rational(1) / (win.y0 + R))) + 1;
  q_min = std::max<std::uint64_t>(q_min, 2);
  std::uint64_t q_hi;
  if (win.y0 == 0) {
    q_hi = mesh.den / mesh.num;  // floor(1/r)
  } else {
    const bigint cap = rat_floor(rational(1) / win.y0);
    if (mpz_sizeinbase(cap.get_mpz_t(), 2) > 31)
      throw CostGuardError("window y0 too small: level range explodes",
                           to_u64(rat_den(win.y0)));
    q_hi = to_u64(cap);
  }
  if (q_hi > (1ull << 31))
    throw CostGuardError("window level range beyond the 31-bit guard", q_hi);

  CoverReport rep;
  rep.region = win;
  rep.mesh = r;
  rep.method = Method::strip_fast;
  rep.q_max = q_hi;

  if (nrows > (1ull << 22) || ncols > (1ull << 22) ||
      nrows * ncols > (1ull << 33))
    throw CostGuardError("window cell bitmap beyond the memory guard",
                         nrows * ncols);

  const std::uint64_t a = to_u64(x0n);  // x0 = a/b
  const std::uint64_t b = to_u64(x0d);

  std::uint64_t marked = 0;
  if (q_hi >= q_min) {
    // budget: candidate-scan estimate sum(q*R + 1) over the level range
    const rational scan_estimate =
        R * rational(bigint(q_hi) * (q_hi + 1) / 2 - bigint(q_min) * (q_min - 1) / 2) +
        rational(bigint(q_hi - q_min + 1));
    if (scan_estimate > rational(bigint(cfg.budget)))
      throw CostGuardError("window enumeration exceeds the visit budget", q_hi);
    TotientTable table(static_cast<std::uint32_t>(q_hi));

    const rational x_hi = win.x0 + R;
    const bigint xhn = rat_num(x_hi), xhd = rat_den(x_hi);
    const bigint y0n = rat_num(win.y0), y0d = rat_den(win.y0);

    detail::BitRow marks(nrows * ncols);
    const std::uint64_t max_len =
        to_u64(rat_floor(R * rational(bigint(q_hi)))) + 2;
    detail::CoprimeScratch scratch(max_len);

    const unsigned __int128 col_mod0 = static_cast<unsigned __int128>(b) * mesh.num;
    const unsigned __int128 col_step = static_cast<unsigned __int128>(b) * mesh.den;

    for (std::uint64_t q = q_min; q <= q_hi; ++q) {
      // m range from the x-extent: ceil(q*x0) <= m <= ceil(q*(x0+R)) - 1
      bigint mlo_b, mhi_b;
      {
        bigint t = bigint(static_cast<unsigned long>(q)) * x0n;
        mpz_cdiv_q(mlo_b.get_mpz_t(), t.get_mpz_t(), x0d.get_mpz_t());
        t = bigint(static_cast<unsigned long>(q)) * xhn;
        mpz_cdiv_q(mhi_b.get_mpz_t(), t.get_mpz_t(), xhd.get_mpz_t());
        mhi_b -= 1;
      }
      if (mlo_b < 1) mlo_b = 1;
      if (mhi_b > bigint(static_cast<unsigned long>(q - 1)))
        mhi_b = bigint(static_cast<unsigned long>(q - 1));
      if (mlo_b > mhi_b) continue;
      const std::uint64_t m_lo = to_u64(mlo_b), m_hi = to_u64(mhi_b);

      // row = floor((1/q - y0) / r), exact
      std::uint64_t row;
      if (win.y0 == 0) {
        row = mesh.den / (q * mesh.num);
      } else {
        const bigint rown = (y0d - y0n * static_cast<unsigned long>(q)) * mesh.den;
        const bigint rowd =
            bigint(static_cast<unsigned long>(q)) * y0d * mesh.num;
        bigint rq;
        mpz_fdiv_q(rq.get_mpz_t(), rown.get_mpz_t(), rowd.get_mpz_t());
        row = to_u64(rq);
      }
      if (row >= nrows) continue;  // can only occur via degenerate clipping

      // col(m) = floor((m*b - a*q) * den_r / (q * b * num_r)), marched
      const unsigned __int128 mod = col_mod0 * q;
      unsigned __int128 t0 =
          (static_cast<unsigned __int128>(m_lo) * b -
           static_cast<unsigned __int128>(a) * q) *
          mesh.den;
      unsigned __int128 col128 = t0 / mod;
      unsigned __int128 rem = t0 % mod;
      const unsigned __int128 dcol = col_step / mod;
      const unsigned __int128 drem = col_step % mod;
      std::uint64_t next_m = m_lo;
      std::uint64_t col = static_cast<std::uint64_t>(col128);
      scratch.for_each_coprime(table, q, m_lo, m_hi, [&](std::uint64_t m) {
        while (next_m < m) {
          col += static_cast<std::uint64_t>(dcol);
          rem += drem;
          if (rem >= mod) {
            ++col;
            rem -= mod;
          }
          ++next_m;
        }
        marks.set(row * ncols + col);
      });
    }
    marked = marks.popcount();
  }

  rep.count = marked + (win.y0 == 0 ? ncols : 0);
  return rep;
}

// ---------------------------------------------------------------------------
// Brute-force oracle: enumerate every reduced point with q <= q_max through
// exact rational arithmetic, insert floor-index pairs into a set, add base
// cells where applicable.  Deliberately shares no kernel with the fast paths.
// ---------------------------------------------------------------------------
inline CoverReport brute_force_count(const rational& mesh, std::uint64_t q_max,
                                     const Region& region) {
  if (mesh <= 0 || mesh >= 1)
    throw std::domain_error("oracle mesh must lie in (0,1)");
  detail::mesh_u64(mesh);  // same width guards as the fast paths
  if (q_max > std::numeric_limits<std::uint32_t>::max() - 1)
    throw OracleTooLargeError("oracle level cap beyond 32 bits");

  std::set<std::pair<std::int64_t, std::int64_t>> cells;
  const auto add_base_cells = [&](std::uint64_t n) {
    for (std::uint64_t c = 0; c < n; ++c)
      cells.insert({0, static_cast<std::int64_t>(c)});
  };

  if (std::holds_alternative<FullSquare>(region) ||
      std::holds_alternative<StripRegion>(region)) {
    {
      std::uint64_t visits = 0;
      for (std::uint64_t q = 2; q <= q_max; ++q) {
        visits += q - 1;  // cheap upper bound on phi
        if (visits > 4 * kOracleVisitCap) break;
      }
      if (visits > 4 * kOracleVisitCap)
        throw OracleTooLargeError("oracle enumeration beyond the visit cap");
    }
    if (q_max >= 2) {
      TotientTable guard_table(static_cast<std::uint32_t>(q_max));
      if (guard_table.phi_sum(static_cast<std::uint32_t>(q_max)) >
          kOracleVisitCap)
        throw OracleTooLargeError("oracle enumeration beyond the visit cap");
    }
    const std::uint64_t ncols = to_u64(rat_ceil(rational(1) / mesh));
    const bool strip_mode = std::holds_alternative<StripRegion>(region);
    const std::uint64_t want_k =
        strip_mode ? std::get<StripRegion>(region).k : 0;
    if (!strip_mode || want_k == 0) add_base_cells(ncols);
    enumerate_levels(2, static_cast<std::uint32_t>(q_max),
                     [&](std::uint32_t q, std::uint32_t m) {
                       const rational x = make_rational(m, q);
                       const rational y = make_rational(1u, q);
                       const std::int64_t row =
                           static_cast<std::int64_t>(to_u64(rat_floor(y / mesh)));
                       if (strip_mode &&
                           static_cast<std::uint64_t>(row) != want_k)
                         return;
                       const std::int64_t col =
                           static_cast<std::int64_t>(to_u64(rat_floor(x / mesh)));
                       cells.insert({row, col});
                     });
  } else {
    const WindowRegion& win = std::get<WindowRegion>(region);
    const rational R = win.side;
    if (mesh >= R) throw ScaleOrderError("oracle window mesh must be finer");
    // at most q*R + 1 candidate numerators per level, closed form
    const rational crude =
        R * rational(bigint(q_max) * (q_max + 1) / 2) + rational(bigint(q_max));
    if (crude > rational(bigint(2 * kOracleVisitCap)))
      throw OracleTooLargeError("oracle enumeration beyond the visit cap");
    const std::uint64_t ncols = to_u64(rat_ceil(R / mesh));
    if (win.y0 == 0) add_base_cells(ncols);
    const rational x_hi = win.x0 + R;
    const rational y_hi = win.y0 + R;
    for (std::uint64_t q = 2; q <= q_max; ++q) {
      const rational y = make_rational(bigint(1), bigint(q));
      if (y < win.y0 || y >= y_hi) continue;
      // trim the numerator scan to [ceil(q*x0), ceil(q*(x0+R)) - 1]; the
      // point filter below still decides membership on its own
      std::uint64_t m_lo = 1, m_hi = q - 1;
      {
        const bigint lo_b = rat_ceil(rational(bigint(q)) * win.x0);
        const bigint hi_b = rat_ceil(rational(bigint(q)) * x_hi) - 1;
        if (lo_b > bigint(1)) m_lo = to_u64(lo_b);
        if (hi_b < bigint(q - 1)) {
          if (hi_b < 1) continue;
          m_hi = to_u64(hi_b);
        }
      }
      for (std::uint64_t m = m_lo; m <= m_hi; ++m) {
        if (std::gcd(m, q) != 1) continue;
        const rational x = make_rational(bigint(m), bigint(q));
        if (x < win.x0 || x >= x_hi) continue;
        const std::int64_t row = static_cast<std::int64_t>(
            to_u64(rat_floor((y - win.y0) / mesh)));
        const std::int64_t col = static_cast<std::int64_t>(
            to_u64(rat_floor((x - win.x0) / mesh)));
        cells.insert({row, col});
      }
    }
  }

  CoverReport rep;
  rep.region = region;
  rep.mesh = mesh;
  rep.count = cells.size();
  rep.method = Method::brute_oracle;
  rep.q_max = q_max;
  return rep;
}

// ---------------------------------------------------------------------------
// Greedy maximal r-separated subset size: pairwise distances strictly above r
// (Euclidean metric, exact squared distances), greedy in the order the points
// are given, which our enumerators make deterministic.
// ---------------------------------------------------------------------------
inline std::uint64_t separated_count(const std::vector<PopcornPoint>& points,
                                     const rational& r) {
  if (r <= 0) throw std::domain_error("separation radius must be positive");
  const rational r2 = r * r;
  std::vector<const PopcornPoint*> kept;
  for (const PopcornPoint& p : points) {
    bool far_enough = true;
    for (const PopcornPoint* k : kept) {
      const rational dx = p.x - k->x;
      const rational dy = p.y - k->y;
      if (dx * dx + dy * dy <= r2) {
        far_enough = false;
        break;
      }
    }
    if (far_enough) kept.push_back(&p);
  }
  return kept.size();
}

// ---------------------------------------------------------------------------
// The sanity set {(1/n, 0) : n >= 1}: everything sits in row 0, so the count
// is the number of distinct columns floor((1/n)/mesh) plus the limit column 0.
// Its box dimension is 1/2, a known-answer check for the estimator.
// ---------------------------------------------------------------------------
inline CoverReport grid_count_demo_set(const rational& delta) {
  const detail::MeshU64 mesh = detail::mesh_u64(delta);
  if (delta >= 1) throw std::domain_error("demo-set count needs mesh < 1");
  const std::uint64_t q_max = mesh.den / mesh.num;
  const std::uint64_t ncols = detail::ceil_div_u64(mesh.den, mesh.num);
  detail::BitRow cols(ncols);
  for (std::uint64_t n = 1; n <= q_max; ++n) {
    std::uint64_t c = mesh.den / (n * mesh.num);
    if (c >= ncols) c = ncols - 1;  // x = 1 absorbed by the last cell
    cols.set(c);
  }
  cols.set(0);  // the accumulation point 0 and every 1/n below the mesh
  CoverReport rep;
  rep.region = FullSquare{};
  rep.mesh = delta;
  rep.count = cols.popcount();
  rep.method = Method::strip_fast;
  rep.q_max = q_max;
  return rep;
}

}  // namespace popcorn
