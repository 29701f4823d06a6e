// popcorn-cover: counting sweeps, dimension fits, spectrum estimates, and the
// certified inequality suites, serialized as CSV/JSON/SVG.
//
// Exit codes: 0 success, 2 a certified inequality failed, 3 cost-guard abort,
// 64 usage error.  Identical configs produce byte-identical CSV/JSON no
// matter the worker count; wall time is only embedded behind --timing.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "popcorn/analysis.hpp"
#include "popcorn/covering.hpp"
#include "popcorn/intervals.hpp"
#include "popcorn/numtheory.hpp"
#include "popcorn/popcorn_set.hpp"
#include "popcorn/rational.hpp"
#include "popcorn/version.hpp"

using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 2;
constexpr int kExitCostGuard = 3;
constexpr int kExitUsage = 64;

struct Common {
  std::string format = "csv";
  std::string out;
  unsigned workers = 0;  // 0 = available parallelism
  std::uint64_t budget = 2'000'000'000ull;
  bool timing = false;
  bool graph_mode = false;
  std::chrono::steady_clock::time_point started =
      std::chrono::steady_clock::now();
};

void add_common(CLI::App* cmd, Common& c, const std::set<std::string>& formats,
                std::uint64_t default_budget) {
  c.budget = default_budget;
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember(formats))
      ->capture_default_str();
  cmd->add_option("--out", c.out, "write the report to this path (default stdout)");
  cmd->add_option("--workers", c.workers,
                  "worker threads; 0 = available parallelism, 1 = sequential")
      ->capture_default_str();
  cmd->add_option("--budget", c.budget, "cost-guard ceiling in point visits")
      ->capture_default_str();
  cmd->add_flag("--timing", c.timing,
                "embed wall time in JSON meta (off keeps output byte-stable)");
  cmd->add_flag("--graph-mode", c.graph_mode,
                "count the popcorn graph instead of the full set");
}

void emit(const Common& c, const std::string& payload) {
  if (c.out.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output path '" + c.out + "'");
  f << payload;
}

void attach_meta(ordered_json& j, const char* command, ordered_json config,
                 const Common& c) {
  ordered_json meta;
  meta["version"] = popcorn::kVersion;
  meta["command"] = command;
  meta["config"] = std::move(config);
  if (c.timing) {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - c.started)
                        .count();
    meta["wall_ms"] = static_cast<std::int64_t>(ms);
  }
  j["meta"] = std::move(meta);
}

std::string fmt_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// serialization helpers
// ---------------------------------------------------------------------------

ordered_json region_json(const popcorn::Region& region) {
  ordered_json r;
  if (std::holds_alternative<popcorn::FullSquare>(region)) {
    r["kind"] = "full-square";
  } else if (std::holds_alternative<popcorn::StripRegion>(region)) {
    r["kind"] = "strip";
    r["k"] = std::get<popcorn::StripRegion>(region).k;
  } else {
    const auto& w = std::get<popcorn::WindowRegion>(region);
    r["kind"] = "window";
    r["x0"] = popcorn::to_string(w.x0);
    r["y0"] = popcorn::to_string(w.y0);
    r["side"] = popcorn::to_string(w.side);
  }
  return r;
}

std::string csv_counts(const std::vector<popcorn::CoverReport>& rows) {
  std::string s = "mesh_num,mesh_den,count,method,q_max\n";
  for (const popcorn::CoverReport& r : rows) {
    s += popcorn::rat_num(r.mesh).get_str();
    s += ',';
    s += popcorn::rat_den(r.mesh).get_str();
    s += ',';
    s += std::to_string(r.count);
    s += ',';
    s += popcorn::method_name(r.method);
    s += ',';
    s += std::to_string(r.q_max);
    s += '\n';
  }
  return s;
}

ordered_json rows_json(const std::vector<popcorn::CoverReport>& rows) {
  ordered_json arr = ordered_json::array();
  for (const popcorn::CoverReport& r : rows) {
    ordered_json row;
    row["mesh_num"] = popcorn::to_u64(popcorn::rat_num(r.mesh));
    row["mesh_den"] = popcorn::to_u64(popcorn::rat_den(r.mesh));
    row["count"] = r.count;
    row["method"] = popcorn::method_name(r.method);
    row["q_max"] = r.q_max;
    row["region"] = region_json(r.region);
    arr.push_back(std::move(row));
  }
  return arr;
}

ordered_json fit_json(const popcorn::FitResult& fit) {
  ordered_json f;
  f["slope"] = fit.slope;
  f["intercept"] = fit.intercept;
  f["slope_stderr"] = fit.slope_stderr;
  f["residuals"] = fit.residuals;
  f["two_point_slopes"] = fit.two_point_slopes;
  f["narrow_range_warning"] = fit.narrow_range_warning;
  return f;
}

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> pts;  // log10 coordinates
  bool has_fit = false;
  double slope = 0, intercept10 = 0;
};

// Static log-log scatter plus fitted lines; no external assets, no scripts.
std::string svg_plot(const std::vector<Series>& series, const std::string& xlabel,
                     const std::string& ylabel, const std::string& title) {
  const double W = 720, H = 480, ml = 72, mr = 24, mt = 40, mb = 56;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const Series& s : series)
    for (auto [x, y] : s.pts) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!(xmin <= xmax)) {
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (xmax - xmin < 1e-12) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double padx = 0.06 * (xmax - xmin), pady = 0.08 * (ymax - ymin);
  xmin -= padx;
  xmax += padx;
  ymin -= pady;
  ymax += pady;
  const auto px = [&](double x) {
    return ml + (x - xmin) / (xmax - xmin) * (W - ml - mr);
  };
  const auto py = [&](double y) {
    return H - mb - (y - ymin) / (ymax - ymin) * (H - mt - mb);
  };
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf"};
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
       "viewBox=\"0 0 720 480\">\n";
  s += "<rect width=\"720\" height=\"480\" fill=\"#ffffff\"/>\n";
  s += "<text x=\"360\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"15\">" + title + "</text>\n";
  // axes
  s += "<line x1=\"" + fmt_g(ml) + "\" y1=\"" + fmt_g(H - mb) + "\" x2=\"" +
       fmt_g(W - mr) + "\" y2=\"" + fmt_g(H - mb) +
       "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  s += "<line x1=\"" + fmt_g(ml) + "\" y1=\"" + fmt_g(mt) + "\" x2=\"" +
       fmt_g(ml) + "\" y2=\"" + fmt_g(H - mb) +
       "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double fx = xmin + (xmax - xmin) * t / 4.0;
    const double fy = ymin + (ymax - ymin) * t / 4.0;
    s += "<line x1=\"" + fmt_g(px(fx)) + "\" y1=\"" + fmt_g(H - mb) + "\" x2=\"" +
         fmt_g(px(fx)) + "\" y2=\"" + fmt_g(H - mb + 5) +
         "\" stroke=\"#333333\"/>\n";
    s += "<text x=\"" + fmt_g(px(fx)) + "\" y=\"" + fmt_g(H - mb + 20) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
         fmt_g(fx) + "</text>\n";
    s += "<line x1=\"" + fmt_g(ml - 5) + "\" y1=\"" + fmt_g(py(fy)) + "\" x2=\"" +
         fmt_g(ml) + "\" y2=\"" + fmt_g(py(fy)) + "\" stroke=\"#333333\"/>\n";
    s += "<text x=\"" + fmt_g(ml - 8) + "\" y=\"" + fmt_g(py(fy) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
         fmt_g(fy) + "</text>\n";
  }
  s += "<text x=\"" + fmt_g((ml + W - mr) / 2) + "\" y=\"" + fmt_g(H - 12) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
       xlabel + "</text>\n";
  s += "<text x=\"18\" y=\"" + fmt_g((mt + H - mb) / 2) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
       "transform=\"rotate(-90 18 " + fmt_g((mt + H - mb) / 2) + ")\">" +
       ylabel + "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = palette[i % 7];
    if (series[i].has_fit) {
      const double y1 = series[i].slope * xmin + series[i].intercept10;
      const double y2 = series[i].slope * xmax + series[i].intercept10;
      s += "<line x1=\"" + fmt_g(px(xmin)) + "\" y1=\"" + fmt_g(py(y1)) +
           "\" x2=\"" + fmt_g(px(xmax)) + "\" y2=\"" + fmt_g(py(y2)) +
           "\" stroke=\"" + color + "\" stroke-width=\"1\" stroke-dasharray=\"5 3\"/>\n";
    }
    for (auto [x, y] : series[i].pts)
      s += "<circle cx=\"" + fmt_g(px(x)) + "\" cy=\"" + fmt_g(py(y)) +
           "\" r=\"3.2\" fill=\"" + color + "\"/>\n";
    s += "<text x=\"" + fmt_g(W - mr - 6) + "\" y=\"" +
         fmt_g(mt + 16 + 16 * static_cast<double>(i)) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" +
         color + "\">" + series[i].name + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

// ---------------------------------------------------------------------------
// shared option plumbing
// ---------------------------------------------------------------------------

std::vector<popcorn::rational> parse_mesh_list(
    const std::vector<std::string>& raw) {
  if (raw.empty()) throw std::invalid_argument("at least one --mesh is required");
  std::vector<popcorn::rational> meshes;
  meshes.reserve(raw.size());
  for (const std::string& s : raw) meshes.push_back(popcorn::parse_rational(s));
  for (std::size_t i = 1; i < meshes.size(); ++i)
    if (!(meshes[i] < meshes[i - 1]))
      throw std::invalid_argument("mesh list must be strictly decreasing");
  return meshes;
}

struct RegionOpts {
  std::string region = "full";
  std::uint64_t k = 0;
  std::string x0 = "0";
  std::string y0 = "0";
  std::string side;
};

void add_region_opts(CLI::App* cmd, RegionOpts& r) {
  cmd->add_option("--region", r.region, "full | strip | window")
      ->check(CLI::IsMember(std::set<std::string>{"full", "strip", "window"}))
      ->capture_default_str();
  cmd->add_option("--k", r.k, "strip index (region=strip)");
  cmd->add_option("--x0", r.x0, "window corner x0 as p/q (region=window)");
  cmd->add_option("--y0", r.y0, "window corner y0 as p/q (region=window)");
  cmd->add_option("--side", r.side, "window side R as p/q (region=window)");
}

popcorn::Region resolve_region(const RegionOpts& r) {
  if (r.region == "full") return popcorn::FullSquare{};
  if (r.region == "strip") return popcorn::StripRegion{r.k};
  if (r.side.empty())
    throw std::invalid_argument("window region requires --side");
  popcorn::WindowRegion w;
  w.x0 = popcorn::parse_rational(r.x0);
  w.y0 = popcorn::parse_rational(r.y0);
  w.side = popcorn::parse_rational(r.side);
  return w;
}

popcorn::CoverReport count_region(const popcorn::Region& region,
                                  const popcorn::rational& mesh,
                                  const popcorn::CountConfig& cfg) {
  if (std::holds_alternative<popcorn::FullSquare>(region))
    return popcorn::grid_count_full_set(mesh, cfg);
  if (std::holds_alternative<popcorn::StripRegion>(region))
    return popcorn::grid_count_strip(std::get<popcorn::StripRegion>(region).k,
                                     mesh, cfg);
  return popcorn::grid_count_window(std::get<popcorn::WindowRegion>(region),
                                    mesh, cfg);
}

// ---------------------------------------------------------------------------
// count
// ---------------------------------------------------------------------------

struct CountOpts {
  std::vector<std::string> mesh;
  RegionOpts region;
  Common common;
};

int run_count(const CountOpts& o) {
  const std::vector<popcorn::rational> meshes = parse_mesh_list(o.mesh);
  const popcorn::Region region = resolve_region(o.region);
  popcorn::CountConfig cfg;
  cfg.workers = o.common.workers;
  cfg.budget = o.common.budget;
  cfg.graph_mode = o.common.graph_mode;
  std::vector<popcorn::CoverReport> rows;
  rows.reserve(meshes.size());
  for (const popcorn::rational& mesh : meshes)
    rows.push_back(count_region(region, mesh, cfg));

  if (o.common.format == "csv") {
    emit(o.common, csv_counts(rows));
  } else if (o.common.format == "json") {
    ordered_json j;
    ordered_json config;
    config["mesh"] = o.mesh;
    config["region"] = region_json(region);
    config["budget"] = o.common.budget;
    config["graph_mode"] = o.common.graph_mode;
    attach_meta(j, "count", std::move(config), o.common);
    j["rows"] = rows_json(rows);
    emit(o.common, j.dump(2) + "\n");
  } else {  // svg
    Series s;
    s.name = "grid counts";
    for (const popcorn::CoverReport& r : rows)
      s.pts.push_back({-std::log10(popcorn::to_double(r.mesh)),
                       std::log10(static_cast<double>(r.count))});
    if (rows.size() >= 3) {
      std::vector<popcorn::ScalingSample> samples;
      for (const popcorn::CoverReport& r : rows)
        samples.push_back({r.mesh, r.count});
      const popcorn::FitResult fit = popcorn::fit_box_dimension(samples);
      s.has_fit = true;
      s.slope = fit.slope;
      s.intercept10 = fit.intercept / std::log(10.0);
      s.name = "slope " + fmt_g(fit.slope);
    }
    emit(o.common,
         svg_plot({s}, "log10(1/mesh)", "log10(count)", "grid cover counts"));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

struct OracleOpts {
  std::string mesh;
  std::uint64_t qmax = 0;  // 0 = floor(1/mesh)
  RegionOpts region;
  Common common;
};

int run_oracle(const OracleOpts& o) {
  const popcorn::rational mesh = popcorn::parse_rational(o.mesh);
  if (mesh <= 0 || mesh >= 1)
    throw std::invalid_argument("oracle mesh must lie in (0,1)");
  const std::uint64_t qmax =
      o.qmax ? o.qmax
             : popcorn::to_u64(popcorn::rat_floor(popcorn::rational(1) / mesh));
  const popcorn::Region region = resolve_region(o.region);
  const popcorn::CoverReport rep = popcorn::brute_force_count(mesh, qmax, region);
  const std::vector<popcorn::CoverReport> rows{rep};
  if (o.common.format == "csv") {
    emit(o.common, csv_counts(rows));
  } else {
    ordered_json j;
    ordered_json config;
    config["mesh"] = o.mesh;
    config["q_max"] = qmax;
    config["region"] = region_json(region);
    attach_meta(j, "oracle", std::move(config), o.common);
    j["rows"] = rows_json(rows);
    emit(o.common, j.dump(2) + "\n");
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// boxdim
// ---------------------------------------------------------------------------

struct BoxdimOpts {
  std::string preset;  // pow2 | tri-sixth | "" (explicit meshes)
  std::uint64_t kmin = 8, kmax = 16;
  std::uint64_t nmin = 1, nmax = 2;
  std::vector<std::string> mesh;
  std::string set = "full";  // full | demo
  Common common;
};

int run_boxdim(const BoxdimOpts& o) {
  std::vector<popcorn::rational> meshes;
  if (!o.mesh.empty()) {
    meshes = parse_mesh_list(o.mesh);
  } else if (o.preset == "tri-sixth") {
    if (o.nmin < 1 || o.nmin > o.nmax)
      throw std::invalid_argument("tri-sixth preset needs 1 <= nmin <= nmax");
    for (std::uint64_t n = o.nmin; n <= o.nmax; ++n)
      meshes.push_back(popcorn::delta_preset_tri_sixth(n));
  } else {  // pow2 default
    if (o.kmin < 1 || o.kmin > o.kmax)
      throw std::invalid_argument("pow2 preset needs 1 <= kmin <= kmax");
    for (std::uint64_t k = o.kmin; k <= o.kmax; ++k)
      meshes.push_back(popcorn::delta_preset_pow2(k));
  }

  popcorn::CountConfig cfg;
  cfg.workers = o.common.workers;
  cfg.budget = o.common.budget;
  cfg.graph_mode = o.common.graph_mode;
  std::vector<popcorn::CoverReport> rows;
  std::vector<popcorn::ScalingSample> samples;
  for (const popcorn::rational& mesh : meshes) {
    const popcorn::CoverReport rep = o.set == "demo"
                                         ? popcorn::grid_count_demo_set(mesh)
                                         : popcorn::grid_count_full_set(mesh, cfg);
    rows.push_back(rep);
    samples.push_back({rep.mesh, rep.count});
  }
  // a regression needs three samples; shorter sweeps still report raw counts
  const bool have_fit = samples.size() >= 3;
  popcorn::FitResult fit;
  if (have_fit) fit = popcorn::fit_box_dimension(samples);

  if (o.common.format == "csv") {
    emit(o.common, csv_counts(rows));
  } else if (o.common.format == "json") {
    ordered_json j;
    ordered_json config;
    config["set"] = o.set;
    config["preset"] = o.mesh.empty() ? (o.preset.empty() ? "pow2" : o.preset)
                                      : "explicit";
    if (o.mesh.empty() && o.preset != "tri-sixth") {
      config["kmin"] = o.kmin;
      config["kmax"] = o.kmax;
    } else if (o.preset == "tri-sixth") {
      config["nmin"] = o.nmin;
      config["nmax"] = o.nmax;
    } else {
      config["mesh"] = o.mesh;
    }
    config["budget"] = o.common.budget;
    config["graph_mode"] = o.common.graph_mode;
    attach_meta(j, "boxdim", std::move(config), o.common);
    j["rows"] = rows_json(rows);
    j["fit"] = have_fit ? fit_json(fit) : ordered_json(nullptr);
    emit(o.common, j.dump(2) + "\n");
  } else {
    Series s;
    s.name = have_fit ? "slope " + fmt_g(fit.slope) : "counts";
    for (const popcorn::CoverReport& r : rows)
      s.pts.push_back({-std::log10(popcorn::to_double(r.mesh)),
                       std::log10(static_cast<double>(r.count))});
    s.has_fit = have_fit;
    s.slope = fit.slope;
    s.intercept10 = fit.intercept / std::log(10.0);
    emit(o.common, svg_plot({s}, "log10(1/mesh)", "log10(count)",
                            o.set == "demo" ? "demo-set box dimension"
                                            : "full-set box dimension"));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// spectrum
// ---------------------------------------------------------------------------

struct SpectrumOpts {
  std::vector<std::string> theta;
  std::uint64_t nmin = 3, nmax = 12;
  bool nmax_explicit = false;
  Common common;
};

int run_spectrum(const SpectrumOpts& o) {
  std::vector<popcorn::rational> thetas;
  for (const std::string& t : o.theta)
    thetas.push_back(popcorn::parse_rational(t));
  for (const popcorn::rational& t : thetas)
    if (t <= 0 || t >= 1)
      throw std::invalid_argument("theta values must lie strictly in (0,1)");

  popcorn::SpectrumConfig scfg;
  scfg.budget = o.common.budget;
  scfg.workers = o.common.workers;

  struct Row {
    popcorn::rational theta;
    popcorn::SpectrumEstimate est;
    std::uint64_t n_hi = 0;
    bool trimmed = false;
  };
  std::vector<Row> results;
  for (const popcorn::rational& theta : thetas) {
    Row row;
    row.theta = theta;
    // Explicit --nmax is honored strictly (cost overruns abort with exit 3);
    // the default range is trimmed per theta to respect the budget.
    row.n_hi = o.nmax;
    if (!o.nmax_explicit) {
      row.n_hi =
          popcorn::spectrum_admissible_hi(theta, o.nmin, o.nmax, scfg.budget);
      row.trimmed = row.n_hi != o.nmax;
    }
    if (row.n_hi >= o.nmin)
      row.est = popcorn::estimate_spectrum(theta, o.nmin, row.n_hi, scfg);
    else {
      row.est.theta = theta;
      row.est.theoretical = popcorn::theoretical_spectrum(theta);
    }
    results.push_back(std::move(row));
  }

  if (o.common.format == "csv") {
    std::string s =
        "theta,n,window_num,window_den,mesh_num,mesh_den,count,fitted_s\n";
    for (const Row& row : results)
      for (const popcorn::SpectrumPoint& pt : row.est.points) {
        s += popcorn::to_string(row.theta);
        s += ',';
        s += std::to_string(pt.n);
        s += ',';
        s += popcorn::rat_num(pt.R).get_str();
        s += ',';
        s += popcorn::rat_den(pt.R).get_str();
        s += ',';
        s += popcorn::rat_num(pt.r).get_str();
        s += ',';
        s += popcorn::rat_den(pt.r).get_str();
        s += ',';
        s += std::to_string(pt.count);
        s += ',';
        s += row.est.fit_valid ? fmt_g(row.est.fitted_s) : "nan";
        s += '\n';
      }
    emit(o.common, s);
  } else if (o.common.format == "json") {
    ordered_json j;
    ordered_json config;
    config["theta"] = o.theta;
    config["nmin"] = o.nmin;
    config["nmax"] = o.nmax;
    config["budget"] = o.common.budget;
    attach_meta(j, "spectrum", std::move(config), o.common);
    ordered_json arr = ordered_json::array();
    for (const Row& row : results) {
      ordered_json r;
      r["theta"] = popcorn::to_string(row.theta);
      r["theoretical"] = popcorn::to_string(row.est.theoretical);
      r["theoretical_float"] = popcorn::to_double(row.est.theoretical);
      r["n_min"] = o.nmin;
      r["n_max_effective"] = row.n_hi;
      r["trimmed_to_budget"] = row.trimmed;
      if (row.est.fit_valid) r["fitted_s"] = row.est.fitted_s;
      ordered_json pts = ordered_json::array();
      for (const popcorn::SpectrumPoint& pt : row.est.points) {
        ordered_json p;
        p["n"] = pt.n;
        p["window"] = popcorn::to_string(pt.R);
        p["mesh"] = popcorn::to_string(pt.r);
        p["count"] = pt.count;
        pts.push_back(std::move(p));
      }
      r["points"] = std::move(pts);
      arr.push_back(std::move(r));
    }
    j["estimates"] = std::move(arr);
    emit(o.common, j.dump(2) + "\n");
  } else {  // svg
    std::vector<Series> series;
    for (const Row& row : results) {
      Series s;
      s.name = "theta " + popcorn::to_string(row.theta);
      if (row.est.fit_valid) {
        s.name += ", s " + fmt_g(row.est.fitted_s);
        s.has_fit = true;
        s.slope = row.est.fitted_s;
      }
      const double it = popcorn::to_double(popcorn::rational(1) / row.theta - 1);
      double sx = 0, sy = 0;
      for (const popcorn::SpectrumPoint& pt : row.est.points) {
        const double x = it * -std::log10(popcorn::to_double(pt.R));
        const double y = std::log10(static_cast<double>(pt.count));
        s.pts.push_back({x, y});
        sx += x;
        sy += y;
      }
      if (s.has_fit && !s.pts.empty())
        s.intercept10 = sy / static_cast<double>(s.pts.size()) -
                        s.slope * sx / static_cast<double>(s.pts.size());
      series.push_back(std::move(s));
    }
    emit(o.common, svg_plot(series, "(1/theta - 1) log10(1/R)", "log10(count)",
                            "Assouad spectrum windows"));
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyOpts {
  std::string suite;
  std::vector<std::string> delta;
  std::uint64_t nmax = 300;
  std::uint64_t lmax = 200;
  std::uint64_t n = 100;
  std::uint64_t kmax = 500;
  double eps = 0.05;
  Common common;
};

ordered_json worst_ratio_json(const popcorn::WorstRatioReport& rep,
                              const char* a_name, const char* b_name) {
  ordered_json j;
  j["worst_ratio"] = popcorn::to_string(rep.worst);
  j["worst_ratio_float"] = popcorn::to_double(rep.worst);
  j[a_name] = rep.a;
  j[b_name] = rep.b;
  j["intersecting_pairs"] = rep.intersecting_pairs;
  return j;
}

int run_verify(const VerifyOpts& o) {
  const bool all = o.suite == "all";
  ordered_json suites = ordered_json::array();
  bool pass = true;

  if (all || o.suite == "duffin-schaeffer") {
    const popcorn::rational delta =
        o.delta.empty() ? popcorn::make_rational(1, 10'000'000L)
                        : popcorn::parse_rational(o.delta.front());
    const popcorn::WorstRatioReport rep =
        popcorn::verify_duffin_schaeffer(o.nmax, delta);
    const bool ok = rep.worst <= 1;
    ordered_json s;
    s["suite"] = "duffin-schaeffer";
    s["n_max"] = o.nmax;
    s["delta"] = popcorn::to_string(delta);
    s.update(worst_ratio_json(rep, "worst_n", "worst_m"));
    s["pass"] = ok;
    suites.push_back(std::move(s));
    pass = pass && ok;
  }

  if (all || o.suite == "local-ds") {
    const popcorn::rational delta =
        o.delta.empty() ? popcorn::make_rational(1, 100'000'000L)
                        : popcorn::parse_rational(o.delta.front());
    const popcorn::WorstRatioReport rep =
        popcorn::verify_local_ds(o.lmax, o.n, delta);
    const bool ok = rep.worst <= 1;
    ordered_json s;
    s["suite"] = "local-ds";
    s["l_max"] = o.lmax;
    s["n"] = o.n;
    s["delta"] = popcorn::to_string(delta);
    s.update(worst_ratio_json(rep, "worst_l", "worst_lp"));
    s["pass"] = ok;
    suites.push_back(std::move(s));
    pass = pass && ok;
  }

  if (all || o.suite == "strip-lemma") {
    const popcorn::rational delta =
        o.delta.empty() ? popcorn::make_rational(1, 1'000'000L)
                        : popcorn::parse_rational(o.delta.front());
    const popcorn::StripLemmaReport rep =
        popcorn::verify_strip_lemma(delta, o.kmax, o.eps);
    ordered_json s;
    s["suite"] = "strip-lemma";
    s["delta"] = popcorn::to_string(delta);
    s["k_max"] = rep.checked_k_max;
    s["eps"] = o.eps;
    s["violations"] = rep.violations;
    if (!rep.pass) {
      ordered_json w;
      w["k"] = rep.first_violation_k;
      w["gap"] = rep.first_violation_gap.get_str();
      w["lower"] = popcorn::to_string(rep.first_violation_lower);
      w["upper"] = popcorn::to_string(rep.first_violation_upper);
      s["first_violation"] = std::move(w);
    }
    s["pass"] = rep.pass;
    suites.push_back(std::move(s));
    pass = pass && rep.pass;
  }

  if (all || o.suite == "chung-erdos") {
    std::vector<popcorn::rational> deltas;
    if (o.delta.empty()) {
      deltas = {popcorn::make_rational(1, 1024), popcorn::make_rational(1, 4096),
                popcorn::make_rational(1, 16384)};
    } else {
      for (const std::string& d : o.delta)
        deltas.push_back(popcorn::parse_rational(d));
    }
    popcorn::CountConfig ccfg;
    ccfg.workers = o.common.workers;
    ccfg.budget = o.common.budget;
    std::uint64_t checks = 0, violations = 0;
    ordered_json per_delta = ordered_json::array();
    std::vector<double> xs, ys;
    for (const popcorn::rational& delta : deltas) {
      const auto [k_lo, k_hi] = popcorn::admissible_strip_range(delta);
      popcorn::rational total(0);
      ordered_json viol = ordered_json::array();
      for (std::uint64_t k = k_lo; k <= k_hi; ++k) {
        const popcorn::StripLowerBound lb = popcorn::lower_bound_strip(k, delta);
        if (lb.empty_strip) continue;
        const popcorn::CoverReport grid =
            popcorn::grid_count_strip(k, delta, ccfg);
        ++checks;
        if (lb.value > popcorn::rational(
                           popcorn::bigint(static_cast<unsigned long>(grid.count)))) {
          ++violations;
          viol.push_back(k);
        }
        total += lb.value;
      }
      ordered_json d;
      d["delta"] = popcorn::to_string(delta);
      d["k_lo"] = k_lo;
      d["k_hi"] = k_hi;
      d["aggregated_lower_bound"] = popcorn::to_string(total);
      d["aggregated_float"] = popcorn::to_double(total);
      if (!viol.empty()) d["violating_k"] = std::move(viol);
      per_delta.push_back(std::move(d));
      if (total > 0) {
        xs.push_back(-std::log(popcorn::to_double(delta)));
        ys.push_back(std::log(popcorn::to_double(total)));
      }
    }
    ordered_json s;
    s["suite"] = "chung-erdos";
    s["strip_checks"] = checks;
    s["violations"] = violations;
    s["per_delta"] = std::move(per_delta);
    bool ok = violations == 0;
    if (xs.size() >= 2) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double n = static_cast<double>(xs.size());
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
      }
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - sx / n) * (xs[i] - sx / n);
        sxy += (xs[i] - sx / n) * (ys[i] - sy / n);
      }
      const double slope = sxy / sxx;
      s["aggregated_slope"] = slope;
      s["slope_threshold"] = 1.25;
      const bool slope_ok = slope >= 1.25;
      s["slope_pass"] = slope_ok;
      ok = ok && slope_ok;
    }
    s["pass"] = ok;
    suites.push_back(std::move(s));
    pass = pass && ok;
  }

  ordered_json j;
  ordered_json config;
  config["suite"] = o.suite;
  if (!o.delta.empty()) config["delta"] = o.delta;
  config["n_max"] = o.nmax;
  config["l_max"] = o.lmax;
  config["n"] = o.n;
  config["k_max"] = o.kmax;
  config["eps"] = o.eps;
  config["budget"] = o.common.budget;
  attach_meta(j, "verify", std::move(config), o.common);
  j["suites"] = std::move(suites);
  j["pass"] = pass;
  emit(o.common, j.dump(2) + "\n");
  return pass ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact covering counts, dimension estimates, and certified "
               "inequalities for the popcorn (Thomae) set"};
  app.set_version_flag("--version", popcorn::kVersion);
  app.require_subcommand(1);

  CountOpts count_opts;
  CLI::App* count_cmd =
      app.add_subcommand("count", "grid-cover counts at given meshes");
  count_cmd->add_option("--mesh", count_opts.mesh,
                        "mesh values p/q, strictly decreasing")
      ->required();
  add_region_opts(count_cmd, count_opts.region);
  add_common(count_cmd, count_opts.common, {"csv", "json", "svg"},
             2'000'000'000ull);

  OracleOpts oracle_opts;
  CLI::App* oracle_cmd = app.add_subcommand(
      "oracle", "brute-force reference count (exact rational arithmetic)");
  oracle_cmd->add_option("--mesh", oracle_opts.mesh, "mesh value p/q")
      ->required();
  oracle_cmd->add_option("--qmax", oracle_opts.qmax,
                         "level truncation (default floor(1/mesh))");
  add_region_opts(oracle_cmd, oracle_opts.region);
  add_common(oracle_cmd, oracle_opts.common, {"csv", "json"}, 2'000'000'000ull);

  BoxdimOpts boxdim_opts;
  CLI::App* boxdim_cmd =
      app.add_subcommand("boxdim", "box-dimension fit over a mesh sweep");
  boxdim_cmd->add_option("--preset", boxdim_opts.preset, "pow2 | tri-sixth")
      ->check(CLI::IsMember(std::set<std::string>{"pow2", "tri-sixth"}));
  boxdim_cmd->add_option("--kmin", boxdim_opts.kmin, "pow2 preset: smallest k")
      ->capture_default_str();
  boxdim_cmd->add_option("--kmax", boxdim_opts.kmax, "pow2 preset: largest k")
      ->capture_default_str();
  boxdim_cmd->add_option("--nmin", boxdim_opts.nmin, "tri-sixth preset: smallest n")
      ->capture_default_str();
  boxdim_cmd->add_option("--nmax", boxdim_opts.nmax, "tri-sixth preset: largest n")
      ->capture_default_str();
  boxdim_cmd
      ->add_option("--mesh", boxdim_opts.mesh,
                   "explicit mesh list (overrides presets)")
      ->excludes("--preset");
  boxdim_cmd->add_option("--set", boxdim_opts.set, "full | demo")
      ->check(CLI::IsMember(std::set<std::string>{"full", "demo"}))
      ->capture_default_str();
  add_common(boxdim_cmd, boxdim_opts.common, {"csv", "json", "svg"},
             2'000'000'000ull);
  boxdim_opts.common.format = "json";
  boxdim_cmd->get_option("--format")->default_str("json");

  SpectrumOpts spectrum_opts;
  CLI::App* spectrum_cmd = app.add_subcommand(
      "spectrum", "Assouad spectrum estimates over window sweeps");
  spectrum_cmd->add_option("--theta", spectrum_opts.theta,
                           "theta values p/q in (0,1)");
  spectrum_cmd->add_option("--nmin", spectrum_opts.nmin, "first window index")
      ->capture_default_str();
  CLI::Option* nmax_opt =
      spectrum_cmd->add_option("--nmax", spectrum_opts.nmax, "last window index")
          ->capture_default_str();
  add_common(spectrum_cmd, spectrum_opts.common, {"csv", "json", "svg"},
             1'000'000'000ull);
  spectrum_opts.common.format = "json";
  spectrum_cmd->get_option("--format")->default_str("json");

  VerifyOpts verify_opts;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "certified inequality suites (exit 2 on any violation)");
  verify_cmd
      ->add_option("--suite", verify_opts.suite,
                   "duffin-schaeffer | local-ds | strip-lemma | chung-erdos | all")
      ->check(CLI::IsMember(std::set<std::string>{
          "duffin-schaeffer", "local-ds", "strip-lemma", "chung-erdos", "all"}))
      ->required();
  verify_cmd->add_option("--delta", verify_opts.delta,
                         "neighborhood radius p/q (repeatable for chung-erdos)");
  verify_cmd->add_option("--nmax", verify_opts.nmax, "duffin-schaeffer: largest n")
      ->capture_default_str();
  verify_cmd->add_option("--lmax", verify_opts.lmax, "local-ds: largest l")
      ->capture_default_str();
  verify_cmd->add_option("--n", verify_opts.n, "local-ds: window parameter n")
      ->capture_default_str();
  verify_cmd->add_option("--kmax", verify_opts.kmax, "strip-lemma: largest k")
      ->capture_default_str();
  verify_cmd->add_option("--eps", verify_opts.eps,
                         "strip-lemma: admissible-range exponent epsilon")
      ->capture_default_str();
  add_common(verify_cmd, verify_opts.common, {"json"}, 2'000'000'000ull);
  verify_opts.common.format = "json";
  verify_cmd->get_option("--format")->default_str("json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (count_cmd->parsed()) return run_count(count_opts);
    if (oracle_cmd->parsed()) return run_oracle(oracle_opts);
    if (boxdim_cmd->parsed()) return run_boxdim(boxdim_opts);
    if (spectrum_cmd->parsed()) {
      if (spectrum_opts.theta.empty())
        spectrum_opts.theta = {"1/5", "3/10", "2/5", "1/2", "3/5", "7/10", "4/5"};
      spectrum_opts.nmax_explicit = nmax_opt->count() > 0;
      return run_spectrum(spectrum_opts);
    }
    if (verify_cmd->parsed()) return run_verify(verify_opts);
  } catch (const popcorn::CostGuardError& e) {
    std::cerr << "cost-guard abort: " << e.what() << " (offending parameter "
              << e.offending << ")\n";
    return kExitCostGuard;
  } catch (const popcorn::OracleTooLargeError& e) {
    std::cerr << "cost-guard abort: " << e.what() << "\n";
    return kExitCostGuard;
  } catch (const std::length_error& e) {
    std::cerr << "cost-guard abort: " << e.what() << "\n";
    return kExitCostGuard;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;  // no subcommand (require_subcommand should prevent this)
}
