#include "gev/wavefront.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>

#include "gev/associated_function.hpp"
#include "gev/corpus.hpp"
#include "gev/errors.hpp"

namespace gev {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kMinConeBins = 16;
constexpr std::size_t kFitPoints = 64;
constexpr double kReferenceRadius = 0.75;
constexpr double kReferenceFrequency = 4.0;

struct Cone {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::size_t> pos;  // bins with lo <= xi <= hi
  std::vector<std::size_t> neg;  // bins with -hi <= xi <= -lo
};

Cone make_cone(const StftGrid& grid, const ConeSpec& spec) {
  const double nyq = 0.5 / grid.dt;
  Cone c;
  c.lo = spec.xi_min > 0.0 ? spec.xi_min : 0.2 * nyq;
  c.hi = spec.xi_max > 0.0 ? spec.xi_max : 0.8 * nyq;
  if (!(c.hi > c.lo)) throw DomainError("cone_too_narrow", "wavefront: cone upper edge must exceed the lower edge");
  if (c.lo < fit_xi_floor()) throw DomainError("wavefront: cone lower edge below the fit floor");
  for (std::size_t j = 0; j < grid.n_xi; ++j) {
    const double xi = grid.xi_axis[j];
    if (xi >= c.lo && xi <= c.hi) c.pos.push_back(j);
    if (-xi >= c.lo && -xi <= c.hi) c.neg.push_back(j);
  }
  if (c.pos.size() < kMinConeBins || c.neg.size() < kMinConeBins) {
    throw DomainError("cone_too_narrow", "wavefront: cone holds fewer than 16 frequency bins per direction");
  }
  return c;
}

std::size_t frequency_bins(const Window& phi) { return next_power_of_two(phi.size()); }

// Log-spaced subset of the positive cone bins for the per-cell fits.
std::vector<std::size_t> fit_bins(const StftGrid& grid, const Cone& cone) {
  std::vector<std::size_t> out;
  const double a = grid.xi_axis[cone.pos.front()];
  const double b = grid.xi_axis[cone.pos.back()];
  for (std::size_t k = 0; k < kFitPoints; ++k) {
    const double target = a * std::pow(b / a, static_cast<double>(k) / (kFitPoints - 1));
    auto it = std::lower_bound(cone.pos.begin(), cone.pos.end(), target,
                               [&](std::size_t j, double v) { return grid.xi_axis[j] < v; });
    if (it == cone.pos.end()) it = std::prev(it);
    if (out.empty() || out.back() != *it) out.push_back(*it);
  }
  return out;
}

// ln A_h(x) for every frame, direction and h: rows ordered as frame-major,
// positive then negative.
struct Margins {
  std::vector<std::vector<double>> log_a;  // [cell][h]
  double log_g = kNegInf;
};

Margins cell_margins(const StftGrid& grid, const Cone& cone, const GevreyParams& params,
                     const std::vector<double>& h_grid) {
  const double g = grid.max_abs();
  Margins out;
  out.log_a.assign(2 * grid.n_x, std::vector<double>(h_grid.size(), kNegInf));
  if (g == 0.0) return out;
  out.log_g = std::log(g);
  const double log_floor = std::log(kNoiseFloor) + out.log_g;

  // T_h at each positive cone bin; the negative cone mirrors it.
  std::vector<std::vector<double>> t(h_grid.size(), std::vector<double>(cone.pos.size()));
  for (std::size_t k = 0; k < h_grid.size(); ++k) {
    const GevreyParams p{params.tau, params.sigma, h_grid[k]};
    for (std::size_t b = 0; b < cone.pos.size(); ++b) t[k][b] = assoc_value(p, grid.xi_axis[cone.pos[b]]);
  }
  const std::size_t n = grid.n_xi;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(grid.n_x); ++i) {
    const auto r = static_cast<std::size_t>(i);
    for (int dir = 0; dir < 2; ++dir) {
      auto& row = out.log_a[2 * r + static_cast<std::size_t>(dir)];
      for (std::size_t b = 0; b < cone.pos.size(); ++b) {
        const std::size_t j = dir == 0 ? cone.pos[b] : n - cone.pos[b];
        const double v = std::abs(grid.at(r, j));
        const double lv = v > 0.0 ? std::max(std::log(v), log_floor) : log_floor;
        for (std::size_t k = 0; k < h_grid.size(); ++k) row[k] = std::max(row[k], lv + t[k][b]);
      }
      for (auto& v : row) v -= out.log_g;
    }
  }
  return out;
}

void check_window(const Window& phi) {
  if (!phi.compact()) throw DomainError("non_compact_window", "wavefront: window must be compactly supported");
}

// Engines for per-cell fits, shared between scans with the same cone bins.
std::shared_ptr<const FitEngine> fit_engine(const std::vector<double>& xi) {
  static std::mutex mutex;
  static std::map<std::vector<double>, std::shared_ptr<const FitEngine>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[xi];
  if (!slot) {
    FitOptions fo;
    fo.refine = false;
    slot = std::make_shared<const FitEngine>(xi, fo);
  }
  return slot;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

Window default_scan_window(const GevreyParams& params, double radius, double dt, int factors) {
  const double tau = params.sigma == 1.0 ? std::min(1.5, params.tau) : 1.5;
  return make_gevrey_bump({tau, 1.0, 1.0}, radius, dt, factors, BumpNormalization::unit_mass);
}

SmoothReference calibrate_reference(std::size_t n, double dt, const Window& phi, const GevreyParams& params,
                                    const WavefrontOptions& options) {
  check_window(phi);
  SignalSpec spec;
  spec.dt = dt;
  spec.n = n;
  spec.frequency = kReferenceFrequency;
  spec.radius = kReferenceRadius;
  spec.params = phi.params;
  spec.factors = phi.factors > 0 ? phi.factors : spec.factors;

  SmoothReference ref;
  ref.h_grid = options.h_grid;
  std::vector<std::vector<double>> per_signal;
  for (auto kind : {SignalKind::gaussian, SignalKind::gaussian_cosine, SignalKind::bump}) {
    spec.kind = kind;
    const auto u = generate(spec);
    const auto grid = stft(u, phi, options.hop, frequency_bins(phi), FrameRange::interior);
    const auto cone = make_cone(grid, options.cone);
    const auto m = cell_margins(grid, cone, params, options.h_grid);
    std::vector<double> top(options.h_grid.size(), kNegInf);
    for (const auto& row : m.log_a) {
      for (std::size_t k = 0; k < row.size(); ++k) top[k] = std::max(top[k], row[k]);
    }
    per_signal.push_back(top);
  }
  for (std::size_t k = 0; k < options.h_grid.size(); ++k) {
    std::vector<double> col;
    for (const auto& s : per_signal) col.push_back(s[k]);
    ref.log_margin.push_back(median(col));
  }
  return ref;
}

WaveFrontReport scan_wavefront(const SampledSignal& u, const Window& phi, const GevreyParams& params,
                               const WavefrontOptions& options, const SmoothReference* reference) {
  check_window(phi);
  params.validate();
  u.validate();
  if (options.h_grid.empty()) throw DomainError("wavefront: empty h grid");
  for (double h : options.h_grid) {
    if (!(h > 0.0)) throw DomainError("wavefront: h grid must be positive");
  }
  if (!(options.threshold > 0.0)) throw DomainError("wavefront: threshold must be positive");
  for (const auto& v : u.samples) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("wavefront: non-finite samples");
  }

  SmoothReference own;
  if (reference == nullptr) {
    own = calibrate_reference(u.size(), u.dt, phi, params, options);
    reference = &own;
  }
  if (reference->h_grid != options.h_grid) throw DomainError("wavefront: reference h grid differs from the options");

  const auto grid = stft(u, phi, options.hop, frequency_bins(phi), FrameRange::interior);
  const auto cone = make_cone(grid, options.cone);
  const auto m = cell_margins(grid, cone, params, options.h_grid);

  WaveFrontReport report;
  report.params = params;
  report.window_id = phi.id;
  report.window_radius = phi.support_radius;
  report.hop = grid.hop;
  report.threshold = options.threshold;
  report.mode = options.mode;
  report.xi_min = cone.lo;
  report.xi_max = cone.hi;
  report.reference = *reference;
  report.cells.resize(2 * grid.n_x);

  const double log_threshold = std::log(options.threshold);
  for (std::size_t c = 0; c < report.cells.size(); ++c) {
    auto& cell = report.cells[c];
    cell.x_center = grid.x_axis[c / 2];
    cell.direction = c % 2 == 0 ? Direction::positive : Direction::negative;
    cell.log_margin_h = m.log_a[c];
    double combined = options.mode == ScanMode::roumieu ? std::numeric_limits<double>::infinity() : kNegInf;
    for (std::size_t k = 0; k < options.h_grid.size(); ++k) {
      const double rel = m.log_a[c][k] - reference->log_margin[k];
      combined = options.mode == ScanMode::roumieu ? std::min(combined, rel) : std::max(combined, rel);
    }
    if (m.log_g == kNegInf) combined = kNegInf;
    cell.log_margin = combined;
    cell.envelope_margin = std::exp(combined);
    cell.singular = combined > log_threshold;
  }

  if (options.fits && m.log_g != kNegInf) {
    const auto bins = fit_bins(grid, cone);
    std::vector<double> xi;
    for (std::size_t j : bins) xi.push_back(grid.xi_axis[j]);
    const auto engine = fit_engine(xi);
    const double floor = kNoiseFloor * std::exp(m.log_g);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t ci = 0; ci < static_cast<std::ptrdiff_t>(report.cells.size()); ++ci) {
      const auto c = static_cast<std::size_t>(ci);
      const std::size_t r = c / 2;
      std::vector<double> y(bins.size());
      std::vector<char> mask(bins.size(), 0);
      for (std::size_t b = 0; b < bins.size(); ++b) {
        const std::size_t j = c % 2 == 0 ? bins[b] : grid.n_xi - bins[b];
        const double v = std::abs(grid.at(r, j));
        mask[b] = v > floor ? 1 : 0;
        y[b] = v > 0.0 ? -std::log(v) : 0.0;
      }
      try {
        report.cells[c].fit = engine->fit(y, mask);
      } catch (const DomainError&) {
        report.cells[c].fit.reset();
      }
    }
  }
  return report;
}

std::vector<Interval> singular_support(const WaveFrontReport& report) {
  std::vector<double> xs;
  for (const auto& c : report.cells) {
    if (c.singular) xs.push_back(c.x_center);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Interval> out;
  const double pad = 0.5 * report.hop;
  for (double x : xs) {
    if (!out.empty() && x - pad <= out.back().hi + 1e-9 * report.hop) {
      out.back().hi = x + pad;
    } else {
      out.push_back({x - pad, x + pad});
    }
  }
  return out;
}

CutoffCheck cutoff_independence_check(const SampledSignal& u, const GevreyParams& params,
                                      const std::vector<Window>& windows, const WavefrontOptions& options) {
  if (windows.size() < 2) throw DomainError("cutoff_independence_check: needs at least two windows");
  double rmin = std::numeric_limits<double>::infinity();
  double rmax = 0.0;
  for (const auto& w : windows) {
    check_window(w);
    if (w.kind != WindowKind::gevrey_bump) throw DomainError("cutoff_independence_check: windows must be bumps");
    rmin = std::min(rmin, w.support_radius);
    rmax = std::max(rmax, w.support_radius);
  }
  if (rmax > 2.0 * rmin) throw DomainError("cutoff_independence_check: support radii differ by more than a factor 2");

  CutoffCheck out;
  std::vector<std::vector<std::pair<double, int>>> flagged;
  for (const auto& w : windows) {
    const auto rep = scan_wavefront(u, w, params, options);
    out.window_ids.push_back(w.id);
    out.supports.push_back(singular_support(rep));
    std::vector<std::pair<double, int>> f;
    for (const auto& c : rep.cells) {
      if (c.singular) f.emplace_back(c.x_center, c.direction == Direction::positive ? 0 : 1);
    }
    flagged.push_back(std::move(f));
  }
  // Cells flagged by some window but not by all of them.
  std::vector<std::pair<double, int>> all;
  for (const auto& f : flagged) all.insert(all.end(), f.begin(), f.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::vector<double> endpoints;
  for (const auto& s : out.supports) {
    for (const auto& iv : s) {
      endpoints.push_back(iv.lo);
      endpoints.push_back(iv.hi);
    }
  }
  const double diameter = 2.0 * rmax;
  for (const auto& cell : all) {
    bool everywhere = true;
    for (const auto& f : flagged) everywhere = everywhere && std::binary_search(f.begin(), f.end(), cell);
    if (everywhere) continue;
    if (out.disagreements.empty() || out.disagreements.back() != cell.first) out.disagreements.push_back(cell.first);
    bool near = false;
    for (double e : endpoints) near = near || std::fabs(cell.first - e) <= diameter;
    out.passed = out.passed && near;
  }
  return out;
}

std::string to_string(Direction d) { return d == Direction::positive ? "positive" : "negative"; }

std::string to_string(ScanMode m) { return m == ScanMode::roumieu ? "roumieu" : "beurling"; }

ScanMode scan_mode_from_string(const std::string& name) {
  if (name == "roumieu") return ScanMode::roumieu;
  if (name == "beurling") return ScanMode::beurling;
  throw ConfigError("unknown scan mode '" + name + "'");
}

}  // namespace gev
