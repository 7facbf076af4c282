#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gev/gevrey_sequence.hpp"
#include "gev/regularity.hpp"
#include "gev/stft.hpp"
#include "gev/window.hpp"

namespace gev {

enum class Direction { positive, negative };
enum class ScanMode { roumieu, beurling };

// Frequency band of the two half-line cones. Zero fields select 0.2 and 0.8
// times the Nyquist frequency.
struct ConeSpec {
  double xi_min = 0.0;
  double xi_max = 0.0;
};

struct WavefrontOptions {
  double hop = 0.125;
  ConeSpec cone;
  double threshold = 1e3;
  ScanMode mode = ScanMode::roumieu;
  std::vector<double> h_grid{0.25, 0.5, 1.0, 2.0, 4.0};
  bool fits = true;
};

// ln of the median, over the smooth corpus (gaussian, gaussian times cosine,
// bump), of each signal's largest cell margin, one entry per h.
struct SmoothReference {
  std::vector<double> h_grid;
  std::vector<double> log_margin;
};

struct WavefrontCell {
  double x_center = 0.0;
  Direction direction = Direction::positive;
  bool singular = false;
  double envelope_margin = 0.0;      // combined margin over the h grid, relative to the reference
  double log_margin = 0.0;           // its natural log
  std::vector<double> log_margin_h;  // ln A_h(x), per h
  std::optional<DecayFit> fit;
};

struct WaveFrontReport {
  std::vector<WavefrontCell> cells;  // ordered by x, positive direction first
  GevreyParams params;
  std::string window_id;
  double window_radius = 0.0;
  double hop = 0.0;
  double threshold = 0.0;
  ScanMode mode = ScanMode::roumieu;
  double xi_min = 0.0;
  double xi_max = 0.0;
  SmoothReference reference;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Reference margins for records of n samples at spacing dt.
SmoothReference calibrate_reference(std::size_t n, double dt, const Window& phi, const GevreyParams& params,
                                    const WavefrontOptions& options);

// Cell margins A_h(x) = max over the cone of max(|V|, 1e-13 G) e^{T_h(|xi|)} / G,
// G = max |V|. A cell is singular when min_h (roumieu) or max_h (beurling) of
// A_h / reference_h exceeds the threshold. Without a reference one is
// calibrated at the signal's grid.
WaveFrontReport scan_wavefront(const SampledSignal& u, const Window& phi, const GevreyParams& params,
                               const WavefrontOptions& options, const SmoothReference* reference = nullptr);

// Singular cells, each widened by hop/2 on both sides, merged into maximal
// intervals.
std::vector<Interval> singular_support(const WaveFrontReport& report);

struct CutoffCheck {
  std::vector<std::string> window_ids;
  std::vector<std::vector<Interval>> supports;
  std::vector<double> disagreements;  // x of cells flagged by some windows but not all
  bool passed = true;                 // every disagreement within one support diameter of an endpoint
};

CutoffCheck cutoff_independence_check(const SampledSignal& u, const GevreyParams& params,
                                      const std::vector<Window>& windows, const WavefrontOptions& options);

// Scan window matched to the analysis class: Gevrey bump with sigma = 1 and
// tau = 1.5 (capped at the analysis tau when that has sigma = 1).
Window default_scan_window(const GevreyParams& params, double radius, double dt, int factors = 36);

std::string to_string(Direction d);
std::string to_string(ScanMode m);
ScanMode scan_mode_from_string(const std::string& name);  // throws ConfigError

}  // namespace gev
