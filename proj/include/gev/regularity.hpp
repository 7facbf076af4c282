#pragma once

#include <string>
#include <vector>

#include "gev/gevrey_sequence.hpp"
#include "gev/stft.hpp"
#include "gev/weight.hpp"

namespace gev {

// Grid values below this fraction of max |V| are treated as rounding noise.
inline constexpr double kNoiseFloor = 1e-13;

// Smallest |xi| with ln ln(e + |xi|) >= 0.1.
double fit_xi_floor();

struct DerivativeCertificate {
  std::vector<int> orders;
  std::vector<double> sup_norms;  // sup_t |d^a f(t)| / m(t)
  std::vector<double> noise;      // high-band energy fraction per order
  double amplitude = 0.0;         // sup_norms[0]
  double fitted_cf = 0.0;         // smallest C with sup_norms[a] <= A C^{a^s} a^{t a^s}, a >= 1
  GevreyParams params;
  std::vector<std::string> warnings;
};

// Periodic spectral derivatives of f up to alpha_max <= 10.
DerivativeCertificate probe_condition_i(const SampledSignal& f, int alpha_max, const WeightSpec& m,
                                        const GevreyParams& params);

struct MomentReport {
  std::vector<int> orders;
  std::vector<double> sup_moments;         // sup_{x,xi} |xi|^a |V| / m
  std::vector<double> integrated_moments;  // sup_x int |xi|^a |V| dxi / m
  double fitted_cfg = 0.0;                 // as fitted_cf, on sup_moments
  double growth_exponent = 0.0;            // slope of ln(mu_a / mu_0) against a^s ln a, a >= 2
  bool compatible = true;                  // growth_exponent <= tau
  GevreyParams params;
};

MomentReport probe_condition_ii(const StftGrid& grid, const WeightSpec& m, int alpha_max,
                                const GevreyParams& params);

// max_k [N ln k - T(k)] over the given k > 0, which equals ln M_N - N^s ln h when
// the grid contains a maximizing k.
double log_envelope_moment(const GevreyParams& params, int order, const std::vector<double>& ks);

struct EnvelopeMargin {
  GevreyParams params;
  bool passed = true;
  double log_margin = 0.0;      // ln sup |V| e^{T(|xi|)} / m over values above the floor
  double log_normalized = 0.0;  // log_margin - ln max |V|
  double threshold = 1e3;       // pass iff normalized margin <= threshold
  double tightest_x = 0.0;
  double tightest_xi = 0.0;
  bool empty = false;           // no value above the floor: infinite headroom
};

EnvelopeMargin probe_condition_iii(const StftGrid& grid, const WeightSpec& m, const GevreyParams& params,
                                   double threshold = 1e3);

struct BeurlingReport {
  std::vector<EnvelopeMargin> per_h;
  bool roumieu = false;  // some h passes
  bool beurling = true;  // every h passes
};

BeurlingReport probe_beurling(const StftGrid& grid, const WeightSpec& m, const GevreyParams& base,
                              const std::vector<double>& h_list, double threshold = 1e3);

enum class DecayModel { gevrey, extended };

struct DecayFit {
  DecayModel model = DecayModel::gevrey;
  double tau_hat = 0.0;
  double sigma_hat = 1.0;
  double amplitude = 0.0;  // e^{-intercept}
  double slope = 0.0;
  double r_squared = 0.0;
  double xi_lo = 0.0;
  double xi_hi = 0.0;
  std::size_t points = 0;
};

struct FitOptions {
  std::vector<double> sigmas;  // empty: 1, 1.05, ..., 1.95
  double tau_min = 0.1;
  double tau_max = 8.0;
  int tau_coarse = 60;
  bool refine = true;
  double min_decades = 1.0;
  std::size_t max_points = 200;
  double xi_min = 0.0;  // raised to fit_xi_floor()
  double xi_max = 0.0;  // 0: 0.8 Nyquist

  std::vector<double> sigma_grid() const;
};

// Regression of y = -ln E(xi) on xi^{1/tau} (sigma = 1) or on T_{tau,sigma,1}(xi)
// (sigma > 1), slope and intercept free, over a coarse log-tau grid followed by
// golden-section refinement. The regressor tables of the coarse grid are built
// once per xi set.
class FitEngine {
 public:
  FitEngine(std::vector<double> xi, FitOptions options);

  // mask[i] = 0 drops point i. Throws DomainError on fewer than 8 usable points.
  DecayFit fit(const std::vector<double>& y, const std::vector<char>& mask) const;

  const std::vector<double>& xi() const { return xi_; }

 private:
  std::vector<double> regressor(double sigma, double tau) const;

  std::vector<double> xi_;
  FitOptions options_;
  std::vector<double> sigmas_;
  std::vector<double> log_taus_;
  std::vector<std::vector<std::vector<double>>> tables_;  // [sigma][tau][point]
};

// Profile E(|xi|) = sup_x max(|V(x, xi)|, |V(x, -xi)|) / m over xi >= 0 bins.
struct Profile {
  std::vector<double> xi;
  std::vector<double> value;
};
Profile envelope_profile(const StftGrid& grid, const WeightSpec& m);

// Throws DomainError("degenerate_profile") or DomainError("insufficient_range").
DecayFit fit_profile(const Profile& profile, double nyquist, const FitOptions& options = {});
DecayFit fit_envelope(const StftGrid& grid, const WeightSpec& m, const FitOptions& options = {});

std::string to_string(DecayModel model);

}  // namespace gev
