#include "gev/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gev/associated_function.hpp"
#include "gev/errors.hpp"
#include "gev/parallel.hpp"
#include "gev/window.hpp"

namespace gev {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kNoiseWarn = 0.01;
constexpr double kEdgeFloor = 1e-8;
constexpr std::size_t kMinPoints = 8;
constexpr int kGoldenSteps = 40;

struct LineFit {
  double r2 = kNegInf;
  double slope = 0.0;
  double intercept = 0.0;
};

// Least squares y = a + b x over the masked points; r2 = -inf unless b > 0.
LineFit line_fit(const std::vector<double>& x, const std::vector<double>& y, const std::vector<char>& mask) {
  double n = 0.0;
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!mask[i]) continue;
    n += 1.0;
    sx += x[i];
    sy += y[i];
  }
  LineFit out;
  if (n < 2.0) return out;
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!mask[i]) continue;
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0) || !std::isfinite(sxx)) return out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  if (!(out.slope > 0.0)) return out;
  out.r2 = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  return out;
}

// ln C = max_{a >= 1, v_a > 0} (ln v_a - tau a^s ln a) / a^s; 0 when no v_a > 0.
double fit_constant(const std::vector<double>& values, const GevreyParams& params) {
  double best = kNegInf;
  for (std::size_t a = 1; a < values.size(); ++a) {
    if (!(values[a] > 0.0)) continue;
    const double as = std::pow(static_cast<double>(a), params.sigma);
    best = std::max(best, (std::log(values[a]) - params.tau * as * std::log(static_cast<double>(a))) / as);
  }
  return best == kNegInf ? 0.0 : std::exp(best);
}

}  // namespace

double fit_xi_floor() { return std::exp(std::exp(0.1)) - std::numbers::e; }

DerivativeCertificate probe_condition_i(const SampledSignal& f, int alpha_max, const WeightSpec& m,
                                        const GevreyParams& params) {
  if (alpha_max < 0 || alpha_max > 10) throw DomainError("probe_condition_i: alpha_max must be in [0, 10]");
  params.validate();
  f.validate();
  const std::size_t n = f.size();
  const auto ders = spectral_derivatives(f.samples, f.dt, alpha_max, true);

  DerivativeCertificate out;
  out.params = params;
  for (int a = 0; a <= alpha_max; ++a) {
    const auto& d = ders[static_cast<std::size_t>(a)];
    double sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) sup = std::max(sup, std::abs(d[i]) / m(f.time(i)));
    out.orders.push_back(a);
    out.sup_norms.push_back(sup);
  }
  out.amplitude = out.sup_norms[0];
  out.fitted_cf = fit_constant(out.sup_norms, params);

  const auto spec = fft(f.samples);
  double top = 0.0;
  for (const auto& v : spec) top = std::max(top, std::abs(v));
  for (int a = 0; a <= alpha_max; ++a) {
    double hi = 0.0;
    double all = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (std::abs(spec[k]) <= 1e-15 * top) continue;
      const double xi = fft_frequency(k, n, f.dt);
      const double e = std::norm(spec[k]) * std::pow(2.0 * kPi * std::fabs(xi), 2.0 * a);
      all += e;
      if (std::fabs(xi) > 0.25 / f.dt) hi += e;
    }
    const double noise = all > 0.0 ? hi / all : 0.0;
    out.noise.push_back(noise);
    if (noise > kNoiseWarn) {
      out.warnings.push_back("order " + std::to_string(a) + ": derivative dominated by the upper half band");
    }
  }
  const double edge = std::max(std::abs(f.samples.front()), std::abs(f.samples.back()));
  if (edge > kEdgeFloor * out.amplitude) {
    out.warnings.push_back("signal not negligible at the grid edges; derivatives assume periodic extension");
  }
  return out;
}

MomentReport probe_condition_ii(const StftGrid& grid, const WeightSpec& m, int alpha_max,
                                const GevreyParams& params) {
  if (alpha_max < 0) throw DomainError("probe_condition_ii: alpha_max must be >= 0");
  params.validate();
  const std::size_t na = static_cast<std::size_t>(alpha_max) + 1;
  MomentReport out;
  out.params = params;
  for (int a = 0; a <= alpha_max; ++a) out.orders.push_back(a);
  out.sup_moments.assign(na, 0.0);
  out.integrated_moments.assign(na, 0.0);
  const double floor = kNoiseFloor * grid.max_abs();
  const double dxi = grid.n_xi > 0 ? 1.0 / (static_cast<double>(grid.n_xi) * grid.dt) : 0.0;

  std::vector<std::vector<double>> sup_rows(grid.n_x, std::vector<double>(na, 0.0));
  std::vector<std::vector<double>> int_rows(grid.n_x, std::vector<double>(na, 0.0));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(grid.n_x); ++i) {
    const auto r = static_cast<std::size_t>(i);
    for (std::size_t j = 0; j < grid.n_xi; ++j) {
      const double v = std::abs(grid.at(r, j));
      if (v == 0.0 || v < floor) continue;
      const double xi = std::fabs(grid.xi_axis[j]);
      const double base = v / m(grid.x_axis[r], grid.xi_axis[j]);
      double pw = 1.0;
      for (std::size_t a = 0; a < na; ++a) {
        sup_rows[r][a] = std::max(sup_rows[r][a], pw * base);
        int_rows[r][a] += pw * base * dxi;
        pw *= xi;
      }
    }
  }
  for (std::size_t r = 0; r < grid.n_x; ++r) {
    for (std::size_t a = 0; a < na; ++a) {
      out.sup_moments[a] = std::max(out.sup_moments[a], sup_rows[r][a]);
      out.integrated_moments[a] = std::max(out.integrated_moments[a], int_rows[r][a]);
    }
  }
  out.fitted_cfg = fit_constant(out.sup_moments, params);

  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t a = 2; a < na; ++a) {
    if (!(out.sup_moments[a] > 0.0) || !(out.sup_moments[0] > 0.0)) continue;
    const double ad = static_cast<double>(a);
    xs.push_back(std::pow(ad, params.sigma) * std::log(ad));
    ys.push_back(std::log(out.sup_moments[a] / out.sup_moments[0]));
  }
  if (xs.size() >= 2) {
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    out.growth_exponent = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  out.compatible = out.growth_exponent <= params.tau;
  return out;
}

double log_envelope_moment(const GevreyParams& params, int order, const std::vector<double>& ks) {
  const auto t = assoc_values(params, ks);
  double best = kNegInf;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (!(ks[i] > 0.0)) continue;
    best = std::max(best, order * std::log(ks[i]) - t[i]);
  }
  return best;
}

EnvelopeMargin probe_condition_iii(const StftGrid& grid, const WeightSpec& m, const GevreyParams& params,
                                   double threshold) {
  params.validate();
  if (!(threshold > 0.0)) throw DomainError("probe_condition_iii: threshold must be positive");
  EnvelopeMargin out;
  out.params = params;
  out.threshold = threshold;
  const double g = grid.max_abs();
  if (g == 0.0) {
    out.empty = true;
    out.log_margin = kNegInf;
    out.log_normalized = kNegInf;
    return out;
  }
  const double floor = kNoiseFloor * g;
  std::vector<double> t(grid.n_xi);
  for (std::size_t j = 0; j < grid.n_xi; ++j) {
    const double k = std::fabs(grid.xi_axis[j]);
    t[j] = k > 0.0 ? assoc_value(params, k) : 0.0;
  }

  struct Best {
    double value = kNegInf;
    std::size_t index = 0;
  };
  std::vector<Best> margin(grid.n_x);
  std::vector<double> scale(grid.n_x, kNegInf);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(grid.n_x); ++i) {
    const auto r = static_cast<std::size_t>(i);
    for (std::size_t j = 0; j < grid.n_xi; ++j) {
      const double v = std::abs(grid.at(r, j));
      if (v == 0.0) continue;
      const double lw = std::log(m(grid.x_axis[r], grid.xi_axis[j]));
      scale[r] = std::max(scale[r], std::log(v) - lw);
      if (v < floor) continue;
      const double lm = std::log(v) + t[j] - lw;
      if (lm > margin[r].value) margin[r] = {lm, j};
    }
  }
  Best best;
  std::size_t row = 0;
  double top = kNegInf;
  for (std::size_t r = 0; r < grid.n_x; ++r) {
    top = std::max(top, scale[r]);
    if (margin[r].value > best.value) {
      best = margin[r];
      row = r;
    }
  }
  out.log_margin = best.value;
  out.log_normalized = best.value - top;
  out.tightest_x = grid.x_axis[row];
  out.tightest_xi = grid.xi_axis[best.index];
  out.passed = out.log_normalized <= std::log(threshold);
  return out;
}

BeurlingReport probe_beurling(const StftGrid& grid, const WeightSpec& m, const GevreyParams& base,
                              const std::vector<double>& h_list, double threshold) {
  if (h_list.empty()) throw DomainError("probe_beurling: h_list is empty");
  BeurlingReport out;
  for (double h : h_list) {
    if (!(h > 0.0)) throw DomainError("probe_beurling: h must be positive");
    GevreyParams p = base;
    p.h = h;
    out.per_h.push_back(probe_condition_iii(grid, m, p, threshold));
    out.roumieu = out.roumieu || out.per_h.back().passed;
    out.beurling = out.beurling && out.per_h.back().passed;
  }
  return out;
}

std::vector<double> FitOptions::sigma_grid() const {
  if (!sigmas.empty()) return sigmas;
  std::vector<double> out{1.0};
  for (int i = 1; i <= 19; ++i) out.push_back(1.0 + 0.05 * i);
  return out;
}

FitEngine::FitEngine(std::vector<double> xi, FitOptions options)
    : xi_(std::move(xi)), options_(std::move(options)), sigmas_(options_.sigma_grid()) {
  for (double s : sigmas_) {
    if (!(s >= 1.0 && s < 2.0)) throw DomainError("FitEngine: sigma grid must lie in [1, 2)");
  }
  if (!(options_.tau_min > 0.0) || !(options_.tau_max > options_.tau_min) || options_.tau_coarse < 3) {
    throw DomainError("FitEngine: invalid tau search range");
  }
  const double lo = std::log(options_.tau_min);
  const double hi = std::log(options_.tau_max);
  for (int i = 0; i < options_.tau_coarse; ++i) {
    log_taus_.push_back(lo + (hi - lo) * i / (options_.tau_coarse - 1));
  }
  tables_.assign(sigmas_.size(), std::vector<std::vector<double>>(log_taus_.size()));
  const auto ns = static_cast<std::ptrdiff_t>(sigmas_.size());
  const auto nt = static_cast<std::ptrdiff_t>(log_taus_.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t c = 0; c < ns * nt; ++c) {
    const auto s = static_cast<std::size_t>(c / nt);
    const auto t = static_cast<std::size_t>(c % nt);
    tables_[s][t] = regressor(sigmas_[s], std::exp(log_taus_[t]));
  }
}

std::vector<double> FitEngine::regressor(double sigma, double tau) const {
  std::vector<double> out(xi_.size());
  if (sigma == 1.0) {
    for (std::size_t i = 0; i < xi_.size(); ++i) out[i] = std::pow(xi_[i], 1.0 / tau);
  } else {
    const GevreyParams p{tau, sigma, 1.0};
    for (std::size_t i = 0; i < xi_.size(); ++i) out[i] = assoc_value(p, xi_[i]);
  }
  return out;
}

DecayFit FitEngine::fit(const std::vector<double>& y, const std::vector<char>& mask) const {
  if (y.size() != xi_.size() || mask.size() != xi_.size()) throw DomainError("FitEngine: size mismatch");
  std::size_t used = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < xi_.size(); ++i) {
    if (!mask[i]) continue;
    ++used;
    lo = std::min(lo, xi_[i]);
    hi = std::max(hi, xi_[i]);
  }
  if (used < kMinPoints) throw DomainError("degenerate_profile", "fewer than 8 usable profile points");

  struct Candidate {
    LineFit line;
    double log_tau = 0.0;
  };
  std::vector<Candidate> per_sigma(sigmas_.size());
  const auto ns = static_cast<std::ptrdiff_t>(sigmas_.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t si = 0; si < ns; ++si) {
    const auto s = static_cast<std::size_t>(si);
    std::size_t arg = 0;
    LineFit best;
    for (std::size_t t = 0; t < log_taus_.size(); ++t) {
      const auto lf = line_fit(tables_[s][t], y, mask);
      if (lf.r2 > best.r2) {
        best = lf;
        arg = t;
      }
    }
    Candidate c{best, log_taus_[arg]};
    if (options_.refine && best.r2 > kNegInf) {
      double a = log_taus_[arg == 0 ? 0 : arg - 1];
      double b = log_taus_[std::min(arg + 1, log_taus_.size() - 1)];
      const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
      auto eval = [&](double lt) { return line_fit(regressor(sigmas_[s], std::exp(lt)), y, mask); };
      double x1 = b - ratio * (b - a);
      double x2 = a + ratio * (b - a);
      auto f1 = eval(x1);
      auto f2 = eval(x2);
      for (int k = 0; k < kGoldenSteps; ++k) {
        if (f1.r2 >= f2.r2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - ratio * (b - a);
          f1 = eval(x1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + ratio * (b - a);
          f2 = eval(x2);
        }
      }
      const auto& top = f1.r2 >= f2.r2 ? f1 : f2;
      if (top.r2 > c.line.r2) c = {top, f1.r2 >= f2.r2 ? x1 : x2};
    }
    per_sigma[s] = c;
  }

  std::size_t pick = 0;
  for (std::size_t s = 1; s < sigmas_.size(); ++s) {
    if (per_sigma[s].line.r2 > per_sigma[pick].line.r2) pick = s;
  }
  const auto& c = per_sigma[pick];
  if (c.line.r2 == kNegInf) throw DomainError("degenerate_profile", "no model with positive decay rate");
  DecayFit out;
  out.sigma_hat = sigmas_[pick];
  out.model = out.sigma_hat == 1.0 ? DecayModel::gevrey : DecayModel::extended;
  out.tau_hat = std::exp(c.log_tau);
  out.slope = c.line.slope;
  out.amplitude = std::exp(-c.line.intercept);
  out.r_squared = c.line.r2;
  out.xi_lo = lo;
  out.xi_hi = hi;
  out.points = used;
  return out;
}

Profile envelope_profile(const StftGrid& grid, const WeightSpec& m) {
  Profile out;
  const std::size_t n = grid.n_xi;
  const std::size_t zero = n / 2;
  for (std::size_t j = zero; j < n; ++j) {
    const std::size_t jn = n - j;
    double best = 0.0;
    for (std::size_t i = 0; i < grid.n_x; ++i) {
      const double w = m(grid.x_axis[i], grid.xi_axis[j]);
      best = std::max(best, std::abs(grid.at(i, j)) / w);
      if (jn < n) best = std::max(best, std::abs(grid.at(i, jn)) / w);
    }
    out.xi.push_back(grid.xi_axis[j]);
    out.value.push_back(best);
  }
  return out;
}

DecayFit fit_profile(const Profile& profile, double nyquist, const FitOptions& options) {
  double top = 0.0;
  for (double v : profile.value) top = std::max(top, v);
  if (!(top > 0.0) || !std::isfinite(top)) throw DomainError("degenerate_profile", "profile is zero or not finite");
  const double lo = std::max(fit_xi_floor(), options.xi_min);
  const double cap = options.xi_max > 0.0 ? options.xi_max : 0.8 * nyquist;
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < profile.xi.size(); ++i) {
    const double xi = profile.xi[i];
    if (xi >= lo && xi <= cap && profile.value[i] > kNoiseFloor * top) cand.push_back(i);
  }
  if (cand.size() < kMinPoints) throw DomainError("insufficient_range", "fewer than 8 profile bins above the floor");
  const double x0 = profile.xi[cand.front()];
  const double x1 = profile.xi[cand.back()];
  if (std::log10(x1 / x0) < options.min_decades) {
    throw DomainError("insufficient_range", "profile spans less than the required decades above the fit floor");
  }
  std::vector<std::size_t> pick;
  const std::size_t want = std::max<std::size_t>(options.max_points, 2);
  for (std::size_t k = 0; k < want; ++k) {
    const double target = x0 * std::pow(x1 / x0, static_cast<double>(k) / static_cast<double>(want - 1));
    auto it = std::lower_bound(cand.begin(), cand.end(), target,
                               [&](std::size_t i, double v) { return profile.xi[i] < v; });
    if (it == cand.end()) it = std::prev(it);
    if (it != cand.begin() && target - profile.xi[*std::prev(it)] < profile.xi[*it] - target) it = std::prev(it);
    if (pick.empty() || pick.back() != *it) pick.push_back(*it);
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i : pick) {
    xs.push_back(profile.xi[i]);
    ys.push_back(-std::log(profile.value[i]));
  }
  const std::vector<char> mask(xs.size(), 1);
  FitEngine engine(std::move(xs), options);
  return engine.fit(ys, mask);
}

DecayFit fit_envelope(const StftGrid& grid, const WeightSpec& m, const FitOptions& options) {
  if (grid.n_x == 0 || grid.n_xi == 0) throw DomainError("degenerate_profile", "empty grid");
  return fit_profile(envelope_profile(grid, m), 0.5 / grid.dt, options);
}

std::string to_string(DecayModel model) { return model == DecayModel::gevrey ? "gevrey" : "extended"; }

}  // namespace gev
