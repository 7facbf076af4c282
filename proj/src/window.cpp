#include "gev/window.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gev/errors.hpp"

namespace gev {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMaxRoots = 256;
constexpr double kRootFloor = 1e-10;
constexpr double kNoiseWarn = 0.01;
constexpr double kSpectralFloor = 1e-15;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = kPi * x;
  return std::sin(px) / px;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Lagrange interpolation of y at fractional index u from the 10 nearest samples.
double interp(const std::vector<double>& y, double u) {
  constexpr int kPoints = 10;
  const long n = static_cast<long>(y.size());
  long first = static_cast<long>(std::floor(u)) - kPoints / 2 + 1;
  first = std::clamp(first, 0L, std::max(0L, n - kPoints));
  const long last = std::min(n, first + kPoints);
  double sum = 0.0;
  for (long i = first; i < last; ++i) {
    double w = 1.0;
    for (long j = first; j < last; ++j) {
      if (j != i) w *= (u - static_cast<double>(j)) / static_cast<double>(i - j);
    }
    sum += w * y[static_cast<std::size_t>(i)];
  }
  return sum;
}

// Zero of the interpolant of d between indices i and i+1 (sign change assumed).
double refine_root(const std::vector<double>& d, std::size_t i) {
  double lo = static_cast<double>(i);
  double hi = lo + 1.0;
  double flo = d[i];
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = interp(d, mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double trapezoid_abs(const std::vector<cplx>& y, double dt, double first_coord, const WeightSpec& v) {
  double sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double w = (i == 0 || i + 1 == y.size()) ? 0.5 : 1.0;
    sum += w * std::abs(y[i]) * v(first_coord + static_cast<double>(i) * dt);
  }
  return sum * dt;
}

// Band-limited upsampling of a sequence that is negligible at both ends.
std::vector<cplx> upsample(const std::vector<cplx>& x, std::size_t factor) {
  const std::size_t n = next_power_of_two(2 * x.size());
  std::vector<cplx> buf(n, cplx(0.0, 0.0));
  std::copy(x.begin(), x.end(), buf.begin());
  auto spec = fft(buf);
  const std::size_t m = n * factor;
  std::vector<cplx> big(m, cplx(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    if (2 * k < n) {
      big[k] = spec[k];
    } else if (2 * k > n) {
      big[m - (n - k)] = spec[k];
    } else {
      big[k] = 0.5 * spec[k];
      big[m - k] = 0.5 * spec[k];
    }
  }
  auto out = fft(big, true);
  const double scale = 1.0 / static_cast<double>(n);
  std::vector<cplx> res(factor * (x.size() - 1) + 1);
  for (std::size_t i = 0; i < res.size(); ++i) res[i] = out[i] * scale;
  return res;
}

bool is_real(const std::vector<cplx>& y) {
  double re = 0.0;
  double im = 0.0;
  for (const auto& v : y) {
    re = std::max(re, std::fabs(v.real()));
    im = std::max(im, std::fabs(v.imag()));
  }
  return im <= 1e-14 * re;
}

}  // namespace

std::string to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::gaussian:
      return "gaussian";
    case WindowKind::gevrey_bump:
      return "gevrey_bump";
    case WindowKind::box_convolution:
      return "box_convolution";
  }
  return "unknown";
}

double Window::l2_norm() const {
  double s = 0.0;
  for (const auto& v : samples) s += std::norm(v);
  return std::sqrt(s * dt);
}

Window make_gaussian(double dt, std::size_t n_samples, double center) {
  if (!std::isfinite(dt) || dt <= 0.0) throw DomainError("make_gaussian: dt must be > 0");
  if (n_samples < 16) throw DomainError("make_gaussian: n_samples must be >= 16");
  if (!std::isfinite(center)) throw DomainError("make_gaussian: center must be finite");
  const double std_width = 1.0 / std::sqrt(2.0 * kPi);
  const long origin = static_cast<long>(n_samples / 2);
  const double first = -static_cast<double>(origin) * dt;
  const double last = static_cast<double>(static_cast<long>(n_samples) - 1 - origin) * dt;
  if (first > center - 6.0 * std_width || last < center + 6.0 * std_width) {
    throw DomainError("grid_too_short", "make_gaussian: grid does not cover center +- 6 standard widths");
  }
  Window w;
  w.dt = dt;
  w.origin = origin;
  w.center = center;
  w.kind = WindowKind::gaussian;
  w.samples.resize(n_samples);
  const double amp = std::pow(2.0, 0.25);
  for (std::size_t m = 0; m < n_samples; ++m) {
    const double s = w.coordinate(m) - center;
    w.samples[m] = cplx(amp * std::exp(-kPi * s * s), 0.0);
  }
  const double norm = w.l2_norm();
  for (auto& v : w.samples) v /= norm;
  w.id = "gaussian(dt=" + fmt(dt) + ",n=" + std::to_string(n_samples) + ",center=" + fmt(center) + ")";
  return w;
}

std::vector<double> bump_widths(const GevreyParams& params, double support_radius, int factors) {
  params.validate();
  if (factors < 1) throw DomainError("bump_widths: need at least one factor beyond a_0");
  std::vector<double> logs(static_cast<std::size_t>(factors) + 1);
  for (int j = 0; j <= factors; ++j) {
    logs[static_cast<std::size_t>(j)] =
        log_m(params, static_cast<std::uint64_t>(j)) - log_m(params, static_cast<std::uint64_t>(j + 1));
  }
  const double top = *std::max_element(logs.begin(), logs.end());
  double total = 0.0;
  std::vector<double> a(logs.size());
  for (std::size_t j = 0; j < logs.size(); ++j) {
    a[j] = std::exp(logs[j] - top);
    total += a[j];
  }
  for (auto& v : a) v *= 2.0 * support_radius / total;
  return a;
}

Window convolve_boxes(const std::vector<double>& widths, double dt, BumpNormalization normalization, int oversample) {
  if (widths.size() < 2) throw DomainError("convolve_boxes: need at least two boxes");
  if (!std::isfinite(dt) || dt <= 0.0) throw DomainError("convolve_boxes: dt must be > 0");
  if (oversample < 1) throw DomainError("convolve_boxes: oversample must be >= 1");
  double radius = 0.0;
  double log_product = 0.0;
  for (double a : widths) {
    if (!std::isfinite(a) || a <= 0.0) throw DomainError("convolve_boxes: widths must be > 0");
    radius += 0.5 * a;
    log_product += std::log(a);
  }
  const long half = static_cast<long>(std::floor(radius / dt + 1e-9));
  if (half < 1) throw DomainError("convolve_boxes: support shorter than one sample");
  const std::size_t len = static_cast<std::size_t>(2 * half + 1);
  const auto os = static_cast<std::size_t>(oversample);
  const std::size_t p = next_power_of_two(2 * os * len);
  const double d = dt / static_cast<double>(os);

  std::vector<cplx> spec(p);
  for (std::size_t k = 0; k < p; ++k) {
    const double xi = fft_frequency(k, p, d);
    double prod = 1.0;
    for (double a : widths) prod *= sinc(a * xi);
    spec[k] = cplx(prod, 0.0);
  }
  const auto fine = fft(spec, true);
  const double scale = 1.0 / (static_cast<double>(p) * d);

  Window w;
  w.dt = dt;
  w.origin = half;
  w.center = 0.0;
  w.kind = WindowKind::box_convolution;
  w.support_radius = radius;
  w.widths = widths;
  w.factors = static_cast<int>(widths.size()) - 1;
  std::vector<double> v(len, 0.0);
  for (long m = -half; m <= half; ++m) {
    if (std::fabs(static_cast<double>(m) * dt) >= radius * (1.0 - 1e-12)) continue;
    const long q = m * static_cast<long>(os);
    const std::size_t idx = static_cast<std::size_t>(q >= 0 ? q : static_cast<long>(p) + q);
    v[static_cast<std::size_t>(m + half)] = std::max(0.0, fine[idx].real() * scale);
  }
  for (std::size_t i = 0; i < len / 2; ++i) {
    const double s = 0.5 * (v[i] + v[len - 1 - i]);
    v[i] = s;
    v[len - 1 - i] = s;
  }
  double mass = 0.0;
  double peak = 0.0;
  double energy = 0.0;
  for (double x : v) {
    mass += x;
    peak = std::max(peak, x);
    energy += x * x;
  }
  mass *= dt;
  energy *= dt;
  if (!(peak > 0.0)) throw DomainError("convolve_boxes: window vanishes on the grid");
  double factor = 1.0;
  switch (normalization) {
    case BumpNormalization::box_product:
      factor = std::exp(log_product);
      if (!(factor > 0.0)) throw DomainError("convolve_boxes: product of widths underflows");
      break;
    case BumpNormalization::unit_mass:
      factor = 1.0 / mass;
      break;
    case BumpNormalization::unit_peak:
      factor = 1.0 / peak;
      break;
    case BumpNormalization::unit_l2:
      factor = 1.0 / std::sqrt(energy);
      break;
  }
  w.samples.resize(len);
  for (std::size_t i = 0; i < len; ++i) w.samples[i] = cplx(v[i] * factor, 0.0);
  w.id = "box_convolution(dt=" + fmt(dt) + ",boxes=" + std::to_string(widths.size()) + ")";
  return w;
}

Window make_gevrey_bump(const GevreyParams& params, double support_radius, double dt, int factors,
                        BumpNormalization normalization) {
  params.validate();
  if (params.sigma == 1.0 && params.tau <= 1.0) {
    throw DomainError("make_gevrey_bump: sigma = 1 requires tau > 1 (quasianalytic range)");
  }
  if (!std::isfinite(dt) || dt <= 0.0) throw DomainError("make_gevrey_bump: dt must be > 0");
  if (!std::isfinite(support_radius) || support_radius < 16.0 * dt) {
    throw DomainError("make_gevrey_bump: support_radius must be >= 16 dt");
  }
  Window w = convolve_boxes(bump_widths(params, support_radius, factors), dt, normalization);
  w.kind = WindowKind::gevrey_bump;
  w.params = params;
  w.support_radius = support_radius;
  w.factors = factors;
  w.id = "gevrey_bump(tau=" + fmt(params.tau) + ",sigma=" + fmt(params.sigma) + ",radius=" + fmt(support_radius) +
         ",dt=" + fmt(dt) + ",J=" + std::to_string(factors) + ")";
  return w;
}

std::vector<std::vector<cplx>> spectral_derivatives(const std::vector<cplx>& samples, double dt, int alpha_max,
                                                    bool periodic) {
  const std::size_t n = samples.size();
  const std::size_t p = periodic ? n : next_power_of_two(2 * n);
  std::vector<cplx> buf(p, cplx(0.0, 0.0));
  std::copy(samples.begin(), samples.end(), buf.begin());
  auto spec = fft(buf);
  // Bins at the double-precision floor carry only rounding noise, which
  // differentiation would amplify by (2 pi xi)^a.
  double top = 0.0;
  for (const auto& v : spec) top = std::max(top, std::abs(v));
  for (auto& v : spec) {
    if (std::abs(v) <= kSpectralFloor * top) v = 0.0;
  }
  std::vector<std::vector<cplx>> out(static_cast<std::size_t>(alpha_max) + 1);
  std::vector<cplx> work(p);
  for (int a = 0; a <= alpha_max; ++a) {
    for (std::size_t k = 0; k < p; ++k) {
      // The Nyquist bin has no consistent derivative; drop it for a >= 1.
      if (a > 0 && 2 * k == p) {
        work[k] = 0.0;
        continue;
      }
      const cplx factor = std::pow(cplx(0.0, 2.0 * kPi * fft_frequency(k, p, dt)), a);
      work[k] = spec[k] * factor;
    }
    auto back = fft(work, true);
    auto& d = out[static_cast<std::size_t>(a)];
    d.resize(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = back[i] / static_cast<double>(p);
  }
  return out;
}

DerivativeNorms estimate_derivative_norms(const Window& window, int alpha_max, const WeightSpec& weight,
                                          const GevreyParams& params) {
  if (alpha_max < 0 || alpha_max > 12) throw DomainError("estimate_derivative_norms: alpha_max must be in [0, 12]");
  params.validate();
  const double dt = window.dt;
  const std::size_t n = window.size();
  const double first = window.coordinate(0);
  const auto ders = spectral_derivatives(window.samples, dt, alpha_max + 1);
  const bool real = is_real(window.samples);
  const bool unweighted = weight.kind == WeightSpec::Kind::unweighted;

  DerivativeNorms out;
  out.norms.assign(static_cast<std::size_t>(alpha_max) + 1, 0.0);
  out.noise.assign(static_cast<std::size_t>(alpha_max) + 1, 0.0);

  // Noise estimate: Hermite closed form for Gaussians, high-band energy otherwise.
  const auto padded = [&] {
    std::vector<cplx> buf(next_power_of_two(2 * n), cplx(0.0, 0.0));
    std::copy(window.samples.begin(), window.samples.end(), buf.begin());
    return fft(buf);
  }();
  for (int a = 0; a <= alpha_max; ++a) {
    double noise = 0.0;
    if (window.kind == WindowKind::gaussian) {
      const double amp = std::abs(window.samples[static_cast<std::size_t>(window.origin)]) /
                         std::exp(-kPi * window.center * window.center);
      const double sp = std::sqrt(kPi);
      double err = 0.0;
      double ref = 0.0;
      for (std::size_t m = 0; m < n; ++m) {
        const double s = window.coordinate(m) - window.center;
        double h0 = 1.0;
        double h1 = 2.0 * sp * s;
        double h = a == 0 ? h0 : h1;
        for (int k = 1; k < a; ++k) {
          h = 2.0 * sp * s * h1 - 2.0 * k * h0;
          h0 = h1;
          h1 = h;
        }
        const double exact = amp * std::pow(-sp, a) * h * std::exp(-kPi * s * s);
        err = std::max(err, std::abs(ders[static_cast<std::size_t>(a)][m] - exact));
        ref = std::max(ref, std::fabs(exact));
      }
      noise = ref > 0.0 ? err / ref : 0.0;
    } else {
      const std::size_t p = padded.size();
      double hi = 0.0;
      double all = 0.0;
      for (std::size_t k = 0; k < p; ++k) {
        const double xi = fft_frequency(k, p, dt);
        const double e = std::norm(padded[k]) * std::pow(2.0 * kPi * std::fabs(xi), 2.0 * a);
        all += e;
        if (std::fabs(xi) > 0.25 / dt) hi += e;
      }
      noise = all > 0.0 ? hi / all : 0.0;
    }
    out.noise[static_cast<std::size_t>(a)] = noise;
    if (noise > kNoiseWarn) {
      out.warnings.push_back("order " + std::to_string(a) + ": spectral differentiation noise " + fmt(noise) +
                             " exceeds 1%");
    }
  }

  for (int a = 0; a <= alpha_max; ++a) {
    const auto& d = ders[static_cast<std::size_t>(a)];
    double norm = -1.0;
    if (unweighted && real && a >= 1) {
      std::vector<double> dr(n);
      std::vector<double> hr(n);
      double peak = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        dr[i] = d[i].real();
        hr[i] = ders[static_cast<std::size_t>(a - 1)][i].real();
        peak = std::max(peak, std::fabs(dr[i]));
      }
      const double floor = kRootFloor * peak;
      std::size_t lo = 0;
      std::size_t hi = n - 1;
      while (lo < n && std::fabs(dr[lo]) < floor) ++lo;
      while (hi > lo && std::fabs(dr[hi]) < floor) --hi;
      std::vector<double> nodes;
      if (peak > 0.0 && lo < hi) {
        nodes.push_back(static_cast<double>(lo));
        for (std::size_t i = lo; i < hi; ++i) {
          if ((dr[i] < 0.0) != (dr[i + 1] < 0.0) && dr[i] != 0.0) nodes.push_back(refine_root(dr, i));
          if (nodes.size() > kMaxRoots + 1) break;
        }
        nodes.push_back(static_cast<double>(hi));
      }
      if (nodes.size() <= kMaxRoots + 2) {
        double tv = 0.0;
        for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
          tv += std::fabs(interp(hr, nodes[i + 1]) - interp(hr, nodes[i]));
        }
        // Tails below the floor contribute at most floor times their length.
        double tails = 0.0;
        for (std::size_t i = 0; i < lo; ++i) tails += std::fabs(dr[i]);
        for (std::size_t i = hi + 1; i < n; ++i) tails += std::fabs(dr[i]);
        norm = tv + tails * dt;
      }
    }
    if (norm < 0.0) {
      if (a == 0) {
        norm = trapezoid_abs(d, dt, first, weight);
      } else {
        const auto fine = upsample(d, 8);
        norm = trapezoid_abs(fine, dt / 8.0, first, weight);
      }
    }
    out.norms[static_cast<std::size_t>(a)] = norm;
  }

  double cg = 0.0;
  for (int a = 1; a <= alpha_max; ++a) {
    const double na = out.norms[static_cast<std::size_t>(a)];
    if (!(na > 0.0)) continue;
    const double as = std::pow(static_cast<double>(a), params.sigma);
    const double lc = (std::log(na) - params.tau * as * std::log(static_cast<double>(a))) / as;
    cg = std::max(cg, std::exp(lc));
  }
  out.fitted_cg = cg;
  return out;
}

}  // namespace gev
