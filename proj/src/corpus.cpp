#include "gev/corpus.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <utility>

#include "gev/associated_function.hpp"
#include "gev/errors.hpp"

namespace gev {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<std::pair<SignalKind, const char*>, 10> kNames{{
    {SignalKind::gaussian, "gaussian"},
    {SignalKind::gaussian_cosine, "gaussian_cosine"},
    {SignalKind::heaviside, "heaviside"},
    {SignalKind::abs_t, "abs_t"},
    {SignalKind::sawtooth, "sawtooth"},
    {SignalKind::sine, "sine"},
    {SignalKind::bump, "bump"},
    {SignalKind::envelope_synth, "envelope_synth"},
    {SignalKind::gevrey_synth, "gevrey_synth"},
    {SignalKind::two_step, "two_step"},
}};

long grid_shift(const SignalSpec& spec) {
  const double s = spec.center / spec.dt;
  const double r = std::round(s);
  if (std::fabs(s - r) > 1e-9 * std::max(1.0, std::fabs(s))) {
    throw ConfigError("signal: center must be a multiple of dt for this kind");
  }
  return static_cast<long>(r);
}

// Zero-phase real signal with the given spectrum values S(|xi_k|) at the FFT
// bins, centred at t = center.
template <class Spectrum>
void synthesize(const SignalSpec& spec, SampledSignal& out, Spectrum&& spectrum) {
  const std::size_t n = spec.n;
  const long shift = grid_shift(spec);
  std::vector<cplx> s(n);
  for (std::size_t k = 0; k < n; ++k) {
    // t_m = (m - n/2) dt contributes (-1)^k; the shift contributes e^{-2 pi i k shift / n}.
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    const long r = static_cast<long>((static_cast<long long>(k) * shift) % static_cast<long long>(n));
    const double th = -2.0 * kPi * static_cast<double>(r) / static_cast<double>(n);
    s[k] = spectrum[k] * sign * cplx(std::cos(th), std::sin(th));
  }
  const auto x = fft(s, true);
  const double scale = 1.0 / (static_cast<double>(n) * spec.dt);
  for (std::size_t m = 0; m < n; ++m) out.samples[m] = cplx(x[m].real() * scale, 0.0);
}

}  // namespace

std::string to_string(SignalKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

SignalKind signal_kind_from_string(const std::string& name) {
  for (const auto& [k, n] : kNames) {
    if (name == n) return k;
  }
  throw ConfigError("signal: unknown kind '" + name + "'");
}

SampledSignal generate(const SignalSpec& spec) {
  if (!std::isfinite(spec.dt) || spec.dt <= 0.0) throw ConfigError("signal: dt must be > 0");
  if (spec.n < 256 || !is_power_of_two(spec.n)) throw ConfigError("signal: n must be a power of two >= 256");
  if (!std::isfinite(spec.center) || !std::isfinite(spec.amplitude)) throw ConfigError("signal: non-finite field");

  SampledSignal out;
  out.dt = spec.dt;
  out.t0 = -static_cast<double>(spec.n / 2) * spec.dt;
  out.samples.assign(spec.n, cplx(0.0, 0.0));
  const double amp4 = std::pow(2.0, 0.25);

  auto each = [&](auto&& fn) {
    for (std::size_t m = 0; m < spec.n; ++m) out.samples[m] = cplx(fn(out.time(m) - spec.center), 0.0);
  };

  switch (spec.kind) {
    case SignalKind::gaussian:
      each([&](double t) { return amp4 * std::exp(-kPi * t * t); });
      break;
    case SignalKind::gaussian_cosine:
      each([&](double t) { return amp4 * std::exp(-kPi * t * t) * std::cos(2.0 * kPi * spec.frequency * t); });
      break;
    case SignalKind::heaviside:
      each([](double t) { return t >= 0.0 ? 1.0 : 0.0; });
      break;
    case SignalKind::abs_t:
      each([](double t) { return std::fabs(t); });
      break;
    case SignalKind::sawtooth:
      if (!(spec.period > 0.0)) throw ConfigError("signal: period must be > 0");
      each([&](double t) { return t - spec.period * std::floor(t / spec.period + 0.5); });
      break;
    case SignalKind::sine:
      each([&](double t) { return std::sin(2.0 * kPi * spec.frequency * t); });
      break;
    case SignalKind::two_step:
      if (!(spec.half_width > 0.0)) throw ConfigError("signal: half_width must be > 0");
      each([&](double t) { return (t >= -spec.half_width && t < spec.half_width) ? 1.0 : 0.0; });
      break;
    case SignalKind::bump: {
      const Window w = make_gevrey_bump(spec.params, spec.radius, spec.dt, spec.factors, BumpNormalization::unit_peak);
      const long shift = grid_shift(spec);
      const long mid = static_cast<long>(spec.n / 2) + shift;
      for (std::size_t i = 0; i < w.size(); ++i) {
        const long m = mid + static_cast<long>(i) - w.origin;
        if (m >= 0 && m < static_cast<long>(spec.n)) out.samples[static_cast<std::size_t>(m)] = w.samples[i];
      }
      break;
    }
    case SignalKind::envelope_synth: {
      spec.params.validate();
      std::vector<double> xi(spec.n);
      for (std::size_t k = 0; k < spec.n; ++k) xi[k] = std::fabs(fft_frequency(k, spec.n, spec.dt));
      const auto t = assoc_values(spec.params, xi);
      std::vector<double> s(spec.n);
      for (std::size_t k = 0; k < spec.n; ++k) s[k] = std::exp(-t[k]);
      synthesize(spec, out, s);
      break;
    }
    case SignalKind::gevrey_synth: {
      if (!(spec.params.tau > 0.0)) throw ConfigError("signal: tau must be > 0");
      std::vector<double> s(spec.n);
      for (std::size_t k = 0; k < spec.n; ++k) {
        s[k] = std::exp(-std::pow(std::fabs(fft_frequency(k, spec.n, spec.dt)), 1.0 / spec.params.tau));
      }
      synthesize(spec, out, s);
      break;
    }
  }
  if (spec.amplitude != 1.0) {
    for (auto& v : out.samples) v *= spec.amplitude;
  }
  return out;
}

}  // namespace gev
