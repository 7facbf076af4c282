#pragma once

#include <string>

#include "gev/gevrey_sequence.hpp"
#include "gev/stft.hpp"

namespace gev {

enum class SignalKind {
  gaussian,         // 2^{1/4} e^{-pi t^2}
  gaussian_cosine,  // gaussian times cos(2 pi frequency t)
  heaviside,        // 1 for t >= 0
  abs_t,            // |t|
  sawtooth,         // t - period round(t / period), jumps at odd multiples of period/2
  sine,             // sin(2 pi frequency t)
  bump,             // gevrey bump of the given radius, unit peak
  envelope_synth,   // spectrum e^{-T_params(|xi|)} with zero phase
  gevrey_synth,     // spectrum e^{-|xi|^{1/tau}} with zero phase
  two_step,         // 1 on [-half_width, half_width)
};

struct SignalSpec {
  SignalKind kind = SignalKind::gaussian;
  double dt = 1.0 / 256.0;
  std::size_t n = 4096;
  GevreyParams params{1.5, 1.0, 1.0};
  double center = 0.0;  // shift; the signal is u(t - center)
  double frequency = 1.0;
  double period = 2.0;
  double radius = 0.75;
  double half_width = 1.0;
  int factors = 24;
  double amplitude = 1.0;
};

// Samples on t_m = (m - n/2) dt. Deterministic.
SampledSignal generate(const SignalSpec& spec);

std::string to_string(SignalKind kind);
SignalKind signal_kind_from_string(const std::string& name);  // throws ConfigError

}  // namespace gev
