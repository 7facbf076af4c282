#include <cmath>

#include "doctest.h"
#include "gev/associated_function.hpp"
#include "gev/corpus.hpp"
#include "gev/errors.hpp"

TEST_SUITE("synthetic_corpus") {
  TEST_CASE("gaussian samples") {
    gev::SignalSpec s;
    s.kind = gev::SignalKind::gaussian;
    const auto f = gev::generate(s);
    REQUIRE(f.size() == 4096);
    CHECK(f.t0 == -8.0);
    for (std::size_t m = 0; m < f.size(); ++m) {
      const double t = f.time(m);
      CHECK(f.samples[m].real() == std::pow(2.0, 0.25) * std::exp(-M_PI * t * t));
    }
  }

  TEST_CASE("heaviside centred") {
    gev::SignalSpec s;
    s.kind = gev::SignalKind::heaviside;
    const auto f = gev::generate(s);
    CHECK(f.samples[2047].real() == 0.0);
    CHECK(f.samples[2048].real() == 1.0);
    CHECK(f.time(2048) == 0.0);
  }

  TEST_CASE("envelope synth reproduces its spectrum at every bin") {
    gev::SignalSpec s;
    s.kind = gev::SignalKind::envelope_synth;
    s.params = {1.0, 1.5, 1.0};
    s.dt = 1.0 / 64.0;
    s.n = 4096;
    const auto f = gev::generate(s);
    // DFT with the absolute-time phase of t_m = (m - n/2) dt.
    std::vector<gev::cplx> buf(f.samples);
    const auto spec = gev::fft(buf);
    for (std::size_t k = 0; k < s.n; ++k) {
      const double sign = k % 2 == 0 ? 1.0 : -1.0;
      const gev::cplx v = spec[k] * s.dt * sign;
      const double xi = std::fabs(gev::fft_frequency(k, s.n, s.dt));
      CHECK(std::abs(v - gev::envelope(s.params, xi)) <= 1e-12);
    }
  }

  TEST_CASE("determinism") {
    for (auto kind : {gev::SignalKind::bump, gev::SignalKind::envelope_synth, gev::SignalKind::sawtooth,
                      gev::SignalKind::two_step, gev::SignalKind::gevrey_synth}) {
      gev::SignalSpec s;
      s.kind = kind;
      s.params = kind == gev::SignalKind::envelope_synth ? gev::GevreyParams{1.0, 1.5, 1.0} : s.params;
      const auto a = gev::generate(s);
      const auto b = gev::generate(s);
      CHECK(a.samples == b.samples);
    }
  }

  TEST_CASE("invalid specs") {
    gev::SignalSpec s;
    s.n = 1000;
    CHECK_THROWS_AS(gev::generate(s), gev::ConfigError);
    s.n = 128;
    CHECK_THROWS_AS(gev::generate(s), gev::ConfigError);
    s.n = 4096;
    s.dt = -1.0;
    CHECK_THROWS_AS(gev::generate(s), gev::ConfigError);
    CHECK_THROWS_AS(gev::signal_kind_from_string("chirp"), gev::ConfigError);
    CHECK(gev::signal_kind_from_string("abs_t") == gev::SignalKind::abs_t);
  }

  TEST_CASE("shifted kinds") {
    gev::SignalSpec s;
    s.kind = gev::SignalKind::two_step;
    s.center = 0.5;
    const auto f = gev::generate(s);
    CHECK(f.samples[static_cast<std::size_t>(2048 + 128 * 1.5 * 2 - 1)].real() == 1.0);
    CHECK(f.samples[static_cast<std::size_t>(2048 + 384)].real() == 0.0);
  }
}
