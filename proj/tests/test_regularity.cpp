#include <cmath>
#include <vector>

#include "doctest.h"
#include "gev/associated_function.hpp"
#include "gev/corpus.hpp"
#include "gev/errors.hpp"
#include "gev/parallel.hpp"
#include "gev/regularity.hpp"
#include "oracles.hpp"

namespace {

const gev::WeightSpec kFlat = gev::WeightSpec::unweighted();

gev::SampledSignal make(gev::SignalKind kind, double dt, std::size_t n, gev::GevreyParams p = {1.0, 1.5, 1.0}) {
  gev::SignalSpec s;
  s.kind = kind;
  s.dt = dt;
  s.n = n;
  s.params = p;
  return gev::generate(s);
}

// Gaussian window of 8192 samples on a 16 s record at dt = 1/1024.
gev::StftGrid probe_grid(const gev::SampledSignal& f) {
  const auto g = gev::make_gaussian(f.dt, 8192);
  return gev::stft(f, g, 0.25, 8192, gev::FrameRange::interior);
}

gev::StftGrid gaussian_pair(std::size_t n_freq) {
  const double dt = 1.0 / 256.0;
  const auto f = make(gev::SignalKind::gaussian, dt, 4096);
  return gev::stft(f, gev::make_gaussian(dt, 2048), 0.25, n_freq);
}

gev::StftGrid zero_grid() {
  gev::SampledSignal f;
  f.dt = 1.0 / 256.0;
  f.samples.assign(4096, gev::cplx(0.0, 0.0));
  return gev::stft(f, gev::make_gaussian(f.dt, 2048), 0.5, 2048);
}

}  // namespace

TEST_SUITE("regularity") {
  TEST_CASE("condition i: gaussian against hermite closed forms") {
    const auto f = make(gev::SignalKind::gaussian, 1.0 / 256.0, 4096);
    const auto c = gev::probe_condition_i(f, 8, kFlat, {1.0, 1.0, 1.0});
    REQUIRE(c.sup_norms.size() == 9);
    for (int a = 0; a <= 8; ++a) {
      double sup = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) sup = std::max(sup, std::fabs(oracle::gaussian_derivative(a, f.time(i))));
      CHECK(c.sup_norms[static_cast<std::size_t>(a)] == doctest::Approx(sup).epsilon(1e-9));
    }
    CHECK(std::isfinite(c.fitted_cf));
    CHECK(c.fitted_cf > 0.0);
    CHECK(c.warnings.empty());
  }

  TEST_CASE("condition i: fitted constant bounds every probed order") {
    for (auto kind : {gev::SignalKind::gaussian, gev::SignalKind::envelope_synth, gev::SignalKind::bump}) {
      const auto f = make(kind, 1.0 / 256.0, 4096);
      for (gev::GevreyParams p : {gev::GevreyParams{1.0, 1.0, 1.0}, gev::GevreyParams{0.5, 1.5, 1.0}}) {
        const auto c = gev::probe_condition_i(f, 10, kFlat, p);
        for (int a = 1; a <= 10; ++a) {
          const double as = std::pow(a, p.sigma);
          const double bound = std::pow(c.fitted_cf, as) * std::pow(a, p.tau * as);
          CHECK(c.sup_norms[static_cast<std::size_t>(a)] <= bound * (1.0 + 1e-12));
        }
      }
    }
  }

  TEST_CASE("condition i: constant signal") {
    gev::SampledSignal f;
    f.dt = 1.0 / 64.0;
    f.samples.assign(512, gev::cplx(1.0, 0.0));
    const auto c = gev::probe_condition_i(f, 6, kFlat, {1.0, 1.0, 1.0});
    CHECK(c.sup_norms[0] == doctest::Approx(1.0));
    for (int a = 1; a <= 6; ++a) CHECK(c.sup_norms[static_cast<std::size_t>(a)] == 0.0);
    CHECK(c.fitted_cf == 0.0);
  }

  TEST_CASE("condition i: sine has norms (2 pi)^a") {
    gev::SampledSignal f = make(gev::SignalKind::sine, 1.0 / 256.0, 4096);
    const auto c = gev::probe_condition_i(f, 10, kFlat, {1e-3, 1.0, 1.0});
    for (int a = 0; a <= 10; ++a) {
      CHECK(c.sup_norms[static_cast<std::size_t>(a)] == doctest::Approx(std::pow(2.0 * M_PI, a)).epsilon(1e-9));
    }
    CHECK(c.fitted_cf >= 2.0 * M_PI * (1.0 - 1e-9));
  }

  TEST_CASE("condition i: argument checks and noise warning") {
    const auto f = make(gev::SignalKind::gaussian, 1.0 / 256.0, 4096);
    CHECK_THROWS_AS(gev::probe_condition_i(f, 11, kFlat, {1.0, 1.0, 1.0}), gev::DomainError);
    const auto step = make(gev::SignalKind::heaviside, 1.0 / 256.0, 4096);
    const auto c = gev::probe_condition_i(step, 4, kFlat, {1.0, 1.0, 1.0});
    CHECK_FALSE(c.warnings.empty());
  }

  TEST_CASE("condition ii: zero grid") {
    const auto r = gev::probe_condition_ii(zero_grid(), kFlat, 6, {1.0, 1.0, 1.0});
    for (double v : r.sup_moments) CHECK(v == 0.0);
    for (double v : r.integrated_moments) CHECK(v == 0.0);
  }

  TEST_CASE("condition ii: gaussian pair moments against gamma integrals") {
    const auto grid = gaussian_pair(8192);
    const auto r = gev::probe_condition_ii(grid, kFlat, 6, {1.0, 1.0, 1.0});
    for (int a = 0; a <= 6; ++a) {
      const double integral = std::tgamma((a + 1) / 2.0) * std::pow(M_PI / 2.0, -(a + 1) / 2.0);
      CHECK(r.integrated_moments[static_cast<std::size_t>(a)] == doctest::Approx(integral).epsilon(0.05));
      const double sup = a == 0 ? 1.0 : std::pow(a / M_PI, a / 2.0) * std::exp(-a / 2.0);
      CHECK(r.sup_moments[static_cast<std::size_t>(a)] == doctest::Approx(sup).epsilon(0.01));
    }
    CHECK(r.compatible);
  }

  TEST_CASE("condition ii: envelope moments dual to the sequence") {
    std::vector<double> ks;
    for (int i = 0; i <= 20000; ++i) ks.push_back(std::pow(10.0, -2.0 + 14.0 * i / 20000.0));
    for (double h : {0.5, 1.0, 2.0}) {
      const gev::GevreyParams p{1.0, 1.5, h};
      for (int order = 1; order <= 8; ++order) {
        const double expected = gev::log_m(p, static_cast<std::uint64_t>(order)) - std::pow(order, p.sigma) * std::log(h);
        CHECK(gev::log_envelope_moment(p, order, ks) == doctest::Approx(expected).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("moments and envelope margin agree through the duality") {
    const gev::GevreyParams p{1.0, 1.5, 1.0};
    const auto grid = probe_grid(make(gev::SignalKind::envelope_synth, 1.0 / 1024.0, 16384));
    const auto moments = gev::probe_condition_ii(grid, kFlat, 6, p);
    const auto margin = gev::probe_condition_iii(grid, kFlat, p);
    std::vector<double> ks;
    for (double xi : grid.xi_axis) {
      if (xi > 0.0) ks.push_back(xi);
    }
    for (int a = 1; a <= 6; ++a) {
      const double predicted = margin.log_margin + gev::log_envelope_moment(p, a, ks);
      const double measured = std::log(moments.sup_moments[static_cast<std::size_t>(a)]);
      CHECK(std::fabs(std::exp(measured - predicted) - 1.0) <= 0.10);
    }
  }

  TEST_CASE("condition iii: zero grid passes") {
    const auto r = gev::probe_condition_iii(zero_grid(), kFlat, {1.0, 1.5, 1.0});
    CHECK(r.passed);
    CHECK(r.empty);
  }

  TEST_CASE("condition iii: envelope synth") {
    const auto grid = probe_grid(make(gev::SignalKind::envelope_synth, 1.0 / 1024.0, 16384));
    for (double h : {0.5, 1.0}) CHECK(gev::probe_condition_iii(grid, kFlat, {1.0, 1.5, h}).passed);
    // Larger tau lowers T, so tau = 2 passes as well; smaller tau demands more decay.
    CHECK(gev::probe_condition_iii(grid, kFlat, {2.0, 1.5, 1.0}).passed);
    const auto fail = gev::probe_condition_iii(grid, kFlat, {0.5, 1.5, 1.0});
    CHECK_FALSE(fail.passed);
    CHECK(std::fabs(fail.tightest_xi) > 100.0);
  }

  TEST_CASE("condition iii: gaussian pair") {
    const auto r = gev::probe_condition_iii(gaussian_pair(2048), kFlat, {1.0, 1.0, 1.0});
    CHECK(r.passed);
    CHECK(r.log_normalized < 1.0);
  }

  TEST_CASE("beurling probe") {
    const std::vector<double> hs{0.25, 0.5, 1.0, 2.0, 4.0};
    const auto zero = gev::probe_beurling(zero_grid(), kFlat, {1.0, 1.5, 1.0}, hs);
    CHECK(zero.beurling);

    const auto synth = probe_grid(make(gev::SignalKind::envelope_synth, 1.0 / 1024.0, 16384));
    const auto r = gev::probe_beurling(synth, kFlat, {1.0, 1.5, 1.0}, hs);
    CHECK(r.roumieu);
    CHECK_FALSE(r.beurling);
    CHECK(r.per_h[2].passed);
    CHECK_FALSE(r.per_h[4].passed);
    for (std::size_t i = 1; i < r.per_h.size(); ++i) CHECK(r.per_h[i].log_margin >= r.per_h[i - 1].log_margin);

    const auto gauss = probe_grid(make(gev::SignalKind::gaussian, 1.0 / 1024.0, 16384));
    CHECK(gev::probe_beurling(gauss, kFlat, {1.0, 1.5, 1.0}, hs).beurling);
    CHECK_THROWS_AS(gev::probe_beurling(gauss, kFlat, {1.0, 1.5, 1.0}, {}), gev::DomainError);
  }

  TEST_CASE("derivative certificate implies envelope with tau scaled by 2^(sigma-1)") {
    for (auto kind : {gev::SignalKind::gaussian, gev::SignalKind::envelope_synth}) {
      const auto f = make(kind, 1.0 / 1024.0, 16384);
      const gev::GevreyParams p{1.0, 1.5, 1.0};
      const auto c = gev::probe_condition_i(f, 10, kFlat, p);
      REQUIRE(std::isfinite(c.fitted_cf));
      const gev::GevreyParams slack{std::pow(2.0, p.sigma - 1.0) * p.tau, p.sigma, 1.0};
      CHECK(gev::probe_condition_iii(probe_grid(f), kFlat, slack).passed);
    }
  }

  TEST_CASE("fit: gaussian pair is sub-gevrey-1") {
    const auto fit = gev::fit_envelope(gaussian_pair(2048), kFlat);
    CHECK(fit.model == gev::DecayModel::gevrey);
    CHECK(fit.tau_hat <= 0.6);
    CHECK(fit.xi_lo >= gev::fit_xi_floor());
    CHECK(std::log(std::log(std::exp(1.0) + fit.xi_lo)) >= 0.1);
  }

  TEST_CASE("fit: synthetic envelopes") {
    const auto ext = gev::fit_envelope(probe_grid(make(gev::SignalKind::envelope_synth, 1.0 / 1024.0, 16384)), kFlat);
    CHECK(ext.model == gev::DecayModel::extended);
    CHECK(ext.sigma_hat == doctest::Approx(1.5).epsilon(0.07));
    CHECK(ext.tau_hat == doctest::Approx(1.0).epsilon(0.25));

    const auto gv = gev::fit_envelope(probe_grid(make(gev::SignalKind::gevrey_synth, 1.0 / 1024.0, 16384, {1.0, 1.0, 1.0})), kFlat);
    CHECK(gv.model == gev::DecayModel::gevrey);
    CHECK(gv.tau_hat == doctest::Approx(1.0).epsilon(0.1));
    CHECK(gv.r_squared > 0.999);
  }

  TEST_CASE("fit: scale equivariance") {
    auto f = make(gev::SignalKind::envelope_synth, 1.0 / 1024.0, 16384);
    const auto a = gev::fit_envelope(probe_grid(f), kFlat);
    for (auto& v : f.samples) v *= 1024.0;
    const auto b = gev::fit_envelope(probe_grid(f), kFlat);
    CHECK(a.sigma_hat == b.sigma_hat);
    CHECK(a.tau_hat == doctest::Approx(b.tau_hat).epsilon(1e-6));
    CHECK(b.amplitude / a.amplitude == doctest::Approx(1024.0).epsilon(1e-6));
  }

  TEST_CASE("fit: error paths") {
    try {
      (void)gev::fit_envelope(zero_grid(), kFlat);
      FAIL("expected an error");
    } catch (const gev::DomainError& e) {
      CHECK(e.code() == "degenerate_profile");
    }
    gev::FitOptions narrow;
    narrow.xi_max = 2.0;
    try {
      (void)gev::fit_envelope(gaussian_pair(2048), kFlat, narrow);
      FAIL("expected an error");
    } catch (const gev::DomainError& e) {
      CHECK(e.code() == "insufficient_range");
    }
  }

  TEST_CASE("fit engine is deterministic across thread counts") {
    std::vector<double> xi;
    std::vector<double> y;
    for (int i = 0; i < 120; ++i) {
      xi.push_back(0.4 * std::pow(1000.0, i / 119.0));
      y.push_back(gev::assoc_value({1.2, 1.4, 1.0}, xi.back()) * 0.9 + 0.3);
    }
    const std::vector<char> mask(xi.size(), 1);
    gev::FitOptions opt;
    const gev::FitEngine engine(xi, opt);
    const auto a = engine.fit(y, mask);
    const int threads = gev::max_threads();
    gev::set_threads(1);
    const auto b = engine.fit(y, mask);
    gev::set_threads(threads);
    CHECK(a.sigma_hat == b.sigma_hat);
    CHECK(a.tau_hat == b.tau_hat);
    CHECK(a.r_squared == b.r_squared);
    CHECK(a.sigma_hat == doctest::Approx(1.4));
    CHECK(a.tau_hat == doctest::Approx(1.2).epsilon(1e-3));
    CHECK(a.slope == doctest::Approx(0.9).epsilon(1e-3));
  }
}
