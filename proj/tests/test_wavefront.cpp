#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "doctest.h"
#include "gev/corpus.hpp"
#include "gev/errors.hpp"
#include "gev/parallel.hpp"
#include "gev/wavefront.hpp"

namespace {

constexpr double kDt = 1.0 / 1024.0;
constexpr std::size_t kN = 8192;
constexpr double kRadius = 0.5;
const gev::GevreyParams kParams{1.0, 1.5, 1.0};

const gev::Window& scan_window() {
  static const gev::Window w = gev::default_scan_window(kParams, kRadius, kDt);
  return w;
}

const gev::SmoothReference& reference() {
  static const gev::SmoothReference r = gev::calibrate_reference(kN, kDt, scan_window(), kParams, {});
  return r;
}

gev::SampledSignal make(gev::SignalKind kind, double center = 0.0) {
  gev::SignalSpec s;
  s.kind = kind;
  s.dt = kDt;
  s.n = kN;
  s.center = center;
  return gev::generate(s);
}

gev::WaveFrontReport scan(gev::SignalKind kind, gev::WavefrontOptions opt = {}, double center = 0.0) {
  return gev::scan_wavefront(make(kind, center), scan_window(), kParams, opt, &reference());
}

std::set<std::pair<double, int>> flagged(const gev::WaveFrontReport& r) {
  std::set<std::pair<double, int>> out;
  for (const auto& c : r.cells) {
    if (c.singular) out.emplace(c.x_center, c.direction == gev::Direction::positive ? 0 : 1);
  }
  return out;
}

}  // namespace

TEST_SUITE("wavefront") {
  TEST_CASE("smooth corpus has no singular cells") {
    for (auto kind : {gev::SignalKind::gaussian, gev::SignalKind::gaussian_cosine, gev::SignalKind::bump}) {
      const auto r = scan(kind);
      CHECK(flagged(r).empty());
      CHECK(gev::singular_support(r).empty());
    }
  }

  TEST_CASE("heaviside is singular at the step in both directions") {
    const auto r = scan(gev::SignalKind::heaviside);
    const auto s = gev::singular_support(r);
    REQUIRE(s.size() == 1);
    CHECK(s[0].lo < 0.0);
    CHECK(s[0].hi > 0.0);
    CHECK(s[0].hi - s[0].lo <= 2.0 * kRadius + r.hop + 1e-12);
    const auto f = flagged(r);
    CHECK(f.count({0.0, 0}) == 1);
    CHECK(f.count({0.0, 1}) == 1);
    for (const auto& [x, d] : f) CHECK(std::fabs(x) < kRadius);
  }

  TEST_CASE("abs_t is singular at the kink only") {
    const auto s = gev::singular_support(scan(gev::SignalKind::abs_t));
    REQUIRE(s.size() == 1);
    CHECK(s[0].lo < 0.0);
    CHECK(s[0].hi > 0.0);
  }

  TEST_CASE("two steps give two disjoint intervals") {
    const auto s = gev::singular_support(scan(gev::SignalKind::two_step));
    REQUIRE(s.size() == 2);
    CHECK(s[0].hi < s[1].lo);
    CHECK(s[0].lo < -1.0);
    CHECK(s[0].hi > -1.0);
    CHECK(s[1].lo < 1.0);
    CHECK(s[1].hi > 1.0);
  }

  TEST_CASE("translation covariance") {
    const auto a = flagged(scan(gev::SignalKind::heaviside));
    const auto b = flagged(scan(gev::SignalKind::heaviside, {}, 1.0));
    std::set<std::pair<double, int>> shifted;
    for (const auto& [x, d] : a) shifted.emplace(x + 1.0, d);
    CHECK(b == shifted);
  }

  TEST_CASE("raising the threshold never adds cells") {
    gev::WavefrontOptions lo;
    gev::WavefrontOptions hi;
    hi.threshold = 1e6;
    for (auto kind : {gev::SignalKind::heaviside, gev::SignalKind::abs_t, gev::SignalKind::sawtooth}) {
      const auto a = flagged(scan(kind, lo));
      const auto b = flagged(scan(kind, hi));
      CHECK(std::includes(a.begin(), a.end(), b.begin(), b.end()));
    }
  }

  TEST_CASE("beurling mode flags a superset of roumieu mode") {
    gev::WavefrontOptions b;
    b.mode = gev::ScanMode::beurling;
    const auto r = flagged(scan(gev::SignalKind::abs_t));
    const auto s = flagged(scan(gev::SignalKind::abs_t, b));
    CHECK(std::includes(s.begin(), s.end(), r.begin(), r.end()));
  }

  TEST_CASE("singular support is the projection of singular cells") {
    const auto r = scan(gev::SignalKind::sawtooth);
    const auto s = gev::singular_support(r);
    CHECK(s.size() == 4);
    std::set<double> xs;
    for (const auto& [x, d] : flagged(r)) xs.insert(x);
    for (double x : xs) {
      CHECK(std::any_of(s.begin(), s.end(), [&](const gev::Interval& iv) { return iv.lo < x && x < iv.hi; }));
    }
    for (const auto& iv : s) {
      CHECK(xs.count(iv.lo + 0.5 * r.hop) == 1);
      CHECK(xs.count(iv.hi - 0.5 * r.hop) == 1);
      for (double x = iv.lo + 0.5 * r.hop; x < iv.hi; x += r.hop) CHECK(xs.count(x) == 1);
    }
  }

  TEST_CASE("cells carry decay fits") {
    const auto r = scan(gev::SignalKind::heaviside);
    const auto it = std::find_if(r.cells.begin(), r.cells.end(), [](const auto& c) { return c.x_center == 0.0; });
    REQUIRE(it != r.cells.end());
    REQUIRE(it->fit.has_value());
    CHECK(it->fit->r_squared > 0.5);
    CHECK(it->log_margin_h.size() == 5);
  }

  TEST_CASE("scan output does not depend on the thread count") {
    const auto a = scan(gev::SignalKind::abs_t);
    const int threads = gev::max_threads();
    gev::set_threads(1);
    const auto b = scan(gev::SignalKind::abs_t);
    gev::set_threads(threads);
    REQUIRE(a.cells.size() == b.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
      CHECK(a.cells[i].log_margin == b.cells[i].log_margin);
      CHECK(a.cells[i].fit.has_value() == b.cells[i].fit.has_value());
      if (a.cells[i].fit && b.cells[i].fit) CHECK(a.cells[i].fit->tau_hat == b.cells[i].fit->tau_hat);
    }
  }

  TEST_CASE("argument checks") {
    const auto u = make(gev::SignalKind::heaviside);
    try {
      (void)gev::scan_wavefront(u, gev::make_gaussian(kDt, 8192), kParams, {}, &reference());
      FAIL("expected an error");
    } catch (const gev::DomainError& e) {
      CHECK(e.code() == "non_compact_window");
    }
    gev::WavefrontOptions narrow;
    narrow.cone = {100.0, 105.0};
    try {
      (void)gev::scan_wavefront(u, scan_window(), kParams, narrow);
      FAIL("expected an error");
    } catch (const gev::DomainError& e) {
      CHECK(e.code() == "cone_too_narrow");
    }
    const auto wide = gev::default_scan_window(kParams, 1.5, kDt, 20);
    CHECK_THROWS_AS(gev::cutoff_independence_check(u, kParams, {scan_window(), wide}, {}), gev::DomainError);
    CHECK_THROWS_AS(gev::cutoff_independence_check(u, kParams, {scan_window()}, {}), gev::DomainError);
  }

  TEST_CASE("cutoff independence") {
    const auto w20 = gev::default_scan_window(kParams, kRadius, kDt, 20);
    const auto w28 = gev::default_scan_window(kParams, kRadius, kDt, 28);
    const auto saw = gev::cutoff_independence_check(make(gev::SignalKind::sawtooth), kParams, {w20, w28}, {});
    CHECK(saw.passed);
    REQUIRE(saw.supports.size() == 2);
    CHECK(saw.supports[0].size() == 4);
    CHECK(saw.supports[1].size() == 4);
    const auto gauss = gev::cutoff_independence_check(make(gev::SignalKind::gaussian), kParams, {w20, w28}, {});
    CHECK(gauss.passed);
    CHECK(gauss.supports[0].empty());
    CHECK(gauss.supports[1].empty());
  }

  TEST_CASE("default window follows the analysis class") {
    const auto a = gev::default_scan_window({1.2, 1.0, 1.0}, 0.5, kDt);
    CHECK(a.params.tau == doctest::Approx(1.2));
    const auto b = gev::default_scan_window({3.0, 1.0, 1.0}, 0.5, kDt);
    CHECK(b.params.tau == doctest::Approx(1.5));
    CHECK(gev::scan_mode_from_string("beurling") == gev::ScanMode::beurling);
    CHECK_THROWS_AS(gev::scan_mode_from_string("other"), gev::ConfigError);
  }
}
