#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "gev/errors.hpp"
#include "gev/window.hpp"
#include "oracles.hpp"

namespace {

// L1 norm of the a-th derivative of 2^{1/4} e^{-pi t^2}: the total variation
// of the (a-1)-th derivative between the zeros of H_a(sqrt(pi) t).
double gaussian_l1_oracle(int a) {
  std::vector<double> z{-INFINITY};
  const double sp = std::sqrt(M_PI);
  const double step = 1e-3;
  for (double t = -8.0; t < 8.0; t += step) {
    const double u0 = oracle::hermite(a, sp * t);
    const double u1 = oracle::hermite(a, sp * (t + step));
    if ((u0 < 0.0) != (u1 < 0.0)) {
      z.push_back(oracle::bisect([&](double x) { return (u0 < 0.0 ? 1.0 : -1.0) * oracle::hermite(a, sp * x); }, t,
                                 t + step));
    }
  }
  z.push_back(INFINITY);
  auto h = [&](double t) { return std::isinf(t) ? 0.0 : oracle::gaussian_derivative(a - 1, t); };
  double tv = 0.0;
  for (std::size_t i = 0; i + 1 < z.size(); ++i) tv += std::fabs(h(z[i + 1]) - h(z[i]));
  return tv;
}

double peak(const gev::Window& w) {
  double p = 0.0;
  for (const auto& v : w.samples) p = std::max(p, std::abs(v));
  return p;
}

}  // namespace

TEST_SUITE("window_factory") {
  TEST_CASE("gaussian normalization, formula and symmetry") {
    const auto g = gev::make_gaussian(0.01, 2048, 0.0);
    CHECK(g.l2_norm() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(g.samples[static_cast<std::size_t>(g.origin)].real() == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-12));
    for (std::size_t m = 0; m < g.size(); ++m) {
      const double s = g.coordinate(m);
      CHECK(std::fabs(g.samples[m].real() - std::pow(2.0, 0.25) * std::exp(-M_PI * s * s)) <= 1e-12);
    }
    for (long j = 1; j < g.origin; ++j) {
      CHECK(g.samples[static_cast<std::size_t>(g.origin + j)] == g.samples[static_cast<std::size_t>(g.origin - j)]);
    }
    CHECK_THROWS_AS(gev::make_gaussian(0.01, 256, 0.0), gev::DomainError);
    CHECK_THROWS_AS(gev::make_gaussian(0.01, 8, 0.0), gev::DomainError);
    CHECK_THROWS_AS(gev::make_gaussian(0.01, 2048, 9.0), gev::DomainError);
  }

  TEST_CASE("two equal boxes give a triangle") {
    const double dt = 1.0 / 256.0;
    const auto w = gev::convolve_boxes({1.0, 1.0}, dt, gev::BumpNormalization::unit_peak);
    for (std::size_t m = 0; m < w.size(); ++m) {
      const double s = w.coordinate(m);
      CHECK(std::fabs(w.samples[m].real() - std::max(0.0, 1.0 - std::fabs(s))) <= 2e-4);
    }
    const auto norms = gev::estimate_derivative_norms(w, 1, gev::WeightSpec::unweighted(), {1.5, 1.0, 1.0});
    // Total variation of a triangle is twice its peak; spectral ringing at the kinks costs ~1%.
    CHECK(norms.norms[1] == doctest::Approx(2.0 * peak(w)).epsilon(0.03));
  }

  TEST_CASE("bump construction") {
    const gev::GevreyParams p{1.0, 2.0, 1.0};
    const double dt = 1.0 / 4096.0;
    // With plain indicators the integral is the product of the widths. For
    // J = 24 that product underflows, so the raw check runs at J = 8 and the
    // J = 24 bump uses unit boxes (each of integral 1).
    const auto raw = gev::make_gevrey_bump(p, 1.0, dt, 8, gev::BumpNormalization::box_product);
    double product = 1.0;
    for (double a : raw.widths) product *= a;
    double mass = 0.0;
    for (const auto& v : raw.samples) mass += v.real();
    CHECK(mass * dt == doctest::Approx(product).epsilon(1e-6));
    CHECK_THROWS_AS(gev::make_gevrey_bump(p, 1.0, dt, 24, gev::BumpNormalization::box_product), gev::DomainError);

    const auto w = gev::make_gevrey_bump(p, 1.0, dt, 24, gev::BumpNormalization::unit_mass);
    const double sum = std::accumulate(w.widths.begin(), w.widths.end(), 0.0);
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(w.widths.size() == 25);
    const auto top = std::max_element(w.samples.begin(), w.samples.end(),
                                      [](const auto& a, const auto& b) { return a.real() < b.real(); });
    CHECK(w.samples[w.origin].real() == doctest::Approx(top->real()).epsilon(1e-12));
    for (std::size_t m = 0; m < w.size(); ++m) {
      CHECK(w.samples[m].real() >= 0.0);
      CHECK(w.samples[m] == w.samples[w.size() - 1 - m]);
      if (std::fabs(w.coordinate(m)) >= 1.0) CHECK(w.samples[m] == gev::cplx(0.0, 0.0));
    }
  }

  TEST_CASE("unit mass option") {
    const auto w = gev::make_gevrey_bump({1.5, 1.0, 1.0}, 0.5, 1.0 / 1024.0, 24);
    double mass = 0.0;
    for (const auto& v : w.samples) mass += v.real();
    CHECK(mass * w.dt == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("box order does not matter") {
    auto widths = gev::bump_widths({1.0, 1.5, 1.0}, 1.0, 12);
    const auto a = gev::convolve_boxes(widths, 1.0 / 1024.0);
    std::reverse(widths.begin(), widths.end());
    std::rotate(widths.begin(), widths.begin() + 3, widths.end());
    const auto b = gev::convolve_boxes(widths, 1.0 / 1024.0);
    REQUIRE(a.size() == b.size());
    const double pk = peak(a);
    for (std::size_t m = 0; m < a.size(); ++m) CHECK(std::abs(a.samples[m] - b.samples[m]) <= 1e-12 * pk);
  }

  TEST_CASE("parameter checks") {
    CHECK_THROWS_AS(gev::make_gevrey_bump({1.0, 1.0, 1.0}, 1.0, 0.01), gev::DomainError);
    CHECK_THROWS_AS(gev::make_gevrey_bump({0.8, 1.0, 1.0}, 1.0, 0.01), gev::DomainError);
    CHECK_THROWS_AS(gev::make_gevrey_bump({1.0, 2.0, 1.0}, 0.1, 0.01), gev::DomainError);
    CHECK_NOTHROW(gev::make_gevrey_bump({1.5, 1.0, 1.0}, 1.0, 0.01));
  }

  TEST_CASE("gaussian derivative norms against Hermite closed forms") {
    const auto g = gev::make_gaussian(0.01, 2048, 0.0);
    const auto r = gev::estimate_derivative_norms(g, 4, gev::WeightSpec::unweighted(), {1.0, 1.0, 1.0});
    CHECK(r.norms[0] == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-10));
    for (int a = 1; a <= 4; ++a) {
      CHECK(r.norms[static_cast<std::size_t>(a)] == doctest::Approx(gaussian_l1_oracle(a)).epsilon(1e-8));
    }
    CHECK(r.warnings.empty());
    CHECK(std::isfinite(r.fitted_cg));
    CHECK(r.fitted_cg > 0.0);
  }

  TEST_CASE("weights only increase the norm") {
    const auto g = gev::make_gaussian(0.01, 2048, 0.0);
    const auto u = gev::estimate_derivative_norms(g, 3, gev::WeightSpec::unweighted(), {1.0, 1.0, 1.0});
    const auto p = gev::estimate_derivative_norms(g, 3, gev::WeightSpec::polynomial(2.0, 0.0), {1.0, 1.0, 1.0});
    const auto e = gev::estimate_derivative_norms(g, 3, gev::WeightSpec::exponential(1.0), {1.0, 1.0, 1.0});
    for (std::size_t a = 0; a <= 3; ++a) {
      CHECK(p.norms[a] >= u.norms[a] * (1.0 - 1e-6));
      CHECK(e.norms[a] >= u.norms[a] * (1.0 - 1e-6));
    }
  }

  TEST_CASE("bump derivative constant stable in the number of factors") {
    const gev::GevreyParams p{1.0, 2.0, 1.0};
    const auto a = gev::make_gevrey_bump(p, 1.0, 1.0 / 1024.0, 20);
    const auto b = gev::make_gevrey_bump(p, 1.0, 1.0 / 1024.0, 28);
    const auto na = gev::estimate_derivative_norms(a, 8, gev::WeightSpec::unweighted(), p);
    const auto nb = gev::estimate_derivative_norms(b, 8, gev::WeightSpec::unweighted(), p);
    CHECK(std::isfinite(na.fitted_cg));
    CHECK(nb.fitted_cg == doctest::Approx(na.fitted_cg).epsilon(0.10));
  }

  TEST_CASE("alpha range is limited") {
    const auto g = gev::make_gaussian(0.01, 2048, 0.0);
    CHECK_THROWS_AS(gev::estimate_derivative_norms(g, 13, gev::WeightSpec::unweighted(), {1.0, 1.0, 1.0}),
                    gev::DomainError);
  }
}
