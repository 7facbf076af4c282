#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

namespace oracle {

// Solves f(w) = 0 for increasing f on [lo, hi] by plain bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (f(mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// W(x) from w e^w = x, using the monotone form w + ln w = ln x for large x.
inline double lambert_bisect(double x) {
  if (x == 0.0) return 0.0;
  if (x < 1.0) return bisect([x](double w) { return w * std::exp(w) - x; }, 0.0, 1.0);
  const double lx = std::log(x);
  return bisect([lx](double w) { return w + std::log(w) - lx; }, 0.5, lx + 1.0);
}

// Physicists' Hermite polynomial by the three-term recurrence.
inline double hermite(int n, double x) {
  double h0 = 1.0;
  if (n == 0) return h0;
  double h1 = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double h2 = 2.0 * x * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

// d^a/dt^a of 2^{1/4} exp(-pi t^2).
inline double gaussian_derivative(int a, double t) {
  const double sp = std::sqrt(M_PI);
  return std::pow(2.0, 0.25) * std::pow(-sp, a) * hermite(a, sp * t) * std::exp(-M_PI * t * t);
}

}  // namespace oracle

#include <algorithm>
#include <utility>
#include <vector>

#include "gev/associated_function.hpp"

namespace oracle {

struct AssocMax {
  long double value = 0.0L;
  std::uint64_t argmax = 0;
};

// max(0, max_{1<=p<=p_max} term(p)) by exhaustive evaluation.
inline AssocMax assoc_exhaustive(const gev::GevreyParams& g, double k, std::uint64_t p_max) {
  const long double lh = std::log(static_cast<long double>(g.h));
  const long double lk = std::log(static_cast<long double>(k));
  AssocMax best;
  for (std::uint64_t p = 1; p <= p_max; ++p) {
    const long double v = gev::assoc_term(g.tau, g.sigma, lh, lk, p);
    if (v > best.value) {
      best.value = v;
      best.argmax = p;
    }
  }
  return best;
}

// Same maximum by branch and bound over [1, p_max]. Interval bounds use the
// mean value theorem with monotone bounds on the derivative; no concavity
// is assumed. Pruning keeps a rounding margin so ties are never discarded.
inline AssocMax assoc_branch_and_bound(const gev::GevreyParams& g, double k, std::uint64_t p_max) {
  const long double lh = std::log(static_cast<long double>(g.h));
  const long double lk = std::log(static_cast<long double>(k));
  const long double s = g.sigma;
  const long double tau = g.tau;
  const long double eps = std::numeric_limits<long double>::epsilon();
  auto f = [&](std::uint64_t p) { return gev::assoc_term(g.tau, g.sigma, lh, lk, p); };
  // derivative = lk + p^{s-1} * gfun(p), gfun decreasing in p
  auto gfun = [&](long double p) { return s * (lh - tau * std::log(p)) - tau; };
  auto pw = [&](long double p) { return std::pow(p, s - 1.0L); };
  auto margin = [&](long double p) {
    const long double ps = std::pow(p, s);
    return 512.0L * eps * (std::fabs(p * lk) + std::fabs(ps * lh) + std::fabs(tau * ps * std::log(p)) + 1.0L);
  };

  AssocMax best;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> stack{{1, p_max}};
  while (!stack.empty()) {
    auto [a, b] = stack.back();
    stack.pop_back();
    if (b - a <= 32) {
      for (std::uint64_t p = a; p <= b; ++p) {
        const long double v = f(p);
        if (v > best.value || (v == best.value && best.argmax != 0 && p < best.argmax)) {
          best.value = v;
          best.argmax = p;
        }
      }
      continue;
    }
    const long double la = static_cast<long double>(a);
    const long double lb = static_cast<long double>(b);
    const long double ga = gfun(la);
    const long double gb = gfun(lb);
    long double dmax;
    long double dmin;
    if (ga <= 0.0L) {
      dmax = pw(la) * ga;
      dmin = pw(lb) * gb;
    } else if (gb >= 0.0L) {
      dmax = pw(lb) * ga;
      dmin = pw(la) * gb;
    } else {
      dmax = pw(lb) * ga;
      dmin = pw(lb) * gb;
    }
    dmax += lk;
    dmin += lk;
    const long double fa = f(a);
    const long double fb = f(b);
    const long double w = lb - la;
    const long double ub = std::min(fa + std::max(0.0L, dmax) * w, fb + std::max(0.0L, -dmin) * w);
    if (ub + margin(lb) < best.value) continue;
    const std::uint64_t mid = a + (b - a) / 2;
    // Depth-first into the right half last so the left half is popped first.
    stack.push_back({mid + 1, b});
    stack.push_back({a, mid});
  }
  return best;
}

}  // namespace oracle
