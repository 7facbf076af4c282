#include "gev/lambert_w.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gev/errors.hpp"

namespace gev {

namespace {

constexpr int kMaxIterations = 50;
constexpr double kResidualTol = 1e-12;

double initial_guess(double x) {
  if (x >= std::numbers::e) {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    return l1 - 0.75 * l2;
  }
  if (x < 0.25) {
    // W(x) = x - x^2 + 3/2 x^3 - 8/3 x^4 + ...
    return x * (1.0 - x * (1.0 - x * (1.5 - x * (8.0 / 3.0))));
  }
  return std::log1p(x) * 0.75;
}

double residual_of(double w, double x) { return std::fabs(w * std::exp(w) - x); }

}  // namespace

LambertEval lambert_w0_eval(double x) {
  if (!std::isfinite(x) || x < 0.0) {
    throw DomainError("lambert_w0: argument must be finite and >= 0, got " + std::to_string(x));
  }
  LambertEval out;
  out.x = x;
  if (x == 0.0) return out;

  const double tol = kResidualTol * std::max(1.0, x);
  double w = initial_guess(x);
  double res = residual_of(w, x);
  int it = 0;
  while (it < kMaxIterations) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    const double w_next = w - step;
    ++it;
    const double res_next = residual_of(w_next, x);
    w = w_next;
    res = res_next;
    if (res <= 0.5 * tol || std::fabs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(w)) {
      break;
    }
  }
  if (!(res <= tol)) {
    throw ConvergenceError("lambert_w0: no convergence for x = " + std::to_string(x));
  }
  out.w = w;
  out.residual = res;
  out.iterations = it;
  return out;
}

double lambert_w0(double x) { return lambert_w0_eval(x).w; }

LambertBracket lambert_bracket(double x) {
  if (!std::isfinite(x) || x < std::numbers::e) {
    throw DomainError("lambert_bracket: requires x >= e, got " + std::to_string(x));
  }
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return {l1 - l2, l1 - 0.5 * l2};
}

}  // namespace gev
