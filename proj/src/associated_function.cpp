#include "gev/associated_function.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gev/errors.hpp"
#include "gev/lambert_w.hpp"

namespace gev {

namespace {

constexpr std::uint64_t kPrefix = 64;
constexpr long double kEpsLd = std::numeric_limits<long double>::epsilon();
constexpr long double kMaxP = 4.0e18L;
constexpr long double kMaxHalfWidth = 4096.0L;

const std::array<long double, kPrefix + 2>& small_logs() {
  static const auto table = [] {
    std::array<long double, kPrefix + 2> t{};
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = std::log(static_cast<long double>(i));
    return t;
  }();
  return table;
}

long double log_of(std::uint64_t p) {
  const auto& t = small_logs();
  return p < t.size() ? t[p] : std::log(static_cast<long double>(p));
}

struct Term {
  double tau;
  double sigma;
  long double log_h;
  long double log_k;

  long double value(std::uint64_t p) const { return assoc_term(tau, sigma, log_h, log_k, p); }

  // Continuous derivative and second derivative of the term at real p > 0.
  long double d1(long double p) const {
    const long double lp = std::log(p);
    const long double ps1 = std::exp((static_cast<long double>(sigma) - 1.0L) * lp);
    return log_k + ps1 * (static_cast<long double>(sigma) * (log_h - tau * lp) - tau);
  }
  long double d2(long double p) const {
    const long double s = sigma;
    const long double lp = std::log(p);
    const long double ps2 = std::exp((s - 2.0L) * lp);
    return ps2 * (s * (s - 1.0L) * (log_h - tau * lp) - tau * (2.0L * s - 1.0L));
  }
  // Rounding bound for value(p).
  long double rounding(long double p) const {
    const long double lp = std::log(p);
    const long double ps = std::exp(static_cast<long double>(sigma) * lp);
    return 64.0L * kEpsLd * (std::fabs(p * log_k) + std::fabs(ps * log_h) + std::fabs(tau * ps * lp) + 1.0L);
  }
};

struct Best {
  long double value = 0.0L;
  std::uint64_t p = 0;
  void offer(long double v, std::uint64_t q) {
    if (v > value) {
      value = v;
      p = q;
    }
  }
};

// Half-width of the neighbourhood around c outside of which a concave term is
// guaranteed to sit below the maximum by more than the rounding error. When the
// cap binds, every term in the neighbourhood equals the maximum to within
// rounding, so the value is unaffected.
std::uint64_t window_half_width(const Term& t, long double c) {
  const long double curv = std::fabs(t.d2(std::max(c, 1.0L)));
  const long double err = t.rounding(std::max(c, 1.0L));
  long double w = curv > 0.0L ? std::sqrt(8.0L * err / curv) : kMaxHalfWidth;
  w = std::min(w, kMaxHalfWidth);
  return static_cast<std::uint64_t>(std::ceil(w)) + 2;
}

}  // namespace

long double assoc_term(double tau, double sigma, long double log_h, long double log_k, std::uint64_t p) {
  if (p == 0) return 0.0L;
  const long double lp = log_of(p);
  const long double ps1 = sigma == 1.0 ? 1.0L : std::exp((static_cast<long double>(sigma) - 1.0L) * lp);
  return static_cast<long double>(p) * (log_k + ps1 * (log_h - static_cast<long double>(tau) * lp));
}

AssocEval assoc_t(const GevreyParams& params, double k) {
  params.validate();
  if (!std::isfinite(k) || k <= 0.0) {
    throw DomainError("assoc_t: k must be finite and > 0, got " + std::to_string(k));
  }
  const Term term{params.tau, params.sigma, std::log(static_cast<long double>(params.h)),
                  std::log(static_cast<long double>(k))};

  // Beyond p_concave the term is strictly concave in real p.
  long double p_concave = 1.0L;
  if (params.sigma > 1.0) {
    const long double s = params.sigma;
    const long double expo =
        (term.log_h - params.tau * (2.0L * s - 1.0L) / (s * (s - 1.0L))) / static_cast<long double>(params.tau);
    p_concave = expo > 60.0L ? kMaxP : std::exp(expo);
  }
  if (p_concave > 1e8L) {
    throw DomainError("assoc_t: h too large relative to tau for a finite scan prefix");
  }
  const std::uint64_t prefix = std::max<std::uint64_t>(kPrefix, static_cast<std::uint64_t>(std::ceil(p_concave)) + 1);

  Best best;
  for (std::uint64_t p = 1; p <= prefix; ++p) best.offer(term.value(p), p);
  std::uint64_t last = prefix;

  const long double start = static_cast<long double>(prefix);
  long double centre = start;
  if (term.d1(start) > 0.0L) {
    long double lo = start;
    long double hi = 2.0L * start;
    while (term.d1(hi) > 0.0L) {
      lo = hi;
      hi *= 2.0L;
      if (hi > kMaxP) throw DomainError("assoc_t: maximizing index exceeds the representable range");
    }
    while (hi - lo > 0.25L) {
      const long double mid = 0.5L * (lo + hi);
      if (term.d1(mid) > 0.0L) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    centre = std::round(0.5L * (lo + hi));
  }
  const std::uint64_t c = static_cast<std::uint64_t>(centre);
  const std::uint64_t w = window_half_width(term, centre);
  const std::uint64_t from = std::max(prefix + 1, c > w ? c - w : 1);
  const std::uint64_t to = c + w;
  for (std::uint64_t p = from; p <= to; ++p) best.offer(term.value(p), p);
  last = std::max(last, to);

  AssocEval out;
  out.params = params;
  out.k = k;
  out.value = static_cast<double>(best.value);
  out.argmax_p = best.p;
  out.truncation_p = last;
  return out;
}

double assoc_value(const GevreyParams& params, double k) { return assoc_t(params, k).value; }

std::vector<double> assoc_values(const GevreyParams& params, const std::vector<double>& ks) {
  params.validate();
  std::vector<double> out(ks.size(), 0.0);
  const auto n = static_cast<std::int64_t>(ks.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    const double k = ks[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = k > 0.0 ? assoc_t(params, k).value : 0.0;
  }
  return out;
}

double assoc_t_gevrey_limit(double tau, double k) {
  if (!std::isfinite(tau) || tau <= 0.0) throw DomainError("assoc_t_gevrey_limit: tau must be > 0");
  if (!std::isfinite(k) || k <= 0.0) throw DomainError("assoc_t_gevrey_limit: k must be > 0");
  return static_cast<double>(static_cast<long double>(tau) *
                             std::exp(std::log(static_cast<long double>(k)) / tau - 1.0L));
}

AsymptoticBracket assoc_bracket(const GevreyParams& params, double k) {
  params.validate();
  if (!(params.sigma > 1.0)) throw DomainError("assoc_bracket: requires sigma > 1");
  if (!std::isfinite(k) || k <= std::numbers::e) throw DomainError("assoc_bracket: requires k > e");
  const double s = params.sigma;
  const double t = params.tau;
  const double lk = std::log(k);
  AsymptoticBracket b;
  b.k = k;
  b.c_tsh = std::pow(params.h, -(s - 1.0) / t) * std::exp((s - 1.0) / s) * (s - 1.0) / (t * s);
  const double w = lambert_w0(b.c_tsh * lk);
  const double common = -std::log(w) / (s - 1.0) + s / (s - 1.0) * std::log(lk);
  const double log_lower = -std::log(std::pow(2.0, s - 1.0) * t) / (s - 1.0) +
                           s / (s - 1.0) * std::log((s - 1.0) / s) + common;
  const double log_upper = std::log((s - 1.0) / (t * s)) / (s - 1.0) + common;
  b.lower_exponent = std::exp(log_lower);
  b.upper_exponent = std::exp(log_upper);
  return b;
}

double assoc_simplified(double sigma, double k) {
  if (!std::isfinite(sigma) || !(sigma > 1.0)) throw DomainError("assoc_simplified: requires sigma > 1");
  if (!std::isfinite(k) || k <= std::numbers::e) throw DomainError("assoc_simplified: requires k > e");
  const double lk = std::log(k);
  return std::exp(sigma / (sigma - 1.0) * std::log(lk) - std::log(std::log(lk)) / (sigma - 1.0));
}

double envelope(const GevreyParams& params, double xi_abs) {
  if (!(xi_abs >= 0.0)) throw DomainError("envelope: xi_abs must be >= 0");
  if (xi_abs == 0.0) return 1.0;
  return std::exp(-assoc_t(params, xi_abs).value);
}

}  // namespace gev
