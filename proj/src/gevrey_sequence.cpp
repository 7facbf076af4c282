#include "gev/gevrey_sequence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gev/errors.hpp"
#include "gev/parallel.hpp"

namespace gev {

namespace {

constexpr long double kEpsLd = std::numeric_limits<long double>::epsilon();

void require_range(std::uint64_t value, std::uint64_t lo, const char* what) {
  if (value < lo) {
    throw DomainError(std::string(what) + " must be >= " + std::to_string(lo));
  }
}

}  // namespace

void GevreyParams::validate() const {
  if (!std::isfinite(tau) || tau <= 0.0) throw DomainError("tau must be finite and > 0");
  if (!std::isfinite(sigma) || sigma < 1.0) throw DomainError("sigma must be finite and >= 1");
  if (!std::isfinite(h) || h <= 0.0) throw DomainError("h must be finite and > 0");
}

long double log_m_ld(double tau, double sigma, std::uint64_t p) {
  if (p <= 1) return 0.0L;
  const long double lp = static_cast<long double>(p);
  return static_cast<long double>(tau) * std::pow(lp, static_cast<long double>(sigma)) * std::log(lp);
}

double log_m(const GevreyParams& params, std::uint64_t p) {
  return static_cast<double>(log_m_ld(params.tau, params.sigma, p));
}

SequenceReport check_m1_logconvex(const GevreyParams& params, std::uint64_t p_max) {
  params.validate();
  require_range(p_max, 2, "p_max");
  SequenceReport rep;
  rep.property = "M1_log_convexity";
  rep.params = params;
  rep.scanned_range = {1, p_max};

  std::vector<std::vector<Violation>> found(static_cast<std::size_t>(max_threads()));
  const auto n = static_cast<std::int64_t>(p_max);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 1; i <= n; ++i) {
    const auto p = static_cast<std::uint64_t>(i);
    const long double a = log_m_ld(params.tau, params.sigma, p);
    const long double b = log_m_ld(params.tau, params.sigma, p - 1);
    const long double c = log_m_ld(params.tau, params.sigma, p + 1);
    const long double excess = 2.0L * a - (b + c);
    if (excess > 0.0L) {
      found[static_cast<std::size_t>(thread_id())].push_back({p, 0, static_cast<double>(excess)});
    }
  }
  rep.violations = merge_sorted(found);
  return rep;
}

SequenceReport check_m2bar(const GevreyParams& params, std::uint64_t p_max, std::uint64_t q_max) {
  params.validate();
  require_range(p_max, 1, "p_max");
  require_range(q_max, 1, "q_max");
  SequenceReport rep;
  rep.property = "M2bar_fitted_constant";
  rep.params = params;
  rep.scanned_range = {p_max, q_max};

  const double tau2 = params.tau * std::pow(2.0, params.sigma - 1.0);
  const auto n = static_cast<std::int64_t>(p_max);
  long double best = -std::numeric_limits<long double>::infinity();
#pragma omp parallel for schedule(dynamic, 8) reduction(max : best)
  for (std::int64_t i = 1; i <= n; ++i) {
    const auto p = static_cast<std::uint64_t>(i);
    const long double lp = log_m_ld(tau2, params.sigma, p);
    const long double ps = std::pow(static_cast<long double>(p), static_cast<long double>(params.sigma));
    for (std::uint64_t q = 1; q <= q_max; ++q) {
      const long double qs = std::pow(static_cast<long double>(q), static_cast<long double>(params.sigma));
      const long double num = log_m_ld(params.tau, params.sigma, p + q) - lp - log_m_ld(tau2, params.sigma, q);
      best = std::max(best, num / (ps + qs));
    }
  }
  rep.fitted_constant = static_cast<double>(best);
  if (!std::isfinite(*rep.fitted_constant)) {
    rep.violations.push_back({p_max, q_max, std::numeric_limits<double>::infinity()});
  }
  return rep;
}

SequenceReport check_m2prime(const GevreyParams& params, std::uint64_t p_max, std::uint64_t q_max) {
  params.validate();
  require_range(p_max, 1, "p_max");
  require_range(q_max, 1, "q_max");
  SequenceReport rep;
  rep.property = "M2prime_per_q_constants";
  rep.params = params;
  rep.scanned_range = {p_max, q_max};
  rep.per_q_constants.assign(q_max, 0.0);

  const auto nq = static_cast<std::int64_t>(q_max);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t iq = 1; iq <= nq; ++iq) {
    const auto q = static_cast<std::uint64_t>(iq);
    long double best = -std::numeric_limits<long double>::infinity();
    for (std::uint64_t p = 1; p <= p_max; ++p) {
      const long double ps = std::pow(static_cast<long double>(p), static_cast<long double>(params.sigma));
      const long double v =
          (log_m_ld(params.tau, params.sigma, p + q) - log_m_ld(params.tau, params.sigma, p)) / ps;
      best = std::max(best, v);
    }
    rep.per_q_constants[q - 1] = static_cast<double>(best);
  }
  rep.fitted_constant = *std::max_element(rep.per_q_constants.begin(), rep.per_q_constants.end());
  for (std::uint64_t q = 1; q <= q_max; ++q) {
    if (!std::isfinite(rep.per_q_constants[q - 1])) {
      rep.violations.push_back({p_max, q, std::numeric_limits<double>::infinity()});
    }
  }
  return rep;
}

SequenceReport check_m3prime(const GevreyParams& params, std::uint64_t p_max) {
  params.validate();
  require_range(p_max, 2, "p_max");
  if (params.sigma == 1.0 && params.tau <= 1.0) {
    throw DomainError("check_m3prime: sigma = 1 requires tau > 1 (quasianalytic range)");
  }
  SequenceReport rep;
  rep.property = "M3prime_ratio_bound";
  rep.params = params;
  rep.scanned_range = {2, p_max};

  std::vector<std::vector<Violation>> found(static_cast<std::size_t>(max_threads()));
  const auto n = static_cast<std::int64_t>(p_max);
  const long double tau = params.tau;
  const long double sm1 = static_cast<long double>(params.sigma) - 1.0L;
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 2; i <= n; ++i) {
    const auto p = static_cast<std::uint64_t>(i);
    const long double lhs = log_m_ld(params.tau, params.sigma, p - 1) - log_m_ld(params.tau, params.sigma, p);
    const long double rhs = -tau * std::pow(static_cast<long double>(p - 1), sm1) *
                            std::log(2.0L * static_cast<long double>(p));
    const long double slack = 64.0L * kEpsLd * (std::fabs(lhs) + std::fabs(rhs));
    if (lhs - rhs > slack) {
      found[static_cast<std::size_t>(thread_id())].push_back({p, 0, static_cast<double>(lhs - rhs)});
    }
  }
  rep.violations = merge_sorted(found);
  rep.tail_increment = static_cast<double>(
      std::exp(log_m_ld(params.tau, params.sigma, p_max - 1) - log_m_ld(params.tau, params.sigma, p_max)));
  return rep;
}

SequenceReport check_power_inequalities(double sigma, std::uint64_t n_max) {
  if (!std::isfinite(sigma) || sigma < 1.0) throw DomainError("sigma must be finite and >= 1");
  SequenceReport rep;
  rep.property = "power_inequalities";
  rep.params = {1.0, sigma, 1.0};
  rep.scanned_range = {0, n_max};

  std::vector<std::vector<Violation>> found(static_cast<std::size_t>(max_threads()));
  const auto n = static_cast<std::int64_t>(n_max);
  const long double s = sigma;
  const long double c = std::pow(2.0L, s - 1.0L);
#pragma omp parallel for schedule(static)
  for (std::int64_t a = 0; a <= n; ++a) {
    const long double as = std::pow(static_cast<long double>(a), s);
    for (std::int64_t b = 0; b <= n; ++b) {
      const long double bs = std::pow(static_cast<long double>(b), s);
      const long double abs_ = std::pow(static_cast<long double>(a + b), s);
      const long double slack = 16.0L * kEpsLd * (abs_ + as + bs);
      const long double left = (as + bs) - abs_;
      const long double right = abs_ - c * (as + bs);
      if (left > slack || right > slack) {
        found[static_cast<std::size_t>(thread_id())].push_back(
            {static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b),
             static_cast<double>(std::max(left, right))});
      }
    }
  }
  rep.violations = merge_sorted(found);
  return rep;
}

}  // namespace gev
