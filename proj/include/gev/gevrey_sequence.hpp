#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gev {

// (tau, sigma, h) indexing M_p = p^{tau p^sigma} and its associated function.
struct GevreyParams {
  double tau = 1.0;
  double sigma = 1.0;
  double h = 1.0;

  void validate() const;  // throws DomainError
};

// ln M_p = tau p^sigma ln p, with ln M_0 = ln M_1 = 0.
double log_m(const GevreyParams& params, std::uint64_t p);
long double log_m_ld(double tau, double sigma, std::uint64_t p);

struct Violation {
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  double excess = 0.0;  // lhs - rhs in log domain, > 0 for a violation
};

struct SequenceReport {
  std::string property;
  GevreyParams params;
  std::vector<std::uint64_t> scanned_range;  // [lo, hi] or [p_max, q_max]
  std::optional<double> fitted_constant;     // ln C where applicable
  std::vector<double> per_q_constants;       // (M.2)' only
  std::optional<double> tail_increment;      // (M.3)' only
  std::vector<Violation> violations;

  bool passed() const { return violations.empty(); }
};

// 2 ln M_p <= ln M_{p-1} + ln M_{p+1} for 1 <= p <= p_max.
SequenceReport check_m1_logconvex(const GevreyParams& params, std::uint64_t p_max);

// sup over the rectangle of
// [ln M_{p+q} - ln M'_p - ln M'_q] / (p^sigma + q^sigma), M' using tau 2^{sigma-1}.
SequenceReport check_m2bar(const GevreyParams& params, std::uint64_t p_max, std::uint64_t q_max);

// Per-q constants ln C_q = sup_p [ln M_{p+q} - ln M_p] / p^sigma.
SequenceReport check_m2prime(const GevreyParams& params, std::uint64_t p_max, std::uint64_t q_max);

// ln M_{p-1} - ln M_p <= -tau (p-1)^{sigma-1} ln(2p) for 2 <= p <= p_max,
// plus the tail increment M_{p_max-1}/M_{p_max} of the ratio series.
SequenceReport check_m3prime(const GevreyParams& params, std::uint64_t p_max);

// |a|^s + |b|^s <= |a+b|^s <= 2^{s-1}(|a|^s + |b|^s) for 0 <= a, b <= n_max.
SequenceReport check_power_inequalities(double sigma, std::uint64_t n_max);

}  // namespace gev
