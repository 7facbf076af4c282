#pragma once

#include <cstdint>
#include <vector>

#include "gev/gevrey_sequence.hpp"

namespace gev {

struct AssocEval {
  GevreyParams params;
  double k = 0.0;
  double value = 0.0;            // T_{tau,sigma,h}(k) >= 0
  std::uint64_t argmax_p = 0;    // 0 when every term is <= 0
  std::uint64_t truncation_p = 0;  // largest p evaluated
};

// Term p^sigma ln h + p ln k - tau p^sigma ln p, in the factored form
// p (ln k + p^{sigma-1}(ln h - tau ln p)). Zero for p = 0.
long double assoc_term(double tau, double sigma, long double log_h, long double log_k, std::uint64_t p);

// T(k) = sup_p max(0, term(p)). The scan covers p up to the point where the
// term becomes concave, then locates the continuous maximizer by bisection and
// scans a neighbourhood wide enough to absorb rounding.
AssocEval assoc_t(const GevreyParams& params, double k);
double assoc_value(const GevreyParams& params, double k);

// Parallel evaluation over a vector of k.
std::vector<double> assoc_values(const GevreyParams& params, const std::vector<double>& ks);

// (tau/e) k^{1/tau}: maximum of p ln k - tau p ln p over real p > 0.
double assoc_t_gevrey_limit(double tau, double k);

struct AsymptoticBracket {
  double k = 0.0;
  double lower_exponent = 0.0;
  double upper_exponent = 0.0;
  double c_tsh = 0.0;
};

// Lambert-W two-sided asymptotic exponents of T for sigma > 1, k > e.
AsymptoticBracket assoc_bracket(const GevreyParams& params, double k);

// ln^{sigma/(sigma-1)} k / ln^{1/(sigma-1)}(ln k), for sigma > 1, k > e.
double assoc_simplified(double sigma, double k);

// exp(-T(xi_abs)), equal to 1 at 0.
double envelope(const GevreyParams& params, double xi_abs);

}  // namespace gev
