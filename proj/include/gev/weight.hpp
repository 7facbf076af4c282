#pragma once

#include <string>

namespace gev {

// Weight m(x, xi) on the time-frequency plane. The one-argument form is the
// time-only weight v(t) = m(t, 0) used for window norms and condition i).
struct WeightSpec {
  enum class Kind { unweighted, polynomial, exponential };

  Kind kind = Kind::unweighted;
  double t_exp = 0.0;  // polynomial: <x>^t_exp <xi>^s_exp
  double s_exp = 0.0;
  double s = 0.0;      // exponential: e^{s |(x, xi)|}

  static WeightSpec unweighted() { return {}; }
  static WeightSpec polynomial(double t_exp, double s_exp) { return {Kind::polynomial, t_exp, s_exp, 0.0}; }
  static WeightSpec exponential(double s) { return {Kind::exponential, 0.0, 0.0, s}; }

  double operator()(double x, double xi) const;
  double operator()(double t) const { return (*this)(t, 0.0); }

  // Parses "unweighted", "poly:t:s" or "exp:s".
  static WeightSpec parse(const std::string& text);
  std::string to_string() const;
};

}  // namespace gev
