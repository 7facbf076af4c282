#pragma once

namespace gev {

struct LambertEval {
  double x = 0.0;
  double w = 0.0;
  double residual = 0.0;  // |w e^w - x|
  int iterations = 0;
};

// Principal real branch W(x) for x >= 0, refined by Halley iteration until
// |w e^w - x| <= 1e-12 max(1, x).
double lambert_w0(double x);
LambertEval lambert_w0_eval(double x);

struct LambertBracket {
  double lower = 0.0;  // ln x - ln ln x
  double upper = 0.0;  // ln x - 0.5 ln ln x
};

// Bracket of W(x) valid for x >= e.
LambertBracket lambert_bracket(double x);

}  // namespace gev
