#include "gev/weight.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "gev/errors.hpp"

namespace gev {

double WeightSpec::operator()(double x, double xi) const {
  switch (kind) {
    case Kind::unweighted:
      return 1.0;
    case Kind::polynomial:
      return std::pow(1.0 + x * x, 0.5 * t_exp) * std::pow(1.0 + xi * xi, 0.5 * s_exp);
    case Kind::exponential:
      return std::exp(s * std::hypot(x, xi));
  }
  return 1.0;
}

WeightSpec WeightSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  auto number = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw ConfigError("bad number");
      return v;
    } catch (const std::exception&) {
      throw ConfigError("weight: cannot parse number '" + s + "' in '" + text + "'");
    }
  };
  if (parts.size() == 1 && (parts[0] == "unweighted" || parts[0] == "1" || parts[0] == "none")) {
    return unweighted();
  }
  if (parts.size() == 3 && (parts[0] == "poly" || parts[0] == "polynomial")) {
    return polynomial(number(parts[1]), number(parts[2]));
  }
  if (parts.size() == 2 && (parts[0] == "exp" || parts[0] == "exponential")) {
    return exponential(number(parts[1]));
  }
  throw ConfigError("weight: expected 'unweighted', 'poly:t:s' or 'exp:s', got '" + text + "'");
}

std::string WeightSpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case Kind::unweighted:
      os << "unweighted";
      break;
    case Kind::polynomial:
      os << "poly:" << t_exp << ":" << s_exp;
      break;
    case Kind::exponential:
      os << "exp:" << s;
      break;
  }
  return os.str();
}

}  // namespace gev
