#include "gev/report_json.hpp"

#include <cmath>

namespace gev {

namespace {

nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json nums(const std::vector<double>& v) {
  auto out = nlohmann::json::array();
  for (double x : v) out.push_back(num(x));
  return out;
}

}  // namespace

void to_json(nlohmann::json& j, const GevreyParams& p) { j = {{"tau", p.tau}, {"sigma", p.sigma}, {"h", p.h}}; }

void from_json(const nlohmann::json& j, GevreyParams& p) {
  if (j.contains("tau")) j.at("tau").get_to(p.tau);
  if (j.contains("sigma")) j.at("sigma").get_to(p.sigma);
  if (j.contains("h")) j.at("h").get_to(p.h);
}

void to_json(nlohmann::json& j, const Violation& v) {
  j = {{"p", v.p}, {"q", v.q}, {"excess", num(v.excess)}};
}

void to_json(nlohmann::json& j, const SequenceReport& r) {
  j = {{"property", r.property},
       {"params", r.params},
       {"scanned_range", r.scanned_range},
       {"passed", r.passed()},
       {"violation_count", r.violations.size()}};
  // Long violation lists are truncated to the first 16 entries.
  auto v = nlohmann::json::array();
  for (std::size_t i = 0; i < r.violations.size() && i < 16; ++i) v.push_back(r.violations[i]);
  j["violations"] = v;
  j["fitted_constant"] = r.fitted_constant ? num(*r.fitted_constant) : nlohmann::json(nullptr);
  if (!r.per_q_constants.empty()) j["per_q_constants"] = nums(r.per_q_constants);
  if (r.tail_increment) j["tail_increment"] = num(*r.tail_increment);
}

void to_json(nlohmann::json& j, const AssocEval& e) {
  j = {{"params", e.params},
       {"k", num(e.k)},
       {"value", num(e.value)},
       {"argmax_p", e.argmax_p},
       {"truncation_p", e.truncation_p}};
}

void to_json(nlohmann::json& j, const AsymptoticBracket& b) {
  j = {{"k", num(b.k)},
       {"lower_exponent", num(b.lower_exponent)},
       {"upper_exponent", num(b.upper_exponent)},
       {"c_tsh", num(b.c_tsh)}};
}

void to_json(nlohmann::json& j, const DerivativeNorms& d) {
  j = {{"norms", nums(d.norms)}, {"noise", nums(d.noise)}, {"fitted_cg", num(d.fitted_cg)}, {"warnings", d.warnings}};
}

void to_json(nlohmann::json& j, const DerivativeCertificate& c) {
  j = {{"orders", c.orders},
       {"sup_norms", nums(c.sup_norms)},
       {"noise", nums(c.noise)},
       {"amplitude", num(c.amplitude)},
       {"fitted_cf", num(c.fitted_cf)},
       {"params", c.params},
       {"warnings", c.warnings}};
}

void to_json(nlohmann::json& j, const MomentReport& r) {
  j = {{"orders", r.orders},
       {"sup_moments", nums(r.sup_moments)},
       {"integrated_moments", nums(r.integrated_moments)},
       {"fitted_cfg", num(r.fitted_cfg)},
       {"growth_exponent", num(r.growth_exponent)},
       {"compatible", r.compatible},
       {"params", r.params}};
}

void to_json(nlohmann::json& j, const EnvelopeMargin& m) {
  j = {{"params", m.params},
       {"passed", m.passed},
       {"log_margin", num(m.log_margin)},
       {"log_normalized", num(m.log_normalized)},
       {"threshold", num(m.threshold)},
       {"tightest_x", num(m.tightest_x)},
       {"tightest_xi", num(m.tightest_xi)},
       {"empty", m.empty}};
}

void to_json(nlohmann::json& j, const BeurlingReport& r) {
  j = {{"per_h", r.per_h}, {"roumieu", r.roumieu}, {"beurling", r.beurling}};
}

void to_json(nlohmann::json& j, const DecayFit& f) {
  j = {{"model", to_string(f.model)},
       {"tau_hat", num(f.tau_hat)},
       {"sigma_hat", num(f.sigma_hat)},
       {"amplitude", num(f.amplitude)},
       {"slope", num(f.slope)},
       {"r_squared", num(f.r_squared)},
       {"xi_range", {num(f.xi_lo), num(f.xi_hi)}},
       {"points", f.points}};
}

void to_json(nlohmann::json& j, const WavefrontCell& c) {
  j = {{"x_center", num(c.x_center)},
       {"direction", to_string(c.direction)},
       {"singular", c.singular},
       {"envelope_margin", num(c.envelope_margin)},
       {"log_margin", num(c.log_margin)},
       {"log_margin_h", nums(c.log_margin_h)}};
  j["fit"] = c.fit ? nlohmann::json(*c.fit) : nlohmann::json(nullptr);
}

void to_json(nlohmann::json& j, const Interval& i) { j = {num(i.lo), num(i.hi)}; }

void to_json(nlohmann::json& j, const WaveFrontReport& r) {
  j = {{"params", r.params},
       {"window_id", r.window_id},
       {"window_radius", num(r.window_radius)},
       {"hop", num(r.hop)},
       {"threshold", num(r.threshold)},
       {"mode", to_string(r.mode)},
       {"cone", {num(r.xi_min), num(r.xi_max)}},
       {"reference", {{"h_grid", nums(r.reference.h_grid)}, {"log_margin", nums(r.reference.log_margin)}}},
       {"singular_support", singular_support(r)},
       {"cells", r.cells}};
}

void to_json(nlohmann::json& j, const CutoffCheck& c) {
  j = {{"window_ids", c.window_ids},
       {"supports", c.supports},
       {"disagreements", nums(c.disagreements)},
       {"passed", c.passed}};
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace gev
