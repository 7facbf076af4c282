#include "gev/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "gev/associated_function.hpp"
#include "gev/corpus.hpp"
#include "gev/errors.hpp"
#include "gev/gevrey_sequence.hpp"
#include "gev/lambert_w.hpp"
#include "gev/regularity.hpp"
#include "gev/report_json.hpp"
#include "gev/stft.hpp"
#include "gev/wavefront.hpp"

namespace gev {

namespace {

using nlohmann::json;

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

json suite(const std::string& name, bool passed, json metrics) {
  return {{"name", name}, {"passed", passed}, {"metrics", std::move(metrics)}};
}

// Uniform in [0, 1) from the top 53 bits, identical on every platform.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

json run_sequences() {
  constexpr std::uint64_t kPMax = 10000;
  constexpr double kDrift = 0.01;
  bool ok = true;
  auto cases = json::array();
  for (double tau : {0.5, 1.0, 2.0}) {
    for (double sigma : {1.2, 1.5, 2.0, 3.0}) {
      const GevreyParams g{tau, sigma, 1.0};
      const auto m1 = check_m1_logconvex(g, kPMax);
      const auto m3 = check_m3prime(g, kPMax);
      const auto a = check_m2bar(g, 100, 100);
      const auto b = check_m2bar(g, 200, 200);
      const double ca = a.fitted_constant.value_or(0.0);
      const double cb = b.fitted_constant.value_or(0.0);
      const double drift = std::fabs(cb - ca) / std::max(std::fabs(ca), 1e-300);
      const bool pass = m1.passed() && m3.passed() && drift <= kDrift;
      ok = ok && pass;
      cases.push_back({{"params", g},
                       {"m1_violations", m1.violations.size()},
                       {"m3prime_violations", m3.violations.size()},
                       {"m3prime_tail_increment", num(m3.tail_increment.value_or(0.0))},
                       {"m2bar_constant_100", num(ca)},
                       {"m2bar_constant_200", num(cb)},
                       {"m2bar_drift", num(drift)},
                       {"passed", pass}});
    }
  }
  return suite("sequences", ok, {{"p_max", kPMax}, {"drift_tolerance", kDrift}, {"cases", cases}});
}

json run_lambert() {
  constexpr std::size_t kPoints = 1000000;
  constexpr double kResidual = 1e-12;
  constexpr double kEquality = 1e-12;
  auto xs = log_grid(1e-12, 1e12, kPoints - 1);
  xs.insert(xs.begin(), 0.0);
  std::vector<double> res(xs.size());
  std::vector<double> lo_gap(xs.size(), INFINITY);
  std::vector<double> hi_gap(xs.size(), INFINITY);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x = xs[i];
    const double w = lambert_w0(x);
    res[i] = std::fabs(w * std::exp(w) - x) / std::max(1.0, x);
    if (x >= M_E) {
      const auto br = lambert_bracket(x);
      lo_gap[i] = w - br.lower;
      hi_gap[i] = br.upper - w;
    }
  }
  const double worst = *std::max_element(res.begin(), res.end());
  const double min_lo = *std::min_element(lo_gap.begin(), lo_gap.end());
  const double min_hi = *std::min_element(hi_gap.begin(), hi_gap.end());
  // Strictness away from x = e: the bracket is an equality only there.
  double strict = INFINITY;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] > M_E * (1.0 + 1e-3)) strict = std::min({strict, lo_gap[i], hi_gap[i]});
  }
  const double we = lambert_w0(M_E);
  const auto be = lambert_bracket(M_E);
  const double at_e = std::max(std::fabs(we - be.lower), std::fabs(be.upper - we));
  const bool ok = worst <= kResidual && min_lo >= -kEquality && min_hi >= -kEquality && at_e <= kEquality &&
                  strict > kEquality;
  return suite("lambert", ok,
               {{"points", xs.size()},
                {"max_scaled_residual", num(worst)},
                {"min_lower_gap", num(min_lo)},
                {"min_upper_gap", num(min_hi)},
                {"min_gap_away_from_e", num(strict)},
                {"deviation_at_e", num(at_e)}});
}

// Closed form of the sigma = 1 case on k in [e, 1e8].
json gevrey_closed_form(bool& ok) {
  auto out = json::array();
  const auto ks = log_grid(M_E, 1e8, 1000);
  for (double tau : {0.5, 1.0, 2.0}) {
    const GevreyParams g{tau, 1.0, 1.0};
    const auto t = assoc_values(g, ks);
    double gap = 0.0;
    double excess = -INFINITY;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const double c = assoc_t_gevrey_limit(tau, ks[i]);
      gap = std::max(gap, std::fabs(t[i] - c));
      excess = std::max(excess, (t[i] - c) / (c * std::numeric_limits<double>::epsilon()));
    }
    // Up to 4 ulps of rounding on the comparison.
    const bool pass = gap <= tau && excess <= 4.0;
    ok = ok && pass;
    out.push_back({{"tau", tau}, {"max_gap", num(gap)}, {"gap_limit", tau}, {"max_ulps_over", num(excess)},
                   {"passed", pass}});
  }
  return out;
}

// Constants of the two-sided bracket per decade of k in [e^2, 1e12]; the drift
// is the largest increase from one decade to the next, relative to the lower
// exponent at the decade start.
json bracket_drift(bool& ok) {
  constexpr double kDrift = 0.05;
  constexpr int kPerDecade = 200;
  auto out = json::array();
  for (double h : {0.5, 1.0, 2.0}) {
    const GevreyParams g{1.0, 1.5, h};
    std::vector<double> c1;
    std::vector<double> c2;
    std::vector<double> start;
    for (int d = 0; d < 12; ++d) {
      const double lo = std::max(M_E * M_E, std::pow(10.0, d));
      const double hi = std::pow(10.0, d + 1);
      if (hi <= lo) continue;
      const auto ks = log_grid(lo, hi, kPerDecade);
      const auto t = assoc_values(g, ks);
      double a = -INFINITY;
      double b = -INFINITY;
      for (std::size_t i = 0; i < ks.size(); ++i) {
        const auto br = assoc_bracket(g, ks[i]);
        a = std::max(a, br.lower_exponent - t[i]);
        b = std::max(b, t[i] - br.upper_exponent);
      }
      c1.push_back(a);
      c2.push_back(b);
      start.push_back(assoc_bracket(g, lo).lower_exponent);
    }
    double worst = 0.0;
    for (std::size_t d = 1; d < c1.size(); ++d) {
      const double scale = std::fabs(start[d]);
      worst = std::max(worst, std::max({0.0, c1[d] - c1[d - 1], c2[d] - c2[d - 1]}) / scale);
    }
    const double gc1 = *std::max_element(c1.begin(), c1.end());
    const double gc2 = *std::max_element(c2.begin(), c2.end());
    const bool pass = worst < kDrift;
    ok = ok && pass;
    out.push_back({{"params", g},
                   {"c1", num(gc1)},
                   {"c2", num(gc2)},
                   {"max_decade_growth", num(worst)},
                   {"drift_limit", kDrift},
                   {"passed", pass}});
  }
  return out;
}

// assoc_t against exhaustive evaluation up to 10 times its truncation index.
json oracle_equivalence(bool& ok) {
  constexpr int kDraws = 1000;
  std::mt19937_64 rng(20240611);
  std::vector<GevreyParams> gs(kDraws);
  std::vector<double> ks(kDraws);
  for (int i = 0; i < kDraws; ++i) {
    gs[i].tau = 0.3 + 2.7 * unit(rng);
    gs[i].sigma = 1.05 + 1.95 * unit(rng);
    gs[i].h = std::exp(std::log(0.25) + std::log(16.0) * unit(rng));
    ks[i] = std::exp(std::log(1e10) * unit(rng));
  }
  std::vector<int> mismatch(kDraws, 0);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < kDraws; ++i) {
    const auto e = assoc_t(gs[i], ks[i]);
    const long double lh = std::log(static_cast<long double>(gs[i].h));
    const long double lk = std::log(static_cast<long double>(ks[i]));
    long double best = 0.0L;
    std::uint64_t arg = 0;
    const std::uint64_t p_max = 10 * std::max<std::uint64_t>(e.truncation_p, 1);
    for (std::uint64_t p = 1; p <= p_max; ++p) {
      const long double v = assoc_term(gs[i].tau, gs[i].sigma, lh, lk, p);
      if (v > best) {
        best = v;
        arg = p;
      }
    }
    mismatch[i] = (arg != e.argmax_p || static_cast<double>(best) != e.value) ? 1 : 0;
  }
  int bad = 0;
  for (int m : mismatch) bad += m;
  ok = ok && bad == 0;
  return {{"draws", kDraws}, {"mismatches", bad}, {"passed", bad == 0}};
}

json run_assoc_bracket() {
  bool ok = true;
  json m;
  m["gevrey_closed_form"] = gevrey_closed_form(ok);
  m["bracket_constants"] = bracket_drift(ok);
  m["oracle_equivalence"] = oracle_equivalence(ok);
  return suite("assoc-bracket", ok, m);
}

double relative_l2(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num2 = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num2 += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den > 0.0 ? std::sqrt(num2 / den) : std::sqrt(num2);
}

json run_stft_roundtrip() {
  constexpr double kPair = 1e-6;
  constexpr double kFactor = 1e-10;
  constexpr double kRound = 1e-6;
  bool ok = true;
  json m;

  SignalSpec gs;
  gs.kind = SignalKind::gaussian;
  gs.dt = 1.0 / 256.0;
  gs.n = 4096;
  const auto f = generate(gs);
  const auto g = make_gaussian(gs.dt, 2048);
  {
    const auto v = stft(f, g, 1.0 / 16.0, 2048);
    double worst = 0.0;
    for (std::size_t i = 0; i < v.n_x; ++i) {
      const double x = v.x_axis[i];
      if (std::fabs(x) > 3.0) continue;
      for (std::size_t j = 0; j < v.n_xi; ++j) {
        const double xi = v.xi_axis[j];
        if (std::fabs(xi) > 3.0) continue;
        worst = std::max(worst, std::fabs(std::abs(v.at(i, j)) - std::exp(-M_PI * (x * x + xi * xi) / 2.0)));
      }
    }
    ok = ok && worst <= kPair;
    m["gaussian_pair"] = {{"max_abs_error", num(worst)}, {"limit", kPair}};
  }
  {
    const double dt = 1.0 / 128.0;
    const auto bump = make_gevrey_bump({1.0, 1.5, 1.0}, 0.75, dt, 24);
    const auto gauss = make_gaussian(dt, 1024);
    double worst = 0.0;
    for (auto kind : {SignalKind::gaussian, SignalKind::gaussian_cosine, SignalKind::heaviside, SignalKind::abs_t,
                      SignalKind::sawtooth, SignalKind::sine, SignalKind::bump, SignalKind::envelope_synth,
                      SignalKind::gevrey_synth, SignalKind::two_step}) {
      SignalSpec s;
      s.kind = kind;
      s.dt = dt;
      s.n = 2048;
      if (kind == SignalKind::envelope_synth) s.params = {1.0, 1.5, 1.0};
      if (kind == SignalKind::gevrey_synth) s.params = {1.0, 1.0, 1.0};
      const auto u = generate(s);
      for (const Window* w : {&bump, &gauss}) {
        const auto a = stft(u, *w, 0.125, 1024);
        const auto b = stft_via_factorization(u, *w, 0.125, 1024);
        const double scale = a.max_abs();
        double dev = 0.0;
        for (std::size_t i = 0; i < a.values.size(); ++i) dev = std::max(dev, std::abs(a.values[i] - b.values[i]));
        worst = std::max(worst, scale > 0.0 ? dev / scale : dev);
      }
    }
    ok = ok && worst <= kFactor;
    m["factorization"] = {{"max_relative_deviation", num(worst)}, {"limit", kFactor}};
  }
  {
    const auto v = stft(f, g, gs.dt, 2048);
    const auto r = istft(v, g, g);
    const double err = relative_l2(r.signal.samples, f.samples);
    SignalSpec ss;
    ss.kind = SignalKind::two_step;
    ss.dt = 1.0 / 64.0;
    ss.n = 1024;
    const auto u = generate(ss);
    const auto gu = make_gaussian(ss.dt, 512);
    const auto r2 = istft(stft(u, gu, ss.dt, 512), gu, gu);
    const double err2 = relative_l2(r2.signal.samples, u.samples);
    ok = ok && err < kRound && err2 < kRound;
    m["round_trip"] = {{"gaussian_relative_l2", num(err)}, {"two_step_relative_l2", num(err2)}, {"limit", kRound}};
  }
  return suite("stft-roundtrip", ok, m);
}

json run_classify_synthetic() {
  constexpr double kDt = 1.0 / 8192.0;
  constexpr std::size_t kN = std::size_t{1} << 18;
  constexpr std::size_t kWin = 65536;
  constexpr double kSigmaTol = 0.1;
  constexpr double kTauRel = 0.25;
  constexpr double kGevreyRel = 0.15;
  const auto g = make_gaussian(kDt, kWin);
  const auto flat = WeightSpec::unweighted();
  bool ok = true;
  auto cases = json::array();
  auto run = [&](SignalKind kind, GevreyParams p) {
    SignalSpec s;
    s.kind = kind;
    s.dt = kDt;
    s.n = kN;
    s.params = p;
    const auto grid = stft(generate(s), g, 1.0, kWin, FrameRange::interior);
    return fit_envelope(grid, flat);
  };
  for (auto [tau, sigma] : {std::pair{1.0, 1.3}, {1.0, 1.5}, {0.5, 1.7}, {2.0, 1.5}}) {
    const auto fit = run(SignalKind::envelope_synth, {tau, sigma, 1.0});
    const bool pass = std::fabs(fit.sigma_hat - sigma) <= kSigmaTol && std::fabs(fit.tau_hat / tau - 1.0) <= kTauRel;
    ok = ok && pass;
    cases.push_back({{"signal", "envelope_synth"}, {"tau", tau}, {"sigma", sigma}, {"fit", fit}, {"passed", pass}});
  }
  for (double tau : {1.0, 2.0}) {
    const auto fit = run(SignalKind::gevrey_synth, {tau, 1.0, 1.0});
    const bool pass = fit.model == DecayModel::gevrey && std::fabs(fit.tau_hat / tau - 1.0) <= kGevreyRel;
    ok = ok && pass;
    cases.push_back({{"signal", "gevrey_synth"}, {"tau", tau}, {"sigma", 1.0}, {"fit", fit}, {"passed", pass}});
  }
  return suite("classify-synthetic", ok,
               {{"dt", kDt},
                {"n", kN},
                {"sigma_tolerance", kSigmaTol},
                {"tau_relative_tolerance", kTauRel},
                {"gevrey_tau_relative_tolerance", kGevreyRel},
                {"cases", cases}});
}

json run_wavefront_corpus() {
  constexpr double kDt = 1.0 / 1024.0;
  constexpr std::size_t kN = 8192;
  constexpr double kRadius = 0.5;
  const GevreyParams params{1.0, 1.5, 1.0};
  const auto phi = default_scan_window(params, kRadius, kDt);
  WavefrontOptions opt;
  opt.fits = false;
  const auto ref = calibrate_reference(kN, kDt, phi, params, opt);
  auto make = [&](SignalKind kind) {
    SignalSpec s;
    s.kind = kind;
    s.dt = kDt;
    s.n = kN;
    return generate(s);
  };
  bool ok = true;
  auto cases = json::array();
  for (auto kind : {SignalKind::heaviside, SignalKind::abs_t, SignalKind::gaussian, SignalKind::bump,
                    SignalKind::two_step}) {
    const auto r = scan_wavefront(make(kind), phi, params, opt, &ref);
    const auto s = singular_support(r);
    bool pass = false;
    switch (kind) {
      case SignalKind::heaviside:
        pass = s.size() == 1 && s[0].lo <= 0.0 && s[0].hi >= 0.0 &&
               s[0].hi - s[0].lo <= 2.0 * kRadius + r.hop + 1e-12;
        break;
      case SignalKind::abs_t:
        pass = s.size() == 1 && s[0].lo <= 0.0 && s[0].hi >= 0.0;
        break;
      case SignalKind::two_step:
        pass = s.size() == 2 && s[0].hi < s[1].lo;
        break;
      default:
        pass = s.empty();
        break;
    }
    ok = ok && pass;
    cases.push_back({{"signal", to_string(kind)}, {"singular_support", s}, {"passed", pass}});
  }
  const auto w20 = default_scan_window(params, kRadius, kDt, 20);
  const auto w28 = default_scan_window(params, kRadius, kDt, 28);
  auto cutoff = json::array();
  for (auto kind : {SignalKind::heaviside, SignalKind::sawtooth}) {
    const auto c = cutoff_independence_check(make(kind), params, {w20, w28}, opt);
    ok = ok && c.passed;
    cutoff.push_back({{"signal", to_string(kind)}, {"check", c}});
  }
  return suite("wavefront-corpus", ok,
               {{"params", params},
                {"window_radius", kRadius},
                {"hop", opt.hop},
                {"threshold", opt.threshold},
                {"cases", cases},
                {"cutoff", cutoff}});
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"sequences",      "lambert",           "assoc-bracket",
                                              "stft-roundtrip", "classify-synthetic", "wavefront-corpus"};
  return names;
}

nlohmann::json run_suite(const std::string& name) {
  if (name == "sequences") return run_sequences();
  if (name == "lambert") return run_lambert();
  if (name == "assoc-bracket") return run_assoc_bracket();
  if (name == "stft-roundtrip") return run_stft_roundtrip();
  if (name == "classify-synthetic") return run_classify_synthetic();
  if (name == "wavefront-corpus") return run_wavefront_corpus();
  throw ConfigError("unknown_suite", "unknown verify suite '" + name + "'");
}

nlohmann::json run_scorecard(const std::string& suite) {
  std::vector<std::string> names;
  if (suite == "all") {
    names = suite_names();
  } else {
    names.push_back(suite);
  }
  auto suites = json::array();
  bool ok = true;
  for (const auto& n : names) {
    auto s = run_suite(n);
    ok = ok && s.at("passed").get<bool>();
    suites.push_back(std::move(s));
  }
  return {{"suites", suites}, {"passed", ok}};
}

}  // namespace gev
