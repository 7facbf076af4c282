#include "gev/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <tuple>
#include <utility>

#include "CLI11.hpp"
#include "json.hpp"

#include "gev/associated_function.hpp"
#include "gev/corpus.hpp"
#include "gev/errors.hpp"
#include "gev/io.hpp"
#include "gev/parallel.hpp"
#include "gev/regularity.hpp"
#include "gev/report_json.hpp"
#include "gev/stft.hpp"
#include "gev/verify.hpp"
#include "gev/wavefront.hpp"

namespace gev::cli {

namespace {

using nlohmann::json;

// Files are collected here and written only after every computation succeeded.
struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;
  std::string stdout_text;

  void add(const std::string& path, std::string content) {
    if (path.empty() || path == "-") {
      stdout_text += content;
    } else {
      files.emplace_back(path, std::move(content));
    }
  }
};

void check_output_path(const std::string& path) {
  if (path.empty() || path == "-") return;
  namespace fs = std::filesystem;
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw ConfigError("bad_output_path", "directory of '" + path + "' does not exist");
  }
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad_list", "cannot parse '" + item + "' in " + what);
    }
  }
  if (out.empty()) throw ConfigError("bad_list", what + " is empty");
  return out;
}

SignalSpec spec_from_json(const json& j) {
  static const std::vector<std::string> keys{"kind",      "dt",     "n",          "params",  "center",   "frequency",
                                             "period",    "radius", "half_width", "factors", "amplitude"};
  if (!j.is_object()) throw ConfigError("bad_signal", "signal spec must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw ConfigError("bad_signal", "unknown signal field '" + k + "'");
    }
  }
  SignalSpec s;
  try {
    s.kind = signal_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("dt")) j.at("dt").get_to(s.dt);
    if (j.contains("n")) j.at("n").get_to(s.n);
    if (j.contains("params")) s.params = j.at("params").get<GevreyParams>();
    if (j.contains("center")) j.at("center").get_to(s.center);
    if (j.contains("frequency")) j.at("frequency").get_to(s.frequency);
    if (j.contains("period")) j.at("period").get_to(s.period);
    if (j.contains("radius")) j.at("radius").get_to(s.radius);
    if (j.contains("half_width")) j.at("half_width").get_to(s.half_width);
    if (j.contains("factors")) j.at("factors").get_to(s.factors);
    if (j.contains("amplitude")) j.at("amplitude").get_to(s.amplitude);
  } catch (const json::exception& e) {
    throw ConfigError("bad_signal", std::string("signal spec: ") + e.what());
  }
  return s;
}

// A JSON spec, a CSV path or a corpus kind name with default settings.
SampledSignal load_signal(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw ConfigError("bad_signal", std::string("signal spec: ") + e.what());
    }
    return generate(spec_from_json(j));
  }
  if (std::filesystem::exists(text)) return read_signal_csv(text);
  SignalSpec s;
  try {
    s.kind = signal_kind_from_string(text);
  } catch (const ConfigError&) {
    throw ConfigError("bad_signal", "'" + text + "' is neither a file, a JSON spec nor a signal kind");
  }
  return generate(s);
}

long steps(double t, double dt) { return std::max(1L, std::lround(t / dt)); }

struct WindowArgs {
  std::string kind = "gaussian";
  std::size_t size = 0;  // gaussian samples; 0 picks half the record
  double radius = 0.75;
  double tau = 1.5;
  double sigma = 1.0;
  int factors = 24;

  void add(CLI::App* app) {
    app->add_option("--window-kind", kind, "gaussian or bump")->check(CLI::IsMember({"gaussian", "bump"}));
    app->add_option("--window-size", size, "gaussian window samples");
    app->add_option("--window-radius", radius, "bump support radius");
    app->add_option("--window-tau", tau, "bump tau");
    app->add_option("--window-sigma", sigma, "bump sigma");
    app->add_option("--window-factors", factors, "bump box count minus one");
  }

  Window make(const SampledSignal& f) const {
    if (kind == "bump") return make_gevrey_bump({tau, sigma, 1.0}, radius, f.dt, factors);
    std::size_t n = size;
    if (n == 0) n = std::max<std::size_t>(2, next_power_of_two(f.size()) / 2);
    return make_gaussian(f.dt, n);
  }
};

struct Shared {
  std::string config;
  int threads = 0;
  bool strict = false;
};

struct AssocArgs {
  double tau = 0.0;
  double sigma = 1.0;
  double h = 1.0;
  double k_min = 1.0;
  double k_max = 1e6;
  std::size_t points = 100;
  bool log_grid = false;
  std::string out;
};

struct WindowCmd {
  std::string kind = "bump";
  double tau = 1.5;
  double sigma = 1.0;
  double h = 1.0;
  double radius = 0.75;
  double dt = 1.0 / 256.0;
  std::size_t n = 1024;
  int factors = 24;
  std::string normalization = "unit_mass";
  std::string emit;
  std::string report;
};

struct StftCmd {
  std::string signal;
  WindowArgs window;
  double hop = 0.0;
  std::size_t nfreq = 0;
  std::string frames = "full";
  std::string emit_grid;
  std::string norm;
  std::string report;
  std::string reconstruct;
  bool adjoint_norm = false;
};

struct ClassifyCmd {
  std::string signal;
  WindowArgs window;
  double hop = 0.0;
  std::size_t nfreq = 0;
  std::string m_weight = "unweighted";
  std::string sigma_grid;
  int alpha_max = 8;
  std::string report;
};

struct WavefrontCmd {
  std::string signal;
  double tau = 1.0;
  double sigma = 1.5;
  double h = 1.0;
  double radius = 0.5;
  int factors = 36;
  double hop = 0.125;
  double threshold = 1e3;
  std::string mode = "roumieu";
  bool no_fits = false;
  std::string report;
  std::string emit_margins;
};

struct VerifyCmd {
  std::string suite = "all";
  std::string report;
};

int run_assoc(const AssocArgs& a, Outputs& out) {
  const GevreyParams g{a.tau, a.sigma, a.h};
  g.validate();
  if (!(a.k_min > 0.0) || !(a.k_max >= a.k_min)) throw ConfigError("bad_range", "need 0 < k-min <= k-max");
  if (a.points < 1 || (a.points < 2 && a.k_max > a.k_min)) throw ConfigError("bad_range", "points must be >= 2");
  std::vector<double> ks(a.points, a.k_min);
  for (std::size_t i = 1; i < a.points; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(a.points - 1);
    ks[i] = a.log_grid ? std::exp(std::log(a.k_min) + u * (std::log(a.k_max) - std::log(a.k_min)))
                       : a.k_min + u * (a.k_max - a.k_min);
  }
  if (a.points > 1) ks.back() = a.k_max;
  std::vector<AssocEval> evals(ks.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t i = 0; i < ks.size(); ++i) evals[i] = assoc_t(g, ks[i]);
  std::vector<std::vector<double>> rows;
  for (const auto& e : evals) {
    double lo = NAN;
    double hi = NAN;
    if (g.sigma > 1.0 && e.k > M_E) {
      const auto b = assoc_bracket(g, e.k);
      lo = b.lower_exponent;
      hi = b.upper_exponent;
    }
    rows.push_back({e.k, e.value, static_cast<double>(e.argmax_p), lo, hi});
  }
  out.add(a.out, to_csv({"k", "T", "argmax_p", "lower_exponent", "upper_exponent"}, rows));
  return 0;
}

BumpNormalization normalization_from_string(const std::string& s) {
  if (s == "box_product") return BumpNormalization::box_product;
  if (s == "unit_mass") return BumpNormalization::unit_mass;
  if (s == "unit_peak") return BumpNormalization::unit_peak;
  if (s == "unit_l2") return BumpNormalization::unit_l2;
  throw ConfigError("bad_normalization", "unknown normalization '" + s + "'");
}

int run_window(const WindowCmd& a, Outputs& out) {
  const GevreyParams g{a.tau, a.sigma, a.h};
  const Window w = a.kind == "gaussian" ? make_gaussian(a.dt, a.n)
                                        : make_gevrey_bump(g, a.radius, a.dt, a.factors,
                                                           normalization_from_string(a.normalization));
  std::vector<std::vector<double>> rows;
  rows.reserve(w.size());
  for (std::size_t m = 0; m < w.size(); ++m) rows.push_back({w.coordinate(m), w.samples[m].real(), w.samples[m].imag()});
  out.add(a.emit, to_csv({"s", "re", "im"}, rows));
  if (!a.report.empty()) {
    json r = {{"id", w.id},
              {"kind", to_string(w.kind)},
              {"size", w.size()},
              {"dt", w.dt},
              {"l2_norm", w.l2_norm()},
              {"compact", w.compact()}};
    if (w.compact()) {
      r["params"] = w.params;
      r["support_radius"] = w.support_radius;
      r["factors"] = w.factors;
      r["widths"] = w.widths;
      r["derivative_norms"] = estimate_derivative_norms(w, 6, WeightSpec::unweighted(), w.params);
    }
    out.add(a.report, dump(r));
  }
  return 0;
}

// Parses "p,q,weight" with p, q numbers or inf.
std::tuple<double, double, WeightSpec> parse_norm(const std::string& text) {
  const auto a = text.find(',');
  const auto b = a == std::string::npos ? a : text.find(',', a + 1);
  if (b == std::string::npos) throw ConfigError("bad_norm", "expected p,q,weight");
  auto exponent = [&](const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    const auto v = parse_list(s, "norm");
    if (v.size() != 1 || !(v[0] >= 1.0)) throw ConfigError("bad_norm", "exponent must be >= 1 or inf");
    return v[0];
  };
  return {exponent(text.substr(0, a)), exponent(text.substr(a + 1, b - a - 1)), WeightSpec::parse(text.substr(b + 1))};
}

int run_stft(const StftCmd& a, const Shared& s, Outputs& out) {
  const auto f = load_signal(a.signal);
  const auto w = a.window.make(f);
  const double hop = a.hop > 0.0 ? a.hop : static_cast<double>(steps(0.125, f.dt)) * f.dt;
  const std::size_t nfreq = a.nfreq ? a.nfreq : next_power_of_two(w.size());
  if (a.frames != "full" && a.frames != "interior") throw ConfigError("bad_frames", "frames must be full or interior");
  std::optional<std::tuple<double, double, WeightSpec>> norm;
  if (!a.norm.empty()) norm = parse_norm(a.norm);
  const auto grid = stft(f, w, hop, nfreq, a.frames == "full" ? FrameRange::full : FrameRange::interior);

  json r = {{"signal", {{"n", f.size()}, {"dt", f.dt}, {"t0", f.t0}}},
            {"window", w.id},
            {"hop", grid.hop},
            {"n_x", grid.n_x},
            {"n_xi", grid.n_xi},
            {"frames", a.frames},
            {"max_abs", grid.max_abs()}};
  if (norm) {
    const auto& [p, q, m] = *norm;
    const double v = modulation_norm(grid, p, q, m);
    r["norm"] = {{"p", std::isfinite(p) ? json(p) : json("inf")},
                 {"q", std::isfinite(q) ? json(q) : json("inf")},
                 {"weight", m.to_string()},
                 {"value", v}};
  }
  if (a.adjoint_norm) {
    r["adjoint_norm"] = adjoint_operator_norm(f.size(), f.dt, w, hop, nfreq,
                                              a.frames == "full" ? FrameRange::full : FrameRange::interior);
  }
  if (!a.emit_grid.empty()) {
    std::vector<std::vector<double>> rows;
    rows.reserve(grid.values.size());
    for (std::size_t i = 0; i < grid.n_x; ++i) {
      for (std::size_t j = 0; j < grid.n_xi; ++j) {
        const auto v = grid.at(i, j);
        rows.push_back({grid.x_axis[i], grid.xi_axis[j], std::abs(v), std::arg(v)});
      }
    }
    out.add(a.emit_grid, to_csv({"x", "xi", "abs", "arg"}, rows));
  }
  if (!a.reconstruct.empty()) {
    const auto rec = istft(grid, w, w);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t n = 0; n < f.size(); ++n) {
      num += std::norm(rec.signal.samples[n] - f.samples[n]);
      den += std::norm(f.samples[n]);
    }
    r["reconstruction"] = {{"relative_l2_error", den > 0.0 ? std::sqrt(num / den) : std::sqrt(num)},
                           {"ripple", rec.ripple},
                           {"warnings", rec.warnings}};
    if (s.strict && !rec.warnings.empty()) throw QualityError("reconstruction: " + rec.warnings.front());
    std::vector<std::vector<double>> rows;
    for (std::size_t n = 0; n < rec.signal.size(); ++n) {
      rows.push_back({rec.signal.time(n), rec.signal.samples[n].real(), rec.signal.samples[n].imag()});
    }
    out.add(a.reconstruct, to_csv({"t", "re", "im"}, rows));
  }
  if (!a.report.empty() || (a.emit_grid.empty() && a.reconstruct.empty())) out.add(a.report, dump(r));
  return 0;
}

int run_classify(const ClassifyCmd& a, const Shared& s, Outputs& out) {
  const auto m = WeightSpec::parse(a.m_weight);
  FitOptions opt;
  if (!a.sigma_grid.empty()) opt.sigmas = parse_list(a.sigma_grid, "sigma-grid");
  const auto f = load_signal(a.signal);
  const auto w = a.window.make(f);
  const double hop = a.hop > 0.0 ? a.hop
                                  : static_cast<double>(steps(w.dt * static_cast<double>(w.size()) / 8.0, f.dt)) * f.dt;
  const std::size_t nfreq = a.nfreq ? a.nfreq : next_power_of_two(w.size());
  const auto grid = stft(f, w, hop, nfreq, FrameRange::interior);
  const auto fit = fit_envelope(grid, m, opt);
  const GevreyParams fitted{fit.tau_hat, fit.sigma_hat, 1.0};

  const auto c1 = probe_condition_i(f, a.alpha_max, m, fitted);
  const auto c2 = probe_condition_ii(grid, m, a.alpha_max, fitted);
  const auto c3 = probe_condition_iii(grid, m, fitted);
  if (s.strict && !c1.warnings.empty()) throw QualityError("condition i: " + c1.warnings.front());

  json r = {{"model", to_string(fit.model)},
            {"tau_hat", fit.tau_hat},
            {"sigma_hat", fit.sigma_hat},
            {"r_squared", fit.r_squared},
            {"fit", fit},
            {"window", w.id},
            {"hop", grid.hop},
            {"weight", m.to_string()},
            {"conditions", {{"i", c1}, {"ii", c2}, {"iii", c3}}}};
  out.add(a.report, dump(r));
  return 0;
}

int run_wavefront(const WavefrontCmd& a, Outputs& out) {
  const GevreyParams g{a.tau, a.sigma, a.h};
  g.validate();
  WavefrontOptions opt;
  opt.hop = a.hop;
  opt.threshold = a.threshold;
  opt.mode = scan_mode_from_string(a.mode);
  opt.fits = !a.no_fits;
  const auto u = load_signal(a.signal);
  const auto phi = default_scan_window(g, a.radius, u.dt, a.factors);
  const auto rep = scan_wavefront(u, phi, g, opt);
  if (!a.emit_margins.empty()) {
    std::vector<std::vector<double>> rows;
    for (const auto& c : rep.cells) {
      rows.push_back({c.x_center, c.direction == Direction::positive ? 1.0 : -1.0, c.log_margin,
                      c.singular ? 1.0 : 0.0});
    }
    out.add(a.emit_margins, to_csv({"x", "direction", "log_margin", "singular"}, rows));
  }
  if (!a.report.empty() || a.emit_margins.empty()) out.add(a.report, dump(json(rep)));
  return 0;
}

int run_verify(const VerifyCmd& a, Outputs& out) {
  const auto& names = suite_names();
  if (a.suite != "all" && std::find(names.begin(), names.end(), a.suite) == names.end()) {
    throw ConfigError("unknown_suite", "unknown verify suite '" + a.suite + "'");
  }
  const auto card = run_scorecard(a.suite);
  out.add(a.report, dump(card));
  return card.at("passed").get<bool>() ? 0 : 3;
}

std::string config_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s;
    for (const auto& e : v) {
      if (!s.empty()) s += ',';
      s += e.is_string() ? e.get<std::string>() : e.dump();
    }
    return s;
  }
  return v.dump();
}

bool given(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

// Appends config-file keys that were not given on the command line.
void inject_config(CLI::App& app, std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw ConfigError("io_error", "cannot open config '" + path + "'");
  json cfg;
  try {
    cfg = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("bad_config", std::string("config: ") + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("bad_config", "config must be a JSON object");
  CLI::App* sub = nullptr;
  for (const auto& a : args) {
    for (auto* s : app.get_subcommands({})) {
      if (s->get_name() == a) sub = s;
    }
    if (sub) break;
  }
  for (const auto& [key, value] : cfg.items()) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    const std::string flag = "--" + name;
    const CLI::Option* opt = sub ? sub->get_option_no_throw(flag) : nullptr;
    if (!opt) opt = app.get_option_no_throw(flag);
    if (!opt || name == "config") throw ConfigError("unknown_config_key", "config key '" + key + "' has no flag");
    if (given(args, flag)) continue;
    if (opt->get_expected_max() == 0) {
      if (!value.is_boolean()) throw ConfigError("bad_config", "config key '" + key + "' must be a boolean");
      if (value.get<bool>()) args.push_back(flag);
      continue;
    }
    args.push_back(flag);
    args.push_back(config_value(value));
  }
}

json error_json(const std::string& code, const std::string& message, const std::string& subcommand) {
  return {{"code", code}, {"message", message}, {"context", {{"subcommand", subcommand}}}};
}

}  // namespace

int run(const std::vector<std::string>& input, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gevrey-class short-time Fourier analysis"};
  app.set_help_flag("--help", "print help and exit");
  app.fallthrough();
  app.require_subcommand(1);
  Shared shared;
  app.add_option("--config", shared.config, "JSON file of flag values; flags win");
  app.add_option("--threads", shared.threads, "OpenMP threads, 0 for all cores")->check(CLI::NonNegativeNumber);
  app.add_flag("--strict", shared.strict, "treat quality warnings as errors");

  AssocArgs assoc;
  auto* c_assoc = app.add_subcommand("assoc", "associated function on a k grid (CSV)");
  c_assoc->add_option("--tau", assoc.tau)->required();
  c_assoc->add_option("--sigma", assoc.sigma);
  c_assoc->add_option("--h", assoc.h);
  c_assoc->add_option("--k-min", assoc.k_min);
  c_assoc->add_option("--k-max", assoc.k_max);
  c_assoc->add_option("--points", assoc.points);
  c_assoc->add_flag("--log-grid", assoc.log_grid);
  c_assoc->add_option("--out", assoc.out, "CSV path, stdout when absent");

  WindowCmd window;
  auto* c_window = app.add_subcommand("window", "sampled analysis window (CSV)");
  c_window->add_option("--kind", window.kind)->check(CLI::IsMember({"gaussian", "bump"}));
  c_window->add_option("--tau", window.tau);
  c_window->add_option("--sigma", window.sigma);
  c_window->add_option("--h", window.h);
  c_window->add_option("--radius", window.radius);
  c_window->add_option("--dt", window.dt);
  c_window->add_option("--n", window.n, "gaussian samples");
  c_window->add_option("--factors", window.factors);
  c_window->add_option("--normalization", window.normalization);
  c_window->add_option("--emit", window.emit, "CSV path, stdout when absent");
  c_window->add_option("--report", window.report);

  StftCmd st;
  auto* c_stft = app.add_subcommand("stft", "short-time Fourier transform of a signal");
  c_stft->add_option("--signal", st.signal, "CSV path, corpus kind or JSON spec")->required();
  st.window.add(c_stft);
  c_stft->add_option("--hop", st.hop, "frame step in time units");
  c_stft->add_option("--nfreq", st.nfreq);
  c_stft->add_option("--frames", st.frames, "full or interior");
  c_stft->add_option("--emit-grid", st.emit_grid, "CSV of x, xi, |V|, arg V");
  c_stft->add_option("--norm", st.norm, "p,q,weight");
  c_stft->add_option("--report", st.report);
  c_stft->add_option("--reconstruct", st.reconstruct, "CSV of the inverted signal");
  c_stft->add_flag("--adjoint-norm", st.adjoint_norm, "report the measured norm of the adjoint transform");

  ClassifyCmd cl;
  auto* c_classify = app.add_subcommand("classify", "fit the frequency decay class of a signal");
  c_classify->add_option("--signal", cl.signal)->required();
  cl.window.add(c_classify);
  c_classify->add_option("--hop", cl.hop);
  c_classify->add_option("--nfreq", cl.nfreq);
  c_classify->add_option("--m-weight", cl.m_weight, "unweighted, poly:t:s or exp:s");
  c_classify->add_option("--sigma-grid", cl.sigma_grid, "comma-separated sigma values");
  c_classify->add_option("--alpha-max", cl.alpha_max);
  c_classify->add_option("--report", cl.report);

  WavefrontCmd wf;
  auto* c_wave = app.add_subcommand("wavefront", "scan positions and directions for singular cells");
  c_wave->add_option("--signal", wf.signal)->required();
  c_wave->add_option("--tau", wf.tau);
  c_wave->add_option("--sigma", wf.sigma);
  c_wave->add_option("--h", wf.h);
  c_wave->add_option("--window-radius", wf.radius);
  c_wave->add_option("--window-factors", wf.factors);
  c_wave->add_option("--hop", wf.hop);
  c_wave->add_option("--threshold", wf.threshold);
  c_wave->add_option("--mode", wf.mode)->check(CLI::IsMember({"roumieu", "beurling"}));
  c_wave->add_flag("--no-fits", wf.no_fits, "skip per-cell decay fits");
  c_wave->add_option("--report", wf.report);
  c_wave->add_option("--emit-margins", wf.emit_margins, "CSV of x, direction, log margin");

  VerifyCmd vf;
  auto* c_verify = app.add_subcommand("verify", "run property suites and print a JSON scorecard");
  c_verify->add_option("--suite", vf.suite);
  c_verify->add_option("--report", vf.report);

  std::string subcommand;
  for (const auto& a : input) {
    for (auto* s : app.get_subcommands({})) {
      if (subcommand.empty() && s->get_name() == a) subcommand = a;
    }
  }

  try {
    std::vector<std::string> args = input;
    inject_config(app, args);
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
      err << error_json("usage_error", e.what(), subcommand).dump() << "\n";
      return 2;
    }
    if (shared.threads > 0) set_threads(shared.threads);

    for (const auto* p : {&assoc.out, &window.emit, &window.report, &st.emit_grid, &st.report, &st.reconstruct,
                          &cl.report, &wf.report, &wf.emit_margins, &vf.report}) {
      check_output_path(*p);
    }

    Outputs outputs;
    int code = 0;
    if (c_assoc->parsed()) code = run_assoc(assoc, outputs);
    if (c_window->parsed()) code = run_window(window, outputs);
    if (c_stft->parsed()) code = run_stft(st, shared, outputs);
    if (c_classify->parsed()) code = run_classify(cl, shared, outputs);
    if (c_wave->parsed()) code = run_wavefront(wf, outputs);
    if (c_verify->parsed()) code = run_verify(vf, outputs);
    for (const auto& [path, content] : outputs.files) write_atomic(path, content);
    out << outputs.stdout_text;
    out.flush();
    return code;
  } catch (const ConfigError& e) {
    err << error_json(e.code(), e.what(), subcommand).dump() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << error_json(e.code(), e.what(), subcommand).dump() << "\n";
    return 2;
  } catch (const QualityError& e) {
    err << error_json(e.code(), e.what(), subcommand).dump() << "\n";
    return 3;
  } catch (const ConvergenceError& e) {
    err << error_json(e.code(), e.what(), subcommand).dump() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << error_json("internal_error", e.what(), subcommand).dump() << "\n";
    return 1;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace gev::cli
