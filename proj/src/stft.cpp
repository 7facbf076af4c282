#include "gev/stft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gev/errors.hpp"
#include "gev/parallel.hpp"

namespace gev {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Layout {
  std::size_t n_freq = 0;
  long hop_samples = 1;
  std::vector<long> centers;
};

Layout plan_frames(const SampledSignal& f, const Window& g, double hop, std::size_t n_freq, FrameRange frames) {
  f.validate();
  if (g.samples.empty()) throw DomainError("stft: empty window");
  if (!(std::fabs(g.dt - f.dt) <= 1e-12 * f.dt)) throw DomainError("dt_mismatch", "stft: window and signal dt differ");
  if (g.size() > f.size()) throw DomainError("stft: window longer than signal");
  if (!is_power_of_two(n_freq) || n_freq < g.size()) {
    throw DomainError("stft: n_freq must be a power of two >= window length");
  }
  if (!std::isfinite(hop) || hop < f.dt * (1.0 - 1e-12)) throw DomainError("stft: hop must be >= dt");
  const double ratio = hop / f.dt;
  const double rounded = std::round(ratio);
  if (std::fabs(ratio - rounded) > 1e-9 * ratio) throw DomainError("stft: hop must be an integer multiple of dt");

  Layout lay;
  lay.n_freq = n_freq;
  lay.hop_samples = static_cast<long>(rounded);
  const long n = static_cast<long>(f.size());
  const long len = static_cast<long>(g.size());
  long lo = 0;
  long hi = n - 1;
  if (frames == FrameRange::interior) {
    lo = g.origin;
    hi = n - len + g.origin;
  }
  const long first = ((lo + lay.hop_samples - 1) / lay.hop_samples) * lay.hop_samples;
  for (long c = first; c <= hi; c += lay.hop_samples) lay.centers.push_back(c);
  if (lay.centers.empty()) throw DomainError("stft: no frame positions for this record and window");
  return lay;
}

StftGrid empty_grid(const SampledSignal& f, const Window& g, double hop, const Layout& lay) {
  StftGrid grid;
  grid.n_x = lay.centers.size();
  grid.n_xi = lay.n_freq;
  grid.values.assign(grid.n_x * grid.n_xi, cplx(0.0, 0.0));
  grid.window_id = g.id;
  grid.dt = f.dt;
  grid.hop = static_cast<double>(lay.hop_samples) * f.dt;
  (void)hop;
  grid.frame_center = lay.centers;
  grid.window_origin = g.origin;
  grid.window_length = g.size();
  grid.signal_t0 = f.t0;
  grid.signal_n = f.size();
  grid.x_axis.resize(grid.n_x);
  for (std::size_t i = 0; i < grid.n_x; ++i) grid.x_axis[i] = f.time(static_cast<std::size_t>(lay.centers[i]));
  grid.xi_axis.resize(grid.n_xi);
  const long half = static_cast<long>(lay.n_freq / 2);
  for (std::size_t j = 0; j < grid.n_xi; ++j) {
    grid.xi_axis[j] = static_cast<double>(static_cast<long>(j) - half) / (static_cast<double>(lay.n_freq) * f.dt);
  }
  return grid;
}

// Phase -2 pi (t0 + start dt) xi_k with xi_k = k/(n dt), reduced exactly:
// frac(k t0/(n dt)) + ((k start) mod n)/n.
double phase_angle(long k, long start, double t0, double dt, std::size_t n) {
  const long nn = static_cast<long>(n);
  const long double a = static_cast<long double>(k) * static_cast<long double>(t0) /
                        (static_cast<long double>(n) * static_cast<long double>(dt));
  const long double fa = a - std::floor(a);
  long r = (k * start) % nn;
  if (r < 0) r += nn;
  const long double turns = fa + static_cast<long double>(r) / static_cast<long double>(nn);
  return static_cast<double>(-2.0L * std::numbers::pi_v<long double> * (turns - std::floor(turns)));
}

void stft_frame(const SampledSignal& f, const Window& g, const Layout& lay, std::size_t i, std::vector<cplx>& buf,
                std::vector<cplx>& spec, StftGrid& grid) {
  const long n = static_cast<long>(f.size());
  const long len = static_cast<long>(g.size());
  const long start = lay.centers[i] - g.origin;
  std::fill(buf.begin(), buf.end(), cplx(0.0, 0.0));
  for (long m = 0; m < len; ++m) {
    const long idx = start + m;
    if (idx < 0 || idx >= n) continue;
    buf[static_cast<std::size_t>(m)] = f.samples[static_cast<std::size_t>(idx)] * std::conj(g.samples[static_cast<std::size_t>(m)]);
  }
  fft(buf.data(), spec.data(), lay.n_freq);
  const long nf = static_cast<long>(lay.n_freq);
  const long half = nf / 2;
  cplx* row = &grid.values[i * grid.n_xi];
  for (long j = 0; j < nf; ++j) {
    const long k = j - half;
    const long bin = k < 0 ? k + nf : k;
    const double th = phase_angle(k, start, f.t0, f.dt, lay.n_freq);
    row[j] = f.dt * cplx(std::cos(th), std::sin(th)) * spec[static_cast<std::size_t>(bin)];
  }
}

}  // namespace

void SampledSignal::validate() const {
  if (samples.size() < 2) throw DomainError("signal: need at least two samples");
  if (!std::isfinite(dt) || dt <= 0.0) throw DomainError("signal: dt must be finite and > 0");
  if (!std::isfinite(t0)) throw DomainError("signal: t0 must be finite");
  for (const auto& v : samples) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("signal: non-finite sample");
  }
}

double StftGrid::max_abs() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

StftGrid stft(const SampledSignal& f, const Window& g, double hop, std::size_t n_freq, FrameRange frames) {
  const Layout lay = plan_frames(f, g, hop, n_freq, frames);
  StftGrid grid = empty_grid(f, g, hop, lay);
  const auto n_frames = static_cast<std::int64_t>(lay.centers.size());
#pragma omp parallel
  {
    std::vector<cplx> buf(n_freq);
    std::vector<cplx> spec(n_freq);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n_frames; ++i) {
      stft_frame(f, g, lay, static_cast<std::size_t>(i), buf, spec, grid);
    }
  }
  return grid;
}

StftGrid stft_serial(const SampledSignal& f, const Window& g, double hop, std::size_t n_freq, FrameRange frames) {
  const Layout lay = plan_frames(f, g, hop, n_freq, frames);
  StftGrid grid = empty_grid(f, g, hop, lay);
  std::vector<cplx> buf(n_freq);
  std::vector<cplx> spec(n_freq);
  for (std::size_t i = 0; i < lay.centers.size(); ++i) stft_frame(f, g, lay, i, buf, spec, grid);
  return grid;
}

StftGrid stft_via_factorization(const SampledSignal& f, const Window& g, double hop, std::size_t n_freq,
                                FrameRange frames) {
  const Layout lay = plan_frames(f, g, hop, n_freq, frames);
  StftGrid grid = empty_grid(f, g, hop, lay);
  const std::size_t n = f.size();
  const std::size_t blocks = (n + n_freq - 1) / n_freq;
  const std::size_t p = next_power_of_two(blocks * n_freq);
  const std::size_t stride = p / n_freq;
  const long nf = static_cast<long>(n_freq);
  const long half = nf / 2;

  // Time-independent phase e^{-2 pi i t0 xi_k}.
  std::vector<cplx> phase(n_freq);
  for (long j = 0; j < nf; ++j) {
    const double th = phase_angle(j - half, 0, f.t0, f.dt, n_freq);
    phase[static_cast<std::size_t>(j)] = cplx(std::cos(th), std::sin(th));
  }
  const auto n_frames = static_cast<std::int64_t>(lay.centers.size());
#pragma omp parallel
  {
    std::vector<cplx> row(p);
    std::vector<cplx> spec(p);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n_frames; ++i) {
      const long c = lay.centers[static_cast<std::size_t>(i)];
      std::fill(row.begin(), row.end(), cplx(0.0, 0.0));
      // (T(f (x) conj g))(x_i, t_n) = f(t_n) conj(g(t_n - x_i)) over the whole record.
      for (std::size_t t = 0; t < n; ++t) {
        const long m = static_cast<long>(t) - c + g.origin;
        if (m < 0 || m >= static_cast<long>(g.size())) continue;
        row[t] = f.samples[t] * std::conj(g.samples[static_cast<std::size_t>(m)]);
      }
      fft(row.data(), spec.data(), p);
      cplx* out = &grid.values[static_cast<std::size_t>(i) * grid.n_xi];
      for (long j = 0; j < nf; ++j) {
        const long k = j - half;
        const std::size_t bin = static_cast<std::size_t>(k < 0 ? k + nf : k) * stride;
        out[j] = f.dt * phase[static_cast<std::size_t>(j)] * spec[bin];
      }
    }
  }
  return grid;
}

IstftResult istft(const StftGrid& grid, const Window& g, const Window& psi) {
  if (grid.n_x == 0 || grid.n_xi == 0) throw DomainError("istft: empty grid");
  if (!(std::fabs(g.dt - grid.dt) <= 1e-12 * grid.dt) || !(std::fabs(psi.dt - grid.dt) <= 1e-12 * grid.dt)) {
    throw DomainError("dt_mismatch", "istft: window dt differs from grid dt");
  }
  if (psi.size() != grid.window_length || psi.origin != grid.window_origin) {
    throw DomainError("istft: psi does not match the analysis window of the grid");
  }
  const double dt = grid.dt;
  const long lg = static_cast<long>(g.size());
  const long lp = static_cast<long>(psi.size());

  // <g, psi> with samples aligned at equal window coordinates.
  cplx pairing(0.0, 0.0);
  for (long m = 0; m < lp; ++m) {
    const long mg = m - psi.origin + g.origin;
    if (mg < 0 || mg >= lg) continue;
    pairing += g.samples[static_cast<std::size_t>(mg)] * std::conj(psi.samples[static_cast<std::size_t>(m)]);
  }
  pairing *= dt;
  if (!(std::abs(pairing) > 1e-8 * g.l2_norm() * psi.l2_norm())) {
    throw DomainError("near_orthogonal", "istft: windows are nearly orthogonal, <g, psi> ~ 0");
  }

  const std::size_t nf = grid.n_xi;
  const long nfl = static_cast<long>(nf);
  const long half = nfl / 2;
  const auto n_frames = static_cast<std::int64_t>(grid.n_x);
  std::vector<cplx> rows(grid.n_x * nf);
#pragma omp parallel
  {
    std::vector<cplx> spec(nf);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < n_frames; ++i) {
      const long start = grid.frame_center[static_cast<std::size_t>(i)] - grid.window_origin;
      const cplx* v = &grid.values[static_cast<std::size_t>(i) * nf];
      for (long j = 0; j < nfl; ++j) {
        const long k = j - half;
        const long bin = k < 0 ? k + nfl : k;
        const double th = phase_angle(k, start, grid.signal_t0, dt, nf);
        spec[static_cast<std::size_t>(bin)] = v[j] * cplx(std::cos(th), -std::sin(th)) / dt;
      }
      cplx* out = &rows[static_cast<std::size_t>(i) * nf];
      fft(spec.data(), out, nf, true);
      for (std::size_t m = 0; m < nf; ++m) out[m] /= static_cast<double>(nf);
    }
  }

  // Synthesis, parallel over output samples; frames are summed in index order.
  const long n_out = static_cast<long>(grid.signal_n);
  const long c0 = grid.frame_center.front();
  const long hs = grid.n_x > 1 ? grid.frame_center[1] - grid.frame_center[0] : 1;
  const double hop = grid.hop;
  IstftResult res;
  res.pairing = pairing;
  res.signal.dt = dt;
  res.signal.t0 = grid.signal_t0;
  res.signal.samples.assign(static_cast<std::size_t>(n_out), cplx(0.0, 0.0));
  std::vector<double> coverage(static_cast<std::size_t>(n_out), 0.0);
#pragma omp parallel for schedule(static)
  for (long n = 0; n < n_out; ++n) {
    // Frames with 0 <= n - (c - origin) < nf.
    const long c_lo = n + grid.window_origin - nfl + 1;
    const long c_hi = n + grid.window_origin;
    long i_lo = c_lo <= c0 ? 0 : (c_lo - c0 + hs - 1) / hs;
    long i_hi = c_hi < c0 ? -1 : (c_hi - c0) / hs;
    i_hi = std::min(i_hi, static_cast<long>(grid.n_x) - 1);
    cplx acc(0.0, 0.0);
    cplx cov(0.0, 0.0);
    for (long i = i_lo; i <= i_hi; ++i) {
      const long c = grid.frame_center[static_cast<std::size_t>(i)];
      const long m = n - (c - grid.window_origin);
      const long mg = n - c + g.origin;
      if (mg < 0 || mg >= lg) continue;
      const cplx gv = g.samples[static_cast<std::size_t>(mg)];
      acc += hop * gv * rows[static_cast<std::size_t>(i) * nf + static_cast<std::size_t>(m)];
      if (m < lp) cov += hop * gv * std::conj(psi.samples[static_cast<std::size_t>(m)]);
    }
    res.signal.samples[static_cast<std::size_t>(n)] = acc / pairing;
    coverage[static_cast<std::size_t>(n)] = std::abs(cov / pairing - 1.0);
  }
  // Ripple over samples whose every window shift has a frame.
  const long before = std::max(lg - 1 - g.origin, lp - 1 - psi.origin);
  const long after = std::max(g.origin, psi.origin);
  const long lo = c0 + before;
  const long hi = grid.frame_center.back() - after;
  for (long n = std::max(0L, lo); n <= std::min(n_out - 1, hi); ++n) {
    res.ripple = std::max(res.ripple, coverage[static_cast<std::size_t>(n)]);
  }
  if (res.ripple > 1e-6) {
    res.warnings.push_back("undersampled grid: frame-sum ripple " + std::to_string(res.ripple) +
                           " exceeds 1e-6; reconstruction error is of the same order");
  }
  return res;
}

double adjoint_operator_norm(std::size_t n, double dt, const Window& g, double hop, std::size_t n_freq,
                             FrameRange frames, int iterations) {
  if (iterations < 1) throw DomainError("adjoint_operator_norm: iterations must be >= 1");
  SampledSignal f;
  f.dt = dt;
  f.t0 = -static_cast<double>(n / 2) * dt;
  f.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.samples[i] = cplx(1.0 + 0.25 * std::sin(0.7 * static_cast<double>(i)), 0.0);
  const double g2 = g.l2_norm() * g.l2_norm();
  double lambda = 0.0;
  for (int it = 0; it < iterations; ++it) {
    double norm2 = 0.0;
    for (const auto& v : f.samples) norm2 += std::norm(v);
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& v : f.samples) v *= scale;
    // istft returns <g, g>^{-1} V_g^* V_g f.
    auto next = istft(stft(f, g, hop, n_freq, frames), g, g).signal;
    cplx rq(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      next.samples[i] *= g2;
      rq += next.samples[i] * std::conj(f.samples[i]);
    }
    lambda = rq.real();
    f.samples = std::move(next.samples);
  }
  return std::sqrt(std::max(lambda, 0.0));
}

double mixed_norm(const std::vector<cplx>& values, std::size_t n_x, std::size_t n_xi, double p, double q, double wx,
                  double wxi, const std::vector<double>* weights) {
  if (!(p >= 1.0) || !(q >= 1.0)) throw DomainError("mixed_norm: exponents must be >= 1");
  if (values.size() != n_x * n_xi) throw DomainError("mixed_norm: shape mismatch");
  std::vector<double> a(values.size());
  double top = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    a[i] = std::abs(values[i]) * (weights ? (*weights)[i] : 1.0);
    if (!std::isfinite(a[i])) throw DomainError("mixed_norm: non-finite value");
    top = std::max(top, a[i]);
  }
  if (top == 0.0) return 0.0;
  const bool p_inf = std::isinf(p);
  const bool q_inf = std::isinf(q);
  double outer = 0.0;
  for (std::size_t j = 0; j < n_xi; ++j) {
    double inner = 0.0;
    for (std::size_t i = 0; i < n_x; ++i) {
      const double r = a[i * n_xi + j] / top;
      if (p_inf) {
        inner = std::max(inner, r);
      } else {
        inner += std::pow(r, p) * wx;
      }
    }
    if (!p_inf) inner = std::pow(inner, 1.0 / p);
    if (q_inf) {
      outer = std::max(outer, inner);
    } else {
      outer += std::pow(inner, q) * wxi;
    }
  }
  if (!q_inf) outer = std::pow(outer, 1.0 / q);
  return outer * top;
}

double modulation_norm(const StftGrid& grid, double p, double q, const WeightSpec& m) {
  std::vector<double> w(grid.values.size());
  for (std::size_t i = 0; i < grid.n_x; ++i) {
    for (std::size_t j = 0; j < grid.n_xi; ++j) w[i * grid.n_xi + j] = m(grid.x_axis[i], grid.xi_axis[j]);
  }
  const double dxi = 1.0 / (static_cast<double>(grid.n_xi) * grid.dt);
  return mixed_norm(grid.values, grid.n_x, grid.n_xi, p, q, grid.hop, dxi, &w);
}

}  // namespace gev
