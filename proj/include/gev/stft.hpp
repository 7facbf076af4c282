#pragma once

#include <limits>
#include <string>
#include <vector>

#include "gev/fft.hpp"
#include "gev/weight.hpp"
#include "gev/window.hpp"

namespace gev {

struct SampledSignal {
  std::vector<cplx> samples;
  double dt = 1.0;
  double t0 = 0.0;  // time of samples[0]

  std::size_t size() const { return samples.size(); }
  double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
  void validate() const;  // throws DomainError
};

enum class FrameRange {
  full,      // every hop position inside the record, window truncated at the ends
  interior,  // only positions where the whole window lies inside the record
};

// V(x_i, xi_j) stored row-major, one row of n_xi frequencies per frame.
struct StftGrid {
  std::vector<cplx> values;
  std::size_t n_x = 0;
  std::size_t n_xi = 0;
  std::vector<double> x_axis;   // frame centres (absolute time)
  std::vector<double> xi_axis;  // k/(n_xi dt), k = -n_xi/2 .. n_xi/2 - 1
  std::string window_id;
  double dt = 0.0;
  double hop = 0.0;

  // Geometry needed by the adjoint.
  std::vector<long> frame_center;  // signal index under window coordinate 0
  long window_origin = 0;
  std::size_t window_length = 0;
  double signal_t0 = 0.0;
  std::size_t signal_n = 0;

  cplx& at(std::size_t i, std::size_t j) { return values[i * n_xi + j]; }
  const cplx& at(std::size_t i, std::size_t j) const { return values[i * n_xi + j]; }
  double max_abs() const;
};

// V_g f(x, xi) = dt sum_n f(t_n) conj(g(t_n - x)) e^{-2 pi i t_n xi}, phase
// referenced to absolute time. OpenMP-parallel over frames.
StftGrid stft(const SampledSignal& f, const Window& g, double hop, std::size_t n_freq,
              FrameRange frames = FrameRange::full);

// Single-threaded reference of the same computation.
StftGrid stft_serial(const SampledSignal& f, const Window& g, double hop, std::size_t n_freq,
                     FrameRange frames = FrameRange::full);

// Same grid through the tensor-product path: F(t, s) = f(t) conj(g(s)),
// coordinate change (x, t) -> F(t, t - x), then a partial DFT in t over the
// whole record.
StftGrid stft_via_factorization(const SampledSignal& f, const Window& g, double hop, std::size_t n_freq,
                                FrameRange frames = FrameRange::full);

struct IstftResult {
  SampledSignal signal;
  cplx pairing;          // <g, psi> = dt sum g conj(psi)
  double ripple = 0.0;   // max |hop sum_i g psi^*(t - x_i) / <g, psi> - 1| on the covered interior
  std::vector<std::string> warnings;
};

// f = <g, psi>^{-1} V_g^* V_psi f for a grid produced by stft(f, psi).
IstftResult istft(const StftGrid& grid, const Window& g, const Window& psi);

// Norm of the discrete adjoint V_g^* from the grid (weights hop dxi) to signals
// of n samples (weight dt), as sqrt of the top eigenvalue of V_g^* V_g by power
// iteration from a fixed start vector. Measured, not bounded.
double adjoint_operator_norm(std::size_t n, double dt, const Window& g, double hop, std::size_t n_freq,
                             FrameRange frames = FrameRange::full, int iterations = 60);

// Weighted mixed norm (sum_j (sum_i |v_ij|^p m_ij^p wx)^{q/p} wxi)^{1/q};
// p or q = infinity gives a max.
double mixed_norm(const std::vector<cplx>& values, std::size_t n_x, std::size_t n_xi, double p, double q,
                  double wx, double wxi, const std::vector<double>* weights = nullptr);

// Discrete L^{p,q}_m norm of the grid with Riemann weights hop and dxi.
double modulation_norm(const StftGrid& grid, double p, double q, const WeightSpec& m);

}  // namespace gev
