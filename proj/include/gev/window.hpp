#pragma once

#include <string>
#include <vector>

#include "gev/fft.hpp"
#include "gev/gevrey_sequence.hpp"
#include "gev/weight.hpp"

namespace gev {

enum class WindowKind { gaussian, gevrey_bump, box_convolution };

enum class BumpNormalization {
  box_product,  // convolution of plain indicators, integral = product of widths
  unit_mass,    // integral 1
  unit_peak,    // maximum 1
  unit_l2,      // L2 norm 1
};

// Sampled window. Sample m sits at s_m = (m - origin) dt in the window's own
// coordinate; `center` is the location of the peak in that coordinate.
struct Window {
  std::vector<cplx> samples;
  double dt = 0.0;
  long origin = 0;
  double center = 0.0;
  WindowKind kind = WindowKind::gaussian;
  GevreyParams params;          // bumps only
  double support_radius = 0.0;  // bumps only
  int factors = 0;              // bumps only: index of the last box, J
  std::vector<double> widths;   // bumps only: box widths a_0..a_J
  std::string id;

  std::size_t size() const { return samples.size(); }
  double coordinate(std::size_t m) const { return (static_cast<double>(m) - static_cast<double>(origin)) * dt; }
  bool compact() const { return kind != WindowKind::gaussian; }
  double l2_norm() const;
};

// 2^{1/4} e^{-pi (s - center)^2} on s_m = (m - n/2) dt, renormalized to unit
// discrete L2 norm. The grid must cover center +- 6 standard deviations.
Window make_gaussian(double dt, std::size_t n_samples, double center = 0.0);

// Box widths a_j proportional to M_j / M_{j+1}, j = 0..J, rescaled to sum to
// 2 radius.
std::vector<double> bump_widths(const GevreyParams& params, double support_radius, int factors);

// Samples on s_m = (m - M) dt, |m - M| <= M = floor(radius/dt), of the
// convolution of centred boxes of the given widths. Computed as the inverse
// transform of the product of sinc factors on an oversampled grid.
Window convolve_boxes(const std::vector<double>& widths, double dt,
                      BumpNormalization normalization = BumpNormalization::unit_mass, int oversample = 4);

// Compactly supported window from the width schedule above. Requires sigma > 1
// or sigma = 1 with tau > 1, and radius >= 16 dt.
Window make_gevrey_bump(const GevreyParams& params, double support_radius, double dt, int factors = 24,
                        BumpNormalization normalization = BumpNormalization::unit_mass);

struct DerivativeNorms {
  std::vector<double> norms;      // ||d^a g||_{L^1_v}, a = 0..alpha_max
  std::vector<double> noise;      // relative noise estimate per order
  double fitted_cg = 0.0;         // max_a (norm_a / a^{tau a^sigma})^{1/a^sigma}
  std::vector<std::string> warnings;
};

// L^1_v norms of spectral derivatives. For v = 1 and a >= 1 the norm is the
// total variation of d^{a-1} g, summed between refined zeros of d^a g; other
// cases use the trapezoid rule on an 8x band-limited upsampling.
// `params` fixes (tau, sigma) in the fitted constant.
DerivativeNorms estimate_derivative_norms(const Window& window, int alpha_max, const WeightSpec& weight,
                                          const GevreyParams& params);

// Spectral derivatives d^a g for a = 0..alpha_max on the window's grid.
std::vector<std::vector<cplx>> spectral_derivatives(const std::vector<cplx>& samples, double dt, int alpha_max,
                                                    bool periodic = false);

std::string to_string(WindowKind kind);

}  // namespace gev
