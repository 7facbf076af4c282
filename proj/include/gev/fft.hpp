#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace gev {

using cplx = std::complex<double>;

// Unnormalized complex DFT of length n:
//   forward: X[k] = sum_m x[m] e^{-2 pi i m k / n}
//   inverse: x[m] = sum_k X[k] e^{+2 pi i m k / n}
// Plans are cached per (n, direction) and safe to execute concurrently.
void fft(const cplx* in, cplx* out, std::size_t n, bool inverse = false);
std::vector<cplx> fft(const std::vector<cplx>& in, bool inverse = false);

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

// Frequency of FFT bin k for a length-n grid of spacing dt, in cycles per unit:
// k/(n dt) for k < n/2, (k-n)/(n dt) otherwise.
double fft_frequency(std::size_t k, std::size_t n, double dt);

}  // namespace gev
