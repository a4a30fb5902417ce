#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace besovlab::detail {

// Real <-> half-complex transforms on N points, backed by FFTW.
//
// forward:  c_k = (1/N) sum_i f_i exp(-i xi_k x_i),  k = 0..N/2
// inverse:  f_i = sum_{k=-N/2}^{N/2-1} c_k exp(i xi_k x_i)
//
// with x_i = -L + i dx, so the (-1)^k phase of the shifted origin is folded in.
void forward(std::span<const double> values, std::span<std::complex<double>> coeffs);
void inverse(std::span<const std::complex<double>> coeffs, std::span<double> values);

} // namespace besovlab::detail

namespace besovlab::detail {

// Version string of the linked FFT library.
const char* backend_version();

} // namespace besovlab::detail
