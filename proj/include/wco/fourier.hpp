#pragma once

#include <complex>
#include <span>
#include <vector>

namespace wco::fourier {

using cplx = std::complex<double>;

/// c_k = (1/N) sum_j x_j exp(-2 pi i j k / N), k = 0..N-1 (negative
/// frequencies wrap to the upper half).
std::vector<cplx> forward(std::span<const cplx> samples);

/// x_j = sum_k c_k exp(2 pi i j k / N).
std::vector<cplx> inverse(std::span<const cplx> coeffs);

/// Values of sum_k c_k z^k at z = exp(2 pi i j / n), j = 0..n-1, for n >= coeffs.size().
std::vector<cplx> evaluate_on_grid(std::span<const cplx> coeffs, std::size_t n);

/// Harmonic conjugate of a real periodic sequence: Fourier coefficients are
/// multiplied by -i sign(k), the mean and the Nyquist mode are dropped.
std::vector<double> conjugate_function(std::span<const double> samples);

/// Share of spectral energy carried by the negative-frequency half of c.
double negative_frequency_ratio(std::span<const cplx> coeffs);

bool is_power_of_two(std::size_t n) noexcept;

}  // namespace wco::fourier
