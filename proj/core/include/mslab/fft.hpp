#pragma once

// Thin FFTW wrappers with process-wide plan caching (plan creation is
// serialized; execution is thread-safe on distinct buffers).

#include <complex>
#include <vector>

namespace mslab {

// y[k-1] = 2 sum_{j=1}^{n} x[j-1] sin(pi j k / (n+1)), k = 1..n
// (FFTW RODFT00).
std::vector<double> dst1(const std::vector<double>& x);

// y[k] = x[0] + (-1)^k x[n-1] + 2 sum_{j=1}^{n-2} x[j] cos(pi j k / (n-1)),
// k = 0..n-1 (FFTW REDFT00); requires n >= 3.
std::vector<double> dct1(const std::vector<double>& x);

// In-place unnormalized DFT, Y_k = sum_j X_j e^{-2 pi i j k / n} (forward);
// the inverse applies e^{+...} and is also unnormalized.
void fft(std::vector<std::complex<double>>& data, bool inverse = false);

}  // namespace mslab
