#pragma once

// Bridge paths b(t) = sum_{n>=1} b_n sin(nt/2) on [0, 2*pi], the coordinate
// in which the diffeomorphism measures are product Gaussians
// (Var b_n = 1/(beta n^2)). Samples live on the uniform grid t_j = 2*pi*j/M,
// j = 0..M; both endpoint values are zero, and the 2*pi-periodic extension is
// used whenever b is evaluated outside [0, 2*pi].

#include <vector>

#include "mslab/mc.hpp"

namespace mslab {

struct BridgePath {
  double beta = 1.0;
  std::vector<double> coeff;   // sine coefficients b_n, n = 1..coeff.size()
  std::vector<double> values;  // M+1 samples on [0, 2*pi]

  int grid_size() const { return static_cast<int>(values.size()) - 1; }
  int n_modes() const { return static_cast<int>(coeff.size()); }
};

// Exact synthesis of the sine series on the grid (DST-I); n_modes <= M-1.
std::vector<double> synthesize_sine_series(const std::vector<double>& coeff,
                                           int grid_size);

// Exact inverse of synthesize_sine_series for grid data vanishing at the
// endpoints; returns M-1 coefficients.
std::vector<double> analyze_sine_series(const std::vector<double>& values);

BridgePath bridge_from_coefficients(double beta, std::vector<double> coeff,
                                    int grid_size);

// b'(t_j) = sum b_n (n/2) cos(nt_j/2), spectral
std::vector<double> bridge_derivative_values(const BridgePath& b);

// direct mode sum at one point (2*pi-periodic extension)
double bridge_eval(const BridgePath& b, double t);

// values of t -> b(t+T) - b(T) on the grid, where b is extended periodically;
// exact in the coefficients (parity-split shifted synthesis)
std::vector<double> bridge_shifted_values(const BridgePath& b, double T);

// one draw of the product Gaussian, b_n = g_n / (sqrt(beta) n), n = 1..n_modes
BridgePath sample_bridge(double beta, int n_modes, int grid_size, Rng& rng);

// Cameron-Martin direction h = sum h_n sin(nt/2); |h|_H^2 = int h'^2 dt
// = (pi/4) sum n^2 h_n^2.
struct CameronMartinShift {
  std::vector<double> coeff;
  double h_norm_sq() const;
};

}  // namespace mslab
