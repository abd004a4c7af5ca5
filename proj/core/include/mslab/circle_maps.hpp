#pragma once

// Orientation-preserving circle diffeomorphisms and the structures attached
// to them: grid representations with equivariant lifts, Moebius maps acting
// through n-fold covers, a closed-form smooth family, trigonometric vector
// fields with flows, the Bott and Virasoro cocycles, and the left action of
// diffeomorphisms on bridge coordinates.

#include <complex>
#include <functional>
#include <vector>

#include "mslab/bridge.hpp"
#include "mslab/interp.hpp"

namespace mslab {

// Grid representation: lift values Phi(t_j) on t_j = 2*pi*j/M, j = 0..M, with
// Phi(t + 2*pi) = Phi(t) + 2*pi, plus derivative samples. Evaluation between
// nodes is monotone cubic Hermite; the inverse lift is solved lazily.
class CircleDiffeo {
 public:
  CircleDiffeo() = default;

  // slopes from 4th-order finite differences, clamped to keep monotonicity
  static CircleDiffeo from_lift(std::vector<double> lift);
  // exact derivative samples; d2 may be empty
  static CircleDiffeo from_lift_and_derivs(std::vector<double> lift,
                                           std::vector<double> d1,
                                           std::vector<double> d2 = {});
  static CircleDiffeo identity(int grid_size);
  static CircleDiffeo rotation(int grid_size, double angle);

  int grid_size() const { return static_cast<int>(lift_.size()) - 1; }
  const std::vector<double>& lift_values() const { return lift_; }
  const std::vector<double>& deriv_values() const { return d1_; }
  bool has_second_deriv() const { return !d2_.empty(); }
  const std::vector<double>& second_deriv_values() const { return d2_; }
  const std::vector<double>& inverse_lift_values() const;

  double lift(double t) const;         // equivariant extension
  double deriv(double t) const;        // Phi' > 0
  double second_deriv(double t) const; // exact samples if present, else d/dt of the Phi' interpolant
  double inverse(double t) const;      // inverse lift

 private:
  std::vector<double> lift_, d1_, d2_;
  UniformHermite interp_lift_, interp_d1_, interp_d2_;
  mutable std::vector<double> inv_lift_;
  mutable UniformHermite interp_inv_;
  void build(std::vector<double> lift, std::vector<double> d1,
             std::vector<double> d2);
  void build_inverse() const;
};

// phi(psi(.)); derivatives by the chain rule on the common (finer) grid
CircleDiffeo compose(const CircleDiffeo& phi, const CircleDiffeo& psi);
CircleDiffeo invert(const CircleDiffeo& phi);

// Element of SU(1,1) (|a|^2 - |b|^2 = 1) acting on the circle through the
// n-fold cover z -> z^n: the angle map is
//   Phi(t) = t + (1/n)(-2 Arg a + Arg(1 + conj(w) e^{-int}) - Arg(1 + w e^{int})),
// w = b/a, which is a diffeomorphism for |w| < 1. The constructor rescales
// (a, b) to unit determinant.
struct MoebiusElement {
  std::complex<double> a{1.0, 0.0};
  std::complex<double> b{0.0, 0.0};
  int level = 1;

  MoebiusElement() = default;
  MoebiusElement(std::complex<double> a_in, std::complex<double> b_in,
                 int level_in = 1);

  MoebiusElement inverse() const { return {std::conj(a), -b, level}; }
  double w_abs() const { return std::abs(b / a); }

  double lift(double t) const;
  double deriv(double t) const;
  double second_deriv(double t) const;
  double third_deriv(double t) const;
};

// group law on the matrices [[a, b], [conj(b), conj(a)]] (same level only)
MoebiusElement compose(const MoebiusElement& g1, const MoebiusElement& g2);
CircleDiffeo moebius_diffeo(const MoebiusElement& g, int grid_size);

// Based smooth diffeomorphism psi defined by its log-derivative
//   b(t) = sum_k s_k sin(kt) + c_k (cos(kt) - 1),     b(0) = 0,
// so psi' = alpha e^b with alpha = 2*pi / int e^b. The lift is recovered to
// machine precision from the Fourier series of e^b, giving closed-form values
// and derivatives at arbitrary points.
class SmoothBasedMap {
 public:
  SmoothBasedMap(std::vector<double> sin_coeff, std::vector<double> cos_coeff);

  double b(double t) const;
  double b1(double t) const;
  double b2(double t) const;
  double b3(double t) const;

  double alpha() const { return alpha_; }
  double lift(double t) const;  // psi(0) = 0, psi(2*pi) = 2*pi
  double deriv(double t) const { return alpha_ * std::exp(b(t)); }
  double second_deriv(double t) const { return deriv(t) * b1(t); }
  double third_deriv(double t) const;
  double inverse(double t) const;

  CircleDiffeo to_grid(int grid_size) const;

  // expansion of b in the bridge basis sin(nt/2) (exact integrals)
  std::vector<double> bridge_coefficients(int n_modes) const;

 private:
  std::vector<double> s_, c_;
  double alpha_ = 1.0;
  std::vector<std::complex<double>> fourier_;  // coefficients of e^b, k >= 0
};

// Vector field xi(theta) d/dtheta with xi(theta) = sum_{|k|<=K} c_k e^{ik theta}.
class TrigVectorField {
 public:
  explicit TrigVectorField(std::vector<std::complex<double>> coeff);  // k = -K..K

  static TrigVectorField complex_mode(int n);        // i e^{in theta}
  static TrigVectorField cosine(int n);
  static TrigVectorField sine(int n);

  int max_mode() const { return k_max_; }
  std::complex<double> coeff(int k) const;           // 0 for |k| > K
  std::complex<double> eval(double theta, int deriv_order = 0) const;
  bool is_real() const;

  // time-t flow map (RK4 with variational equations for Phi', Phi'')
  CircleDiffeo flow(double time, int grid_size, int substeps = 64) const;

 private:
  std::vector<std::complex<double>> c_;
  int k_max_ = 0;
};

// B(phi, psi) = (1/48 pi) int [ln Phi'(Psi) Psi''/Psi' - (Phi(Psi) - Psi)(Psi' - 1)] dtheta.
// Satisfies B(phi psi, rho) + B(phi, psi) = B(phi, psi rho) + B(psi, rho)
// exactly and is independent of the choice of lifts; its antisymmetrized
// second variation at the identity is virasoro_cocycle / i.
double bott_cocycle(const CircleDiffeo& phi, const CircleDiffeo& psi);

// c(xi, eta) = (i/24 pi) int xi (eta''' + eta') dtheta, evaluated in closed
// form; c(i e^{in.}, i e^{im.}) = delta_{n+m,0} n (n^2 - 1) / 12.
std::complex<double> virasoro_cocycle(const TrigVectorField& xi,
                                      const TrigVectorField& eta);

// quadrature cross-check of the closed form (trapezoid on the grid)
std::complex<double> virasoro_cocycle_quadrature(const TrigVectorField& xi,
                                                 const TrigVectorField& eta,
                                                 int grid_size);

// ---- bridge coordinates and the left action -------------------------------

// ln Psi' - ln Psi'(0) sampled on the grid of psi; vanishes at both endpoints
// and obeys the composition law b_{phi.psi} = b_phi(Psi) + b_psi - const
std::vector<double> log_derivative(const CircleDiffeo& psi);

// rotation s of the factorization psi = Rot(s) . psi_1, psi_1 based; s = Psi(0)
// wrapped to [0, 2*pi). Together with log_derivative this inverts
// diffeo_from_log_derivative.
double rotation_part(const CircleDiffeo& psi);

// based map psi_1 with psi_1' = alpha e^b from log-derivative samples
// (b_deriv may be empty: finite-difference slopes are used)
CircleDiffeo based_from_log_derivative(const std::vector<double>& b_values,
                                       const std::vector<double>& b_deriv);
CircleDiffeo based_from_bridge(const BridgePath& b);  // spectral b'

// Rot(rotation) . psi_1 with psi_1' = alpha e^b, alpha = 2*pi / int e^b.
// Requires b(0) = b(2*pi) = 0 (domain error otherwise).
CircleDiffeo diffeo_from_log_derivative(const BridgePath& b, double rotation);

// group element in bridge coordinates: psi = psi_b . Rot(rotation)
struct BridgePoint {
  BridgePath b;
  double rotation = 0.0;
};

// Rot(s) . psi_b = psi_tilde . Rot(2*pi - T): returns the based coordinate
// b(t+T) - b(T) with T = psi_b^{-1}(2*pi - s), and rotation = 2*pi - T.
BridgePoint left_rotation_action(double s, const BridgePath& b);

// phi_1 . psi_b for based phi_1 given by its log-derivative function:
// result b_phi(psi_b(t)) + b(t)
BridgePath left_based_action(const std::function<double(double)>& b_phi,
                             const BridgePath& b);
BridgePath left_based_action(const std::vector<double>& b_phi_values,
                             const BridgePath& b);

// based coordinate of phi . psi_b: factor phi = Rot(s) . phi_1, apply the
// based action of phi_1, then the rotation action of s
BridgePath left_action(const CircleDiffeo& phi, const BridgePath& b);

// full left action phi . (psi_b . Rot(rotation)); the right rotation factor
// never changes the based coordinate
BridgePoint left_action(const CircleDiffeo& phi, const BridgePoint& g);

}  // namespace mslab
