#pragma once

// Truncated block operators of the unitary action f -> (Phi')^{1/2} f(Phi)
// on circle (half-)densities, split by the Hardy polarization; regularized
// determinants, the off-diagonal kernel K, the regularized kernel energy with
// its Monte Carlo expectation table, and Besov diagnostics.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>

#include "mslab/bridge.hpp"
#include "mslab/circle_maps.hpp"

namespace mslab {

// periodic: integer modes; antiperiodic: half-integer modes (the two spin
// structures on the circle)
enum class Spin { periodic, antiperiodic };

// Blocks of V_phi in the Hardy polarization at cutoff N.
//   periodic:      modes m in [-N, N];      H+ = {m >= 0} (dim N+1), H- dim N
//   antiperiodic:  modes m+1/2, m in [-N, N-1]; H+ = {m+1/2 > 0}, both dim N
// A: H+ -> H+, B: H- -> H+, C: H+ -> H-, D: H- -> H-. Within a block, row and
// column indices order the modes by increasing |mode|.
struct BlockOperator {
  Eigen::MatrixXcd A, B, C, D;
  int cutoff = 0;
  Spin spin = Spin::antiperiodic;

  int plus_dim() const { return spin == Spin::periodic ? cutoff + 1 : cutoff; }
  int minus_dim() const { return cutoff; }
};

BlockOperator build_blocks(const CircleDiffeo& phi, Spin spin, int cutoff);
BlockOperator build_blocks(const MoebiusElement& m, Spin spin, int cutoff);
BlockOperator build_blocks(const SmoothBasedMap& psi, Spin spin, int cutoff);

// assembled matrix over all modes in ascending order (H- then H+ interleaved
// by mode value); used for unitarity and kernel cross-checks
Eigen::MatrixXcd full_matrix(const BlockOperator& op);

// sup singular value of (U*U - I) restricted to columns/rows with
// |mode| <= interior_cutoff
double unitarity_defect(const BlockOperator& op, int interior_cutoff);

// matrix (ascending mode order) of V_{phi^{-1}} (1/2)[j, V_phi], where j is
// +1 on H+ and -1 on H-; this is the operator whose integral kernel is K
Eigen::MatrixXcd pulled_back_commutator(const BlockOperator& op);

// det2|A|^2 = det((I - C*C) exp(C*C)) from the eigenvalues of C*C; lies in
// [0, 1]. Throws when an eigenvalue exceeds 1 beyond round-off.
double det2_abs_A(const BlockOperator& op);

// det|A|^2 = det(I - C*C) (unregularized; converges when C is trace class)
double det_abs_A_sq(const BlockOperator& op);

// truncated det|A|^2 of the level-n Moebius map with r = |b/a|:
//   antiperiodic: (1-r^2)^{(n^2-1)/12n}
//   periodic:     antiperiodic value times (1-r^2)^{1/4n}
double det_abs_A_periodic(const MoebiusElement& m, int cutoff);
double det_abs_A_antiperiodic(const MoebiusElement& m, int cutoff);

// det(S2) for the Toeplitz commutator product
//   S2 = T[(1-r/z)^{-1}] T[(1-rz)^{-1}] T[1-r/z] T[1-rz]
// on span{z^0..z^N}; converges to (1-r^2)^{-1}. Domain error for r >= 1.
double commutator_det_S2(double r, int cutoff);

// multiplies S2 against a coefficient vector (diagnostic: S2 z^n = z^n, n>0)
Eigen::VectorXd commutator_S2_apply(double r, int cutoff,
                                    const Eigen::VectorXd& x);

// det(A(V_1) A(V_2) A(V_1 V_2)^{-1}) on the antiperiodic H+ at cutoff N,
// where V_1 V_2 = V of the pointwise composition m2 . m1; for level-n
// elements this converges to (1 + w z)^{(n^2-1)/12n} with w = b1/conj(a1)
// and z = conj(b2)/conj(a2). Level 1 gives exactly 1.
std::complex<double> cocycle_det(const MoebiusElement& m1,
                                 const MoebiusElement& m2, int cutoff);

// K(s,t) = [ (Phi'(s)Phi'(t))^{1/2} sin((t-s)/2) / sin((Phi(t)-Phi(s))/2) - 1 ]
//          / (e^{it} - e^{is});
// vanishes identically for rotations. Domain error at coincident points.
std::complex<double> kernel_K(const CircleDiffeo& phi, double s, double t);

// same value computed through boundary derivatives of the disk map,
//   (dphi/dz dphi/dzeta)^{1/2} / (phi(z)-phi(zeta)) - 1/(z-zeta),
// with the square-root branch continued along the lifts
std::complex<double> kernel_K_derivative_form(const CircleDiffeo& phi,
                                              double s, double t);

// Exponent form of the kernel in bridge coordinates:
//   F = ln alpha + (b(t)+b(s))/2 + ln[ sin((t-s)/2) / sin(alpha I / 2) ],
// I = int_s^t e^b, alpha = 2 pi / int_0^{2 pi} e^b; K = (e^F - 1)/(z - zeta).
struct KernelDiagnostics {
  double delta = 0.0;     // t - s
  double midpoint = 0.0;  // (b(t) + b(s)) / 2
  double integral = 0.0;  // int_s^t e^b
  double alpha = 1.0;     // 2 pi / int_0^{2 pi} e^b
  double f_value = 0.0;   // F(s, t; b); F(s,t;0) = 0, symmetric in (s,t)
};
KernelDiagnostics kernel_diagnostics(const BridgePath& b, double s, double t);
std::complex<double> kernel_K_bridge_form(const BridgePath& b, double s,
                                          double t);

// delta_k = pi 2^{-k}, k = 1..10
std::vector<double> default_delta_schedule();

// E_k = int int_{tor|s-t| > delta_k} |K|^2 ds dt over the sample grid of b
struct EnergyLevels {
  std::vector<double> deltas;
  std::vector<double> integrals;
};
EnergyLevels kernel_energy_levels(const BridgePath& b,
                                  const std::vector<double>& deltas);

// Monte Carlo table of E_beta[ E_k ], keyed by everything that affects the
// estimate; persisted as CSV with the key in the metadata header.
struct EnergyTable {
  double beta = 0.0;
  int grid_size = 0;
  int n_modes = 0;
  int n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<double> deltas;
  std::vector<double> means;

  std::string cache_key() const;
};
EnergyTable build_energy_table(double beta, int grid_size, int n_modes,
                               const std::vector<double>& deltas,
                               int n_samples, std::uint64_t seed,
                               unsigned workers = 1);
void write_energy_table(const EnergyTable& table,
                        const std::filesystem::path& file);
EnergyTable read_energy_table(const std::filesystem::path& file);
// load a matching cached table from dir or build and persist one
EnergyTable cached_energy_table(double beta, int grid_size, int n_modes,
                                const std::vector<double>& deltas,
                                int n_samples, std::uint64_t seed,
                                const std::filesystem::path& dir,
                                unsigned workers = 1);

// Centered energy along the schedule: levels[k] = E_k(b) - table mean_k and
// value = finest level. residual and converged track the Cauchy differences
// |E_k - E_{k-1}| of the sample integral itself (positive band sums), which
// must shrink along the schedule for the cutoff limit to exist.
struct RegularizedEnergy {
  double value = 0.0;
  double residual = 0.0;
  bool converged = true;
  std::vector<double> levels;
};
RegularizedEnergy regularized_energy(const BridgePath& b, double beta,
                                     const std::vector<double>& deltas,
                                     const EnergyTable& table);

// sum over modes of n (b_n^2 - 1/(beta n^2)); the linear part of the
// regularized energy in mode space
double centered_mode_energy(const BridgePath& b);

// dyadic-block Besov-1/p seminorm of b from its sine coefficients
// (blocks n in [2^j, 2^{j+1}), ||block||_{L^2}^2 = pi sum b_n^2)
double besov_seminorm(const BridgePath& b, double p);

// smallest eigenvalue of |A_a| - |A_p| at cutoff N, comparing the two spins
// on the common leading N-dimensional corner (mode m+1/2 paired with mode m)
double operator_inequality_probe(const CircleDiffeo& phi, int cutoff);
double operator_inequality_probe(const MoebiusElement& m, int cutoff);

// weight parameters of the regularized densities
struct VirasoroWeight {
  double c = 0.0;
  double h = 0.0;
};

}  // namespace mslab
