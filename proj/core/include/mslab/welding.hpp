#pragma once

// Conformal welding of circle diffeomorphisms: the composition operator on
// the half-order Sobolev space modulo constants, the factorization
// phi = l . diag . u solved from the positive-frequency block, verification
// metrics, and the spin-determinant identity for the diagonal factor.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "mslab/circle_maps.hpp"

namespace mslab {

// Blocks of C_phi : f -> f . phi^{-1} on W^{1/2}/constants in the normalized
// basis e_n = z^n / sqrt|n|, n != 0: entries
//   sqrt(|m|/|n|) (1/2pi) int e^{i (n Psi(theta) - m theta)} dtheta,
// Psi the inverse lift. H+ = {1..N}, H- = {-1..-N}; index |mode| - 1.
struct CompositionBlocks {
  Eigen::MatrixXcd A, B, C, D;
  int cutoff = 0;
};

CompositionBlocks composition_blocks(const CircleDiffeo& phi, int cutoff);
CompositionBlocks composition_blocks(const MoebiusElement& m, int cutoff);

// full matrix over modes -N..-1, 1..N in ascending order
Eigen::MatrixXcd composition_matrix(const CompositionBlocks& blocks);

// bilinear symplectic defect ||M^T Omega M - Omega|| (largest singular value)
// on the window |mode| <= interior_cutoff, Omega(m, n) = i sign(n) delta_{m+n,0}
double symplectic_defect(const CompositionBlocks& blocks, int interior_cutoff);

// phi = l . diag . u on the circle: u(z) = z (1 + sum_{k>=1} u_k z^k)
// univalent in the disk, diag = multiplication by lambda, and the exterior
// map l^{-1}(zeta) = zeta + sum_{n>=0} b_n zeta^{-n}, so l^{-1} . phi
// = diag . u as boundary functions.
struct WeldingTriple {
  std::complex<double> diag;
  std::vector<std::complex<double>> u_coefficients;          // u_k, k >= 1
  std::vector<std::complex<double>> l_inverse_coefficients;  // b_n, n >= 0
  double condition = 0.0;  // estimated condition number of the solve
  double leak = 0.0;       // half-order energy of l^{-1}. phi left in modes
                           // >= 1 beyond the zeta term (0 for an exact weld)
};

// Solves P_+ C_phi h = z for h = diag . u and projects h . phi^{-1} onto the
// exterior expansion. Throws (reporting the condition number) when the
// positive block is numerically singular.
WeldingTriple weld(const CircleDiffeo& phi, int cutoff);
WeldingTriple weld(const MoebiusElement& m, int cutoff);

struct WeldVerification {
  double sup_error = 0.0;  // sup_theta |l^{-1}(phi) - diag u|
  int winding = 0;         // winding number of u(e^{i.}) around u(0) = 0
  bool univalent = false;  // winding == 1 with the curve bounded away from 0
};
WeldVerification verify_weld(const CircleDiffeo& phi, const WeldingTriple& t);
WeldVerification verify_weld(const MoebiusElement& m, const WeldingTriple& t);

// |diag| recovered from the spin determinants, (det|A_p| / det|A_a|)^8
double diag_from_determinants(const CircleDiffeo& phi, int cutoff);
double diag_from_determinants(const MoebiusElement& m, int cutoff);

// pi (1 - sum_{n>=1} n (|b_n|^2 + |diag|^2 |uhat_n|^2)), uhat_n the z^n
// Taylor coefficient of u (uhat_1 = 1); the two area-theorem expressions for
// the interior of the welding curve cancel, so exact triples give zero
double area_defect(const WeldingTriple& t);

// largest per-mode term n (|b_n|^2 + |diag uhat_n|^2); at most 1 for triples
// of an actual welding
double max_mode_bound(const WeldingTriple& t);

}  // namespace mslab
