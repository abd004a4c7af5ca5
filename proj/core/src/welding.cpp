#include "mslab/welding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mslab/fft.hpp"
#include "mslab/operators.hpp"

namespace mslab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// inverse-lift samples on theta_j = 2 pi j / q
std::vector<double> inverse_lift_samples(const CircleDiffeo& phi, int q) {
  std::vector<double> psi(q);
  if (q == phi.grid_size()) {
    const std::vector<double>& inv = phi.inverse_lift_values();
    std::copy_n(inv.begin(), q, psi.begin());
  } else {
    for (int j = 0; j < q; ++j) psi[j] = phi.inverse(kTwoPi * j / q);
  }
  return psi;
}

std::vector<double> inverse_lift_samples(const MoebiusElement& m, int q) {
  const MoebiusElement inv = m.inverse();
  std::vector<double> psi(q);
  for (int j = 0; j < q; ++j) psi[j] = inv.lift(kTwoPi * j / q);
  return psi;
}

CompositionBlocks blocks_from_inverse_lift(const std::vector<double>& psi,
                                           int cutoff) {
  const int q = static_cast<int>(psi.size());
  if (cutoff < 1) throw std::invalid_argument("composition_blocks: cutoff < 1");
  if (q < 4 * cutoff)
    throw std::invalid_argument("composition_blocks: grid too coarse");
  CompositionBlocks blocks;
  blocks.cutoff = cutoff;
  const int n = cutoff;
  blocks.A = Eigen::MatrixXcd::Zero(n, n);
  blocks.B = Eigen::MatrixXcd::Zero(n, n);
  blocks.C = Eigen::MatrixXcd::Zero(n, n);
  blocks.D = Eigen::MatrixXcd::Zero(n, n);

  std::vector<std::complex<double>> col(q), step(q), work(q);
  for (int j = 0; j < q; ++j) {
    col[j] = std::polar(1.0, -cutoff * psi[j]);
    step[j] = std::polar(1.0, psi[j]);
  }
  for (int in = -cutoff; in <= cutoff; ++in) {
    if (in != 0) {
      work = col;
      fft(work);
      for (int out = -cutoff; out <= cutoff; ++out) {
        if (out == 0) continue;
        const double scale =
            std::sqrt(double(std::abs(out)) / double(std::abs(in)));
        const std::complex<double> val =
            scale * work[((out % q) + q) % q] / double(q);
        if (out > 0 && in > 0)
          blocks.A(out - 1, in - 1) = val;
        else if (out > 0)
          blocks.B(out - 1, -in - 1) = val;
        else if (in > 0)
          blocks.C(-out - 1, in - 1) = val;
        else
          blocks.D(-out - 1, -in - 1) = val;
      }
    }
    if (in < cutoff)
      for (int j = 0; j < q; ++j) col[j] *= step[j];
  }
  return blocks;
}

// Horner sum of c_1 z + c_2 z^2 + ... for |z| = 1
std::complex<double> polynomial_tail(const std::vector<std::complex<double>>& c,
                                     std::complex<double> z) {
  std::complex<double> acc(0.0, 0.0);
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = (acc + *it) * z;
  return acc;
}

// u(z) = z (1 + sum u_k z^k)
std::complex<double> eval_u(const WeldingTriple& t, std::complex<double> z) {
  return z * (1.0 + polynomial_tail(t.u_coefficients, z));
}

// l^{-1}(zeta) = zeta + sum_{n>=0} b_n zeta^{-n}
std::complex<double> eval_l_inverse(const WeldingTriple& t,
                                    std::complex<double> zeta) {
  const std::complex<double> q = std::conj(zeta);  // 1/zeta on the circle
  std::complex<double> acc(0.0, 0.0);
  for (auto it = t.l_inverse_coefficients.rbegin();
       it != t.l_inverse_coefficients.rend(); ++it)
    acc = acc * q + *it;
  return zeta + acc;
}

WeldingTriple weld_from_samples(const std::vector<double>& psi, int cutoff,
                                double inv_max_deriv) {
  const int n = cutoff;
  const int q = static_cast<int>(psi.size());
  // columns carry Fourier mass up to frequency ~ in * max psi', so a square
  // section is rank deficient; the tall section keeps A^dagger A >= I
  // (composition preserves the symplectic form) and least squares stays
  // conditioned
  const int rows = std::min(
      q / 2 - 1, std::max(n, static_cast<int>(1.5 * inv_max_deriv * n) + 64));
  Eigen::MatrixXcd a(rows, n);
  std::vector<std::complex<double>> col(q), step(q), work(q);
  for (int j = 0; j < q; ++j) {
    col[j] = std::polar(1.0, psi[j]);
    step[j] = col[j];
  }
  for (int in = 1; in <= n; ++in) {
    work = col;
    fft(work);
    for (int out = 1; out <= rows; ++out)
      a(out - 1, in - 1) =
          std::sqrt(double(out) / double(in)) * work[out] / double(q);
    if (in < n)
      for (int j = 0; j < q; ++j) col[j] *= step[j];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(a);
  const Eigen::VectorXcd diag = qr.matrixQR().diagonal();
  const double rmax = std::abs(diag(0));
  const double rmin = std::abs(diag(n - 1));
  WeldingTriple t;
  t.condition =
      rmin > 0.0 ? rmax / rmin : std::numeric_limits<double>::infinity();
  if (!(rmin > 1e-10 * rmax))
    throw std::runtime_error(
        "weld: positive block numerically singular (condition " +
        std::to_string(t.condition) + ")");
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(rows);
  rhs(0) = 1.0;
  const Eigen::VectorXcd x = qr.solve(rhs);

  // h_n = x_n / sqrt(n); diag = h_1, u_k = h_{k+1} / diag
  std::vector<std::complex<double>> h(n);
  for (int k = 1; k <= n; ++k) h[k - 1] = x(k - 1) / std::sqrt(double(k));
  t.diag = h[0];
  if (std::abs(t.diag) == 0.0)
    throw std::runtime_error("weld: vanishing diagonal part");
  t.u_coefficients.resize(n - 1);
  for (int k = 1; k < n; ++k) t.u_coefficients[k - 1] = h[k] / t.diag;

  // project h . phi^{-1} = l^{-1} onto Fourier modes
  std::vector<std::complex<double>> samples(q);
  for (int j = 0; j < q; ++j)
    samples[j] = polynomial_tail(h, std::polar(1.0, psi[j]));
  fft(samples);
  for (auto& c : samples) c /= double(q);
  t.l_inverse_coefficients.resize(n + 1);
  for (int k = 0; k <= n; ++k)
    t.l_inverse_coefficients[k] = samples[(q - k) % q];
  const std::complex<double> c1 = samples[1];
  t.leak = std::norm(c1 - 1.0);
  for (int k = 2; k <= q / 2; ++k) t.leak += k * std::norm(samples[k]);
  return t;
}

WeldVerification verify_from_lift(const std::vector<double>& lift,
                                  const WeldingTriple& t) {
  const int q = static_cast<int>(lift.size());
  WeldVerification v;
  double prev_arg = 0.0;
  double winding = 0.0;
  bool away = true;
  for (int j = 0; j < q; ++j) {
    const double theta = kTwoPi * j / q;
    const std::complex<double> z = std::polar(1.0, theta);
    const std::complex<double> uz = eval_u(t, z);
    const std::complex<double> lhs = eval_l_inverse(t, std::polar(1.0, lift[j]));
    v.sup_error = std::max(v.sup_error, std::abs(lhs - t.diag * uz));
    if (std::abs(uz) < 1e-12) away = false;
    const double a = std::arg(uz);
    if (j > 0) {
      double d = a - prev_arg;
      while (d > std::numbers::pi) d -= kTwoPi;
      while (d < -std::numbers::pi) d += kTwoPi;
      winding += d;
    }
    prev_arg = a;
  }
  // close the loop back to theta = 0
  {
    const std::complex<double> uz = eval_u(t, std::complex<double>(1.0, 0.0));
    double d = std::arg(uz) - prev_arg;
    while (d > std::numbers::pi) d -= kTwoPi;
    while (d < -std::numbers::pi) d += kTwoPi;
    winding += d;
  }
  v.winding = static_cast<int>(std::lround(winding / kTwoPi));
  v.univalent = away && v.winding == 1;
  return v;
}

int weld_grid(int cutoff, int native) {
  return std::max(4 * cutoff, std::max(native, 256));
}

// modes e^{-i n psi} carry instantaneous frequency up to n max psi'; the
// projection grid must resolve that or the blocks alias
int solve_grid(double inv_max_deriv, int cutoff, int native) {
  const double nyquist = 1.5 * inv_max_deriv * cutoff + 64.0;
  const int q = std::max({4 * cutoff, native, static_cast<int>(2.0 * nyquist),
                          256});
  return ((q + 63) / 64) * 64;
}

double inverse_max_deriv(const CircleDiffeo& phi) {
  double lo = std::numeric_limits<double>::infinity();
  for (double d : phi.deriv_values()) lo = std::min(lo, d);
  return 1.0 / std::max(lo, 1e-9);
}

double inverse_max_deriv(const MoebiusElement& m) {
  const MoebiusElement inv = m.inverse();
  double hi = 0.0;
  for (int j = 0; j < 512; ++j) hi = std::max(hi, inv.deriv(kTwoPi * j / 512));
  return hi;
}

}  // namespace

CompositionBlocks composition_blocks(const CircleDiffeo& phi, int cutoff) {
  const int q = solve_grid(inverse_max_deriv(phi), cutoff, phi.grid_size());
  return blocks_from_inverse_lift(inverse_lift_samples(phi, q), cutoff);
}

CompositionBlocks composition_blocks(const MoebiusElement& m, int cutoff) {
  const int q = solve_grid(inverse_max_deriv(m), cutoff, 0);
  return blocks_from_inverse_lift(inverse_lift_samples(m, q), cutoff);
}

Eigen::MatrixXcd composition_matrix(const CompositionBlocks& blocks) {
  const int n = blocks.cutoff;
  Eigen::MatrixXcd m(2 * n, 2 * n);
  auto mode = [n](int g) { return g < n ? g - n : g - n + 1; };
  for (int gm = 0; gm < 2 * n; ++gm)
    for (int gn = 0; gn < 2 * n; ++gn) {
      const int out = mode(gm), in = mode(gn);
      if (out > 0 && in > 0)
        m(gm, gn) = blocks.A(out - 1, in - 1);
      else if (out > 0)
        m(gm, gn) = blocks.B(out - 1, -in - 1);
      else if (in > 0)
        m(gm, gn) = blocks.C(-out - 1, in - 1);
      else
        m(gm, gn) = blocks.D(-out - 1, -in - 1);
    }
  return m;
}

double symplectic_defect(const CompositionBlocks& blocks, int interior_cutoff) {
  const int n = blocks.cutoff;
  if (interior_cutoff < 1 || interior_cutoff > n)
    throw std::invalid_argument("symplectic_defect: window out of range");
  const Eigen::MatrixXcd m = composition_matrix(blocks);
  Eigen::MatrixXcd omega = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  auto mode = [n](int g) { return g < n ? g - n : g - n + 1; };
  auto index = [n](int mu) { return mu < 0 ? mu + n : mu + n - 1; };
  for (int g = 0; g < 2 * n; ++g) {
    const int mu = mode(g);
    omega(index(-mu), g) = std::complex<double>(0.0, mu > 0 ? 1.0 : -1.0);
  }
  const Eigen::MatrixXcd defect = m.transpose() * omega * m - omega;
  const int lo = index(-interior_cutoff);
  const int len = 2 * interior_cutoff;
  const Eigen::MatrixXcd window = defect.block(lo, lo, len, len);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(window);
  return svd.singularValues()(0);
}

WeldingTriple weld(const CircleDiffeo& phi, int cutoff) {
  const double dmax = inverse_max_deriv(phi);
  const int q = solve_grid(dmax, cutoff, phi.grid_size());
  return weld_from_samples(inverse_lift_samples(phi, q), cutoff, dmax);
}

WeldingTriple weld(const MoebiusElement& m, int cutoff) {
  const double dmax = inverse_max_deriv(m);
  const int q = solve_grid(dmax, cutoff, 0);
  return weld_from_samples(inverse_lift_samples(m, q), cutoff, dmax);
}

WeldVerification verify_weld(const CircleDiffeo& phi, const WeldingTriple& t) {
  const int q = weld_grid(static_cast<int>(t.l_inverse_coefficients.size()),
                          phi.grid_size());
  std::vector<double> lift(q);
  if (q == phi.grid_size()) {
    std::copy_n(phi.lift_values().begin(), q, lift.begin());
  } else {
    for (int j = 0; j < q; ++j) lift[j] = phi.lift(kTwoPi * j / q);
  }
  return verify_from_lift(lift, t);
}

WeldVerification verify_weld(const MoebiusElement& m, const WeldingTriple& t) {
  const int q = weld_grid(static_cast<int>(t.l_inverse_coefficients.size()), 0);
  std::vector<double> lift(q);
  for (int j = 0; j < q; ++j) lift[j] = m.lift(kTwoPi * j / q);
  return verify_from_lift(lift, t);
}

double diag_from_determinants(const CircleDiffeo& phi, int cutoff) {
  const double p = det_abs_A_sq(build_blocks(phi, Spin::periodic, cutoff));
  const double a = det_abs_A_sq(build_blocks(phi, Spin::antiperiodic, cutoff));
  if (!(a > 0.0))
    throw std::runtime_error("diag_from_determinants: vanishing determinant");
  return std::pow(p / a, 4.0);
}

double diag_from_determinants(const MoebiusElement& m, int cutoff) {
  const double p = det_abs_A_periodic(m, cutoff);
  const double a = det_abs_A_antiperiodic(m, cutoff);
  if (!(a > 0.0))
    throw std::runtime_error("diag_from_determinants: vanishing determinant");
  return std::pow(p / a, 4.0);
}

double area_defect(const WeldingTriple& t) {
  const double lam2 = std::norm(t.diag);
  double sum = lam2;  // n = 1: uhat_1 = 1, b-series starts at n = 0
  for (std::size_t k = 0; k < t.u_coefficients.size(); ++k)
    sum += double(k + 2) * lam2 * std::norm(t.u_coefficients[k]);
  for (std::size_t n = 1; n < t.l_inverse_coefficients.size(); ++n)
    sum += double(n) * std::norm(t.l_inverse_coefficients[n]);
  return std::numbers::pi * (1.0 - sum);
}

double max_mode_bound(const WeldingTriple& t) {
  const double lam2 = std::norm(t.diag);
  double best = lam2;
  const std::size_t nb = t.l_inverse_coefficients.size();
  const std::size_t nu = t.u_coefficients.size();
  for (std::size_t n = 1; n <= std::max(nb > 0 ? nb - 1 : 0, nu + 1); ++n) {
    double term = 0.0;
    if (n < nb) term += std::norm(t.l_inverse_coefficients[n]);
    if (n == 1)
      term += lam2;
    else if (n - 2 < nu)
      term += lam2 * std::norm(t.u_coefficients[n - 2]);
    best = std::max(best, double(n) * term);
  }
  return best;
}

}  // namespace mslab
