#include "mslab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "mslab/fft.hpp"
#include "mslab/io.hpp"
#include "mslab/mc.hpp"

namespace mslab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double t) {
  double r = std::fmod(t, kTwoPi);
  if (r < 0) r += kTwoPi;
  return r;
}

// Quadrature of all matrix entries from lift/derivative samples on the
// uniform grid theta_j = 2 pi j / q:
//   entry(m, n) = (1/q) sum_j sqrt(Phi'_j) e^{i[(n+s)Phi_j - (m+s)theta_j]},
// s = 0 (periodic) or 1/2 (antiperiodic). One FFT per input mode; columns
// advance by pointwise multiplication with e^{i Phi_j}.
BlockOperator build_from_samples(const std::vector<double>& lift,
                                 const std::vector<double>& deriv, Spin spin,
                                 int cutoff) {
  const int q = static_cast<int>(lift.size());
  if (cutoff < 1) throw std::invalid_argument("build_blocks: cutoff < 1");
  if (q < 4 * cutoff)
    throw std::invalid_argument("build_blocks: grid too coarse for cutoff");
  const int lo = -cutoff;
  const int hi = spin == Spin::periodic ? cutoff : cutoff - 1;
  const double sigma = spin == Spin::periodic ? 0.0 : 0.5;

  BlockOperator op;
  op.cutoff = cutoff;
  op.spin = spin;
  const int pd = op.plus_dim();
  const int md = op.minus_dim();
  op.A = Eigen::MatrixXcd::Zero(pd, pd);
  op.B = Eigen::MatrixXcd::Zero(pd, md);
  op.C = Eigen::MatrixXcd::Zero(md, pd);
  op.D = Eigen::MatrixXcd::Zero(md, md);

  std::vector<std::complex<double>> col(q), step(q), work(q);
  for (int j = 0; j < q; ++j) {
    if (!(deriv[j] > 0.0))
      throw std::invalid_argument("build_blocks: nonpositive derivative sample");
    const double theta = kTwoPi * j / q;
    col[j] = std::polar(std::sqrt(deriv[j]),
                        (lo + sigma) * lift[j] - sigma * theta);
    step[j] = std::polar(1.0, lift[j]);
  }

  for (int n = lo; n <= hi; ++n) {
    work = col;
    fft(work);
    for (int m = lo; m <= hi; ++m) {
      const std::complex<double> val = work[((m % q) + q) % q] / double(q);
      if (m >= 0 && n >= 0)
        op.A(m, n) = val;
      else if (m >= 0)
        op.B(m, -n - 1) = val;
      else if (n >= 0)
        op.C(-m - 1, n) = val;
      else
        op.D(-m - 1, -n - 1) = val;
    }
    if (n < hi)
      for (int j = 0; j < q; ++j) col[j] *= step[j];
  }
  return op;
}

// block entry addressed by signed integer mode indices (mode = m + sigma)
std::complex<double> entry(const BlockOperator& op, int m, int n) {
  if (m >= 0 && n >= 0) return op.A(m, n);
  if (m >= 0) return op.B(m, -n - 1);
  if (n >= 0) return op.C(-m - 1, n);
  return op.D(-m - 1, -n - 1);
}

Eigen::VectorXd ctc_eigenvalues(const BlockOperator& op) {
  const Eigen::MatrixXcd ctc = op.C.adjoint() * op.C;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ctc,
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("ctc_eigenvalues: eigensolver failed");
  return es.eigenvalues();
}

void validate_schedule(const std::vector<double>& deltas) {
  if (deltas.empty())
    throw std::invalid_argument("energy schedule: empty");
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    if (!(deltas[k] > 0.0) || deltas[k] >= kPi)
      throw std::invalid_argument("energy schedule: deltas must lie in (0, pi)");
    if (k > 0 && deltas[k] >= deltas[k - 1])
      throw std::invalid_argument("energy schedule: deltas must decrease");
  }
}

std::string canonical_table_key(double beta, int grid_size, int n_modes,
                                const std::vector<double>& deltas,
                                int n_samples, std::uint64_t seed) {
  std::ostringstream os;
  os << "beta=" << format_double(beta) << ";grid=" << grid_size
     << ";modes=" << n_modes << ";samples=" << n_samples << ";seed=" << seed
     << ";deltas=";
  for (std::size_t k = 0; k < deltas.size(); ++k)
    os << (k ? "," : "") << format_double(deltas[k]);
  return os.str();
}

Eigen::MatrixXcd modulus(const Eigen::MatrixXcd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.adjoint() * a);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("modulus: eigensolver failed");
  // A^*A is positive semidefinite, but trailing eigenvalues sit far below
  // machine epsilon and round-off can push them negative; clamp before sqrt
  const Eigen::VectorXd lambda = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lambda.cwiseSqrt().asDiagonal() *
         es.eigenvectors().adjoint();
}

double inequality_probe_from_blocks(const BlockOperator& per,
                                    const BlockOperator& anti) {
  const int n = anti.cutoff;
  const Eigen::MatrixXcd diff =
      modulus(anti.A) - modulus(per.A).topLeftCorner(n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(diff,
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("operator_inequality_probe: eigensolver failed");
  return es.eigenvalues().minCoeff();
}

}  // namespace

namespace {

// e^{i n Phi} carries instantaneous frequency n Phi', so the quadrature grid
// must resolve cutoff * max Phi' with margin or high columns alias
int quadrature_size(double max_deriv, int cutoff, int native) {
  const double nyquist = 1.5 * max_deriv * cutoff + 64.0;
  int q = std::max({4 * cutoff, native, static_cast<int>(2.0 * nyquist)});
  return ((q + 63) / 64) * 64;
}

template <typename Map>
BlockOperator build_resampled(const Map& map, Spin spin, int cutoff,
                              int native) {
  double dmax = 0.0;
  for (int j = 0; j < 512; ++j)
    dmax = std::max(dmax, map.deriv(kTwoPi * j / 512));
  const int q = quadrature_size(dmax, cutoff, native);
  std::vector<double> lift(q), deriv(q);
  for (int j = 0; j < q; ++j) {
    const double t = kTwoPi * j / q;
    lift[j] = map.lift(t);
    deriv[j] = map.deriv(t);
  }
  return build_from_samples(lift, deriv, spin, cutoff);
}

}  // namespace

BlockOperator build_blocks(const CircleDiffeo& phi, Spin spin, int cutoff) {
  const int m = phi.grid_size();
  const double dmax =
      *std::max_element(phi.deriv_values().begin(), phi.deriv_values().end());
  if (quadrature_size(dmax, cutoff, m) == m) {
    std::vector<double> lift(m), deriv(m);
    std::copy_n(phi.lift_values().begin(), m, lift.begin());
    std::copy_n(phi.deriv_values().begin(), m, deriv.begin());
    return build_from_samples(lift, deriv, spin, cutoff);
  }
  return build_resampled(phi, spin, cutoff, m);
}

BlockOperator build_blocks(const MoebiusElement& m, Spin spin, int cutoff) {
  return build_resampled(m, spin, cutoff, 256);
}

BlockOperator build_blocks(const SmoothBasedMap& psi, Spin spin, int cutoff) {
  return build_resampled(psi, spin, cutoff, 256);
}

Eigen::MatrixXcd full_matrix(const BlockOperator& op) {
  const int n = op.cutoff;
  const int total = op.plus_dim() + op.minus_dim();
  Eigen::MatrixXcd u(total, total);
  for (int gm = 0; gm < total; ++gm)
    for (int gn = 0; gn < total; ++gn) u(gm, gn) = entry(op, gm - n, gn - n);
  return u;
}

double unitarity_defect(const BlockOperator& op, int interior_cutoff) {
  if (interior_cutoff < 0 || interior_cutoff > op.cutoff)
    throw std::invalid_argument("unitarity_defect: interior cutoff out of range");
  const int n = op.cutoff;
  const int len = op.spin == Spin::periodic ? 2 * interior_cutoff + 1
                                            : 2 * interior_cutoff;
  if (len < 1)
    throw std::invalid_argument("unitarity_defect: empty interior window");
  const Eigen::MatrixXcd u = full_matrix(op);
  Eigen::MatrixXcd e = u.adjoint() * u;
  e.diagonal().array() -= 1.0;
  const Eigen::MatrixXcd window = e.block(n - interior_cutoff,
                                          n - interior_cutoff, len, len);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(window,
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("unitarity_defect: eigensolver failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXcd pulled_back_commutator(const BlockOperator& op) {
  const int n = op.cutoff;
  const Eigen::MatrixXcd u = full_matrix(op);
  const int total = static_cast<int>(u.rows());
  Eigen::VectorXd sign(total);
  for (int g = 0; g < total; ++g) sign(g) = (g - n) >= 0 ? 1.0 : -1.0;
  Eigen::MatrixXcd half = u;
  for (int i = 0; i < total; ++i)
    for (int j = 0; j < total; ++j) half(i, j) *= 0.5 * (sign(i) - sign(j));
  return u.adjoint() * half;
}

double det2_abs_A(const BlockOperator& op) {
  const Eigen::VectorXd lambda = ctc_eigenvalues(op);
  double out = 1.0;
  for (int i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > 1.0 + 1e-8)
      throw std::runtime_error("det2_abs_A: eigenvalue of C*C exceeds 1");
    const double l = std::clamp(lambda(i), 0.0, 1.0);
    out *= (1.0 - l) * std::exp(l);
  }
  return out;
}

double det_abs_A_sq(const BlockOperator& op) {
  Eigen::MatrixXcd m = -(op.C.adjoint() * op.C);
  m.diagonal().array() += 1.0;
  const double det = Eigen::PartialPivLU<Eigen::MatrixXcd>(m).determinant().real();
  if (!std::isfinite(det) || det < -1e-9)
    throw std::runtime_error("det_abs_A_sq: I - C*C is not positive");
  return std::max(det, 0.0);
}

double det_abs_A_periodic(const MoebiusElement& m, int cutoff) {
  return det_abs_A_sq(build_blocks(m, Spin::periodic, cutoff));
}

double det_abs_A_antiperiodic(const MoebiusElement& m, int cutoff) {
  return det_abs_A_sq(build_blocks(m, Spin::antiperiodic, cutoff));
}

double commutator_det_S2(double r, int cutoff) {
  if (!(r >= 0.0 && r < 1.0))
    throw std::domain_error("commutator_det_S2: requires 0 <= r < 1");
  if (cutoff < 1) throw std::invalid_argument("commutator_det_S2: cutoff < 1");
  const int n = cutoff + 1;  // span{z^0 .. z^N}
  // the operator product lives on all of H^2: form it on a padded space so
  // the inner mode sums are converged (tails decay like r^pad), then truncate
  const int pad = 256;
  const int l = n + pad;
  Eigen::MatrixXd t1 = Eigen::MatrixXd::Zero(l, l);
  Eigen::MatrixXd t2 = Eigen::MatrixXd::Zero(l, l);
  Eigen::MatrixXd t3 = Eigen::MatrixXd::Identity(l, l);
  Eigen::MatrixXd t4 = Eigen::MatrixXd::Identity(l, l);
  for (int i = 0; i < l; ++i) {
    double p = 1.0;
    for (int j = i; j < l; ++j) {  // T[(1-r/z)^{-1}](i, j) = r^{j-i}, j >= i
      t1(i, j) = p;
      t2(j, i) = p;  // T[(1-rz)^{-1}](j, i) = r^{j-i}
      p *= r;
    }
  }
  for (int i = 0; i + 1 < l; ++i) {
    t3(i, i + 1) = -r;  // T[1 - r/z]
    t4(i + 1, i) = -r;  // T[1 - rz]
  }
  const Eigen::MatrixXd s2 =
      (t1 * t2 * t3 * t4).topLeftCorner(n, n);
  return Eigen::PartialPivLU<Eigen::MatrixXd>(s2).determinant();
}

Eigen::VectorXd commutator_S2_apply(double r, int cutoff,
                                    const Eigen::VectorXd& x) {
  if (!(r >= 0.0 && r < 1.0))
    throw std::domain_error("commutator_S2_apply: requires 0 <= r < 1");
  const int n = cutoff + 1;
  if (x.size() != n)
    throw std::invalid_argument("commutator_S2_apply: vector size != cutoff+1");
  // apply the four Toeplitz factors right to left without forming matrices
  Eigen::VectorXd y(n), z(n);
  for (int i = 0; i < n; ++i)  // T[1 - rz]
    y(i) = x(i) - (i > 0 ? r * x(i - 1) : 0.0);
  for (int i = 0; i < n; ++i)  // T[1 - r/z]
    z(i) = y(i) - (i + 1 < n ? r * y(i + 1) : 0.0);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {  // T[(1-rz)^{-1}]: y_i = z_i + r y_{i-1}
    acc = z(i) + r * acc;
    y(i) = acc;
  }
  acc = 0.0;
  for (int i = n - 1; i >= 0; --i) {  // T[(1-r/z)^{-1}]: z_i = y_i + r z_{i+1}
    acc = y(i) + r * acc;
    z(i) = acc;
  }
  return z;
}

std::complex<double> cocycle_det(const MoebiusElement& m1,
                                 const MoebiusElement& m2, int cutoff) {
  if (m1.level != m2.level)
    throw std::invalid_argument("cocycle_det: mixed cover levels");
  // Truncations of A itself have determinants vanishing like e^{-c N^2}, so
  // A(V1)A(V2)A(V1 V2)^{-1} is evaluated without inverting a section of A:
  //   A1 A2 A12^{-1} = I - B1 C2 A12^{-1},  A12^{-1} = A12* (I - B12 B12*)^{-1}
  // (the first from U12 = U1 U2, the second from row unitarity); every factor
  // is either well conditioned or decays away from the low-mode corner.
  const int pad = 96;
  const int l = cutoff + pad;
  const BlockOperator b1 = build_blocks(m1, Spin::antiperiodic, l);
  const BlockOperator b2 = build_blocks(m2, Spin::antiperiodic, l);
  const BlockOperator b12 =
      build_blocks(compose(m2, m1), Spin::antiperiodic, l);
  Eigen::MatrixXcd s = -(b12.B * b12.B.adjoint());
  s.diagonal().array() += 1.0;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(s);
  // I - B1 C2 (S^{-1} A12)^*  with S self-adjoint
  Eigen::MatrixXcd total = -(b1.B * b2.C) * lu.solve(b12.A).adjoint();
  total.diagonal().array() += 1.0;
  const Eigen::MatrixXcd corner = total.topLeftCorner(cutoff, cutoff);
  const std::complex<double> det =
      Eigen::PartialPivLU<Eigen::MatrixXcd>(corner).determinant();
  if (!std::isfinite(std::abs(det)))
    throw std::runtime_error("cocycle_det: determinant overflow");
  return det;
}

std::complex<double> kernel_K(const CircleDiffeo& phi, double s, double t) {
  const double sd = std::sin(0.5 * (t - s));
  if (std::abs(sd) < 1e-12)
    throw std::domain_error("kernel_K: coincident points");
  const double spd = std::sin(0.5 * (phi.lift(t) - phi.lift(s)));
  const double x = std::sqrt(phi.deriv(s) * phi.deriv(t)) * sd / spd;
  const std::complex<double> z = std::polar(1.0, t);
  const std::complex<double> zeta = std::polar(1.0, s);
  return (x - 1.0) / (z - zeta);
}

std::complex<double> kernel_K_derivative_form(const CircleDiffeo& phi,
                                              double s, double t) {
  const std::complex<double> z = std::polar(1.0, t);
  const std::complex<double> zeta = std::polar(1.0, s);
  if (std::abs(z - zeta) < 1e-12)
    throw std::domain_error("kernel_K_derivative_form: coincident points");
  const double ps = phi.lift(s);
  const double pt = phi.lift(t);
  // sqrt(dphi/dz(z) dphi/dz(zeta)) with dphi/dz = e^{i(Phi - theta)} Phi',
  // branch continued along the lifts
  const std::complex<double> root = std::polar(
      std::sqrt(phi.deriv(s) * phi.deriv(t)), 0.5 * (pt - t + ps - s));
  const std::complex<double> fz = std::polar(1.0, pt);
  const std::complex<double> fzeta = std::polar(1.0, ps);
  return root / (fz - fzeta) - 1.0 / (z - zeta);
}

KernelDiagnostics kernel_diagnostics(const BridgePath& b, double s, double t) {
  const double s0 = wrap_2pi(s);
  const double d = wrap_2pi(t - s);
  if (d < 1e-12 || kTwoPi - d < 1e-12)
    throw std::domain_error("kernel_diagnostics: coincident points");
  const double t0 = s0 + d;
  const CircleDiffeo psi = based_from_bridge(b);
  KernelDiagnostics out;
  out.delta = d;
  out.alpha = psi.deriv_values()[0];  // psi' = alpha e^b and b(0) = 0
  out.integral = (psi.lift(t0) - psi.lift(s0)) / out.alpha;
  out.midpoint = 0.5 * (bridge_eval(b, t0) + bridge_eval(b, s0));
  out.f_value = std::log(out.alpha) + out.midpoint +
                std::log(std::sin(0.5 * d) /
                         std::sin(0.5 * out.alpha * out.integral));
  return out;
}

std::complex<double> kernel_K_bridge_form(const BridgePath& b, double s,
                                          double t) {
  const KernelDiagnostics diag = kernel_diagnostics(b, s, t);
  const std::complex<double> z = std::polar(1.0, t);
  const std::complex<double> zeta = std::polar(1.0, s);
  return (std::exp(diag.f_value) - 1.0) / (z - zeta);
}

std::vector<double> default_delta_schedule() {
  std::vector<double> deltas(10);
  for (int k = 1; k <= 10; ++k) deltas[k - 1] = kPi * std::pow(2.0, -k);
  return deltas;
}

EnergyLevels kernel_energy_levels(const BridgePath& b,
                                  const std::vector<double>& deltas) {
  validate_schedule(deltas);
  const int m = b.grid_size();
  if (m < 8) throw std::invalid_argument("kernel_energy_levels: no grid samples");
  const CircleDiffeo psi = based_from_bridge(b);
  const std::vector<double>& lift = psi.lift_values();
  const std::vector<double>& d1 = psi.deriv_values();
  const double h = kTwoPi / m;

  // extension by one period: (Phi + 2 pi)/2 shifts half-angles by pi
  std::vector<double> sq(2 * m), sh(2 * m), ch(2 * m);
  for (int j = 0; j < m; ++j) {
    sq[j] = std::sqrt(d1[j]);
    sq[j + m] = sq[j];
    sh[j] = std::sin(0.5 * lift[j]);
    ch[j] = std::cos(0.5 * lift[j]);
    sh[j + m] = -sh[j];
    ch[j + m] = -ch[j];
  }

  // band[d] = sum_j |K(t_j, t_{j+d})|^2; offsets d and m-d contribute equal
  // sums, so only d <= m/2 is accumulated (weight 2 except at d = m/2)
  const int dmax = m / 2;
  std::vector<double> band(dmax + 1, 0.0);
  for (int d = 1; d <= dmax; ++d) {
    const double sd = std::sin(0.5 * d * h);
    const double denom = 2.0 - 2.0 * std::cos(d * h);
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
      const double sdiff = sh[j + d] * ch[j] - ch[j + d] * sh[j];
      const double e = sq[j] * sq[j + d] * sd / sdiff - 1.0;
      acc += e * e;
    }
    band[d] = acc / denom;
  }

  EnergyLevels out;
  out.deltas = deltas;
  out.integrals.resize(deltas.size());
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    double sum = 0.0;
    for (int d = 1; d <= dmax; ++d) {
      if (d * h <= deltas[k]) continue;
      const double weight = (2 * d == m) ? 1.0 : 2.0;
      sum += weight * band[d];
    }
    out.integrals[k] = h * h * sum;
  }
  return out;
}

std::string EnergyTable::cache_key() const {
  return fingerprint_hex(
      canonical_table_key(beta, grid_size, n_modes, deltas, n_samples, seed));
}

EnergyTable build_energy_table(double beta, int grid_size, int n_modes,
                               const std::vector<double>& deltas,
                               int n_samples, std::uint64_t seed,
                               unsigned workers) {
  validate_schedule(deltas);
  if (n_samples < 1)
    throw std::invalid_argument("build_energy_table: need n_samples >= 1");
  EnergyTable table;
  table.beta = beta;
  table.grid_size = grid_size;
  table.n_modes = n_modes;
  table.n_samples = n_samples;
  table.seed = seed;
  table.deltas = deltas;

  std::vector<std::vector<double>> per_sample(n_samples);
  parallel_for(static_cast<std::size_t>(n_samples), workers, [&](std::size_t i) {
    Rng rng = Rng::substream(seed, i);
    const BridgePath b = sample_bridge(beta, n_modes, grid_size, rng);
    per_sample[i] = kernel_energy_levels(b, deltas).integrals;
  });

  table.means.assign(deltas.size(), 0.0);
  for (const auto& row : per_sample)
    for (std::size_t k = 0; k < row.size(); ++k) table.means[k] += row[k];
  for (double& v : table.means) v /= n_samples;
  return table;
}

void write_energy_table(const EnergyTable& table,
                        const std::filesystem::path& file) {
  CsvWriter csv;
  csv.set_meta("table", "kernel-energy-means");
  csv.set_meta("beta", format_double(table.beta));
  csv.set_meta("grid_size", std::to_string(table.grid_size));
  csv.set_meta("n_modes", std::to_string(table.n_modes));
  csv.set_meta("n_samples", std::to_string(table.n_samples));
  csv.set_meta("seed", std::to_string(table.seed));
  csv.set_meta("key", table.cache_key());
  csv.set_columns({"delta", "mean_energy"});
  for (std::size_t k = 0; k < table.deltas.size(); ++k)
    csv.add_row({table.deltas[k], table.means[k]});
  csv.write(file);
}

EnergyTable read_energy_table(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  EnergyTable table;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const std::size_t sep = line.find(": ");
      if (sep == std::string::npos) continue;
      const std::string key = line.substr(2, sep - 2);
      const std::string value = line.substr(sep + 2);
      if (key == "beta") table.beta = std::strtod(value.c_str(), nullptr);
      else if (key == "grid_size") table.grid_size = std::stoi(value);
      else if (key == "n_modes") table.n_modes = std::stoi(value);
      else if (key == "n_samples") table.n_samples = std::stoi(value);
      else if (key == "seed") table.seed = std::stoull(value);
      continue;
    }
    if (!header_seen) {  // column header row
      header_seen = true;
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("energy table: malformed row in " + file.string());
    table.deltas.push_back(std::strtod(line.substr(0, comma).c_str(), nullptr));
    table.means.push_back(std::strtod(line.substr(comma + 1).c_str(), nullptr));
  }
  if (table.deltas.empty())
    throw std::runtime_error("energy table: no rows in " + file.string());
  return table;
}

EnergyTable cached_energy_table(double beta, int grid_size, int n_modes,
                                const std::vector<double>& deltas,
                                int n_samples, std::uint64_t seed,
                                const std::filesystem::path& dir,
                                unsigned workers) {
  EnergyTable probe;
  probe.beta = beta;
  probe.grid_size = grid_size;
  probe.n_modes = n_modes;
  probe.n_samples = n_samples;
  probe.seed = seed;
  probe.deltas = deltas;
  const std::filesystem::path file =
      dir / ("energy-table-" + probe.cache_key() + ".csv");
  if (std::filesystem::exists(file)) {
    EnergyTable table = read_energy_table(file);
    if (table.cache_key() != probe.cache_key())
      throw std::runtime_error("energy table cache mismatch: " + file.string());
    return table;
  }
  EnergyTable table = build_energy_table(beta, grid_size, n_modes, deltas,
                                         n_samples, seed, workers);
  write_energy_table(table, file);
  return table;
}

RegularizedEnergy regularized_energy(const BridgePath& b, double beta,
                                     const std::vector<double>& deltas,
                                     const EnergyTable& table) {
  if (table.beta != beta || table.grid_size != b.grid_size() ||
      table.deltas != deltas || table.means.size() != deltas.size())
    throw std::invalid_argument("regularized_energy: table does not match");
  const EnergyLevels levels = kernel_energy_levels(b, deltas);
  RegularizedEnergy out;
  out.levels.resize(deltas.size());
  for (std::size_t k = 0; k < deltas.size(); ++k)
    out.levels[k] = levels.integrals[k] - table.means[k];
  out.value = out.levels.back();
  const std::size_t n = deltas.size();
  if (n >= 2)
    out.residual = levels.integrals[n - 1] - levels.integrals[n - 2];
  // successive shells must shrink; differences at round-off scale carry no
  // information about the limit, so they never break convergence
  constexpr double kResidualFloor = 1e-12;
  double prev = -1.0;
  for (std::size_t k = 1; k < n; ++k) {
    const double res = levels.integrals[k] - levels.integrals[k - 1];
    if (k > 1 && res >= prev && res > kResidualFloor) out.converged = false;
    prev = res;
  }
  return out;
}

double centered_mode_energy(const BridgePath& b) {
  const std::vector<double>& c =
      b.coeff.empty() ? analyze_sine_series(b.values) : b.coeff;
  double acc = 0.0;
  for (int n = 1; n <= static_cast<int>(c.size()); ++n)
    acc += n * c[n - 1] * c[n - 1] - 1.0 / (b.beta * n);
  return acc;
}

double besov_seminorm(const BridgePath& b, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("besov_seminorm: p >= 1 required");
  const std::vector<double> c =
      b.coeff.empty() ? analyze_sine_series(b.values) : b.coeff;
  const int n = static_cast<int>(c.size());
  double total = 0.0;
  for (int j = 0; (1 << j) <= n; ++j) {
    double block = 0.0;
    const int hi = std::min(n, (1 << (j + 1)) - 1);
    for (int k = 1 << j; k <= hi; ++k) block += c[k - 1] * c[k - 1];
    total += std::pow(2.0, j) * std::pow(std::sqrt(kPi * block), p);
  }
  return std::pow(total, 1.0 / p);
}

double operator_inequality_probe(const CircleDiffeo& phi, int cutoff) {
  return inequality_probe_from_blocks(
      build_blocks(phi, Spin::periodic, cutoff),
      build_blocks(phi, Spin::antiperiodic, cutoff));
}

double operator_inequality_probe(const MoebiusElement& m, int cutoff) {
  return inequality_probe_from_blocks(
      build_blocks(m, Spin::periodic, cutoff),
      build_blocks(m, Spin::antiperiodic, cutoff));
}

}  // namespace mslab
