#pragma once

// Deterministic RNG streams and small Monte Carlo helpers.
//
// Every sample index gets its own generator derived from (seed, index), so
// results are bit-identical for any worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace mslab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// mt19937_64 with explicit uniform/normal mappings; the standard library
// distributions are implementation-defined, these are not.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // derive an independent stream for one sample of one experiment
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(splitmix64(splitmix64(seed) ^ (index + 0x6a09e667f3bcc909ull)));
  }

  std::uint64_t bits() { return gen_(); }

  // uniform on [0,1) with 53-bit resolution
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Box-Muller, one normal per call (partner discarded: call order stays
  // independent of how many normals the caller consumes elsewhere)
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::mt19937_64 gen_;
};

struct MCEstimate {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
  std::size_t n = 0;
  std::vector<double> quantile_levels;
  std::vector<double> quantiles;

  static MCEstimate from_samples(const std::vector<double>& x,
                                 std::vector<double> levels = {}) {
    if (x.empty()) throw std::invalid_argument("MCEstimate: no samples");
    MCEstimate e;
    e.n = x.size();
    double s = 0.0;
    for (double v : x) s += v;
    e.mean = s / static_cast<double>(e.n);
    double ss = 0.0;
    for (double v : x) ss += (v - e.mean) * (v - e.mean);
    if (e.n > 1)
      e.stderr_of_mean =
          std::sqrt(ss / (static_cast<double>(e.n - 1) * static_cast<double>(e.n)));
    if (!levels.empty()) {
      std::vector<double> sorted = x;
      std::sort(sorted.begin(), sorted.end());
      e.quantile_levels = levels;
      for (double q : levels) e.quantiles.push_back(quantile_sorted(sorted, q));
    }
    return e;
  }

  static double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile: no samples");
    if (q <= 0.0) return sorted.front();
    if (q >= 1.0) return sorted.back();
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
  }
};

// Static block partition over [0,n). Results must be written to per-index
// slots; then the outcome does not depend on the worker count.
template <typename F>
void parallel_for(std::size_t n, unsigned workers, F&& body) {
  if (n == 0) return;
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  workers = std::min<std::size_t>(workers, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = static_cast<std::size_t>(w) * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body]() {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

// Two-sample Kolmogorov distance sup_x |F1(x) - F2(x)|.
inline double kolmogorov_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("kolmogorov_distance: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    // consume every copy of the current point from both samples before
    // comparing, so ties do not register a spurious gap
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace mslab
