#include "mslab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace mslab {
namespace {

// FFTW's planner is not thread-safe; executing a plan on its own buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct R2rEntry {
  fftw_plan plan = nullptr;
  double* in = nullptr;
  double* out = nullptr;
};

struct R2rCache {
  std::map<std::pair<int, int>, R2rEntry> entries;

  ~R2rCache() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    for (auto& [key, e] : entries) {
      fftw_destroy_plan(e.plan);
      fftw_free(e.in);
      fftw_free(e.out);
    }
  }

  R2rEntry& get(fftw_r2r_kind kind, int n) {
    auto key = std::make_pair(static_cast<int>(kind), n);
    auto it = entries.find(key);
    if (it != entries.end()) return it->second;
    R2rEntry e;
    e.in = fftw_alloc_real(n);
    e.out = fftw_alloc_real(n);
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      e.plan = fftw_plan_r2r_1d(n, e.in, e.out, kind, FFTW_ESTIMATE);
    }
    return entries.emplace(key, e).first->second;
  }
};

R2rCache& r2r_cache() {
  thread_local R2rCache cache;
  return cache;
}

struct DftEntry {
  fftw_plan plan = nullptr;
  fftw_complex* buf = nullptr;
};

struct DftCache {
  std::map<std::pair<int, int>, DftEntry> entries;

  ~DftCache() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    for (auto& [key, e] : entries) {
      fftw_destroy_plan(e.plan);
      fftw_free(e.buf);
    }
  }

  DftEntry& get(int sign, int n) {
    auto key = std::make_pair(sign, n);
    auto it = entries.find(key);
    if (it != entries.end()) return it->second;
    DftEntry e;
    e.buf = fftw_alloc_complex(n);
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      e.plan = fftw_plan_dft_1d(n, e.buf, e.buf, sign, FFTW_ESTIMATE);
    }
    return entries.emplace(key, e).first->second;
  }
};

DftCache& dft_cache() {
  thread_local DftCache cache;
  return cache;
}

std::vector<double> run_r2r(fftw_r2r_kind kind, const std::vector<double>& x) {
  int n = static_cast<int>(x.size());
  R2rEntry& e = r2r_cache().get(kind, n);
  for (int i = 0; i < n; ++i) e.in[i] = x[i];
  fftw_execute(e.plan);
  return std::vector<double>(e.out, e.out + n);
}

}  // namespace

std::vector<double> dst1(const std::vector<double>& x) {
  if (x.empty()) throw std::invalid_argument("dst1: empty input");
  return run_r2r(FFTW_RODFT00, x);
}

std::vector<double> dct1(const std::vector<double>& x) {
  if (x.size() < 3) throw std::invalid_argument("dct1: need at least 3 points");
  return run_r2r(FFTW_REDFT00, x);
}

void fft(std::vector<std::complex<double>>& data, bool inverse) {
  int n = static_cast<int>(data.size());
  if (n == 0) throw std::invalid_argument("fft: empty input");
  DftEntry& e = dft_cache().get(inverse ? FFTW_BACKWARD : FFTW_FORWARD, n);
  for (int i = 0; i < n; ++i) {
    e.buf[i][0] = data[i].real();
    e.buf[i][1] = data[i].imag();
  }
  fftw_execute(e.plan);
  for (int i = 0; i < n; ++i) data[i] = {e.buf[i][0], e.buf[i][1]};
}

}  // namespace mslab
