#pragma once

// Small helpers shared by the unit tests.

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>

#include <unistd.h>

#include "odt/rng.hpp"
#include "odt/volume.hpp"

namespace odt::test {

inline RealField random_real(const Grid3& g, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  Rng rng(seed);
  RealField f(g);
  for (auto& v : f) v = rng.uniform(lo, hi);
  return f;
}

inline ComplexField random_complex(const Grid3& g, std::uint64_t seed) {
  Rng rng(seed);
  ComplexField f(g);
  for (auto& v : f) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  return f;
}

template <class F>
double l2(const F& f) {
  double s = 0.0;
  for (const auto& v : f) s += std::norm(v);
  return std::sqrt(s);
}

template <class F>
double l2_diff(const F& a, const F& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

template <class F>
double max_abs_diff(const F& a, const F& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Brute-force centred unitary DFT, O(N^6).
inline ComplexField direct_dft3(const ComplexField& v, int sign) {
  const Grid3& g = v.grid();
  const int n = g.nx;
  const int c = n / 2;
  const double scale = std::pow(static_cast<double>(n), -1.5);
  ComplexField out(g);
  for (int kz = 0; kz < n; ++kz)
    for (int ky = 0; ky < n; ++ky)
      for (int kx = 0; kx < n; ++kx) {
        std::complex<double> s = 0.0;
        for (int z = 0; z < n; ++z)
          for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) {
              const double phase = 2.0 * std::numbers::pi *
                                   ((kz - c) * (z - c) + (ky - c) * (y - c) + (kx - c) * (x - c)) /
                                   n;
              s += v(z, y, x) * std::polar(1.0, sign * phase);
            }
        out(kz, ky, kx) = s * scale;
      }
  return out;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    Rng rng(std::hash<std::string>{}(tag) ^ static_cast<std::uint64_t>(::getpid()));
    path_ = std::filesystem::temp_directory_path() /
            ("odt_" + tag + "_" + std::to_string(rng.next() % 1000000007ULL));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace odt::test
