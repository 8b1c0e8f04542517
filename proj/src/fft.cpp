#include "odt/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include "odt/error.hpp"
#include "odt/volume.hpp"

namespace odt::fft {
namespace {

// fftw_plan_* is not thread-safe; fftw_execute_dft on an existing plan is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int nz, int ny, int nx, int rank, Direction dir) {
    const auto key = std::make_tuple(nz, ny, nx, rank, dir == Direction::forward);
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    const std::size_t n = static_cast<std::size_t>(nz) * ny * nx;
    std::vector<cdouble> a(n), b(n);
    auto* in = reinterpret_cast<fftw_complex*>(a.data());
    auto* out = reinterpret_cast<fftw_complex*>(b.data());
    const int sign = dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = rank == 1 ? fftw_plan_dft_1d(nx, in, out, sign, flags)
                            : fftw_plan_dft_3d(nz, ny, nx, in, out, sign, flags);
    if (p == nullptr) throw RuntimeError("FFTW failed to create a plan");
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int, int, bool>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void execute(fftw_plan plan, std::span<const cdouble> in, std::span<cdouble> out) {
  if (in.data() == out.data()) {
    std::vector<cdouble> tmp(in.begin(), in.end());
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(tmp.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return;
  }
  // FFTW does not write to the input of an out-of-place c2c plan.
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(in.data())),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

void dft1(std::span<const cdouble> in, std::span<cdouble> out, Direction dir) {
  if (in.size() != out.size()) throw ValidationError("dft1: size mismatch");
  execute(cache().get(1, 1, static_cast<int>(in.size()), 1, dir), in, out);
}

void dft3(std::span<const cdouble> in, std::span<cdouble> out, int nz, int ny, int nx,
          Direction dir) {
  if (in.size() != out.size() || in.size() != static_cast<std::size_t>(nz) * ny * nx)
    throw ValidationError("dft3: size mismatch");
  execute(cache().get(nz, ny, nx, 3, dir), in, out);
}

}  // namespace odt::fft

namespace odt {
namespace {

// dst[(i + s) mod n] = src[i] along each axis.
ComplexField circshift(const ComplexField& src, int sz, int sy, int sx) {
  const Grid3& g = src.grid();
  ComplexField dst(g);
  for (int z = 0; z < g.nz; ++z) {
    const int dz = (z + sz) % g.nz;
    for (int y = 0; y < g.ny; ++y) {
      const int dy = (y + sy) % g.ny;
      for (int x = 0; x < g.nx; ++x) dst(dz, dy, (x + sx) % g.nx) = src(z, y, x);
    }
  }
  return dst;
}

ComplexField centred_dft(const ComplexField& v, fft::Direction dir) {
  const Grid3& g = v.grid();
  g.validate_cubic();
  for (const auto& c : v)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw ValidationError("fft3: input has non-finite values");
  // ifftshift moves index n/2 to 0, fftshift moves it back.
  const int up = g.nx - g.nx / 2;
  const int down = g.nx / 2;
  ComplexField shifted = circshift(v, up, up, up);
  ComplexField spec(g);
  fft::dft3(shifted.values(), spec.values(), g.nz, g.ny, g.nx, dir);
  ComplexField out = circshift(spec, down, down, down);
  const double scale = 1.0 / std::sqrt(static_cast<double>(g.voxels()));
  for (auto& c : out) c *= scale;
  return out;
}

}  // namespace

ComplexField fft3_forward(const ComplexField& v) {
  return centred_dft(v, fft::Direction::forward);
}

KSpaceVolume fft3_forward(const ScatteringPotential& v) {
  ComplexField k = centred_dft(to_complex(v), fft::Direction::forward);
  std::vector<std::uint8_t> mask(k.size(), 1);
  return KSpaceVolume(std::move(k), std::move(mask));
}

ComplexField fft3_inverse(const ComplexField& k) {
  return centred_dft(k, fft::Direction::backward);
}

}  // namespace odt
